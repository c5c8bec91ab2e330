#pragma once

// Experiment configuration. Configs are YAML files with flat top-level keys;
// docs/config.md lists the keys accepted by each experiment kind.

#include "srlab/approx.hpp"
#include "srlab/quantizer.hpp"
#include "srlab/refine.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace srlab::harness {

enum class ExperimentKind { approx_sweep, bounds_table, refine_staircase, quant_check, covering_probe };
enum class OutputFormat { csv, json };

const char* to_string(ExperimentKind kind) noexcept;
ExperimentKind parse_kind(const std::string& text);
const char* to_string(OutputFormat format) noexcept;
OutputFormat parse_format(const std::string& text);
const char* to_string(CoveringRule rule) noexcept;
CoveringRule parse_rule(const std::string& text);
const char* to_string(Sampler sampler) noexcept;
Sampler parse_sampler(const std::string& text);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::approx_sweep;
  std::string name;  // output file stem; defaults to the kind
  std::uint64_t seed = 1;
  unsigned threads = 0;  // 0 = all hardware threads
  OutputFormat format = OutputFormat::csv;
  bool plot = true;

  // Grids. Exactly one of M and rate is used for dictionary sizes.
  std::vector<std::uint64_t> n;
  std::vector<std::uint64_t> M;
  std::vector<double> rate;
  std::vector<std::uint64_t> k;
  std::size_t trials = 1000;

  // approx-sweep
  Method method = Method::greedy;
  Sampler sampler = Sampler::ball;
  std::uint64_t exhaustive_budget = kDefaultExhaustiveBudget;

  // refine-staircase
  std::size_t stages = 4;
  refine::ScalingMode mode = refine::ScalingMode::adaptive;
  double design_distortion = 0.0;  // <= 0: calibrate
  std::size_t calibration_draws = 100;
  std::vector<std::uint64_t> stage_sizes;

  // quant-check / covering-probe
  std::vector<int> l;
  std::vector<unsigned> bits;
  CoveringRule rule = CoveringRule::gain_shape;

  std::string stem() const { return name.empty() ? to_string(kind) : name; }

  /// Dictionary sizes for dimension n, from M or from rate.
  std::vector<std::uint64_t> sizes_for(std::uint64_t n) const;

  /// Checks every precondition that can be checked without running,
  /// including memory and exhaustive-search budgets. Throws invalid_config,
  /// size_overflow or budget_exceeded.
  void validate() const;
};

/// Defaults for a kind (small grids that run in seconds).
ExperimentConfig default_config(ExperimentKind kind);

/// Throws invalid_config on unknown keys, wrong types or bad values.
ExperimentConfig parse_config(const std::string& yaml_text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical JSON form of the config, used in run metadata.
std::string config_json(const ExperimentConfig& config);

}  // namespace srlab::harness
