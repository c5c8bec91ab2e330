#pragma once

// Experiment runners. run_experiment computes results without touching the
// filesystem; run_and_write validates, computes, then writes the data file,
// a metadata record and (optionally) an SVG plot.

#include "srlab/harness/config.hpp"
#include "srlab/harness/plot.hpp"
#include "srlab/harness/table.hpp"

#include <filesystem>

namespace srlab::harness {

struct ExperimentResult {
  Table table;
  Plot plot;
};

ExperimentResult run_experiment(const ExperimentConfig& config);

struct RunOutputs {
  std::filesystem::path data;
  std::filesystem::path metadata;
  std::filesystem::path plot;  // empty when plotting is off
  std::size_t rows = 0;
  double wall_seconds = 0.0;
};

/// Nothing is written if validation or any computation fails.
RunOutputs run_and_write(const ExperimentConfig& config, const std::filesystem::path& out_dir);

/// `git describe` of the source tree at configure time.
const char* code_version() noexcept;

}  // namespace srlab::harness
