// srlab: command line front end for the experiment harness.

#include "srlab/dict.hpp"
#include "srlab/error.hpp"
#include "srlab/harness/compare.hpp"
#include "srlab/harness/config.hpp"
#include "srlab/harness/experiments.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace srlab;
using namespace srlab::harness;

namespace {

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = "results";
  std::optional<unsigned> threads;
  std::optional<std::string> format;
};

struct GridFlags {
  std::vector<std::uint64_t> n, M, k, stage_sizes;
  std::vector<double> rate;
  std::vector<int> l;
  std::vector<unsigned> bits;
  std::optional<std::size_t> trials, stages, calibration_draws;
  std::optional<std::string> method, sampler, mode, rule, name, kind;
  std::optional<double> design_distortion;
  std::optional<std::uint64_t> exhaustive_budget;
  bool no_plot = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "YAML experiment config")->check(CLI::ExistingFile);
  cmd->add_option("--seed", f.seed, "Master seed (u64)");
  cmd->add_option("--out", f.out, "Output directory")->capture_default_str();
  cmd->add_option("--threads", f.threads, "Worker threads (0 = all cores)");
  cmd->add_option("--format", f.format, "Data format")->check(CLI::IsMember({"csv", "json"}));
}

void add_grid(CLI::App* cmd, GridFlags& g, bool dims, bool k) {
  if (dims) {
    cmd->add_option("--n", g.n, "Dimensions (comma separated)")->delimiter(',');
    cmd->add_option("--M", g.M, "Dictionary sizes")->delimiter(',');
    cmd->add_option("--rate", g.rate, "Rates R, M = 2^{nR}")->delimiter(',');
  }
  if (k) cmd->add_option("--k", g.k, "Sparsities")->delimiter(',');
  cmd->add_option("--name", g.name, "Output file stem");
  cmd->add_flag("--no-plot", g.no_plot, "Skip the SVG plot");
}

ExperimentConfig build_config(ExperimentKind kind, const CommonFlags& f, const GridFlags& g) {
  ExperimentConfig c = f.config.empty() ? default_config(kind) : load_config(f.config);
  if (!f.config.empty() && c.kind != kind) {
    throw Error(Errc::invalid_config, "config describes a " + std::string(to_string(c.kind)) +
                                          " experiment, this subcommand runs " + to_string(kind));
  }
  if (f.seed) c.seed = *f.seed;
  if (f.threads) c.threads = *f.threads;
  if (f.format) c.format = parse_format(*f.format);
  if (!g.n.empty()) c.n = g.n;
  if (!g.M.empty() || !g.rate.empty()) {
    c.M = g.M;
    c.rate = g.rate;
  }
  if (!g.k.empty()) c.k = g.k;
  if (!g.l.empty()) c.l = g.l;
  if (!g.bits.empty()) c.bits = g.bits;
  if (!g.stage_sizes.empty()) c.stage_sizes = g.stage_sizes;
  if (g.trials) c.trials = *g.trials;
  if (g.stages) c.stages = *g.stages;
  if (g.calibration_draws) c.calibration_draws = *g.calibration_draws;
  if (g.method) c.method = parse_method(*g.method);
  if (g.sampler) c.sampler = parse_sampler(*g.sampler);
  if (g.mode) c.mode = refine::parse_scaling_mode(*g.mode);
  if (g.rule) c.rule = parse_rule(*g.rule);
  if (g.design_distortion) c.design_distortion = *g.design_distortion;
  if (g.exhaustive_budget) c.exhaustive_budget = *g.exhaustive_budget;
  if (g.name) c.name = *g.name;
  if (g.no_plot) c.plot = false;
  return c;
}

int run(const ExperimentConfig& config, const std::string& out) {
  const auto result = run_and_write(config, out);
  std::cout << to_string(config.kind) << ": " << result.rows << " rows -> " << result.data.string() << " ("
            << result.wall_seconds << " s)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"srlab: sparse representation and successive refinement experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(code_version()));

  CommonFlags common;
  GridFlags grid;

  auto* gen = app.add_subcommand("gen-dict", "Generate a random unit-norm dictionary file");
  add_common(gen, common);
  std::uint64_t gen_n = 0, gen_M = 0;
  std::optional<double> gen_rate;
  std::string gen_name;
  gen->add_option("--n", gen_n, "Dimension")->required();
  auto* gen_m_opt = gen->add_option("--M", gen_M, "Number of atoms");
  auto* gen_r_opt = gen->add_option("--rate", gen_rate, "Rate R, M = 2^{nR}");
  gen_m_opt->excludes(gen_r_opt);
  gen->add_option("--name", gen_name, "File stem (default dict_n<N>_M<M>)");

  auto* approx = app.add_subcommand("approx", "Sparse approximation error sweep (approx-sweep)");
  add_common(approx, common);
  add_grid(approx, grid, true, true);
  approx->add_option("--trials", grid.trials, "Draws per grid point");
  approx->add_option("--method", grid.method, "greedy | omp | exhaustive");
  approx->add_option("--sampler", grid.sampler, "ball | sphere | gaussian");
  approx->add_option("--exhaustive-budget", grid.exhaustive_budget, "Max supports per exhaustive search");

  auto* bounds = app.add_subcommand("bounds", "Closed-form bound table (bounds-table)");
  add_common(bounds, common);
  add_grid(bounds, grid, true, true);

  auto* refine = app.add_subcommand("refine", "Successive refinement staircase (refine-staircase)");
  add_common(refine, common);
  add_grid(refine, grid, true, false);
  refine->add_option("--stages", grid.stages, "Number of stages");
  refine->add_option("--trials", grid.trials, "Gaussian source draws");
  refine->add_option("--mode", grid.mode, "adaptive | fixed");
  refine->add_option("--design-distortion", grid.design_distortion, "Fixed-mode D (<= 0 calibrates)");
  refine->add_option("--calibration-draws", grid.calibration_draws, "Draws used to calibrate D");
  refine->add_option("--stage-sizes", grid.stage_sizes, "Atoms used per stage")->delimiter(',');

  auto* quant = app.add_subcommand("quant", "Quantizer checks (quant-check or covering-probe)");
  add_common(quant, common);
  add_grid(quant, grid, true, true);
  quant->add_option("--kind", grid.kind, "quant-check | covering-probe")
      ->check(CLI::IsMember({"quant-check", "covering-probe"}));
  quant->add_option("--l", grid.l, "Grid resolutions")->delimiter(',');
  quant->add_option("--bits", grid.bits, "Codebook bits")->delimiter(',');
  quant->add_option("--trials", grid.trials, "Draws per grid point");
  quant->add_option("--rule", grid.rule, "gain_shape | nearest");

  auto* sweep = app.add_subcommand("sweep", "Run any experiment described by a config file");
  add_common(sweep, common);
  sweep->get_option("--config")->required();

  auto* compare = app.add_subcommand("compare", "Compare two CSV result files column by column");
  std::string csv_a, csv_b;
  double tolerance = 1e-9;
  std::optional<std::string> compare_format;
  compare->add_option("a", csv_a, "First CSV")->required()->check(CLI::ExistingFile);
  compare->add_option("b", csv_b, "Second CSV")->required()->check(CLI::ExistingFile);
  compare->add_option("--tol", tolerance, "Max relative deviation per column")->capture_default_str();
  compare->add_option("--format", compare_format, "Report format")->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Usage errors share exit status 2 with validation errors; --help exits 0.
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*gen) {
      std::uint64_t size = gen_M;
      if (gen_rate) size = RateSpec{static_cast<Index>(gen_n), *gen_rate}.size();
      if (size == 0) throw Error(Errc::invalid_config, "gen-dict needs --M or --rate");
      const Seed seed{common.seed.value_or(1)};
      const auto dict = random_dictionary(static_cast<Index>(gen_n), size, seed);
      DictionaryInfo info;
      info.generator = "gaussian-normalised";
      info.n = gen_n;
      info.size = size;
      info.seed = seed.value;
      info.rate = gen_rate;
      const std::string stem =
          gen_name.empty() ? "dict_n" + std::to_string(gen_n) + "_M" + std::to_string(size) : gen_name;
      fs::create_directories(common.out);
      const auto path = fs::path(common.out) / (stem + ".srld");
      save_dictionary(path, dict, info);
      std::cout << "wrote " << path.string() << " and " << sidecar_path(path).string() << '\n';
      return 0;
    }
    if (*approx) return run(build_config(ExperimentKind::approx_sweep, common, grid), common.out);
    if (*bounds) return run(build_config(ExperimentKind::bounds_table, common, grid), common.out);
    if (*refine) return run(build_config(ExperimentKind::refine_staircase, common, grid), common.out);
    if (*quant) {
      ExperimentKind kind = ExperimentKind::quant_check;
      if (grid.kind) {
        kind = parse_kind(*grid.kind);
      } else if (!common.config.empty()) {
        kind = load_config(common.config).kind;
      }
      if (kind != ExperimentKind::quant_check && kind != ExperimentKind::covering_probe) {
        throw Error(Errc::invalid_config, "quant runs quant-check or covering-probe experiments");
      }
      return run(build_config(kind, common, grid), common.out);
    }
    if (*sweep) {
      auto config = load_config(common.config);
      return run(build_config(config.kind, common, grid), common.out);
    }
    if (*compare) {
      const auto report = compare_csv_files(csv_a, csv_b, tolerance);
      const auto table = report_table(report);
      if (compare_format.value_or("csv") == "json") {
        write_json(std::cout, table);
      } else {
        write_csv(std::cout, table);
      }
      if (!report.pass()) {
        std::cerr << "compare: deviation above " << tolerance << " in column(s):";
        for (const auto& c : report.failing()) std::cerr << ' ' << c;
        std::cerr << '\n';
        return 1;
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "srlab: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
