#include "srlab/harness/experiments.hpp"

#include "srlab/bounds.hpp"
#include "srlab/error.hpp"
#include "srlab/parallel.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>

#ifndef SRLAB_GIT_DESCRIBE
#define SRLAB_GIT_DESCRIBE "unknown"
#endif

namespace srlab::harness {

namespace {

using I64 = std::int64_t;

I64 as_i64(std::uint64_t v) { return static_cast<I64>(v); }

double max_of(const std::vector<double>& v) {
  return v.empty() ? std::numeric_limits<double>::quiet_NaN() : *std::max_element(v.begin(), v.end());
}

// Actual bits per dimension of a dictionary of `size` atoms.
double actual_rate(std::uint64_t size, std::uint64_t n) {
  return std::log2(static_cast<double>(size)) / static_cast<double>(n);
}

// Dictionaries and draws for grid point g use streams 2g and 2g+1.
Seed dictionary_seed(const ExperimentConfig& c, std::size_t g) { return Seed{c.seed}.derive(2 * g); }
Seed draws_seed(const ExperimentConfig& c, std::size_t g) { return Seed{c.seed}.derive(2 * g + 1); }

std::string size_label(std::uint64_t n, std::uint64_t M) {
  return "n=" + std::to_string(n) + ", M=" + std::to_string(M);
}

ExperimentResult approx_sweep(const ExperimentConfig& c) {
  ExperimentResult out;
  out.table.columns = {"n", "M", "rate", "k", "method", "sampler", "trials", "mean", "stderr", "max",
                       "thm1_rhs", "thm2_lower", "mean_over_thm2"};
  out.plot = {"Sparse approximation error", "k", "log2 mean d_k", {}};
  std::size_t g = 0;
  for (auto n : c.n) {
    for (auto M : c.sizes_for(n)) {
      const auto dict = random_dictionary(static_cast<Index>(n), M, dictionary_seed(c, g));
      Series series{size_label(n, M), {}};
      for (auto k : c.k) {
        const auto d = sample_distortions(dict, k, c.trials, c.method, c.sampler, draws_seed(c, g), c.threads,
                                          c.exhaustive_budget);
        const auto stats = summarize(d);
        Cell thm1, thm2, ratio;
        if (k >= 1 && k < n && M >= k) {
          const bounds::BoundParams p{n, static_cast<double>(M), k};
          thm1 = bounds::theorem1_rhs(p);
          const double lower = bounds::theorem2_lower(p);
          thm2 = lower;
          ratio = lower > 0.0 ? Cell(stats.mean / lower) : Cell{};
        }
        out.table.add_row({as_i64(n), as_i64(M), actual_rate(M, n), as_i64(k), std::string(to_string(c.method)),
                           std::string(to_string(c.sampler)), as_i64(c.trials), stats.mean, stats.std_error,
                           max_of(d), thm1, thm2, ratio});
        series.points.emplace_back(static_cast<double>(k), std::log2(stats.mean));
      }
      out.plot.series.push_back(std::move(series));
      ++g;
    }
  }
  return out;
}

ExperimentResult bounds_table(const ExperimentConfig& c) {
  ExperimentResult out;
  out.table.columns = {"n", "M", "log2_M", "rate", "k", "thm1_rhs", "thm2_lower", "log2_thm2_lower",
                       "exponent_bounded_k", "gap_bits", "c_n", "log2_binom"};
  out.plot = {"Converse bound", "n", "log2 bound", {}};
  // One series per (size spec, k) across n.
  const std::size_t specs = c.M.empty() ? c.rate.size() : c.M.size();
  std::vector<Series> series(specs * c.k.size());
  for (auto n : c.n) {
    for (std::size_t s = 0; s < specs; ++s) {
      const bool by_rate = c.M.empty();
      for (std::size_t ki = 0; ki < c.k.size(); ++ki) {
        const auto k = c.k[ki];
        const auto p = by_rate ? bounds::from_rate(n, c.rate[s], k)
                               : bounds::BoundParams{n, static_cast<double>(c.M[s]), k};
        const auto r = bounds::evaluate(p);
        const double log2_m = std::log2(p.M);
        const double gap = r.log2_thm2_lower + 2.0 * static_cast<double>(k) * log2_m / static_cast<double>(n - k);
        out.table.add_row({as_i64(n), p.M, log2_m, log2_m / static_cast<double>(n), as_i64(k), r.thm1_rhs,
                           r.thm2_lower, r.log2_thm2_lower, r.exponent_bounded_k, gap, r.c_n, r.log2_binom});
        auto& line = series[s * c.k.size() + ki];
        line.label = (by_rate ? "R=" + format_number(c.rate[s]) : "M=" + std::to_string(c.M[s])) +
                     ", k=" + std::to_string(k);
        line.points.emplace_back(static_cast<double>(n), r.log2_thm2_lower);
      }
    }
  }
  out.plot.series = std::move(series);
  return out;
}

ExperimentResult refine_staircase(const ExperimentConfig& c) {
  refine::StaircaseOptions o;
  o.n = static_cast<Index>(c.n.front());
  o.M = c.sizes_for(c.n.front()).front();
  o.stages = c.stages;
  o.trials = c.trials;
  o.seed = Seed{c.seed};
  o.mode = c.mode;
  o.design_distortion = c.design_distortion;
  o.calibration_draws = c.calibration_draws;
  o.stage_sizes = c.stage_sizes;
  o.threads = c.threads;
  const auto sc = refine::rd_staircase(o);

  ExperimentResult out;
  out.table.columns = {"stage", "bits", "rate_per_dim", "mean_dist", "ideal_dist", "trials", "stderr",
                       "target_dist", "side_info_bits", "mode", "design_distortion"};
  out.plot = {"Successive refinement, " + size_label(c.n.front(), o.M), "rate (bits/dim)", "log2 distortion", {}};
  Series empirical{std::string(refine::to_string(c.mode)), {}};
  Series ideal{"2^{-2R}", {}, true};
  for (const auto& s : sc.stages) {
    Cell target;
    if (c.mode == refine::ScalingMode::fixed) target = s.target_dist;
    Cell design;
    if (c.mode == refine::ScalingMode::fixed) design = sc.design_distortion;
    out.table.add_row({as_i64(s.stage), as_i64(s.bits), s.rate_per_dim, s.mean_dist, s.ideal_dist, as_i64(s.trials),
                       s.std_error, target, as_i64(s.side_info_bits), std::string(refine::to_string(c.mode)), design});
    empirical.points.emplace_back(s.rate_per_dim, std::log2(s.mean_dist));
    ideal.points.emplace_back(s.rate_per_dim, std::log2(s.ideal_dist));
  }
  out.plot.series = {empirical, ideal};
  return out;
}

ExperimentResult quant_check(const ExperimentConfig& c) {
  ExperimentResult out;
  out.table.columns = {"n", "M", "k", "l", "trials", "mean_err", "stderr", "max_err", "bound_nearest",
                       "bound_step", "violations", "max_orth_rel", "max_pythag_rel", "mean_total", "log2_descriptions"};
  out.plot = {"Scalar quantisation of coefficients", "log2 l", "log2 mean error", {}};
  std::size_t g = 0;
  for (auto n : c.n) {
    for (auto M : c.sizes_for(n)) {
      const auto dict = random_dictionary(static_cast<Index>(n), M, dictionary_seed(c, g));
      for (auto k : c.k) {
        // Decompose each draw once, then quantise at every l.
        std::vector<Signal> ys;
        ys.reserve(c.trials);
        for (std::size_t t = 0; t < c.trials; ++t) ys.push_back(sample_ball(static_cast<Index>(n), draws_seed(c, g).derive(t)));
        std::vector<OrthoRep> reps(c.trials);
        parallel_for(c.trials, c.threads, [&](std::size_t t) {
          auto rep = omp_represent(ys[t], dict, k).rep;
          // Drop the zero-coefficient padding after an exact fit.
          SparseRep distinct = rep;
          distinct.indices.clear();
          for (auto m : rep.indices) {
            if (std::find(distinct.indices.begin(), distinct.indices.end(), m) == distinct.indices.end()) {
              distinct.indices.push_back(m);
            }
          }
          reps[t] = ortho_decompose(ys[t], distinct, dict);
        });
        Series series{"k=" + std::to_string(k) + ", " + size_label(n, M), {}};
        for (int l : c.l) {
          std::vector<double> err(c.trials), total(c.trials), orth(c.trials), pyth(c.trials);
          parallel_for(c.trials, c.threads, [&](std::size_t t) {
            const auto q = scalar_quantize(reps[t], l);
            const auto& y = ys[t].values();
            err[t] = q.error_sq(reps[t]);
            total[t] = (y - q.recon_q).squaredNorm();
            orth[t] = check_orthogonality(ys[t], reps[t], q) / std::max(y.norm(), 1e-300);
            const double rhs = (y - reps[t].projection).squaredNorm() + err[t];
            pyth[t] = std::abs(total[t] - rhs) / std::max(total[t], 1e-300);
          });
          const double kk = static_cast<double>(k);
          const double bound_nearest = kk / (4.0 * l * l);
          const double bound_step = kk / (static_cast<double>(l) * l);
          const auto violations = std::count_if(err.begin(), err.end(),
                                                [&](double e) { return e > bound_nearest * (1.0 + 1e-12); });
          const auto stats = summarize(err);
          out.table.add_row({as_i64(n), as_i64(M), as_i64(k), static_cast<I64>(l), as_i64(c.trials), stats.mean,
                             stats.std_error, max_of(err), bound_nearest, bound_step, static_cast<I64>(violations),
                             max_of(orth), max_of(pyth), summarize(total).mean, log2_description_count(M, k, l)});
          series.points.emplace_back(std::log2(static_cast<double>(l)), std::log2(stats.mean));
        }
        out.plot.series.push_back(std::move(series));
      }
      ++g;
    }
  }
  return out;
}

ExperimentResult covering_probe(const ExperimentConfig& c) {
  ExperimentResult out;
  out.table.columns = {"k", "bits", "rule", "trials", "mean_err", "stderr", "max_err", "target",
                       "mean_over_target", "scalar_l", "scalar_mean_err", "scalar_stderr"};
  out.plot = {"Random-codebook quantisation", "bits", "log2 mean error", {}};
  std::size_t g = 0;
  for (auto k : c.k) {
    Series series{"k=" + std::to_string(k), {}};
    Series target{"2^{-2b/k}, k=" + std::to_string(k), {}, true};
    for (auto b : c.bits) {
      const auto kk = static_cast<Index>(k);
      const Matrix codebook = covering_codebook(kk, b, dictionary_seed(c, g));
      // Scalar grid with at most 2^b cells: (2l+1)^k <= 2^b.
      const double cells_per_axis = std::floor(std::exp2(static_cast<double>(b) / static_cast<double>(k)) + 1e-9);
      const int scalar_l = std::max(1, static_cast<int>((cells_per_axis - 1.0) / 2.0));
      std::vector<double> err(c.trials), scalar(c.trials);
      parallel_for(c.trials, c.threads, [&](std::size_t t) {
        OrthoRep o;
        o.lambdas = sample_ball(kk, draws_seed(c, g).derive(t)).values();
        o.basis = Matrix::Identity(kk, kk);
        o.projection = o.lambdas;
        err[t] = subspace_covering_quantize(o, codebook, c.rule).error_sq;
        scalar[t] = scalar_quantize(o, scalar_l).error_sq(o);
      });
      const auto stats = summarize(err);
      const auto sstats = summarize(scalar);
      const double tgt = std::exp2(-2.0 * b / static_cast<double>(k));
      out.table.add_row({as_i64(k), static_cast<I64>(b), std::string(to_string(c.rule)), as_i64(c.trials),
                         stats.mean, stats.std_error, max_of(err), tgt, stats.mean / tgt, static_cast<I64>(scalar_l),
                         sstats.mean, sstats.std_error});
      series.points.emplace_back(b, std::log2(stats.mean));
      target.points.emplace_back(b, std::log2(tgt));
      ++g;
    }
    out.plot.series.push_back(std::move(series));
    out.plot.series.push_back(std::move(target));
  }
  return out;
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io_error, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(Errc::io_error, "write failed for " + path.string());
}

}  // namespace

const char* code_version() noexcept { return SRLAB_GIT_DESCRIBE; }

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  switch (config.kind) {
    case ExperimentKind::approx_sweep: return approx_sweep(config);
    case ExperimentKind::bounds_table: return bounds_table(config);
    case ExperimentKind::refine_staircase: return refine_staircase(config);
    case ExperimentKind::quant_check: return quant_check(config);
    case ExperimentKind::covering_probe: return covering_probe(config);
  }
  throw Error(Errc::invalid_config, "unknown experiment kind");
}

RunOutputs run_and_write(const ExperimentConfig& config, const std::filesystem::path& out_dir) {
  const auto started = utc_now();
  const auto t0 = std::chrono::steady_clock::now();
  const auto result = run_experiment(config);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  // Render everything before creating any file.
  std::ostringstream data;
  if (config.format == OutputFormat::csv) {
    write_csv(data, result.table);
  } else {
    write_json(data, result.table);
  }
  const std::string svg = config.plot ? render_svg(result.plot) : std::string{};

  RunOutputs paths;
  const std::string stem = config.stem();
  paths.data = out_dir / (stem + (config.format == OutputFormat::csv ? ".csv" : ".json"));
  paths.metadata = out_dir / (stem + ".meta.json");
  if (config.plot) paths.plot = out_dir / (stem + ".svg");
  paths.rows = result.table.rows.size();
  paths.wall_seconds = wall;

  nlohmann::ordered_json meta;
  meta["experiment"] = to_string(config.kind);
  meta["seed"] = config.seed;
  meta["threads_requested"] = config.threads;
  meta["threads_used"] = resolve_threads(config.threads);
  meta["git_describe"] = code_version();
  meta["started_utc"] = started;
  meta["wall_time_seconds"] = wall;
  meta["rows"] = paths.rows;
  meta["data_file"] = paths.data.filename().string();
  meta["budget_bytes"] = default_budget_bytes();
  meta["config"] = nlohmann::ordered_json::parse(config_json(config));

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(Errc::io_error, "cannot create " + out_dir.string() + ": " + ec.message());
  write_file(paths.data, data.str());
  write_file(paths.metadata, meta.dump(2) + "\n");
  if (config.plot) write_file(paths.plot, svg);
  return paths;
}

}  // namespace srlab::harness
