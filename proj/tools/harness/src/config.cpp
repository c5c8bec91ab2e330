#include "srlab/harness/config.hpp"

#include "srlab/dict.hpp"
#include "srlab/error.hpp"

#include <json.hpp>
#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace srlab::harness {

namespace {

[[noreturn]] void bad(const std::string& message) { throw Error(Errc::invalid_config, message); }

const std::vector<std::string>& common_keys() {
  static const std::vector<std::string> keys{"experiment", "name", "seed", "threads", "format", "plot"};
  return keys;
}

std::vector<std::string> kind_keys(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::approx_sweep:
      return {"n", "M", "rate", "k", "trials", "method", "sampler", "exhaustive_budget"};
    case ExperimentKind::bounds_table:
      return {"n", "M", "rate", "k"};
    case ExperimentKind::refine_staircase:
      return {"n", "M", "rate", "stages", "trials", "mode", "design_distortion", "calibration_draws", "stage_sizes"};
    case ExperimentKind::quant_check:
      return {"n", "M", "rate", "k", "l", "trials"};
    case ExperimentKind::covering_probe:
      return {"k", "bits", "trials", "rule"};
  }
  return {};
}

template <typename T>
T scalar_as(const YAML::Node& node, const std::string& key) {
  if (!node.IsScalar()) bad("'" + key + "' must be a scalar");
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    bad("'" + key + "' has an invalid value '" + node.Scalar() + "'");
  }
}

std::uint64_t unsigned_as(const YAML::Node& node, const std::string& key) {
  const std::string text = node.IsScalar() ? node.Scalar() : std::string{};
  if (!text.empty() && text.front() == '-') bad("'" + key + "' must be non-negative");
  return scalar_as<std::uint64_t>(node, key);
}

template <typename T, typename Convert>
std::vector<T> list_as(const YAML::Node& node, const std::string& key, Convert convert) {
  std::vector<T> out;
  if (node.IsSequence()) {
    for (const auto& item : node) out.push_back(convert(item, key));
  } else if (node.IsScalar()) {
    out.push_back(convert(node, key));
  } else {
    bad("'" + key + "' must be a scalar or a list");
  }
  return out;
}

std::vector<std::uint64_t> unsigned_list(const YAML::Node& node, const std::string& key) {
  return list_as<std::uint64_t>(node, key, unsigned_as);
}

bool has_flag(std::uint64_t x) { return x != 0; }

}  // namespace

const char* to_string(ExperimentKind kind) noexcept {
  switch (kind) {
    case ExperimentKind::approx_sweep: return "approx-sweep";
    case ExperimentKind::bounds_table: return "bounds-table";
    case ExperimentKind::refine_staircase: return "refine-staircase";
    case ExperimentKind::quant_check: return "quant-check";
    case ExperimentKind::covering_probe: return "covering-probe";
  }
  return "unknown";
}

ExperimentKind parse_kind(const std::string& text) {
  for (auto kind : {ExperimentKind::approx_sweep, ExperimentKind::bounds_table, ExperimentKind::refine_staircase,
                    ExperimentKind::quant_check, ExperimentKind::covering_probe}) {
    if (text == to_string(kind)) return kind;
  }
  bad("unknown experiment kind '" + text + "'");
}

const char* to_string(OutputFormat format) noexcept { return format == OutputFormat::csv ? "csv" : "json"; }

OutputFormat parse_format(const std::string& text) {
  if (text == "csv") return OutputFormat::csv;
  if (text == "json") return OutputFormat::json;
  bad("unknown format '" + text + "' (expected csv or json)");
}

const char* to_string(CoveringRule rule) noexcept {
  return rule == CoveringRule::gain_shape ? "gain_shape" : "nearest";
}

CoveringRule parse_rule(const std::string& text) {
  if (text == "gain_shape") return CoveringRule::gain_shape;
  if (text == "nearest") return CoveringRule::nearest;
  bad("unknown covering rule '" + text + "'");
}

const char* to_string(Sampler sampler) noexcept {
  switch (sampler) {
    case Sampler::ball: return "ball";
    case Sampler::sphere: return "sphere";
    case Sampler::gaussian: return "gaussian";
  }
  return "unknown";
}

Sampler parse_sampler(const std::string& text) {
  if (text == "ball") return Sampler::ball;
  if (text == "sphere") return Sampler::sphere;
  if (text == "gaussian") return Sampler::gaussian;
  bad("unknown sampler '" + text + "'");
}

std::vector<std::uint64_t> ExperimentConfig::sizes_for(std::uint64_t dim) const {
  if (!M.empty()) return M;
  std::vector<std::uint64_t> out;
  for (double r : rate) out.push_back(RateSpec{static_cast<Index>(dim), r}.size());
  return out;
}

ExperimentConfig default_config(ExperimentKind kind) {
  ExperimentConfig c;
  c.kind = kind;
  switch (kind) {
    case ExperimentKind::approx_sweep:
      c.n = {16};
      c.M = {64};
      c.k = {1, 2, 3};
      c.trials = 1000;
      break;
    case ExperimentKind::bounds_table:
      c.n = {64, 128};
      c.rate = {0.25};
      c.k = {1, 2};
      break;
    case ExperimentKind::refine_staircase:
      c.n = {64};
      c.M = {256};
      c.stages = 4;
      c.trials = 200;
      break;
    case ExperimentKind::quant_check:
      c.n = {16};
      c.M = {64};
      c.k = {1, 2, 3, 4};
      c.l = {4, 16, 64};
      c.trials = 200;
      break;
    case ExperimentKind::covering_probe:
      c.k = {2, 4};
      c.bits = {4, 8, 12};
      c.trials = 200;
      break;
  }
  return c;
}

void ExperimentConfig::validate() const {
  const auto need = [&](bool ok, const std::string& message) {
    if (!ok) bad(std::string(to_string(kind)) + ": " + message);
  };
  const bool uses_dims = kind != ExperimentKind::covering_probe;
  if (uses_dims) {
    need(!n.empty(), "'n' must list at least one dimension");
    need(std::all_of(n.begin(), n.end(), has_flag), "every n must be >= 1");
    need(M.empty() != rate.empty(), "give exactly one of 'M' and 'rate'");
    need(std::all_of(M.begin(), M.end(), has_flag), "every M must be >= 1");
    need(std::all_of(rate.begin(), rate.end(), [](double r) { return r >= 0.0 && std::isfinite(r); }),
         "every rate must be finite and >= 0");
  }
  const bool empirical = kind != ExperimentKind::bounds_table;
  // Two draws is the least that gives a standard error.
  if (empirical) need(trials >= 2, "trials must be >= 2 (got " + std::to_string(trials) + ")");

  switch (kind) {
    case ExperimentKind::approx_sweep:
    case ExperimentKind::quant_check:
    case ExperimentKind::bounds_table:
      need(!k.empty(), "'k' must list at least one sparsity");
      break;
    default:
      break;
  }

  // Dictionary memory and search budgets, per grid point.
  if (uses_dims && kind != ExperimentKind::bounds_table) {
    const auto budget = default_budget_bytes();
    for (auto dim : n) {
      for (auto size : sizes_for(dim)) {
        const auto bytes = dictionary_bytes(static_cast<Index>(dim), size);
        if (bytes > budget) {
          throw Error(Errc::size_overflow, "dictionary n=" + std::to_string(dim) + ", M=" + std::to_string(size) +
                                               " needs " + std::to_string(bytes) + " bytes, budget is " +
                                               std::to_string(budget));
        }
        if (kind == ExperimentKind::approx_sweep && method == Method::exhaustive) {
          for (auto kk : k) {
            if (SupportSearch::support_count(size, kk) > exhaustive_budget) {
              throw Error(Errc::budget_exceeded, "exhaustive search over C(" + std::to_string(size) + ", " +
                                                     std::to_string(kk) + ") supports exceeds exhaustive_budget");
            }
          }
        }
        if (kind == ExperimentKind::quant_check) {
          for (auto kk : k) need(kk >= 1 && kk <= dim && kk <= size, "quant-check needs 1 <= k <= min(n, M)");
        }
      }
    }
  }

  switch (kind) {
    case ExperimentKind::bounds_table:
      for (auto dim : n) {
        for (auto kk : k) need(kk >= 1 && kk < dim, "bounds need 1 <= k < n");
      }
      break;
    case ExperimentKind::refine_staircase:
      need(n.size() == 1, "refine-staircase takes a single n");
      need(M.size() + rate.size() == 1, "refine-staircase takes a single M or rate");
      need(stages >= 1, "stages must be >= 1");
      need(design_distortion <= 1.0, "design_distortion must be <= 1 (<= 0 means calibrate)");
      need(calibration_draws >= 1, "calibration_draws must be >= 1");
      if (!stage_sizes.empty()) {
        need(stage_sizes.size() == stages, "stage_sizes needs one entry per stage");
        const auto size = sizes_for(n.front()).front();
        for (auto s : stage_sizes) need(s >= 1 && s <= size, "stage sizes must lie in [1, M]");
      }
      break;
    case ExperimentKind::quant_check:
      need(!l.empty(), "'l' must list at least one grid resolution");
      need(std::all_of(l.begin(), l.end(), [](int v) { return v >= 1; }), "every l must be >= 1");
      break;
    case ExperimentKind::covering_probe: {
      need(!k.empty() && !bits.empty(), "'k' and 'bits' must be non-empty");
      need(std::all_of(k.begin(), k.end(), has_flag), "every k must be >= 1");
      const auto budget = default_budget_bytes();
      for (auto kk : k) {
        for (auto b : bits) {
          if (b < 1 || b > 62) throw Error(Errc::size_overflow, "bits must lie in [1, 62]");
          if (dictionary_bytes(static_cast<Index>(kk), 1ULL << b) > budget) {
            throw Error(Errc::size_overflow, "codebook of 2^" + std::to_string(b) + " points exceeds the memory budget");
          }
        }
      }
      break;
    }
    default:
      break;
  }
}

ExperimentConfig parse_config(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    bad(std::string("config is not valid YAML: ") + e.what());
  }
  if (!root.IsMap()) bad("config must be a mapping of keys to values");
  if (!root["experiment"]) bad("config needs an 'experiment' key");
  const auto kind = parse_kind(scalar_as<std::string>(root["experiment"], "experiment"));

  std::set<std::string> allowed(common_keys().begin(), common_keys().end());
  for (const auto& key : kind_keys(kind)) allowed.insert(key);
  for (const auto& item : root) {
    const auto key = item.first.as<std::string>();
    if (!allowed.count(key)) bad("unknown key '" + key + "' for experiment " + to_string(kind));
  }

  ExperimentConfig c = default_config(kind);
  // Grid keys given in the file replace the defaults as a whole.
  if (root["M"] || root["rate"]) {
    c.M.clear();
    c.rate.clear();
  }
  for (const auto& item : root) {
    const auto key = item.first.as<std::string>();
    const YAML::Node& v = item.second;
    if (key == "experiment") continue;
    if (key == "name") c.name = scalar_as<std::string>(v, key);
    else if (key == "seed") c.seed = unsigned_as(v, key);
    else if (key == "threads") c.threads = static_cast<unsigned>(unsigned_as(v, key));
    else if (key == "format") c.format = parse_format(scalar_as<std::string>(v, key));
    else if (key == "plot") c.plot = scalar_as<bool>(v, key);
    else if (key == "n") c.n = unsigned_list(v, key);
    else if (key == "M") c.M = unsigned_list(v, key);
    else if (key == "rate") c.rate = list_as<double>(v, key, scalar_as<double>);
    else if (key == "k") c.k = unsigned_list(v, key);
    else if (key == "trials") c.trials = unsigned_as(v, key);
    else if (key == "method") c.method = parse_method(scalar_as<std::string>(v, key));
    else if (key == "sampler") c.sampler = parse_sampler(scalar_as<std::string>(v, key));
    else if (key == "exhaustive_budget") c.exhaustive_budget = unsigned_as(v, key);
    else if (key == "stages") c.stages = unsigned_as(v, key);
    else if (key == "mode") c.mode = refine::parse_scaling_mode(scalar_as<std::string>(v, key));
    else if (key == "design_distortion") c.design_distortion = scalar_as<double>(v, key);
    else if (key == "calibration_draws") c.calibration_draws = unsigned_as(v, key);
    else if (key == "stage_sizes") c.stage_sizes = unsigned_list(v, key);
    else if (key == "l") c.l = list_as<int>(v, key, scalar_as<int>);
    else if (key == "bits") c.bits = list_as<unsigned>(v, key, [](const YAML::Node& x, const std::string& name) {
        return static_cast<unsigned>(unsigned_as(x, name));
      });
    else if (key == "rule") c.rule = parse_rule(scalar_as<std::string>(v, key));
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot read config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string config_json(const ExperimentConfig& c) {
  nlohmann::ordered_json j;
  j["experiment"] = to_string(c.kind);
  j["name"] = c.stem();
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["format"] = to_string(c.format);
  j["plot"] = c.plot;
  if (c.kind != ExperimentKind::covering_probe) {
    j["n"] = c.n;
    if (!c.M.empty()) j["M"] = c.M;
    if (!c.rate.empty()) j["rate"] = c.rate;
  }
  if (c.kind != ExperimentKind::refine_staircase) j["k"] = c.k;
  if (c.kind != ExperimentKind::bounds_table) j["trials"] = c.trials;
  switch (c.kind) {
    case ExperimentKind::approx_sweep:
      j["method"] = to_string(c.method);
      j["sampler"] = to_string(c.sampler);
      j["exhaustive_budget"] = c.exhaustive_budget;
      break;
    case ExperimentKind::refine_staircase:
      j["stages"] = c.stages;
      j["mode"] = refine::to_string(c.mode);
      j["design_distortion"] = c.design_distortion;
      j["calibration_draws"] = c.calibration_draws;
      j["stage_sizes"] = c.stage_sizes;
      break;
    case ExperimentKind::quant_check:
      j["l"] = c.l;
      break;
    case ExperimentKind::covering_probe:
      j["bits"] = c.bits;
      j["rule"] = to_string(c.rule);
      break;
    default:
      break;
  }
  return j.dump();
}

}  // namespace srlab::harness
