#include "srlab/refine.hpp"

#include "srlab/error.hpp"
#include "srlab/parallel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <ostream>
#include <string>

namespace srlab::refine {

namespace {

constexpr std::size_t kBlock = 64;

constexpr std::uint64_t kDictionaryStream = 0;
constexpr std::uint64_t kCalibrationStream = 1;
constexpr std::uint64_t kSourceStream = 2;

void check_options(const Dictionary& dict, const CodecOptions& options, std::size_t stages) {
  if (options.mode == ScalingMode::fixed) {
    const double d = options.design_distortion;
    if (!(d > 0.0 && d <= 1.0)) throw Error(Errc::domain_error, "design distortion must be in (0, 1]");
  }
  if (!options.stage_sizes.empty()) {
    if (options.stage_sizes.size() < stages) throw Error(Errc::invalid_params, "fewer stage sizes than stages");
    for (auto size : options.stage_sizes) {
      if (size < 1 || size > static_cast<std::uint64_t>(dict.size())) {
        throw Error(Errc::index_out_of_range, "stage size outside [1, M]");
      }
    }
  }
}

Index stage_size(const Dictionary& dict, const CodecOptions& options, std::size_t stage) {
  return options.stage_sizes.empty() ? dict.size() : static_cast<Index>(options.stage_sizes[stage]);
}

// Index minimising ||z - a phi(m)||^2 over the first `size` atoms, for a fixed
// amplitude a >= 0: maximise 2 a c_m - a^2 ||phi(m)||^2.
template <typename Corr>
Index pick_fixed(const Corr& corr, const Dictionary& dict, Index size, double amplitude) {
  Index best = 0;
  double best_score = 2.0 * amplitude * corr[0] - amplitude * amplitude * dict.norms_sq()[0];
  for (Index m = 1; m < size; ++m) {
    const double score = 2.0 * amplitude * corr[m] - amplitude * amplitude * dict.norms_sq()[m];
    if (score > best_score) {
      best_score = score;
      best = m;
    }
  }
  return best;
}

template <typename Corr>
Index pick_adaptive(const Corr& corr, const Dictionary& dict, Index size) {
  Index best = 0;
  double best_score = corr[0] * corr[0] * dict.inv_norms_sq()[0];
  for (Index m = 1; m < size; ++m) {
    const double score = corr[m] * corr[m] * dict.inv_norms_sq()[m];
    if (score > best_score) {
      best_score = score;
      best = m;
    }
  }
  return best;
}

struct BlockResult {
  std::vector<RefinementCode> codes;
  Matrix reconstructions;
  std::vector<std::vector<double>> energies;  // [stage][column]
};

BlockResult encode_block(const Matrix& sources, const Dictionary& dict, std::size_t stages, const CodecOptions& options,
                         bool keep_codes) {
  if (sources.rows() != dict.dim()) throw Error(Errc::dimension_mismatch, "source dimension does not match dictionary");
  check_options(dict, options, stages);
  const Index n = dict.dim();
  const Index batch = sources.cols();
  const bool fixed = options.mode == ScalingMode::fixed;
  const double radius = fixed ? std::sqrt(static_cast<double>(n) * (1.0 - options.design_distortion)) : 0.0;
  const auto scalings = fixed ? fixed_scalings(options.design_distortion, stages) : std::vector<double>{};

  BlockResult out;
  out.energies.assign(stages + 1, std::vector<double>(static_cast<std::size_t>(batch)));
  if (keep_codes) {
    out.codes.resize(static_cast<std::size_t>(batch));
    for (auto& code : out.codes) {
      code.mode = options.mode;
      code.n = n;
      code.design_distortion = fixed ? options.design_distortion : 1.0;
      code.codeword_radius = radius;
      code.scalings = scalings;
      for (std::size_t j = 0; j < stages; ++j) {
        code.stage_bits.push_back(index_bits_for(static_cast<std::uint64_t>(stage_size(dict, options, j))));
      }
    }
    out.reconstructions = Matrix::Zero(n, batch);
  }

  Matrix z = sources;
  for (Index b = 0; b < batch; ++b) out.energies[0][static_cast<std::size_t>(b)] = z.col(b).squaredNorm();
  Matrix corr;
  for (std::size_t j = 0; j < stages; ++j) {
    const Index size = stage_size(dict, options, j);
    corr.noalias() = dict.atoms().leftCols(size).transpose() * z;
    for (Index b = 0; b < batch; ++b) {
      double coeff = 0.0;
      Index m = 0;
      if (fixed) {
        coeff = scalings[j] * radius;
        m = pick_fixed(corr.col(b), dict, size, coeff);
      } else {
        m = pick_adaptive(corr.col(b), dict, size);
        coeff = dict.atom(m).dot(z.col(b)) * dict.inv_norms_sq()[m];
      }
      z.col(b) -= coeff * dict.atom(m);
      out.energies[j + 1][static_cast<std::size_t>(b)] = z.col(b).squaredNorm();
      if (keep_codes) {
        auto& code = out.codes[static_cast<std::size_t>(b)];
        code.indices.push_back(m);
        if (!fixed) code.gains.push_back(coeff);
        out.reconstructions.col(b) += coeff * dict.atom(m);
      }
    }
  }
  return out;
}

}  // namespace

const char* to_string(ScalingMode mode) noexcept { return mode == ScalingMode::fixed ? "fixed" : "adaptive"; }

ScalingMode parse_scaling_mode(const std::string& text) {
  if (text == "fixed") return ScalingMode::fixed;
  if (text == "adaptive") return ScalingMode::adaptive;
  throw Error(Errc::invalid_config, "unknown scaling mode '" + text + "'");
}

std::uint64_t RefinementCode::index_bits(std::size_t j) const {
  if (j > stage_bits.size()) throw Error(Errc::index_out_of_range, "stage beyond code length");
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < j; ++i) total += stage_bits[i];
  return total;
}

std::uint64_t RefinementCode::side_info_bits(std::size_t j) const {
  if (j > stages()) throw Error(Errc::index_out_of_range, "stage beyond code length");
  return mode == ScalingMode::adaptive ? kGainBits * j : 0;
}

std::vector<double> fixed_scalings(double design_distortion, std::size_t stages) {
  std::vector<double> out(stages);
  for (std::size_t j = 0; j < stages; ++j) out[j] = std::pow(design_distortion, 0.5 * static_cast<double>(j));
  return out;
}

unsigned index_bits_for(std::uint64_t size) noexcept {
  return size <= 1 ? 0U : static_cast<unsigned>(std::bit_width(size - 1));
}

EncodeResult encode(const Signal& u, const Dictionary& dict, std::size_t stages, const CodecOptions& options) {
  if (u.dim() != dict.dim()) throw Error(Errc::dimension_mismatch, "source dimension does not match dictionary");
  Matrix source = u.values();
  auto block = encode_block(source, dict, stages, options, true);
  EncodeResult out;
  out.code = std::move(block.codes.front());
  out.reconstruction = block.reconstructions.col(0);
  out.energies.reserve(stages + 1);
  for (const auto& stage : block.energies) out.energies.push_back(stage.front());
  return out;
}

Vector decode(const RefinementCode& code, const Dictionary& dict, std::size_t prefix) {
  if (prefix > code.stages()) throw Error(Errc::index_out_of_range, "prefix longer than the code");
  if (code.n != dict.dim()) throw Error(Errc::dimension_mismatch, "code dimension does not match dictionary");
  Vector recon = Vector::Zero(dict.dim());
  for (std::size_t j = 0; j < prefix; ++j) {
    const Index m = code.indices[j];
    if (m < 0 || m >= dict.size()) throw Error(Errc::index_out_of_range, "atom index out of range", j);
    const double coeff = code.mode == ScalingMode::fixed ? code.scalings[j] * code.codeword_radius : code.gains[j];
    recon += coeff * dict.atom(m);
  }
  return recon;
}

std::vector<std::vector<double>> encode_energies(const Matrix& sources, const Dictionary& dict, std::size_t stages,
                                                 const CodecOptions& options) {
  return encode_block(sources, dict, stages, options, false).energies;
}

double calibrate_design_distortion(const Dictionary& dict, std::size_t draws, Seed seed, unsigned threads) {
  if (draws < 1) throw Error(Errc::invalid_params, "calibration needs at least one draw");
  std::vector<double> ratios(draws);
  const std::size_t blocks = (draws + kBlock - 1) / kBlock;
  const CodecOptions adaptive{ScalingMode::adaptive, 1.0, {}};
  parallel_for(blocks, threads, [&](std::size_t block) {
    const std::size_t begin = block * kBlock;
    const std::size_t end = std::min(draws, begin + kBlock);
    Matrix sources(dict.dim(), static_cast<Index>(end - begin));
    for (std::size_t t = begin; t < end; ++t) {
      sources.col(static_cast<Index>(t - begin)) = sample_gaussian(dict.dim(), seed.derive(t)).values();
    }
    const auto energies = encode_energies(sources, dict, 1, adaptive);
    for (std::size_t t = begin; t < end; ++t) ratios[t] = energies[1][t - begin] / energies[0][t - begin];
  });
  return summarize(ratios).mean;
}

TailEstimate norm_concentration(Index n, double eps, std::size_t trials, Seed seed, unsigned threads) {
  if (n < 1) throw Error(Errc::invalid_params, "n must be >= 1");
  if (!(eps > 0.0)) throw Error(Errc::invalid_params, "eps must be > 0");
  if (trials < 1) throw Error(Errc::invalid_params, "trials must be >= 1");
  std::vector<double> indicator(trials);
  std::vector<double> contribution(trials);
  const double threshold = 1.0 + eps;
  const double root_n = std::sqrt(static_cast<double>(n));
  parallel_for(trials, threads, [&](std::size_t t) {
    const double x = sample_gaussian(n, seed.derive(t)).values().norm() / root_n;
    const bool tail = x > threshold;
    indicator[t] = tail ? 1.0 : 0.0;
    contribution[t] = tail ? x : 0.0;
  });
  TailEstimate out;
  const auto prob = summarize(indicator);
  out.tail_prob = prob.mean;
  out.tail_prob_std_error = prob.std_error;
  out.tail_contribution = summarize(contribution).mean;
  out.trials = trials;
  return out;
}

Staircase rd_staircase(const StaircaseOptions& options) {
  const Dictionary dict = random_dictionary(options.n, options.M, options.seed.derive(kDictionaryStream));
  return rd_staircase(options, dict);
}

Staircase rd_staircase(const StaircaseOptions& options, const Dictionary& dict) {
  if (options.trials < 1) throw Error(Errc::invalid_params, "staircase needs trials >= 1");
  if (dict.dim() != options.n) throw Error(Errc::dimension_mismatch, "dictionary dimension differs from n");

  CodecOptions codec;
  codec.mode = options.mode;
  codec.stage_sizes = options.stage_sizes;
  Staircase out;
  if (options.mode == ScalingMode::fixed) {
    codec.design_distortion = options.design_distortion > 0.0
                                  ? options.design_distortion
                                  : calibrate_design_distortion(dict, options.calibration_draws,
                                                                options.seed.derive(kCalibrationStream), options.threads);
    out.design_distortion = codec.design_distortion;
  }
  check_options(dict, codec, options.stages);

  const std::size_t stages = options.stages;
  const std::size_t trials = options.trials;
  std::vector<std::vector<double>> dist(stages + 1, std::vector<double>(trials));
  const Seed sources_seed = options.seed.derive(kSourceStream);
  const std::size_t blocks = (trials + kBlock - 1) / kBlock;
  const auto n = static_cast<double>(options.n);
  parallel_for(blocks, options.threads, [&](std::size_t block) {
    const std::size_t begin = block * kBlock;
    const std::size_t end = std::min(trials, begin + kBlock);
    Matrix sources(options.n, static_cast<Index>(end - begin));
    for (std::size_t t = begin; t < end; ++t) {
      sources.col(static_cast<Index>(t - begin)) = sample_gaussian(options.n, sources_seed.derive(t)).values();
    }
    const auto energies = encode_energies(sources, dict, stages, codec);
    for (std::size_t j = 0; j <= stages; ++j) {
      for (std::size_t t = begin; t < end; ++t) dist[j][t] = energies[j][t - begin] / n;
    }
  });

  std::uint64_t bits = 0;
  for (std::size_t j = 0; j <= stages; ++j) {
    if (j > 0) bits += index_bits_for(static_cast<std::uint64_t>(stage_size(dict, codec, j - 1)));
    const auto summary = summarize(dist[j]);
    StageReport r;
    r.stage = j;
    r.bits = bits;
    r.rate_per_dim = static_cast<double>(bits) / n;
    r.mean_dist = summary.mean;
    r.std_error = summary.std_error;
    r.ideal_dist = std::exp2(-2.0 * r.rate_per_dim);
    r.target_dist = options.mode == ScalingMode::fixed ? std::pow(codec.design_distortion, static_cast<double>(j)) : 0.0;
    r.side_info_bits = options.mode == ScalingMode::adaptive ? kGainBits * j : 0;
    r.trials = trials;
    out.stages.push_back(r);
  }
  return out;
}

void write_stage_csv(std::ostream& out, std::span<const StageReport> stages) {
  out << "stage,bits,rate_per_dim,mean_dist,ideal_dist,trials,stderr\n";
  const auto old_precision = out.precision(17);
  for (const auto& s : stages) {
    out << s.stage << ',' << s.bits << ',' << s.rate_per_dim << ',' << s.mean_dist << ',' << s.ideal_dist << ','
        << s.trials << ',' << s.std_error << '\n';
  }
  out.precision(old_precision);
}

}  // namespace srlab::refine
