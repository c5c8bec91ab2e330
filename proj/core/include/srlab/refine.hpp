#pragma once

// Successive refinement of white Gaussian sources with one reused
// dictionary: stage j describes the current error by a single atom index.
//
// Sources live at radius ~sqrt(n) while atoms are unit norm, so codewords are
// built at use sites. In fixed mode the stage-j codeword is
//     x_j * sqrt(n (1 - D)) * phi(m),   x_j = D^{(j-1)/2},
// i.e. a covering codeword at the radius that leaves error energy n D, scaled
// down by the error radius of the previous stage. Only indices are
// transmitted. In adaptive mode each stage uses the optimal scalar gain,
// which is side information and is accounted for separately.

#include "srlab/core.hpp"
#include "srlab/dict.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace srlab::refine {

enum class ScalingMode { fixed, adaptive };

const char* to_string(ScalingMode mode) noexcept;
ScalingMode parse_scaling_mode(const std::string& text);

/// Bits spent on a coefficient when gains are sent as raw float64.
inline constexpr std::uint64_t kGainBits = 64;

struct CodecOptions {
  ScalingMode mode = ScalingMode::adaptive;
  double design_distortion = 1.0;  // D, fixed mode only; in (0, 1]
  /// Optional per-stage sizes: stage j only uses atoms [0, stage_sizes[j])
  /// of the shared dictionary. Empty means every stage uses all M atoms.
  std::vector<std::uint64_t> stage_sizes;
};

struct RefinementCode {
  ScalingMode mode = ScalingMode::adaptive;
  Index n = 0;
  double design_distortion = 1.0;
  double codeword_radius = 0.0;  // sqrt(n (1 - D)), fixed mode
  std::vector<Index> indices;
  std::vector<double> scalings;      // x_j, fixed mode
  std::vector<double> gains;         // adaptive mode side information
  std::vector<unsigned> stage_bits;  // ceil(log2 M_j)

  std::size_t stages() const noexcept { return indices.size(); }
  /// Index bits through stage j.
  std::uint64_t index_bits(std::size_t j) const;
  /// Gain bits through stage j (0 in fixed mode).
  std::uint64_t side_info_bits(std::size_t j) const;
};

struct EncodeResult {
  RefinementCode code;
  Vector reconstruction;
  std::vector<double> energies;  // ||z_j||^2, j = 0..k
};

/// x_j = D^{(j-1)/2}, j = 1..k.
std::vector<double> fixed_scalings(double design_distortion, std::size_t stages);

unsigned index_bits_for(std::uint64_t size) noexcept;

EncodeResult encode(const Signal& u, const Dictionary& dict, std::size_t stages, const CodecOptions& options);

/// Reconstruction from the first `prefix` stages using only the code and the
/// dictionary. Throws index_out_of_range.
Vector decode(const RefinementCode& code, const Dictionary& dict, std::size_t prefix);

/// Blocked encoder for the columns of `sources`; returns per-source stage
/// energies (stage-major: energies[j][b]).
std::vector<std::vector<double>> encode_energies(const Matrix& sources, const Dictionary& dict, std::size_t stages,
                                                 const CodecOptions& options);

/// Mean one-stage contraction ||z_1||^2/||u||^2 of the adaptive codec over
/// `draws` Gaussian sources; the default design distortion for fixed mode.
double calibrate_design_distortion(const Dictionary& dict, std::size_t draws, Seed seed, unsigned threads = 1);

struct TailEstimate {
  double tail_prob = 0.0;
  double tail_prob_std_error = 0.0;
  double tail_contribution = 0.0;  // E[X 1{X > 1+eps}] with X = ||U||/sqrt(n)
  std::size_t trials = 0;
};

/// Monte Carlo estimate of P(||U||/sqrt(n) > 1 + eps) and of the conditional
/// mean times that probability, for U standard normal in R^n.
TailEstimate norm_concentration(Index n, double eps, std::size_t trials, Seed seed, unsigned threads = 1);

struct StageReport {
  std::size_t stage = 0;
  std::uint64_t bits = 0;  // cumulative index bits
  double rate_per_dim = 0.0;
  double mean_dist = 0.0;  // mean ||z_j||^2 / n
  double std_error = 0.0;
  double ideal_dist = 1.0;   // 2^{-2 rate}
  double target_dist = 0.0;  // D^j in fixed mode, 0 otherwise
  std::uint64_t side_info_bits = 0;
  std::size_t trials = 0;
};

struct StaircaseOptions {
  Index n = 64;
  std::uint64_t M = 256;
  std::size_t stages = 4;
  std::size_t trials = 100;
  Seed seed;
  ScalingMode mode = ScalingMode::adaptive;
  /// Fixed mode; <= 0 means calibrate on `calibration_draws` sources.
  double design_distortion = 0.0;
  std::size_t calibration_draws = 100;
  std::vector<std::uint64_t> stage_sizes;
  unsigned threads = 1;
};

struct Staircase {
  std::vector<StageReport> stages;
  double design_distortion = 0.0;
};

/// Per-stage rate and distortion for `trials` Gaussian sources coded with a
/// single random dictionary. Dictionary, calibration and sources use
/// independent streams derived from options.seed.
Staircase rd_staircase(const StaircaseOptions& options);

/// Same, against a caller-supplied dictionary.
Staircase rd_staircase(const StaircaseOptions& options, const Dictionary& dict);

/// CSV columns: stage,bits,rate_per_dim,mean_dist,ideal_dist,trials,stderr.
void write_stage_csv(std::ostream& out, std::span<const StageReport> stages);

}  // namespace srlab::refine
