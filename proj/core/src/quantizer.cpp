#include "srlab/quantizer.hpp"

#include "srlab/bounds.hpp"
#include "srlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

namespace srlab {

Matrix gram_schmidt(const Matrix& atoms) {
  Matrix q(atoms.rows(), atoms.cols());
  for (Index j = 0; j < atoms.cols(); ++j) {
    Vector v = atoms.col(j);
    const double norm = v.norm();
    if (norm == 0.0) throw Error(Errc::rank_deficient, "atom " + std::to_string(j) + " is zero", j);
    // Modified Gram-Schmidt, applied twice.
    for (int pass = 0; pass < 2; ++pass) {
      for (Index i = 0; i < j; ++i) v -= q.col(i).dot(v) * q.col(i);
    }
    const double rest = v.norm();
    if (rest <= kRankTolerance * norm) {
      throw Error(Errc::rank_deficient, "atom " + std::to_string(j) + " lies in the span of earlier atoms",
                  static_cast<std::size_t>(j));
    }
    q.col(j) = v / rest;
  }
  return q;
}

OrthoRep ortho_decompose(const Signal& y, const SparseRep& rep, const Dictionary& dict) {
  if (y.dim() != dict.dim()) throw Error(Errc::dimension_mismatch, "signal does not match dictionary");
  const auto k = static_cast<Index>(rep.indices.size());
  if (k < 1) throw Error(Errc::invalid_params, "representation has no atoms");
  Matrix atoms(dict.dim(), k);
  for (Index i = 0; i < k; ++i) {
    const Index m = rep.indices[static_cast<std::size_t>(i)];
    if (m < 0 || m >= dict.size()) throw Error(Errc::index_out_of_range, "atom index out of range", i);
    atoms.col(i) = dict.atom(m);
  }
  OrthoRep o;
  o.basis = gram_schmidt(atoms);
  o.lambdas = o.basis.transpose() * y.values();
  o.projection = o.basis * o.lambdas;
  return o;
}

int quantize_level(double lambda, int l) {
  if (l < 1) throw Error(Errc::invalid_params, "grid resolution l must be >= 1");
  const double scaled = std::abs(lambda) * l;
  double level = std::floor(scaled);
  if (scaled - level > 0.5) level += 1.0;
  level = std::min(level, static_cast<double>(l));
  const int magnitude = static_cast<int>(level);
  return lambda < 0.0 ? -magnitude : magnitude;
}

QuantizedRep scalar_quantize(const OrthoRep& o, int l) {
  if (l < 1) throw Error(Errc::invalid_params, "grid resolution l must be >= 1");
  QuantizedRep q;
  q.step = 1.0 / l;
  q.levels.resize(static_cast<std::size_t>(o.lambdas.size()));
  q.lambdas_q.resize(o.lambdas.size());
  for (Index i = 0; i < o.lambdas.size(); ++i) {
    const int level = quantize_level(o.lambdas[i], l);
    q.levels[static_cast<std::size_t>(i)] = level;
    q.lambdas_q[i] = static_cast<double>(level) / l;
  }
  q.recon_q = o.basis * q.lambdas_q;
  return q;
}

double check_orthogonality(const Signal& y, const OrthoRep& o, const QuantizedRep& q) {
  return std::abs((y.values() - o.projection).dot(o.projection - q.recon_q));
}

Matrix covering_codebook(Index k, unsigned bits, Seed seed, std::uint64_t budget_bytes) {
  if (k < 1) throw Error(Errc::invalid_params, "codebook dimension must be >= 1");
  if (bits < 1 || bits >= 63) throw Error(Errc::size_overflow, "codebook bits must be in [1, 62]");
  const std::uint64_t size = 1ULL << bits;
  if (dictionary_bytes(k, size) > budget_bytes) {
    throw Error(Errc::size_overflow, "codebook of 2^" + std::to_string(bits) + " points exceeds the memory budget");
  }
  auto engine = make_engine(seed);
  Matrix codebook(k, static_cast<Index>(size));
  for (Index c = 0; c < codebook.cols(); ++c) codebook.col(c) = ball_vector(k, engine);
  return codebook;
}

CoveringRep subspace_covering_quantize(const OrthoRep& o, const Matrix& codebook, CoveringRule rule) {
  if (codebook.rows() != o.lambdas.size()) throw Error(Errc::dimension_mismatch, "codebook dimension != k");
  CoveringRep out;
  Index best = 0;
  double best_err = std::numeric_limits<double>::infinity();
  double best_gain = 1.0;
  const double energy = o.lambdas.squaredNorm();
  for (Index c = 0; c < codebook.cols(); ++c) {
    const auto word = codebook.col(c);
    double gain = 1.0;
    double err = 0.0;
    if (rule == CoveringRule::nearest) {
      err = (o.lambdas - word).squaredNorm();
    } else {
      const double nsq = word.squaredNorm();
      const double corr = word.dot(o.lambdas);
      gain = nsq > 0.0 ? corr / nsq : 0.0;
      err = nsq > 0.0 ? std::max(0.0, energy - corr * corr / nsq) : energy;
    }
    if (err < best_err) {
      best_err = err;
      best = c;
      best_gain = gain;
    }
  }
  out.codeword = static_cast<std::uint64_t>(best);
  out.gain = best_gain;
  out.lambdas_q = best_gain * codebook.col(best);
  out.recon_q = o.basis * out.lambdas_q;
  out.error_sq = (o.lambdas - out.lambdas_q).squaredNorm();
  const auto bits = static_cast<unsigned>(std::llround(std::log2(static_cast<double>(codebook.cols()))));
  out.bits = bits;
  out.target = std::exp2(-2.0 * bits / static_cast<double>(o.lambdas.size()));
  return out;
}

CoveringRep subspace_covering_quantize(const OrthoRep& o, unsigned bits, Seed seed, CoveringRule rule,
                                       std::uint64_t budget_bytes) {
  const Matrix codebook = covering_codebook(o.lambdas.size(), bits, seed, budget_bytes);
  return subspace_covering_quantize(o, codebook, rule);
}

std::uint64_t description_count(std::uint64_t M, std::uint64_t k, int l) {
  if (l < 1) throw Error(Errc::invalid_params, "grid resolution l must be >= 1");
  __extension__ typedef unsigned __int128 u128;
  u128 acc = SupportSearch::support_count(M, k);
  const auto levels = static_cast<std::uint64_t>(2 * l + 1);
  for (std::uint64_t i = 0; i < k; ++i) {
    acc *= levels;
    if (acc > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(acc);
}

double log2_description_count(std::uint64_t M, std::uint64_t k, int l) {
  if (l < 1) throw Error(Errc::invalid_params, "grid resolution l must be >= 1");
  return bounds::log2_binom(static_cast<double>(M), k) + static_cast<double>(k) * std::log2(2.0 * l + 1.0);
}

std::uint64_t enumerate_descriptions(std::uint64_t M, std::uint64_t k, int l) {
  if (l < 1) throw Error(Errc::invalid_params, "grid resolution l must be >= 1");
  if (k > M) return 0;
  if (description_count(M, k, l) > 50'000'000ULL) throw Error(Errc::budget_exceeded, "too many descriptions to enumerate");

  std::set<std::pair<std::vector<std::uint64_t>, std::vector<int>>> seen;
  std::vector<std::uint64_t> support(k);
  for (std::uint64_t i = 0; i < k; ++i) support[i] = i;
  for (;;) {
    std::vector<int> levels(k, -l);
    for (;;) {
      seen.emplace(support, levels);
      std::uint64_t pos = 0;
      while (pos < k && levels[pos] == l) levels[pos++] = -l;
      if (pos == k) break;
      ++levels[pos];
    }
    // Next combination in lexicographic order.
    std::uint64_t i = k;
    while (i > 0 && support[i - 1] == M - k + (i - 1)) --i;
    if (i == 0) break;
    ++support[i - 1];
    for (std::uint64_t j = i; j < k; ++j) support[j] = support[j - 1] + 1;
  }
  return seen.size();
}

int step_schedule(Index n, double average_distortion) {
  if (n < 1) throw Error(Errc::invalid_params, "n must be >= 1");
  if (!(average_distortion > 0.0)) throw Error(Errc::domain_error, "distortion must be positive");
  const double l = std::ceil(std::sqrt(static_cast<double>(n)) / std::sqrt(average_distortion));
  if (l > static_cast<double>(std::numeric_limits<int>::max())) throw Error(Errc::size_overflow, "step schedule overflow");
  return static_cast<int>(l);
}

}  // namespace srlab
