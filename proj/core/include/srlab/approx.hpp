#pragma once

// Sparse k-term representations over a dictionary and the distortion
// functionals built on them: d_k(y, C), its worst case over the unit sphere
// and its average over the unit ball.

#include "srlab/core.hpp"
#include "srlab/dict.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace srlab {

/// Residual energies at or below this are treated as an exact fit.
inline constexpr double kZeroResidual = 1e-24;
/// Relative tolerance on the smallest singular value of a support.
inline constexpr double kRankTolerance = 1e-10;
inline constexpr std::uint64_t kDefaultExhaustiveBudget = 100'000'000;

/// y ~ sum_i coeffs[i] * phi(indices[i]). Greedy representations may repeat
/// an index; exhaustive ones never do.
struct SparseRep {
  std::vector<Index> indices;
  std::vector<double> coeffs;
  Vector recon;
  double residual_sq = 0.0;

  std::size_t sparsity() const noexcept { return indices.size(); }
};

/// ||z_0||^2, ..., ||z_k||^2 with z_0 = y.
struct ResidualTrace {
  std::vector<double> energies;

  bool nonincreasing(double slack = 1e-12) const noexcept;
};

struct Representation {
  SparseRep rep;
  ResidualTrace trace;
};

/// argmin over (m, x) of ||y - x phi(m)||^2, smallest index on ties.
SparseRep best_singleton(const Signal& y, const Dictionary& dict);

/// Matching pursuit: the error, the error of the error, ... each represented
/// by its best scaled atom. Atoms may be reselected.
Representation successive_represent(const Signal& y, const Dictionary& dict, std::size_t k);

/// Orthogonal matching pursuit. A candidate that would make the selected
/// columns numerically dependent is skipped in favour of the next best one.
Representation omp_represent(const Signal& y, const Dictionary& dict, std::size_t k);

/// Globally optimal k-term representation over distinct supports. Ties go to
/// the lexicographically smallest support.
SparseRep exhaustive_best_k(const Signal& y, const Dictionary& dict, std::size_t k,
                            std::uint64_t budget = kDefaultExhaustiveBudget);

/// Exhaustive search engine; caches the Gram matrix of small dictionaries so
/// repeated solves against the same dictionary are cheap. The dictionary
/// must outlive the search object.
class SupportSearch {
 public:
  explicit SupportSearch(const Dictionary& dict, std::uint64_t budget = kDefaultExhaustiveBudget);

  SparseRep solve(const Signal& y, std::size_t k) const;

  /// C(M, k), saturating at UINT64_MAX.
  static std::uint64_t support_count(std::uint64_t M, std::uint64_t k) noexcept;

  /// Least squares on a fixed support using a rank-revealing factorisation
  /// (minimum-norm coefficients on rank deficiency).
  static SparseRep fit_support(const Signal& y, const Dictionary& dict, const std::vector<Index>& support);

 private:
  double gram(Index i, Index j) const;

  const Dictionary* dict_;
  std::uint64_t budget_;
  std::optional<Matrix> gram_;
};

enum class Method { greedy, omp, exhaustive };

const char* to_string(Method method) noexcept;
/// Throws invalid_config.
Method parse_method(std::string_view text);

/// d_k(y, C) for the chosen method; k = 0 gives ||y||^2.
double distortion(const Signal& y, const Dictionary& dict, std::size_t k, Method method,
                  std::uint64_t budget = kDefaultExhaustiveBudget);

/// Greedy residual traces for every column of `signals` (n x B). Atom
/// selection for the whole block comes from one matrix product per stage.
std::vector<ResidualTrace> successive_traces(const Matrix& signals, const Dictionary& dict, std::size_t k);

/// d_k for `trials` draws; draw t uses seed.derive(t) so results do not depend
/// on the worker count.
std::vector<double> sample_distortions(const Dictionary& dict, std::size_t k, std::size_t trials, Method method,
                                       Sampler sampler, Seed seed, unsigned threads = 1,
                                       std::uint64_t budget = kDefaultExhaustiveBudget);

/// Monte Carlo maximum of d_k over the sphere surface. This is a lower
/// estimate of the true supremum and is flagged as such.
struct WorstCaseEstimate {
  double value = 0.0;
  std::size_t argmax_trial = 0;
  std::size_t trials = 0;
  Seed seed;
  Method method = Method::greedy;
  bool lower_estimate = true;
};

WorstCaseEstimate estimate_worst_case(const Dictionary& dict, std::size_t k, std::size_t trials, Method method,
                                      Seed seed, unsigned threads = 1);

struct AverageEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t trials = 0;
  Seed seed;
  Method method = Method::greedy;
};

/// Mean and standard error of d_k over uniform unit-ball draws; trials >= 2.
AverageEstimate estimate_average(const Dictionary& dict, std::size_t k, std::size_t trials, Method method, Seed seed,
                                 unsigned threads = 1);

/// y = Phi x + z with Phi the n x M atom matrix.
struct LinearSystemView {
  Matrix phi;
  Vector x;
  Vector z;

  std::size_t nonzeros() const noexcept;
};

/// Coefficients on repeated indices are summed. Throws index_out_of_range.
LinearSystemView export_linear_system(const Signal& y, const Dictionary& dict, const SparseRep& rep);

}  // namespace srlab
