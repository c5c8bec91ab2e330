#include "srlab/approx.hpp"

#include "srlab/error.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace srlab {

namespace {

// Gram matrices are cached up to 4096 atoms (128 MiB).
constexpr Index kGramCacheLimit = 4096;

// Columns whose Cholesky pivot falls below this fraction of the atom norm are
// scored as dependent. This is looser than kRankTolerance because the
// normal-equation pivot only resolves to about sqrt(eps).
constexpr double kScoreRankTolerance = 1e-7;

// Supports whose fast score is within this fraction of ||y||^2 of the best are
// refit exactly before the winner is chosen.
constexpr double kNearTieBand = 1e-9;
constexpr double kTieTolerance = 1e-12;

struct Candidate {
  std::vector<Index> support;
  double score;  // residual energy from the Cholesky scoring pass
};

}  // namespace

SupportSearch::SupportSearch(const Dictionary& dict, std::uint64_t budget) : dict_(&dict), budget_(budget) {
  if (dict.size() <= kGramCacheLimit) gram_ = dict.atoms().transpose() * dict.atoms();
}

std::uint64_t SupportSearch::support_count(std::uint64_t M, std::uint64_t k) noexcept {
  if (k > M) return 0;
  k = std::min(k, M - k);
  // C(M, i+1) = C(M, i) * (M - i) / (i + 1) stays integral at every step.
  __extension__ typedef unsigned __int128 u128;
  u128 acc = 1;
  for (std::uint64_t i = 0; i < k; ++i) {
    acc = acc * (M - i) / (i + 1);
    if (acc > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(acc);
}

double SupportSearch::gram(Index i, Index j) const {
  if (gram_) return (*gram_)(i, j);
  return dict_->atom(i).dot(dict_->atom(j));
}

SparseRep SupportSearch::fit_support(const Signal& y, const Dictionary& dict, const std::vector<Index>& support) {
  const auto k = static_cast<Index>(support.size());
  Matrix phi(dict.dim(), k);
  for (Index i = 0; i < k; ++i) phi.col(i) = dict.atom(support[static_cast<std::size_t>(i)]);

  Eigen::CompleteOrthogonalDecomposition<Matrix> cod;
  cod.setThreshold(kRankTolerance);
  cod.compute(phi);
  const Vector x = cod.solve(y.values());

  SparseRep rep;
  rep.indices = support;
  rep.coeffs.assign(x.data(), x.data() + x.size());
  rep.recon = phi * x;
  rep.residual_sq = (y.values() - rep.recon).squaredNorm();
  return rep;
}

SparseRep SupportSearch::solve(const Signal& y, std::size_t k) const {
  const Dictionary& dict = *dict_;
  if (y.dim() != dict.dim()) throw Error(Errc::dimension_mismatch, "signal does not match dictionary");
  if (k < 1) throw Error(Errc::invalid_params, "sparsity k must be >= 1");
  const auto M = static_cast<std::uint64_t>(dict.size());
  if (k > M) throw Error(Errc::invalid_params, "k = " + std::to_string(k) + " exceeds dictionary size");
  const std::uint64_t count = support_count(M, k);
  if (count > budget_) {
    throw Error(Errc::budget_exceeded,
                "C(" + std::to_string(M) + ", " + std::to_string(k) + ") supports exceed the budget of " +
                    std::to_string(budget_));
  }
  if (k == 1) return best_singleton(y, dict);

  const Vector corr = dict.atoms().transpose() * y.values();
  const double energy = y.values().squaredNorm();
  const auto depth = static_cast<Index>(k);

  // Depth-first enumeration in lexicographic order with an incremental
  // Cholesky factor of the prefix Gram matrix. Dependent columns get a zero
  // pivot and contribute nothing.
  Matrix chol = Matrix::Zero(depth, depth);
  Vector w = Vector::Zero(depth);          // forward-solved correlations
  Vector explained = Vector::Zero(depth + 1);  // ||projection||^2 per prefix
  std::vector<Index> support(k);
  std::vector<Candidate> candidates;
  double best_score = std::numeric_limits<double>::infinity();
  const double band = kNearTieBand * std::max(energy, std::numeric_limits<double>::min());

  auto push_column = [&](Index level, Index atom) {
    for (Index j = 0; j < level; ++j) {
      double v = gram(support[static_cast<std::size_t>(j)], atom);
      for (Index t = 0; t < j; ++t) v -= chol(j, t) * chol(level, t);
      chol(level, j) = chol(j, j) > 0.0 ? v / chol(j, j) : 0.0;
    }
    const double g = gram(atom, atom);
    double pivot_sq = g;
    for (Index t = 0; t < level; ++t) pivot_sq -= chol(level, t) * chol(level, t);
    if (g <= 0.0 || pivot_sq <= kScoreRankTolerance * kScoreRankTolerance * g) {
      chol(level, level) = 0.0;
      w[level] = 0.0;
    } else {
      chol(level, level) = std::sqrt(pivot_sq);
      double v = corr[atom];
      for (Index t = 0; t < level; ++t) v -= chol(level, t) * w[t];
      w[level] = v / chol(level, level);
    }
    explained[level + 1] = explained[level] + w[level] * w[level];
  };

  auto visit = [&](auto&& self, Index level, Index first) -> void {
    const Index last = dict.size() - (depth - level);
    for (Index atom = first; atom <= last; ++atom) {
      support[static_cast<std::size_t>(level)] = atom;
      push_column(level, atom);
      if (level + 1 < depth) {
        self(self, level + 1, atom + 1);
        continue;
      }
      const double score = std::max(0.0, energy - explained[depth]);
      if (score < best_score - band) {
        best_score = score;
        std::erase_if(candidates, [&](const Candidate& c) { return c.score > best_score + band; });
        candidates.push_back({support, score});
      } else if (score <= best_score + band) {
        best_score = std::min(best_score, score);
        candidates.push_back({support, score});
      }
    }
  };
  visit(visit, 0, 0);

  // Exact refit of the near-optimal supports; candidates are already in
  // lexicographic order so the first within tolerance wins.
  SparseRep best;
  double best_exact = std::numeric_limits<double>::infinity();
  for (const auto& c : candidates) {
    SparseRep rep = fit_support(y, dict, c.support);
    if (rep.residual_sq < best_exact - kTieTolerance * std::max(energy, 1e-300)) {
      best_exact = rep.residual_sq;
      best = std::move(rep);
    }
  }
  return best;
}

SparseRep exhaustive_best_k(const Signal& y, const Dictionary& dict, std::size_t k, std::uint64_t budget) {
  if (y.dim() != dict.dim()) throw Error(Errc::dimension_mismatch, "signal does not match dictionary");
  if (k < 1) throw Error(Errc::invalid_params, "sparsity k must be >= 1");
  if (k == 1) {
    if (SupportSearch::support_count(static_cast<std::uint64_t>(dict.size()), 1) > budget) {
      throw Error(Errc::budget_exceeded, "dictionary size exceeds the support budget");
    }
    return best_singleton(y, dict);
  }
  return SupportSearch(dict, budget).solve(y, k);
}

}  // namespace srlab
