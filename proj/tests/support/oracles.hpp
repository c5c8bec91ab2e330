#pragma once

// Test-only reference computations. Nothing here calls into the code paths
// being checked: supports are enumerated with std::prev_permutation, least
// squares goes through a full SVD, and the chi-square tail is integrated
// numerically.

#include <Eigen/Core>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

namespace srlab::testing {

struct OracleResult {
  std::vector<Eigen::Index> support;
  double value = std::numeric_limits<double>::infinity();
};

/// Residual of the least-squares fit of y on the given columns (SVD,
/// minimum-norm on rank deficiency).
inline double svd_residual(const Eigen::MatrixXd& atoms, const std::vector<Eigen::Index>& support,
                           const Eigen::VectorXd& y) {
  Eigen::MatrixXd phi(atoms.rows(), static_cast<Eigen::Index>(support.size()));
  for (std::size_t i = 0; i < support.size(); ++i) phi.col(static_cast<Eigen::Index>(i)) = atoms.col(support[i]);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(phi, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(1e-10);
  const Eigen::VectorXd x = svd.solve(y);
  return (y - phi * x).squaredNorm();
}

/// Minimum over all size-k supports; ties within 1e-12 relative go to the
/// lexicographically smallest support.
inline OracleResult enumerate_best_support(const Eigen::MatrixXd& atoms, const Eigen::VectorXd& y, std::size_t k) {
  const auto M = static_cast<std::size_t>(atoms.cols());
  std::vector<bool> mask(M, false);
  std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(k), true);
  OracleResult best;
  const double tie = 1e-12 * std::max(y.squaredNorm(), 1e-300);
  do {
    std::vector<Eigen::Index> support;
    for (std::size_t m = 0; m < M; ++m) {
      if (mask[m]) support.push_back(static_cast<Eigen::Index>(m));
    }
    const double value = svd_residual(atoms, support, y);
    // prev_permutation on a leading-true mask visits supports in
    // lexicographic order, so strict improvement keeps the earliest tie.
    if (value < best.value - tie) {
      best.value = value;
      best.support = support;
    }
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return best;
}

/// Singleton scan: argmin_m min_x ||y - x phi(m)||^2, residual computed
/// directly from the difference vector.
inline OracleResult scan_singletons(const Eigen::MatrixXd& atoms, const Eigen::VectorXd& y) {
  OracleResult best;
  for (Eigen::Index m = 0; m < atoms.cols(); ++m) {
    const auto phi = atoms.col(m);
    const double x = phi.dot(y) / phi.squaredNorm();
    const double value = (y - x * phi).squaredNorm();
    if (value < best.value) {
      best.value = value;
      best.support = {m};
    }
  }
  return best;
}

/// P(chi^2_n > x) by Simpson integration of the log-domain density on
/// [x, x + 40 sqrt(2n) + 200].
inline double chi_square_tail(int n, double x) {
  const double half = 0.5 * n;
  const double log_norm = -half * std::log(2.0) - std::lgamma(half);
  auto density = [&](double t) {
    if (t <= 0.0) return 0.0;
    return std::exp(log_norm + (half - 1.0) * std::log(t) - 0.5 * t);
  };
  const double upper = x + 40.0 * std::sqrt(2.0 * n) + 200.0;
  const int steps = 200000;
  const double h = (upper - x) / steps;
  double sum = density(x) + density(upper);
  for (int i = 1; i < steps; ++i) sum += density(x + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

/// Random unit-norm atoms from a generator unrelated to the library's
/// samplers.
inline Eigen::MatrixXd random_unit_atoms(Eigen::Index n, Eigen::Index M, std::uint64_t seed) {
  std::mt19937 gen(static_cast<std::uint32_t>(seed * 2654435761ULL + 17));
  std::normal_distribution<double> normal;
  Eigen::MatrixXd atoms(n, M);
  for (Eigen::Index m = 0; m < M; ++m) {
    for (Eigen::Index i = 0; i < n; ++i) atoms(i, m) = normal(gen);
    atoms.col(m) /= atoms.col(m).norm();
  }
  return atoms;
}

inline Eigen::VectorXd random_vector(Eigen::Index n, std::uint64_t seed) {
  std::mt19937 gen(static_cast<std::uint32_t>(seed * 40503ULL + 99));
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = normal(gen);
  return v;
}

}  // namespace srlab::testing
