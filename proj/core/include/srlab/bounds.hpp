#pragma once

// Closed-form achievability and converse quantities. All logarithms are base
// 2 and rates are in bits per dimension.

#include <cstdint>

namespace srlab::bounds {

/// Requires 1 <= k < n and M >= k. M is a real so that M = 2^{nR} stays
/// representable past 2^64; powers of two and integers below 2^53 are exact.
struct BoundParams {
  std::uint64_t n = 0;
  double M = 0.0;
  std::uint64_t k = 0;

  /// Throws Errc::invalid_params.
  void validate() const;
};

/// Achievable worst-case distortion of successive representation:
/// M^{-2k/n}.
double theorem1_rhs(const BoundParams& p);

/// log2(n/(n-k)) + (k/(n-k)) log2(n/k).
double c_n(const BoundParams& p);

/// Parameters with M = 2^{nR}.
BoundParams from_rate(std::uint64_t n, double rate, std::uint64_t k);

/// log2 C(M, k). Direct formula for k <= 2, a sum of log ratios while
/// min(k, M-k) is small, log-gamma otherwise.
double log2_binom(double M, std::uint64_t k);

/// log2 of the converse bound on the average distortion:
/// -2 log2 C(M,k)/(n-k) + log2((n-k)/n) + (k/(n-k)) log2(k/n).
double log2_theorem2_lower(const BoundParams& p);

/// The converse bound itself, 2^{log2_theorem2_lower}. Derived for large n;
/// finite-n values carry no guarantee.
double theorem2_lower(const BoundParams& p);

/// Bounded-k exponent of the converse: -2k log2(M)/(n-k).
double exponent_bounded_k(const BoundParams& p);

/// Gaussian rate-distortion pair, R(D) = (1/2) log2(1/D) for D in (0, 1] and
/// D(R) = 2^{-2R} for R >= 0. Throws Errc::domain_error.
double gaussian_rd(double distortion);
double gaussian_dr(double rate);

/// (n/2) log2(1/D) - log2(pi n) - 1/(6n), for D in (0, 1].
double shannon_lb_rate(std::uint64_t n, double distortion);

struct BoundReport {
  BoundParams params;
  double thm1_rhs = 0.0;
  double thm2_lower = 0.0;
  double log2_thm2_lower = 0.0;
  double c_n = 0.0;
  double log2_binom = 0.0;
  double exponent_bounded_k = 0.0;
  bool asymptotic_only = true;  // the converse is an asymptotic statement
};

BoundReport evaluate(const BoundParams& p);

}  // namespace srlab::bounds
