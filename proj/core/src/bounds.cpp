#include "srlab/bounds.hpp"

#include "srlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace srlab::bounds {

void BoundParams::validate() const {
  if (k < 1) throw Error(Errc::invalid_params, "k must be >= 1");
  if (k >= n) throw Error(Errc::invalid_params, "k must be < n (k=" + std::to_string(k) + ", n=" + std::to_string(n) + ")");
  if (!std::isfinite(M) || M < static_cast<double>(k)) throw Error(Errc::invalid_params, "M must be finite and >= k");
}

BoundParams from_rate(std::uint64_t n, double rate, std::uint64_t k) {
  if (!(rate >= 0.0)) throw Error(Errc::invalid_params, "rate must be >= 0");
  BoundParams p{n, std::exp2(static_cast<double>(n) * rate), k};
  p.validate();
  return p;
}

double theorem1_rhs(const BoundParams& p) {
  p.validate();
  const double log2_value = -2.0 * static_cast<double>(p.k) * std::log2(p.M) / static_cast<double>(p.n);
  return std::exp2(log2_value);
}

double c_n(const BoundParams& p) {
  p.validate();
  const auto n = static_cast<double>(p.n);
  const auto k = static_cast<double>(p.k);
  return std::log2(n / (n - k)) + (k / (n - k)) * std::log2(n / k);
}

double log2_binom(double M, std::uint64_t k) {
  const auto kk = static_cast<double>(k);
  if (!std::isfinite(M) || !(M >= kk)) throw Error(Errc::invalid_params, "log2_binom needs k <= M");
  const double m = M;
  if (k == 0 || kk == m) return 0.0;
  if (k == 1) return std::log2(m);
  if (k == 2) return std::log2(m) + std::log2(m - 1.0) - 1.0;
  // log-gamma differences cancel badly when M is huge and k small, so short
  // products are summed term by term.
  const double j = std::min(kk, m - kk);
  if (j <= 4096.0) {
    double acc = 0.0;
    for (double i = 0.0; i < j; i += 1.0) acc += std::log2((m - i) / (i + 1.0));
    return acc;
  }
  const double nats = std::lgamma(m + 1.0) - std::lgamma(kk + 1.0) - std::lgamma(m - kk + 1.0);
  return nats / std::numbers::ln2;
}

double log2_theorem2_lower(const BoundParams& p) {
  p.validate();
  const auto n = static_cast<double>(p.n);
  const auto k = static_cast<double>(p.k);
  return -2.0 * log2_binom(p.M, p.k) / (n - k) + std::log2((n - k) / n) + (k / (n - k)) * std::log2(k / n);
}

double theorem2_lower(const BoundParams& p) { return std::exp2(log2_theorem2_lower(p)); }

double exponent_bounded_k(const BoundParams& p) {
  p.validate();
  return -2.0 * static_cast<double>(p.k) * std::log2(p.M) / static_cast<double>(p.n - p.k);
}

double gaussian_rd(double distortion) {
  if (!(distortion > 0.0 && distortion <= 1.0)) throw Error(Errc::domain_error, "R(D) needs D in (0, 1]");
  return 0.5 * std::log2(1.0 / distortion);
}

double gaussian_dr(double rate) {
  if (!(rate >= 0.0) || !std::isfinite(rate)) throw Error(Errc::domain_error, "D(R) needs finite R >= 0");
  return std::exp2(-2.0 * rate);
}

double shannon_lb_rate(std::uint64_t n, double distortion) {
  if (n < 1) throw Error(Errc::invalid_params, "n must be >= 1");
  if (!(distortion > 0.0 && distortion <= 1.0)) throw Error(Errc::domain_error, "Shannon bound needs D in (0, 1]");
  const auto nn = static_cast<double>(n);
  return 0.5 * nn * std::log2(1.0 / distortion) - std::log2(std::numbers::pi * nn) - 1.0 / (6.0 * nn);
}

BoundReport evaluate(const BoundParams& p) {
  p.validate();
  BoundReport r;
  r.params = p;
  r.thm1_rhs = theorem1_rhs(p);
  r.log2_thm2_lower = log2_theorem2_lower(p);
  r.thm2_lower = std::exp2(r.log2_thm2_lower);
  r.c_n = c_n(p);
  r.log2_binom = log2_binom(p.M, p.k);
  r.exponent_bounded_k = exponent_bounded_k(p);
  return r;
}

}  // namespace srlab::bounds
