#pragma once

// Numeric substrate: signals, inner products, seeded sampling and the
// summary statistics shared by every Monte Carlo estimator.

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>

namespace srlab {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// A real n-vector with n >= 1 and finite entries.
class Signal {
 public:
  /// Throws Errc::invalid_signal on an empty or non-finite vector.
  explicit Signal(Vector values);

  static Signal zeros(Index n);

  Index dim() const noexcept { return values_.size(); }
  const Vector& values() const noexcept { return values_; }
  double operator[](Index i) const { return values_[i]; }

  Signal scaled(double t) const;

 private:
  Vector values_;
};

/// 64-bit seed. Child streams are derived with a splitmix64 mix so that the
/// stream for trial t depends only on (seed, t).
struct Seed {
  std::uint64_t value = 0;

  Seed derive(std::uint64_t stream) const noexcept;

  friend bool operator==(Seed, Seed) = default;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

using Engine = std::mt19937_64;

Engine make_engine(Seed seed);

double norm_sq(const Signal& y) noexcept;

/// Throws Errc::dimension_mismatch.
double inner(const Signal& a, const Signal& b);

// Engine-driven samplers, used for bulk generation from a single stream.
Vector gaussian_vector(Index n, Engine& engine);
Vector sphere_vector(Index n, Engine& engine);
Vector ball_vector(Index n, Engine& engine);

/// Uniform over the closed unit ball: isotropic direction times U^{1/n}.
Signal sample_ball(Index n, Seed seed);
/// Uniform on the unit sphere surface.
Signal sample_sphere_surface(Index n, Seed seed);
/// I.i.d. standard normal entries.
Signal sample_gaussian(Index n, Seed seed);

enum class Sampler { ball, sphere, gaussian };

Signal sample(Sampler kind, Index n, Seed seed);

/// Pairwise (cascade) summation; the result depends only on the order of
/// `values`, never on how the work that produced them was scheduled.
double pairwise_sum(std::span<const double> values) noexcept;

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t count = 0;
};

/// Sample mean and standard error (unbiased variance). count < 2 gives
/// stderr 0.
MeanEstimate summarize(std::span<const double> values);

}  // namespace srlab
