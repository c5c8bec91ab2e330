#include "srlab/core.hpp"

#include "srlab/error.hpp"

#include <cmath>
#include <utility>
#include <vector>

namespace srlab {

Signal::Signal(Vector values) : values_(std::move(values)) {
  if (values_.size() < 1) throw Error(Errc::invalid_signal, "signal dimension must be >= 1");
  if (!values_.allFinite()) throw Error(Errc::invalid_signal, "signal has non-finite entries");
}

Signal Signal::zeros(Index n) { return Signal(Vector::Zero(n)); }

Signal Signal::scaled(double t) const { return Signal(values_ * t); }

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Seed Seed::derive(std::uint64_t stream) const noexcept {
  return Seed{splitmix64(value ^ splitmix64(stream))};
}

Engine make_engine(Seed seed) {
  // Expand the 64-bit seed so nearby seeds do not give correlated states.
  std::seed_seq seq{static_cast<std::uint32_t>(seed.value), static_cast<std::uint32_t>(seed.value >> 32)};
  return Engine(seq);
}

double norm_sq(const Signal& y) noexcept { return y.values().squaredNorm(); }

double inner(const Signal& a, const Signal& b) {
  if (a.dim() != b.dim()) throw Error(Errc::dimension_mismatch, "inner product of different dimensions");
  return a.values().dot(b.values());
}

Vector gaussian_vector(Index n, Engine& engine) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = normal(engine);
  return v;
}

Vector sphere_vector(Index n, Engine& engine) {
  for (;;) {
    Vector v = gaussian_vector(n, engine);
    const double norm = v.norm();
    if (norm > 0.0) return v / norm;
  }
}

Vector ball_vector(Index n, Engine& engine) {
  Vector v = sphere_vector(n, engine);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double radius = std::pow(uniform(engine), 1.0 / static_cast<double>(n));
  return v * radius;
}

Signal sample_ball(Index n, Seed seed) {
  auto engine = make_engine(seed);
  return Signal(ball_vector(n, engine));
}

Signal sample_sphere_surface(Index n, Seed seed) {
  auto engine = make_engine(seed);
  return Signal(sphere_vector(n, engine));
}

Signal sample_gaussian(Index n, Seed seed) {
  auto engine = make_engine(seed);
  return Signal(gaussian_vector(n, engine));
}

Signal sample(Sampler kind, Index n, Seed seed) {
  switch (kind) {
    case Sampler::ball: return sample_ball(n, seed);
    case Sampler::sphere: return sample_sphere_surface(n, seed);
    case Sampler::gaussian: return sample_gaussian(n, seed);
  }
  throw Error(Errc::invalid_params, "unknown sampler");
}

double pairwise_sum(std::span<const double> values) noexcept {
  constexpr std::size_t kLeaf = 32;
  if (values.size() <= kLeaf) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

MeanEstimate summarize(std::span<const double> values) {
  MeanEstimate out;
  out.count = values.size();
  if (values.empty()) return out;
  const double n = static_cast<double>(values.size());
  out.mean = pairwise_sum(values) / n;
  if (values.size() < 2) return out;
  std::vector<double> dev(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double d = values[i] - out.mean;
    dev[i] = d * d;
  }
  const double var = pairwise_sum(dev) / (n - 1.0);
  out.std_error = std::sqrt(var / n);
  return out;
}

}  // namespace srlab
