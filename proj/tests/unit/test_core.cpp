#include <doctest.h>

#include "srlab/core.hpp"
#include "srlab/error.hpp"
#include "srlab/parallel.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

using namespace srlab;

namespace {

Signal make(std::initializer_list<double> values) {
  Vector v(static_cast<Index>(values.size()));
  Index i = 0;
  for (double x : values) v[i++] = x;
  return Signal(v);
}

}  // namespace

TEST_CASE("signal invariants") {
  CHECK_THROWS_AS(Signal{Vector(0)}, Error);
  Vector bad = Vector::Zero(3);
  bad[1] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(Signal{bad}, Error);
  CHECK(Signal::zeros(4).dim() == 4);
}

TEST_CASE("norm_sq") {
  CHECK(norm_sq(make({3, 4})) == 25.0);
  CHECK(norm_sq(Signal::zeros(7)) == 0.0);
  CHECK(norm_sq(make({1, 1, 1, 1})) == 4.0);
}

TEST_CASE("inner") {
  CHECK(inner(make({1, 0}), make({0, 1})) == 0.0);
  CHECK(inner(make({1, 2}), make({3, 4})) == 11.0);
  const auto a = sample_gaussian(9, Seed{5});
  CHECK(inner(a, a) == doctest::Approx(norm_sq(a)).epsilon(1e-15));
  try {
    (void)inner(make({1, 2}), make({1, 2, 3}));
    FAIL("expected dimension mismatch");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::dimension_mismatch);
  }
}

TEST_CASE("inner is symmetric and bilinear") {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto a = sample_gaussian(12, Seed{s});
    const auto b = sample_gaussian(12, Seed{s + 1000});
    const auto c = sample_gaussian(12, Seed{s + 2000});
    const double alpha = 1.7, beta = -0.3;
    CHECK(inner(a, b) == doctest::Approx(inner(b, a)).epsilon(1e-12));
    const Signal mix(alpha * a.values() + beta * b.values());
    const double lhs = inner(mix, c);
    const double rhs = alpha * inner(a, c) + beta * inner(b, c);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * (std::abs(alpha * inner(a, c)) + std::abs(beta * inner(b, c)) + 1.0));
  }
}

TEST_CASE("sample_ball stays in the unit ball and is deterministic") {
  for (std::uint64_t s = 0; s < 200; ++s) CHECK(sample_ball(3, Seed{s}).values().norm() <= 1.0 + 1e-12);
  CHECK(sample_ball(5, Seed{11}).values() == sample_ball(5, Seed{11}).values());
  CHECK(sample_ball(5, Seed{11}).values() != sample_ball(5, Seed{12}).values());
}

TEST_CASE("sample_ball second moment is n/(n+2)") {
  // E||Y||^2 = n/(n+2) for the uniform ball: 4/6 at n = 4.
  std::vector<double> values(100000);
  for (std::size_t t = 0; t < values.size(); ++t) values[t] = norm_sq(sample_ball(4, Seed{7}.derive(t)));
  CHECK(summarize(values).mean == doctest::Approx(4.0 / 6.0).epsilon(0.01 / (4.0 / 6.0)));
}

TEST_CASE("sample_sphere_surface") {
  for (std::uint64_t s = 0; s < 200; ++s) CHECK(std::abs(sample_sphere_surface(6, Seed{s}).values().norm() - 1.0) <= 1e-12);
  const auto p = sample_sphere_surface(2, Seed{3});
  CHECK(p.values().squaredNorm() == doctest::Approx(1.0));
  CHECK(sample_sphere_surface(4, Seed{8}).values() == sample_sphere_surface(4, Seed{8}).values());

  Vector mean = Vector::Zero(3);
  const int trials = 100000;
  for (int t = 0; t < trials; ++t) mean += sample_sphere_surface(3, Seed{21}.derive(t)).values();
  mean /= trials;
  CHECK(mean.cwiseAbs().maxCoeff() < 0.02);
}

TEST_CASE("sample_gaussian moments") {
  std::vector<double> per_dim(10000);
  for (std::size_t t = 0; t < per_dim.size(); ++t) per_dim[t] = norm_sq(sample_gaussian(100, Seed{1}.derive(t))) / 100.0;
  CHECK(std::abs(summarize(per_dim).mean - 1.0) < 0.02);

  std::vector<double> draws(100000);
  for (std::size_t t = 0; t < draws.size(); ++t) draws[t] = sample_gaussian(1, Seed{2}.derive(t))[0];
  const double mean = summarize(draws).mean;
  double var = 0.0;
  for (double d : draws) var += (d - mean) * (d - mean);
  var /= static_cast<double>(draws.size() - 1);
  CHECK(std::abs(var - 1.0) < 0.02);
  CHECK(sample_gaussian(10, Seed{4}).values() == sample_gaussian(10, Seed{4}).values());
}

TEST_CASE("seed derivation") {
  const Seed s{42};
  CHECK(s.derive(3) == s.derive(3));
  CHECK(!(s.derive(3) == s.derive(4)));
  CHECK(!(Seed{42}.derive(0) == Seed{43}.derive(0)));
}

TEST_CASE("pairwise sum and summary") {
  std::vector<double> v(1000);
  std::iota(v.begin(), v.end(), 1.0);
  CHECK(pairwise_sum(v) == 500500.0);
  const auto s = summarize(v);
  CHECK(s.mean == 500.5);
  CHECK(s.count == 1000);
  CHECK(s.std_error == doctest::Approx(std::sqrt((1000.0 * 1001.0 / 12.0) / 1000.0)).epsilon(1e-3));
  CHECK(summarize(std::vector<double>{3.0}).std_error == 0.0);
}

TEST_CASE("parallel_for covers every index and propagates errors") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
  CHECK_THROWS_AS(parallel_for(100, 3, [](std::size_t i) {
                    if (i == 37) throw Error(Errc::invalid_params, "boom");
                  }),
                  Error);
}
