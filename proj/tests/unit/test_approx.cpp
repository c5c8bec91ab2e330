#include <doctest.h>

#include "srlab/approx.hpp"
#include "srlab/error.hpp"

#include "../support/oracles.hpp"

#include <cmath>
#include <numbers>

using namespace srlab;
namespace oracle = srlab::testing;

namespace {

Signal vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return Signal(v);
}

// {(1,0), (sqrt2/2, sqrt2/2)}
Dictionary two_atoms() {
  Matrix atoms(2, 2);
  const double h = std::numbers::sqrt2 / 2.0;
  atoms << 1.0, h, 0.0, h;
  return Dictionary(atoms);
}

bool close_rel(double a, double b, double rel, double abs = 1e-300) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b)) + abs;
}

}  // namespace

TEST_CASE("best_singleton on orthonormal axes") {
  const auto rep = best_singleton(vec2(0.6, 0.8), orthonormal_dictionary(2));
  REQUIRE(rep.indices.size() == 1);
  CHECK(rep.indices[0] == 1);
  CHECK(rep.coeffs[0] == doctest::Approx(0.8));
  CHECK(rep.residual_sq == doctest::Approx(0.36));
}

TEST_CASE("best_singleton exact match") {
  const auto d = random_dictionary(6, 20, Seed{4});
  for (Index m = 0; m < d.size(); ++m) {
    const auto rep = best_singleton(Signal(d.atom(m)), d);
    CHECK(rep.residual_sq <= 1e-28);
    CHECK(rep.indices[0] == m);
  }
}

TEST_CASE("best_singleton matches a brute-force scan") {
  const auto d = random_dictionary(8, 32, Seed{7});
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto y = sample_gaussian(8, Seed{7}.derive(s));
    const auto rep = best_singleton(y, d);
    const auto scan = oracle::scan_singletons(d.atoms(), y.values());
    CHECK(rep.indices[0] == scan.support[0]);
    CHECK(close_rel(rep.residual_sq, scan.value, 1e-12));
    CHECK(close_rel(rep.residual_sq, (y.values() - rep.recon).squaredNorm(), 1e-9));
  }
}

TEST_CASE("successive_represent two-atom example") {
  const auto d = two_atoms();
  const auto out = successive_represent(vec2(0.0, 1.0), d, 2);
  REQUIRE(out.rep.indices.size() == 2);
  CHECK(out.rep.indices[0] == 1);
  CHECK(out.rep.coeffs[0] == doctest::Approx(std::numbers::sqrt2 / 2.0).epsilon(1e-14));
  CHECK(out.trace.energies[1] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(out.rep.indices[1] == 0);
  CHECK(out.rep.coeffs[1] == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(out.trace.energies[2] == doctest::Approx(0.25).epsilon(1e-14));
  // Stage 1 is the global k = 1 optimum.
  const auto stage1 = oracle::enumerate_best_support(d.atoms(), vec2(0.0, 1.0).values(), 1);
  CHECK(stage1.support[0] == out.rep.indices[0]);
  CHECK(stage1.value == doctest::Approx(out.trace.energies[1]));
  // Stage 2 represents z_1 = (-1/2, 1/2) by its own best singleton.
  const auto stage2 = oracle::enumerate_best_support(d.atoms(), vec2(-0.5, 0.5).values(), 1);
  CHECK(stage2.support[0] == out.rep.indices[1]);
  CHECK(stage2.value == doctest::Approx(out.trace.energies[2]));
}

TEST_CASE("successive_represent is exact on a complete orthonormal basis") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto y = sample_gaussian(6, Seed{s});
    const auto out = successive_represent(y, orthonormal_dictionary(6), 6);
    CHECK(out.rep.residual_sq <= 1e-28);
  }
}

TEST_CASE("successive_represent k = 1 equals best_singleton") {
  const auto d = random_dictionary(10, 40, Seed{2});
  const auto y = sample_ball(10, Seed{9});
  const auto a = successive_represent(y, d, 1).rep;
  const auto b = best_singleton(y, d);
  CHECK(a.indices == b.indices);
  CHECK(a.coeffs == b.coeffs);
  CHECK(a.residual_sq == b.residual_sq);
}

TEST_CASE("greedy may reselect an atom; zero residual pads with index 0") {
  const auto d = two_atoms();
  const auto out = successive_represent(vec2(0.0, 1.0), d, 8);
  CHECK(out.trace.nonincreasing());
  CHECK(out.rep.indices.size() == 8);
  const auto exact = successive_represent(vec2(1.0, 0.0), d, 3);
  CHECK(exact.rep.indices == std::vector<Index>{0, 0, 0});
  CHECK(exact.rep.coeffs[1] == 0.0);
  CHECK(exact.rep.coeffs[2] == 0.0);
}

TEST_CASE("omp two-atom example spans the plane") {
  const auto out = omp_represent(vec2(0.0, 1.0), two_atoms(), 2);
  CHECK(out.rep.residual_sq <= 1e-28);
  // Least squares by hand: x1 (1,0) + x2 (h,h) = (0,1) -> x2 = sqrt2, x1 = -1.
  CHECK(out.rep.indices == std::vector<Index>{1, 0});
  CHECK(out.rep.coeffs[0] == doctest::Approx(std::numbers::sqrt2).epsilon(1e-12));
  CHECK(out.rep.coeffs[1] == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("omp equals greedy on an orthonormal dictionary") {
  const auto d = orthonormal_dictionary(7);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto y = sample_gaussian(7, Seed{s});
    const auto a = successive_represent(y, d, 4).rep;
    const auto b = omp_represent(y, d, 4).rep;
    CHECK(a.indices == b.indices);
    for (std::size_t i = 0; i < a.coeffs.size(); ++i) CHECK(a.coeffs[i] == doctest::Approx(b.coeffs[i]).epsilon(1e-14));
    CHECK(close_rel(a.residual_sq, b.residual_sq, 1e-12));
  }
}

TEST_CASE("omp refit beats greedy on the same support") {
  const auto d = random_dictionary(8, 32, Seed{11});
  int compared = 0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    const auto y = sample_gaussian(8, Seed{11}.derive(s));
    const auto g = successive_represent(y, d, 2).rep;
    const auto o = omp_represent(y, d, 2).rep;
    auto gs = g.indices, os = o.indices;
    std::sort(gs.begin(), gs.end());
    std::sort(os.begin(), os.end());
    if (gs != os) continue;
    ++compared;
    CHECK(o.residual_sq <= g.residual_sq * (1.0 + 1e-9));
    // And it equals the least-squares fit on that support.
    CHECK(close_rel(o.residual_sq, oracle::svd_residual(d.atoms(), o.indices, y.values()), 1e-9));
  }
  CHECK(compared > 20);
}

TEST_CASE("omp skips dependent candidates") {
  // phi(0) and phi(2) are the same direction; after phi(0) is chosen, phi(2)
  // must not be selected.
  Matrix atoms(3, 3);
  atoms << 1, 0, 1, 0, 1, 0, 0, 0, 0;
  const Dictionary d(atoms);
  Vector y(3);
  y << 2.0, 1.0, 0.5;
  const auto out = omp_represent(Signal(y), d, 3);
  CHECK(out.rep.indices[0] == 0);
  CHECK(out.rep.indices[1] == 1);
  CHECK(out.rep.coeffs[2] == 0.0);
  CHECK(out.rep.residual_sq == doctest::Approx(0.25));
  CHECK(out.trace.nonincreasing());
}

TEST_CASE("exhaustive_best_k small cases") {
  const auto d = two_atoms();
  CHECK(exhaustive_best_k(vec2(0.3, -2.0), d, 2).residual_sq <= 1e-28);
  const auto rd = random_dictionary(5, 12, Seed{8});
  const auto y = sample_ball(5, Seed{8});
  const auto a = exhaustive_best_k(y, rd, 1);
  const auto b = best_singleton(y, rd);
  CHECK(a.indices == b.indices);
  CHECK(a.residual_sq == b.residual_sq);
}

TEST_CASE("exhaustive_best_k matches independent enumeration over 120 supports") {
  const auto d = random_dictionary(6, 16, Seed{3});
  const auto y = sample_gaussian(6, Seed{3});
  const auto rep = exhaustive_best_k(y, d, 2);
  const auto best = oracle::enumerate_best_support(d.atoms(), y.values(), 2);
  CHECK(rep.indices == best.support);
  CHECK(close_rel(rep.residual_sq, best.value, 1e-9));
}

TEST_CASE("exhaustive oracle equivalence on random small instances") {
  for (std::uint64_t s = 0; s < 60; ++s) {
    const Index n = 2 + static_cast<Index>(s % 7);
    const Index M = 3 + static_cast<Index>((s * 7) % 30);
    const std::size_t k = 1 + s % 2;
    const Dictionary d(oracle::random_unit_atoms(n, M, s), AtomNorm::any);
    const Vector y = oracle::random_vector(n, s);
    const auto rep = exhaustive_best_k(Signal(y), d, k);
    const auto best = oracle::enumerate_best_support(d.atoms(), y, k);
    CHECK(rep.indices == best.support);
    CHECK(close_rel(rep.residual_sq, best.value, 1e-9, 1e-15));
  }
}

TEST_CASE("exhaustive k = 3 and rank-deficient supports") {
  // k = 3 in R^2: every support is dependent; the pseudo-solve still reaches 0.
  const auto d = random_dictionary(2, 5, Seed{1});
  const auto y = sample_gaussian(2, Seed{1});
  CHECK(exhaustive_best_k(y, d, 3).residual_sq <= 1e-24);

  const auto rd = random_dictionary(6, 10, Seed{2});
  const auto y6 = sample_gaussian(6, Seed{6});
  const auto rep = exhaustive_best_k(y6, rd, 3);
  const auto best = oracle::enumerate_best_support(rd.atoms(), y6.values(), 3);
  CHECK(rep.indices == best.support);
  CHECK(close_rel(rep.residual_sq, best.value, 1e-9));
}

TEST_CASE("exhaustive budget and errors") {
  const auto d = random_dictionary(8, 64, Seed{1});
  const auto y = sample_ball(8, Seed{2});
  try {
    (void)exhaustive_best_k(y, d, 3, 1000);
    FAIL("expected budget error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::budget_exceeded);
  }
  CHECK(SupportSearch::support_count(64, 3) == 41664);
  CHECK(SupportSearch::support_count(4, 5) == 0);
  CHECK(SupportSearch::support_count(1ULL << 40, 5) == UINT64_MAX);
  CHECK_THROWS_AS((void)exhaustive_best_k(sample_ball(3, Seed{1}), d, 2), Error);
  CHECK_THROWS_AS((void)successive_represent(y, d, 0), Error);
}

TEST_CASE("distortion dispatch") {
  const auto d = random_dictionary(6, 24, Seed{5});
  // y in the span of atoms 3 and 17.
  const Signal in_span(0.4 * d.atom(3) - 1.3 * d.atom(17));
  CHECK(distortion(in_span, d, 2, Method::exhaustive) <= 1e-26);
  for (std::uint64_t s = 0; s < 30; ++s) {
    const auto y = sample_ball(6, Seed{5}.derive(s));
    const double ex = distortion(y, d, 2, Method::exhaustive);
    CHECK(distortion(y, d, 2, Method::greedy) >= ex * (1.0 - 1e-9));
    CHECK(distortion(y, d, 2, Method::omp) >= ex * (1.0 - 1e-9));
  }
  const auto y = sample_ball(6, Seed{77});
  CHECK(distortion(y, d, 0, Method::greedy) == norm_sq(y));
}

TEST_CASE("homogeneity d_k(t y) = t^2 d_k(y)") {
  const auto d = random_dictionary(8, 32, Seed{12});
  for (auto method : {Method::greedy, Method::omp, Method::exhaustive}) {
    for (std::uint64_t s = 0; s < 20; ++s) {
      const auto y = sample_gaussian(8, Seed{12}.derive(s));
      const double base = distortion(y, d, 2, method);
      CHECK(close_rel(distortion(y.scaled(2.5), d, 2, method), 6.25 * base, 1e-9));
    }
  }
}

TEST_CASE("invariants: monotone traces, orthogonality, Pythagoras, stage-1 agreement") {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto d = random_dictionary(10, 40, Seed{s});
    const auto y = sample_gaussian(10, Seed{s + 1000});
    const auto g = successive_represent(y, d, 5);
    const auto o = omp_represent(y, d, 5);
    CHECK(g.trace.nonincreasing());
    CHECK(o.trace.nonincreasing());
    const Vector z = y.values() - o.rep.recon;
    for (Index m : o.rep.indices) CHECK(std::abs(d.atom(m).dot(z)) <= 1e-9 * y.values().norm());
    CHECK(close_rel(norm_sq(y), o.rep.recon.squaredNorm() + o.rep.residual_sq, 1e-9));
    const auto e = exhaustive_best_k(y, d, 2);
    CHECK(close_rel(norm_sq(y), e.recon.squaredNorm() + e.residual_sq, 1e-9));

    const auto g1 = successive_represent(y, d, 1).rep;
    const auto o1 = omp_represent(y, d, 1).rep;
    const auto e1 = exhaustive_best_k(y, d, 1);
    CHECK(g1.indices == o1.indices);
    CHECK(g1.indices == e1.indices);
    CHECK(g1.residual_sq == o1.residual_sq);
    CHECK(g1.residual_sq == e1.residual_sq);
  }
}

TEST_CASE("blocked greedy traces agree with the single-signal path") {
  const auto d = random_dictionary(12, 100, Seed{3});
  Matrix block(12, 9);
  for (Index b = 0; b < 9; ++b) block.col(b) = sample_ball(12, Seed{3}.derive(b)).values();
  const auto traces = successive_traces(block, d, 4);
  for (Index b = 0; b < 9; ++b) {
    const auto single = successive_represent(Signal(block.col(b)), d, 4).trace;
    for (std::size_t j = 0; j < 5; ++j) CHECK(close_rel(traces[b].energies[j], single.energies[j], 1e-12));
  }
}

TEST_CASE("estimate_worst_case") {
  CHECK(estimate_worst_case(orthonormal_dictionary(4), 4, 50, Method::greedy, Seed{1}).value <= 1e-28);

  // C = {e_1} in R^2: d_1(y) = 1 - y_1^2, supremum 1 at y = e_2.
  const Dictionary e1(Matrix::Identity(2, 1));
  const auto est = estimate_worst_case(e1, 1, 4000, Method::greedy, Seed{3});
  CHECK(est.lower_estimate);
  CHECK(est.value <= 1.0);
  CHECK(est.value > 0.9999);
  CHECK(est.trials == 4000);

  const auto d = random_dictionary(5, 20, Seed{2});
  double previous = 0.0;
  for (std::size_t trials : {10, 50, 200, 800}) {
    const double v = estimate_worst_case(d, 1, trials, Method::greedy, Seed{9}).value;
    CHECK(v >= previous);
    previous = v;
  }
}

TEST_CASE("estimate_average") {
  const auto full = estimate_average(orthonormal_dictionary(5), 5, 100, Method::omp, Seed{1});
  CHECK(full.mean <= 1e-28);

  // k = 0: E||Y||^2 = n/(n+2).
  const auto d = random_dictionary(6, 30, Seed{4});
  const auto zero = estimate_average(d, 0, 20000, Method::greedy, Seed{5});
  CHECK(std::abs(zero.mean - 6.0 / 8.0) <= 3.0 * zero.std_error);

  // Doubling trials shrinks the standard error by about sqrt(2).
  double ratio_sum = 0.0;
  for (std::uint64_t r = 0; r < 6; ++r) {
    const auto small = estimate_average(d, 1, 2000, Method::greedy, Seed{100 + r});
    const auto large = estimate_average(d, 1, 4000, Method::greedy, Seed{200 + r});
    ratio_sum += small.std_error / large.std_error;
  }
  CHECK(ratio_sum / 6.0 == doctest::Approx(std::numbers::sqrt2).epsilon(0.1));
  CHECK_THROWS_AS((void)estimate_average(d, 1, 1, Method::greedy, Seed{1}), Error);
}

TEST_CASE("estimators do not depend on the worker count") {
  const auto d = random_dictionary(8, 40, Seed{6});
  for (auto method : {Method::greedy, Method::omp, Method::exhaustive}) {
    const auto a = sample_distortions(d, 2, 300, method, Sampler::ball, Seed{8}, 1);
    const auto b = sample_distortions(d, 2, 300, method, Sampler::ball, Seed{8}, 4);
    CHECK(a == b);
  }
}

TEST_CASE("export_linear_system") {
  const auto d = random_dictionary(3, 4, Seed{1});
  const auto y = sample_ball(3, Seed{2});
  SparseRep rep;
  rep.indices = {2};
  rep.coeffs = {0.5};
  const auto view = export_linear_system(y, d, rep);
  Vector expected = Vector::Zero(4);
  expected[2] = 0.5;
  CHECK(view.x == expected);
  CHECK(view.nonzeros() == 1);
  CHECK((y.values() - view.phi * view.x - view.z).norm() <= 1e-12);

  rep.indices = {7};
  try {
    (void)export_linear_system(y, d, rep);
    FAIL("expected index error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::index_out_of_range);
  }
}

TEST_CASE("export_linear_system collapses repeated greedy atoms") {
  const auto d = two_atoms();
  const auto y = vec2(0.0, 1.0);
  const auto out = successive_represent(y, d, 3);
  REQUIRE(out.rep.indices[0] == 1);
  REQUIRE(out.rep.indices[2] == 1);
  const auto view = export_linear_system(y, d, out.rep);
  CHECK(view.x[1] == doctest::Approx(out.rep.coeffs[0] + out.rep.coeffs[2]).epsilon(1e-15));
  CHECK(view.nonzeros() <= 2);
  CHECK((view.phi * view.x - out.rep.recon).norm() <= 1e-12);
  CHECK(view.z.squaredNorm() == doctest::Approx(out.rep.residual_sq).epsilon(1e-9));
}
