#include "srlab/approx.hpp"
#include "srlab/bounds.hpp"
#include "srlab/dict.hpp"
#include "srlab/quantizer.hpp"
#include "srlab/refine.hpp"

#include <benchmark/benchmark.h>

using namespace srlab;

namespace {

void BM_BestSingleton(benchmark::State& state) {
  const auto n = static_cast<Index>(state.range(0));
  const auto M = static_cast<std::uint64_t>(state.range(1));
  const auto dict = random_dictionary(n, M, Seed{1});
  const auto y = sample_ball(n, Seed{2});
  for (auto _ : state) benchmark::DoNotOptimize(best_singleton(y, dict));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(M));
}
BENCHMARK(BM_BestSingleton)->Args({32, 256})->Args({128, 4096})->Args({128, 65536});

void BM_Greedy(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const auto dict = random_dictionary(64, 4096, Seed{1});
  const auto y = sample_ball(64, Seed{2});
  for (auto _ : state) benchmark::DoNotOptimize(successive_represent(y, dict, k));
}
BENCHMARK(BM_Greedy)->Arg(1)->Arg(4)->Arg(16);

void BM_Omp(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const auto dict = random_dictionary(64, 4096, Seed{1});
  const auto y = sample_ball(64, Seed{2});
  for (auto _ : state) benchmark::DoNotOptimize(omp_represent(y, dict, k));
}
BENCHMARK(BM_Omp)->Arg(1)->Arg(4)->Arg(16);

void BM_Exhaustive(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const auto M = static_cast<std::uint64_t>(state.range(1));
  const auto dict = random_dictionary(32, M, Seed{1});
  const auto y = sample_ball(32, Seed{2});
  for (auto _ : state) benchmark::DoNotOptimize(exhaustive_best_k(y, dict, k));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(SupportSearch::support_count(M, k)));
}
BENCHMARK(BM_Exhaustive)->Args({2, 256})->Args({3, 64})->Unit(benchmark::kMillisecond);

void BM_SuccessiveTraces(benchmark::State& state) {
  const auto dict = random_dictionary(64, 256, Seed{1});
  Matrix ys(64, 256);
  for (Index t = 0; t < ys.cols(); ++t) ys.col(t) = sample_sphere_surface(64, Seed{3}.derive(t)).values();
  for (auto _ : state) benchmark::DoNotOptimize(successive_traces(ys, dict, 6));
  state.SetItemsProcessed(state.iterations() * ys.cols());
}
BENCHMARK(BM_SuccessiveTraces)->Unit(benchmark::kMillisecond);

void BM_RefineEncode(benchmark::State& state) {
  const auto dict = random_dictionary(128, 65536, Seed{1});
  const auto u = sample_gaussian(128, Seed{2});
  const refine::CodecOptions options{};
  for (auto _ : state) benchmark::DoNotOptimize(refine::encode(u, dict, 5, options));
}
BENCHMARK(BM_RefineEncode)->Unit(benchmark::kMillisecond);

void BM_ScalarQuantize(benchmark::State& state) {
  const auto dict = random_dictionary(16, 64, Seed{1});
  const auto y = sample_ball(16, Seed{2});
  const auto o = ortho_decompose(y, omp_represent(y, dict, 4).rep, dict);
  for (auto _ : state) benchmark::DoNotOptimize(scalar_quantize(o, 16));
}
BENCHMARK(BM_ScalarQuantize);

void BM_Bounds(benchmark::State& state) {
  const auto p = bounds::from_rate(512, 0.25, 4);
  for (auto _ : state) benchmark::DoNotOptimize(bounds::evaluate(p));
}
BENCHMARK(BM_Bounds);

}  // namespace

BENCHMARK_MAIN();
