#include "srlab/approx.hpp"

#include "srlab/error.hpp"
#include "srlab/parallel.hpp"

#include <algorithm>
#include <optional>

namespace srlab {

namespace {

// Trials are processed in fixed blocks so the arithmetic (including the
// blocked matrix products of the greedy path) is the same for any worker
// count.
constexpr std::size_t kBlock = 64;

}  // namespace

std::vector<double> sample_distortions(const Dictionary& dict, std::size_t k, std::size_t trials, Method method,
                                       Sampler sampler, Seed seed, unsigned threads, std::uint64_t budget) {
  std::vector<double> values(trials);
  if (trials == 0) return values;

  std::optional<SupportSearch> search;
  if (method == Method::exhaustive && k >= 2) search.emplace(dict, budget);
  if (method == Method::exhaustive && k >= 1 &&
      SupportSearch::support_count(static_cast<std::uint64_t>(dict.size()), k) > budget) {
    throw Error(Errc::budget_exceeded, "exhaustive search over this dictionary exceeds the support budget");
  }

  const std::size_t blocks = (trials + kBlock - 1) / kBlock;
  const Index n = dict.dim();
  parallel_for(blocks, threads, [&](std::size_t block) {
    const std::size_t begin = block * kBlock;
    const std::size_t end = std::min(trials, begin + kBlock);
    Matrix signals(n, static_cast<Index>(end - begin));
    for (std::size_t t = begin; t < end; ++t) {
      signals.col(static_cast<Index>(t - begin)) = sample(sampler, n, seed.derive(t)).values();
    }

    // k = 0 and exhaustive k = 1 coincide with the greedy path.
    const bool greedy_path = k == 0 || method == Method::greedy || k == 1;
    if (greedy_path) {
      const auto traces = successive_traces(signals, dict, k);
      for (std::size_t t = begin; t < end; ++t) values[t] = traces[t - begin].energies.back();
      return;
    }
    for (std::size_t t = begin; t < end; ++t) {
      const Signal y(signals.col(static_cast<Index>(t - begin)));
      values[t] = method == Method::omp ? omp_represent(y, dict, k).rep.residual_sq : search->solve(y, k).residual_sq;
    }
  });
  return values;
}

WorstCaseEstimate estimate_worst_case(const Dictionary& dict, std::size_t k, std::size_t trials, Method method,
                                      Seed seed, unsigned threads) {
  if (trials < 1) throw Error(Errc::invalid_params, "worst-case estimate needs trials >= 1");
  const auto values = sample_distortions(dict, k, trials, method, Sampler::sphere, seed, threads);
  WorstCaseEstimate out;
  const auto it = std::max_element(values.begin(), values.end());
  out.value = *it;
  out.argmax_trial = static_cast<std::size_t>(it - values.begin());
  out.trials = trials;
  out.seed = seed;
  out.method = method;
  return out;
}

AverageEstimate estimate_average(const Dictionary& dict, std::size_t k, std::size_t trials, Method method, Seed seed,
                                 unsigned threads) {
  if (trials < 2) throw Error(Errc::invalid_params, "average estimate needs trials >= 2");
  const auto values = sample_distortions(dict, k, trials, method, Sampler::ball, seed, threads);
  const auto summary = summarize(values);
  return {summary.mean, summary.std_error, trials, seed, method};
}

}  // namespace srlab
