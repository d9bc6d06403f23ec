#include <benchmark/benchmark.h>

#include <vector>

#include "absa/lhs.hpp"
#include "absa/robustness.hpp"

namespace {

void bench_design_plain(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(absa::design(3, n, seed++, absa::LhsCriterion::none, 1));
  }
}
BENCHMARK(bench_design_plain)->Arg(50)->Arg(500);

void bench_design_maximin(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(absa::design(3, n, seed++, absa::LhsCriterion::maximin, 5));
  }
}
BENCHMARK(bench_design_maximin)->Arg(50)->Arg(500);

void bench_min_pairwise_distance(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto d = absa::design(3, n, 7, absa::LhsCriterion::none, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(absa::min_pairwise_distance(d));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(bench_min_pairwise_distance)->Arg(50)->Arg(500)->Arg(2000)->Complexity();

void bench_scale_design(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto d = absa::design(3, n, 7, absa::LhsCriterion::none, 1);
  std::vector<absa::ParameterSpec> params(3);
  for (std::size_t i = 0; i < params.size(); ++i) {
    params[i].name = "p" + std::to_string(i);
    params[i].min = 0.0;
    params[i].max = 10.0;
    params[i].calibrated = 5.0;
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(absa::scale_design(d, params));
  }
}
BENCHMARK(bench_scale_design)->Arg(50)->Arg(500);

}  // namespace

BENCHMARK_MAIN();
