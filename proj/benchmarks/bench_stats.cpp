#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "absa/distribution.hpp"
#include "absa/stats.hpp"

namespace {

std::vector<double> tie_heavy(std::mt19937_64& engine, std::size_t size) {
  std::vector<double> out;
  out.reserve(size);
  for (std::size_t i = 0; i < size; ++i) {
    if ((engine() & 1u) != 0) {
      out.push_back(0.5 * static_cast<double>(engine() % 10));
    } else {
      out.push_back(static_cast<double>(engine() >> 11) * 0x1.0p-53 * 5.0);
    }
  }
  return out;
}

void bench_a_measure(benchmark::State& state) {
  std::mt19937_64 engine(42);
  const auto size = static_cast<std::size_t>(state.range(0));
  const absa::Distribution b(tie_heavy(engine, size));
  const absa::Distribution c(tie_heavy(engine, size));
  for (auto _ : state) {
    benchmark::DoNotOptimize(absa::a_measure(b, c).a_hat);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(bench_a_measure)->Arg(10)->Arg(100)->Arg(1000)->Arg(10000)->Complexity();

void bench_pearson(benchmark::State& state) {
  std::mt19937_64 engine(43);
  std::normal_distribution<double> noise(0.0, 1.0);
  const auto size = static_cast<std::size_t>(state.range(0));
  std::vector<double> x, y;
  for (std::size_t i = 0; i < size; ++i) {
    const double v = noise(engine);
    x.push_back(v);
    y.push_back(0.5 * v + noise(engine));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(absa::pearson_r(x, y));
  }
}
BENCHMARK(bench_pearson)->Arg(50)->Arg(500)->Arg(5000);

void bench_boxplot(benchmark::State& state) {
  std::mt19937_64 engine(44);
  const auto size = static_cast<std::size_t>(state.range(0));
  const absa::Distribution d(tie_heavy(engine, size));
  for (auto _ : state) {
    benchmark::DoNotOptimize(absa::boxplot_summary(d).median);
  }
}
BENCHMARK(bench_boxplot)->Arg(100)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
