#include <benchmark/benchmark.h>

#include <vector>

#include "absa/simulator.hpp"
#include "absa/toy_model.hpp"

namespace {

void bench_toy_run(benchmark::State& state) {
  const absa::ToyModelParams params;
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(absa::simulate_toy(params, seed++).x1);
  }
}
BENCHMARK(bench_toy_run);

void bench_toy_batch(benchmark::State& state) {
  const auto parallelism = static_cast<unsigned>(state.range(0));
  const auto sim = absa::make_simulator(absa::SimulatorSpec::toy());
  std::vector<absa::RunRequest> requests;
  for (std::uint64_t id = 1; id <= 100; ++id) {
    absa::RunRequest request;
    request.run_id = id;
    request.seed = id;
    request.parameters = {{"pi_ds", 0.75}, {"ec50", 1.0}, {"gamma", 2.0}};
    requests.push_back(std::move(request));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(absa::execute_batch(*sim, requests, parallelism));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * 100);
}
BENCHMARK(bench_toy_batch)->Arg(1)->Arg(4)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
