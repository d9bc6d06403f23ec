#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "absa/consistency.hpp"
#include "absa/errors.hpp"
#include "absa/simulator.hpp"
#include "support/reference.hpp"
#include "support/stub_sims.hpp"
#include "support/subprocess.hpp"

using absa::analyze_group;
using absa::build_groups;
using absa::ConsistencyConfig;
using absa::ConsistencyResult;
using absa::ConsistencyRunOptions;
using absa::Distribution;
using absa::DistributionGroup;
using absa::find_n_star;
using absa::GroupAnalysis;
using absa::plan_runs;
using absa::run_consistency;
using absa::RunRecord;
using absa::RunRequest;

namespace {

ConsistencyConfig config_with(std::vector<std::size_t> sizes, std::size_t k,
                              std::vector<std::string> outputs) {
  ConsistencyConfig config;
  config.sizes = std::move(sizes);
  config.group_count = k;
  config.outputs = std::move(outputs);
  return config;
}

std::vector<RunRecord> counted_records(std::size_t count, std::vector<std::string> outputs) {
  std::vector<RunRecord> records;
  for (std::size_t i = 1; i <= count; ++i) {
    RunRequest req;
    req.run_id = i;
    req.seed = i;
    std::map<std::string, double> outs;
    for (const auto& o : outputs) outs[o] = static_cast<double>(i);
    records.push_back(RunRecord::success(req, outs));
  }
  return records;
}

// A ladder result with chosen per-size maxima, built directly so n* location
// logic can be tested in isolation.
ConsistencyResult ladder_result(const std::vector<std::size_t>& sizes,
                                const std::map<std::string, std::vector<double>>& maxima) {
  ConsistencyResult result;
  result.sizes = sizes;
  for (const auto& [output, levels] : maxima) {
    result.outputs.push_back(output);
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      GroupAnalysis g;
      g.size = sizes[i];
      g.output = output;
      g.max_scaled_a = levels.at(i);
      result.groups.push_back(std::move(g));
    }
  }
  return result;
}

}  // namespace

TEST_CASE("plan_runs multiplies group count into the ladder total") {
  ConsistencyConfig defaults;
  defaults.outputs = {"X1", "X2"};
  CHECK(plan_runs(defaults) == 9120);
  CHECK(plan_runs(config_with({1}, 20, {"Y"})) == 20);
  CHECK(plan_runs(config_with({2, 3}, 5, {"Y"})) == 25);
}

TEST_CASE("consistency config validation") {
  CHECK_THROWS_AS(plan_runs(config_with({}, 20, {"Y"})), absa::InvalidSpec);
  CHECK_THROWS_AS(plan_runs(config_with({5, 5}, 20, {"Y"})), absa::InvalidSpec);
  CHECK_THROWS_AS(plan_runs(config_with({5, 1}, 20, {"Y"})), absa::InvalidSpec);
  CHECK_THROWS_AS(plan_runs(config_with({1, 5}, 1, {"Y"})), absa::InvalidSpec);
  CHECK_THROWS_AS(plan_runs(config_with({1, 5}, 20, {})), absa::InvalidSpec);
  auto config = config_with({1, 5}, 20, {"Y"});
  config.threshold = 0.5;
  CHECK_THROWS_AS(config.validate(), absa::InvalidSpec);
  config.threshold = 1.01;
  CHECK_THROWS_AS(config.validate(), absa::InvalidSpec);
  config.threshold = 1.0;
  CHECK_NOTHROW(config.validate());
}

TEST_CASE("build_groups partitions records size-major in run order") {
  const auto config = config_with({1, 3}, 4, {"Y"});
  const auto groups = build_groups(counted_records(16, {"Y"}), config);
  const auto& ladder = groups.at("Y");
  REQUIRE(ladder.size() == 2);

  REQUIRE(ladder[0].size == 1);
  REQUIRE(ladder[0].distributions.size() == 4);
  for (std::size_t k = 0; k < 4; ++k) {
    REQUIRE(ladder[0].distributions[k].samples() ==
            std::vector<double>{static_cast<double>(k + 1)});
  }

  REQUIRE(ladder[1].size == 3);
  REQUIRE(ladder[1].distributions.size() == 4);
  for (std::size_t k = 0; k < 4; ++k) {
    const double base = 5.0 + 3.0 * static_cast<double>(k);
    REQUIRE(ladder[1].distributions[k].samples() ==
            std::vector<double>{base, base + 1.0, base + 2.0});
  }
}

TEST_CASE("build_groups ignores surplus records past the plan") {
  const auto config = config_with({1}, 20, {"Y"});
  const auto groups = build_groups(counted_records(24, {"Y"}), config);
  const auto& ladder = groups.at("Y");
  REQUIRE(ladder.size() == 1);
  REQUIRE(ladder[0].distributions.size() == 20);
  for (std::size_t k = 0; k < 20; ++k) {
    REQUIRE(ladder[0].distributions[k].samples()[0] == static_cast<double>(k + 1));
  }
}

TEST_CASE("build_groups is independent of record arrival order") {
  const auto config = config_with({2, 4}, 3, {"Y"});
  auto records = counted_records(18, {"Y"});
  auto shuffled = records;
  std::mt19937_64 engine(321);
  std::shuffle(shuffled.begin(), shuffled.end(), engine);
  const auto a = build_groups(records, config);
  const auto b = build_groups(shuffled, config);
  REQUIRE(a.at("Y").size() == b.at("Y").size());
  for (std::size_t s = 0; s < a.at("Y").size(); ++s) {
    const auto& ga = a.at("Y")[s];
    const auto& gb = b.at("Y")[s];
    REQUIRE(ga.distributions.size() == gb.distributions.size());
    for (std::size_t k = 0; k < ga.distributions.size(); ++k) {
      REQUIRE(ga.distributions[k].samples() == gb.distributions[k].samples());
    }
  }
}

TEST_CASE("build_groups reports missing, failed, and insufficient input") {
  const auto config = config_with({1}, 20, {"Y"});
  CHECK_THROWS_AS(build_groups(counted_records(19, {"Y"}), config), absa::InsufficientRuns);

  auto with_failure = counted_records(20, {"Y"});
  RunRequest req;
  req.run_id = 7;
  req.seed = 7;
  with_failure[6] = RunRecord::failure(req, "exit code 1");
  CHECK_THROWS_AS(build_groups(with_failure, config), absa::SimulationFailure);

  const auto wrong_output = counted_records(20, {"Z"});
  CHECK_THROWS_AS(build_groups(wrong_output, config), absa::UnknownOutput);
}

TEST_CASE("analyze_group compares the first distribution to all others") {
  DistributionGroup group;
  group.size = 3;
  group.distributions = {Distribution{1, 2, 3}, Distribution{2, 2, 4}, Distribution{5, 6, 7}};
  const auto analysis = analyze_group(group);
  REQUIRE(analysis.comparisons.size() == 2);
  CHECK(analysis.size == 3);
  CHECK(analysis.comparisons[0].a_hat == 1.0 / 3.0);
  CHECK(analysis.comparisons[1].a_hat == 0.0);
  CHECK(analysis.comparisons[1].a_scaled == 1.0);
  CHECK(analysis.max_scaled_a == 1.0);
}

TEST_CASE("analyze_group of identical distributions sits at one half") {
  DistributionGroup group;
  group.size = 4;
  group.distributions.assign(6, Distribution{1, 1, 2, 7});
  const auto analysis = analyze_group(group);
  REQUIRE(analysis.comparisons.size() == 5);
  for (const auto& c : analysis.comparisons) {
    REQUIRE(c.a_hat == 0.5);
    REQUIRE(c.a_scaled == 0.5);
  }
  CHECK(analysis.max_scaled_a == 0.5);
}

TEST_CASE("analyze_group matches the pair-count oracle") {
  std::mt19937_64 engine(606);
  for (int iter = 0; iter < 50; ++iter) {
    DistributionGroup group;
    group.size = 8;
    std::vector<std::vector<double>> raw;
    for (int k = 0; k < 5; ++k) {
      raw.push_back(reference::tie_heavy_sample(engine, 8));
      group.distributions.emplace_back(raw.back());
    }
    const auto analysis = analyze_group(group);
    for (std::size_t k = 1; k < raw.size(); ++k) {
      REQUIRE(analysis.comparisons[k - 1].a_hat ==
              reference::a_measure_pair_count(raw[0], raw[k]));
    }
  }
}

TEST_CASE("analyze_group validates its input shape") {
  DistributionGroup group;
  group.size = 2;
  group.distributions = {Distribution{1, 2}};
  CHECK_THROWS_AS(analyze_group(group), absa::InvalidSpec);
  group.distributions = {Distribution{1, 2}, Distribution{1, 2, 3}};
  CHECK_THROWS_AS(analyze_group(group), absa::InvalidSpec);
}

TEST_CASE("find_n_star locates the first size under the threshold everywhere") {
  const std::vector<std::size_t> sizes = {1, 5, 50, 100, 300};
  const auto result = ladder_result(sizes, {{"X1", {1.0, 0.92, 0.61, 0.55, 0.54}},
                                            {"X2", {1.0, 0.84, 0.59, 0.56, 0.54}}});
  CHECK(find_n_star(result, 0.56) == std::size_t{100});
  CHECK(find_n_star(result, 0.55) == std::size_t{300});
  CHECK(find_n_star(result, 0.99) == std::size_t{5});
  CHECK(find_n_star(result, 0.53) == std::nullopt);
  CHECK(find_n_star(result, 1.0) == std::size_t{1});
}

TEST_CASE("find_n_star handles flat ladders") {
  const std::vector<std::size_t> sizes = {1, 5, 50};
  const auto calm = ladder_result(sizes, {{"Y", {0.5, 0.5, 0.5}}});
  CHECK(find_n_star(calm, 0.56) == std::size_t{1});
  const auto noisy = ladder_result(sizes, {{"Y", {0.9, 0.9, 0.9}}});
  CHECK(find_n_star(noisy, 0.56) == std::nullopt);
}

TEST_CASE("raising the threshold never raises n_star") {
  std::mt19937_64 engine(515);
  const std::vector<std::size_t> sizes = {1, 5, 20, 50, 100};
  for (int iter = 0; iter < 200; ++iter) {
    std::vector<double> levels;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      levels.push_back(0.5 + 0.5 * (static_cast<double>(engine() >> 11) * 0x1.0p-53));
    }
    const auto result = ladder_result(sizes, {{"Y", levels}});
    std::size_t previous = 1000000;  // sentinel above every ladder size
    for (double threshold : {0.52, 0.6, 0.7, 0.85, 1.0}) {
      const auto star = find_n_star(result, threshold);
      const std::size_t current = star ? *star : 1000000;
      REQUIRE(current <= previous);
      previous = current;
    }
  }
}

TEST_CASE("a constant simulator is consistent from a single run") {
  const auto spec = stubs::make_spec({"Y"}, {"p"});
  stubs::ConstantSim sim(spec, 3.25);
  auto config = config_with({1, 5}, 5, {"Y"});
  ConsistencyRunOptions options;
  options.calibrated = {{"p", 0.5}};
  const auto result = run_consistency(sim, config, options);
  CHECK(result.total_runs == 30);
  CHECK(result.records.size() == 30);
  for (const auto& g : result.groups) {
    for (const auto& c : g.comparisons) {
      REQUIRE(c.a_hat == 0.5);
      REQUIRE(c.a_scaled == 0.5);
    }
    REQUIRE(g.max_scaled_a == 0.5);
  }
  CHECK(result.n_star_overall == std::size_t{1});
  CHECK(result.n_star_per_output.at("Y") == std::size_t{1});
}

TEST_CASE("singleton distributions of a continuous simulator are maximally inconsistent") {
  const auto spec = stubs::make_spec({"Y"}, {"p"});
  stubs::UniformSim sim(spec);
  auto config = config_with({1}, 20, {"Y"});
  ConsistencyRunOptions options;
  options.calibrated = {{"p", 0.5}};
  const auto result = run_consistency(sim, config, options);
  REQUIRE(result.groups.size() == 1);
  CHECK(result.groups[0].max_scaled_a == 1.0);
  CHECK(result.n_star_overall == std::nullopt);
}

TEST_CASE("run_consistency is reproducible from the master seed") {
  const auto spec = stubs::make_spec({"Y"}, {"p"});
  stubs::UniformSim sim(spec);
  auto config = config_with({1, 4}, 6, {"Y"});
  config.master_seed = 42;
  ConsistencyRunOptions options;
  options.calibrated = {{"p", 0.5}};
  const auto a = run_consistency(sim, config, options);
  const auto b = run_consistency(sim, config, options);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    REQUIRE(a.records[i].request.seed == b.records[i].request.seed);
    REQUIRE(a.records[i].outputs.at("Y") == b.records[i].outputs.at("Y"));
  }
  config.master_seed = 43;
  const auto c = run_consistency(sim, config, options);
  bool any_differs = false;
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    if (a.records[i].outputs.at("Y") != c.records[i].outputs.at("Y")) any_differs = true;
  }
  CHECK(any_differs);
}

TEST_CASE("run_consistency results are invariant under parallel execution") {
  const auto spec = stubs::make_spec({"Y"}, {"p"});
  stubs::UniformSim sim(spec);
  auto config = config_with({2, 8}, 5, {"Y"});
  config.master_seed = 7;
  ConsistencyRunOptions serial;
  serial.calibrated = {{"p", 0.5}};
  ConsistencyRunOptions parallel = serial;
  parallel.parallelism = 8;
  const auto a = run_consistency(sim, config, serial);
  const auto b = run_consistency(sim, config, parallel);
  REQUIRE(a.groups.size() == b.groups.size());
  for (std::size_t g = 0; g < a.groups.size(); ++g) {
    REQUIRE(a.groups[g].max_scaled_a == b.groups[g].max_scaled_a);
  }
}

TEST_CASE("run_consistency persists and resumes through the campaign csv") {
  testsupport::ScratchDir scratch("absa-consistency-resume");
  const auto spec = stubs::make_spec({"Y"}, {"p"});
  stubs::CountingSim sim(spec);
  auto config = config_with({1, 3}, 4, {"Y"});
  ConsistencyRunOptions options;
  options.calibrated = {{"p", 0.5}};
  options.csv_file = scratch.path() / "runs.csv";
  const auto first = run_consistency(sim, config, options);
  const auto executed_once = sim.executed();
  CHECK(executed_once == 16);
  const auto second = run_consistency(sim, config, options);
  CHECK(sim.executed() == executed_once);  // everything was resumed
  REQUIRE(first.records.size() == second.records.size());
  for (std::size_t i = 0; i < first.records.size(); ++i) {
    REQUIRE(first.records[i].outputs.at("Y") == second.records[i].outputs.at("Y"));
  }
}

TEST_CASE("run_consistency validates outputs and calibrated coverage") {
  const auto spec = stubs::make_spec({"Y"}, {"p"});
  stubs::ConstantSim sim(spec, 1.0);
  auto config = config_with({1, 2}, 3, {"Z"});
  ConsistencyRunOptions options;
  options.calibrated = {{"p", 0.5}};
  CHECK_THROWS_AS(run_consistency(sim, config, options), absa::InvalidSpec);

  config = config_with({1, 2}, 3, {"Y"});
  options.calibrated = {};
  CHECK_THROWS_AS(run_consistency(sim, config, options), absa::InvalidSpec);
}

TEST_CASE("noise of uniform replicates shrinks inside the theoretical envelope") {
  // For distributions of n independent Uniform(0,1) samples the A-measure
  // concentrates around one half as n grows. Averaged over many master seeds
  // the grand mean of the K-1 comparisons at n = 50 must sit within
  // 3 * sqrt(1 / (12 n (K-1))) of one half.
  const auto spec = stubs::make_spec({"Y"}, {"p"});
  stubs::UniformSim sim(spec);
  auto config = config_with({50}, 20, {"Y"});
  ConsistencyRunOptions options;
  options.calibrated = {{"p", 0.5}};

  double sum = 0.0;
  std::size_t count = 0;
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    config.master_seed = seed;
    const auto result = run_consistency(sim, config, options);
    REQUIRE(result.groups.size() == 1);
    for (const auto& c : result.groups[0].comparisons) {
      sum += c.a_hat;
      ++count;
    }
  }
  const double grand_mean = sum / static_cast<double>(count);
  const double envelope = 3.0 * std::sqrt(1.0 / (12.0 * 50.0 * 19.0));
  CHECK(std::abs(grand_mean - 0.5) <= envelope);
}

TEST_CASE("consistency comparisons agree with the oracle end to end") {
  const auto spec = stubs::make_spec({"Y"}, {"p"});
  stubs::UniformSim sim(spec);
  auto config = config_with({6}, 4, {"Y"});
  config.master_seed = 99;
  ConsistencyRunOptions options;
  options.calibrated = {{"p", 0.5}};
  const auto result = run_consistency(sim, config, options);

  // Rebuild the distributions straight from the records.
  std::vector<std::vector<double>> dists(4);
  for (std::size_t k = 0; k < 4; ++k) {
    for (std::size_t h = 0; h < 6; ++h) {
      dists[k].push_back(result.records[k * 6 + h].outputs.at("Y"));
    }
  }
  REQUIRE(result.groups.size() == 1);
  const auto& comparisons = result.groups[0].comparisons;
  REQUIRE(comparisons.size() == 3);
  for (std::size_t k = 1; k < 4; ++k) {
    REQUIRE(comparisons[k - 1].a_hat == reference::a_measure_pair_count(dists[0], dists[k]));
  }
}
