#include "absa/consistency.hpp"

#include <algorithm>

#include "absa/campaign_store.hpp"
#include "absa/errors.hpp"
#include "absa/rng.hpp"

namespace absa {

void ConsistencyConfig::validate() const {
  if (sizes.empty()) throw InvalidSpec("consistency: sizes must not be empty");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] < 1) throw InvalidSpec("consistency: sizes must be >= 1");
    if (i > 0 && sizes[i] <= sizes[i - 1])
      throw InvalidSpec("consistency: sizes must be strictly ascending");
  }
  if (group_count < 2) throw InvalidSpec("consistency: group_count must be >= 2");
  if (outputs.empty()) throw InvalidSpec("consistency: outputs must not be empty");
  if (!(threshold > 0.5 && threshold <= 1.0))
    throw InvalidSpec("consistency: threshold must lie in (0.5, 1]");
}

std::size_t plan_runs(const ConsistencyConfig& config) {
  config.validate();
  std::size_t per_group = 0;
  for (std::size_t n : config.sizes) per_group += n;
  return config.group_count * per_group;
}

std::map<std::string, std::vector<DistributionGroup>> build_groups(
    std::vector<RunRecord> records, const ConsistencyConfig& config) {
  const std::size_t needed = plan_runs(config);
  if (records.size() < needed)
    throw InsufficientRuns("consistency needs " + std::to_string(needed) + " records, got " +
                           std::to_string(records.size()));

  // Arrival order is irrelevant; run_id order governs the partition.
  std::stable_sort(records.begin(), records.end(), [](const RunRecord& a, const RunRecord& b) {
    return a.request.run_id < b.request.run_id;
  });

  std::map<std::string, std::vector<DistributionGroup>> groups_by_output;
  std::size_t cursor = 0;
  for (std::size_t n : config.sizes) {
    std::map<std::string, DistributionGroup> group_per_output;
    for (const auto& output : config.outputs) group_per_output[output].size = n;

    for (std::size_t k = 0; k < config.group_count; ++k) {
      std::map<std::string, std::vector<double>> samples;
      for (std::size_t h = 0; h < n; ++h) {
        const RunRecord& record = records[cursor++];
        if (!record.ok)
          throw SimulationFailure("run " + std::to_string(record.request.run_id) +
                                  " failed: " + record.failure_reason);
        for (const auto& output : config.outputs) {
          auto it = record.outputs.find(output);
          if (it == record.outputs.end())
            throw UnknownOutput("run " + std::to_string(record.request.run_id) +
                                " has no output '" + output + "'");
          samples[output].push_back(it->second);
        }
      }
      for (const auto& output : config.outputs)
        group_per_output[output].distributions.emplace_back(std::move(samples[output]));
    }
    for (const auto& output : config.outputs)
      groups_by_output[output].push_back(std::move(group_per_output[output]));
  }
  return groups_by_output;
}

GroupAnalysis analyze_group(const DistributionGroup& group,
                            const SignificanceThresholds& thresholds) {
  if (group.distributions.size() < 2)
    throw InvalidSpec("analyze_group needs at least 2 distributions");
  for (const auto& d : group.distributions) {
    if (d.size() != group.size)
      throw InvalidSpec("analyze_group: distribution length differs from group size");
  }

  GroupAnalysis analysis;
  analysis.size = group.size;
  analysis.max_scaled_a = 0.5;
  const Distribution& first = group.distributions.front();
  for (std::size_t k = 1; k < group.distributions.size(); ++k) {
    AMeasureResult r = a_measure(first, group.distributions[k], thresholds);
    analysis.max_scaled_a = std::max(analysis.max_scaled_a, r.a_scaled);
    analysis.comparisons.push_back(r);
  }
  return analysis;
}

std::optional<std::size_t> find_n_star(const ConsistencyResult& result, double threshold) {
  for (std::size_t n : result.sizes) {
    bool all_small = true;
    for (const auto& output : result.outputs) {
      bool seen = false;
      for (const auto& g : result.groups) {
        if (g.size == n && g.output == output) {
          seen = true;
          if (!(g.max_scaled_a <= threshold)) all_small = false;
          break;
        }
      }
      if (!seen) throw InvalidSpec("find_n_star: result lacks size " + std::to_string(n) +
                                   " for output '" + output + "'");
    }
    if (all_small) return n;
  }
  return std::nullopt;
}

ConsistencyResult run_consistency(const Simulator& sim, const ConsistencyConfig& config,
                                  const ConsistencyRunOptions& options) {
  config.validate();
  const SimulatorSpec& spec = sim.spec();
  for (const auto& output : config.outputs) {
    if (std::find(spec.outputs.begin(), spec.outputs.end(), output) == spec.outputs.end())
      throw InvalidSpec("consistency: simulator does not produce output '" + output + "'");
  }
  for (const auto& param : spec.parameters) {
    if (!options.calibrated.count(param))
      throw InvalidSpec("consistency: calibrated value required for parameter '" + param + "'");
  }

  // Seeds depend on (size, distribution index, replicate index) only, so
  // extending the ladder later reuses existing runs untouched.
  std::vector<RunRequest> requests;
  requests.reserve(plan_runs(config));
  std::uint64_t run_id = 1;
  for (std::size_t n : config.sizes) {
    for (std::size_t k = 1; k <= config.group_count; ++k) {
      const std::vector<std::string> context = {"n=" + std::to_string(n),
                                                "k=" + std::to_string(k)};
      for (std::size_t h = 1; h <= n; ++h) {
        RunRequest request;
        request.run_id = run_id++;
        request.parameters = options.calibrated;
        request.seed = derive_seed(config.master_seed, "consistency", context, h);
        requests.push_back(std::move(request));
      }
    }
  }

  CampaignRunResult campaign = run_campaign(sim, requests, options.parallelism, options.csv_file);

  ConsistencyResult result;
  result.sizes = config.sizes;
  result.outputs = config.outputs;
  result.threshold = config.threshold;
  result.total_runs = requests.size();

  auto groups_by_output = build_groups(campaign.records, config);
  for (std::size_t si = 0; si < config.sizes.size(); ++si) {
    for (const auto& output : config.outputs) {
      GroupAnalysis analysis = analyze_group(groups_by_output.at(output)[si], options.thresholds);
      analysis.output = output;
      result.groups.push_back(std::move(analysis));
    }
  }

  for (const auto& output : config.outputs) {
    std::optional<std::size_t> star;
    for (const auto& g : result.groups) {
      if (g.output == output && g.max_scaled_a <= config.threshold) {
        star = g.size;
        break;  // groups are size-ascending, so the first hit is smallest
      }
    }
    result.n_star_per_output[output] = star;
  }
  result.n_star_overall = find_n_star(result, config.threshold);
  result.records = std::move(campaign.records);
  return result;
}

}  // namespace absa
