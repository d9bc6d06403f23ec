#include "absa/robustness.hpp"

#include <algorithm>
#include <cmath>

#include "absa/campaign_store.hpp"
#include "absa/distribution.hpp"
#include "absa/errors.hpp"
#include "absa/rng.hpp"

namespace absa {

void ParameterSpec::validate() const {
  if (name.empty()) throw InvalidSpec("parameter name must not be empty");
  if (!std::isfinite(min) || !std::isfinite(max) || !std::isfinite(calibrated))
    throw InvalidSpec("parameter '" + name + "': bounds and calibrated value must be finite");
  if (!(min <= max)) throw InvalidSpec("parameter '" + name + "': min must be <= max");
  if (values.empty()) throw InvalidSpec("parameter '" + name + "': values must not be empty");
  bool has_calibrated = false;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]))
      throw InvalidSpec("parameter '" + name + "': values must be finite");
    if (values[i] < min || values[i] > max)
      throw InvalidSpec("parameter '" + name + "': value outside [min, max]");
    if (i > 0 && !(values[i] > values[i - 1]))
      throw InvalidSpec("parameter '" + name + "': values must be strictly ascending");
    if (values[i] == calibrated) has_calibrated = true;
  }
  if (!has_calibrated)
    throw InvalidSpec("parameter '" + name + "': values must include the calibrated value");
  if (calibrated < min || calibrated > max)
    throw InvalidSpec("parameter '" + name + "': calibrated value outside [min, max]");
}

std::vector<double> evenly_spaced_values(double min, double max, std::size_t k,
                                         double calibrated) {
  if (k < 1) throw InvalidSpec("evenly_spaced_values requires k >= 1");
  if (!(min <= calibrated && calibrated <= max))
    throw InvalidSpec("calibrated value must lie within [min, max]");

  std::vector<double> values;
  if (k == 1) {
    values.push_back(min);
  } else {
    const double step = (max - min) / static_cast<double>(k - 1);
    for (std::size_t i = 0; i < k; ++i)
      values.push_back(i + 1 == k ? max : min + step * static_cast<double>(i));
  }

  // Snap the nearest grid value onto the calibrated value when rounding is
  // all that separates them; otherwise insert the calibrated value.
  const double span = std::max({std::abs(min), std::abs(max), 1.0});
  std::size_t nearest = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (std::abs(values[i] - calibrated) < std::abs(values[nearest] - calibrated)) nearest = i;
  }
  if (std::abs(values[nearest] - calibrated) <= 1e-9 * span) {
    values[nearest] = calibrated;
  } else {
    values.insert(std::upper_bound(values.begin(), values.end(), calibrated), calibrated);
  }
  return values;
}

std::size_t total_distributions(const std::vector<ParameterSpec>& params) {
  if (params.empty()) throw InvalidSpec("total_distributions requires at least one parameter");
  std::size_t total = 0;
  for (const auto& p : params) total += p.values.size();
  return total;
}

std::vector<SignificancePoint> significance_curve(const RobustnessResult& result,
                                                  const std::string& parameter,
                                                  const std::string& output) {
  if (std::find(result.outputs.begin(), result.outputs.end(), output) == result.outputs.end())
    throw UnknownOutput("robustness result has no output '" + output + "'");

  std::vector<SignificancePoint> curve;
  for (const auto& entry : result.entries) {
    if (entry.parameter != parameter) continue;
    const AMeasureResult& r = entry.a.at(output);
    curve.push_back({entry.value, r.a_hat, r.a_scaled, r.significance});
  }
  if (curve.empty())
    throw UnknownParameter("robustness result has no parameter '" + parameter + "'");
  std::sort(curve.begin(), curve.end(),
            [](const SignificancePoint& a, const SignificancePoint& b) { return a.value < b.value; });
  return curve;
}

RobustnessResult run_robustness(const Simulator& sim, const std::vector<ParameterSpec>& params,
                                std::size_t n_star, const std::vector<std::string>& outputs,
                                std::uint64_t master_seed, const RobustnessRunOptions& options) {
  if (params.empty()) throw InvalidSpec("robustness requires at least one parameter");
  if (n_star < 1) throw InvalidSpec("robustness requires n_star >= 1");
  if (outputs.empty()) throw InvalidSpec("robustness requires at least one output");
  for (const auto& p : params) p.validate();

  const SimulatorSpec& spec = sim.spec();
  for (const auto& output : outputs) {
    if (std::find(spec.outputs.begin(), spec.outputs.end(), output) == spec.outputs.end())
      throw InvalidSpec("robustness: simulator does not produce output '" + output + "'");
  }

  // The fully calibrated point covers every declared parameter.
  std::map<std::string, double> base_point = options.extra_calibrated;
  for (const auto& p : params) {
    if (!base_point.emplace(p.name, p.calibrated).second)
      throw InvalidSpec("robustness: duplicate calibrated value for parameter '" + p.name + "'");
  }
  for (const auto& name : spec.parameters) {
    if (!base_point.count(name))
      throw InvalidSpec("robustness: calibrated value required for parameter '" + name + "'");
  }

  // Plan all runs. Seeds are labeled by parameter name and value so the plan
  // is insensitive to parameter order; run ids follow plan order.
  std::vector<RunRequest> requests;
  std::uint64_t run_id = 1;
  for (const auto& p : params) {
    for (double value : p.values) {
      const std::vector<std::string> context = {"param=" + p.name,
                                                "value=" + format_run_value(value)};
      for (std::size_t h = 1; h <= n_star; ++h) {
        RunRequest request;
        request.run_id = run_id++;
        request.parameters = base_point;
        request.parameters[p.name] = value;
        request.seed = derive_seed(master_seed, "robustness", context, h);
        requests.push_back(std::move(request));
      }
    }
  }

  CampaignRunResult campaign = run_campaign(sim, requests, options.parallelism, options.csv_file);

  RobustnessResult result;
  result.outputs = outputs;
  result.n_star_used = n_star;
  result.total_distributions = total_distributions(params);

  // Records arrive in run_id order, matching plan order exactly.
  std::size_t cursor = 0;
  auto take_distribution = [&](const std::string& output,
                               std::size_t offset) -> Distribution {
    std::vector<double> samples;
    samples.reserve(n_star);
    for (std::size_t h = 0; h < n_star; ++h) {
      const RunRecord& record = campaign.records[offset + h];
      if (!record.ok)
        throw SimulationFailure("run " + std::to_string(record.request.run_id) +
                                " failed: " + record.failure_reason);
      samples.push_back(record.outputs.at(output));
    }
    return Distribution(std::move(samples));
  };

  for (const auto& p : params) {
    // The calibrated distribution is built once per sweep and reused for
    // every comparison within it.
    std::size_t calibrated_offset = 0;
    {
      std::size_t offset = cursor;
      bool found = false;
      for (double value : p.values) {
        if (value == p.calibrated) {
          calibrated_offset = offset;
          found = true;
        }
        offset += n_star;
      }
      if (!found)
        throw InvalidSpec("parameter '" + p.name + "': values lost the calibrated entry");
    }
    std::map<std::string, Distribution> calibrated_dist;
    for (const auto& output : outputs)
      calibrated_dist.emplace(output, take_distribution(output, calibrated_offset));

    for (double value : p.values) {
      RobustnessEntry entry;
      entry.parameter = p.name;
      entry.value = value;
      entry.is_calibrated = value == p.calibrated;
      for (const auto& output : outputs) {
        Distribution perturbed = take_distribution(output, cursor);
        entry.a.emplace(output,
                        a_measure(calibrated_dist.at(output), perturbed, options.thresholds));
        entry.boxplots.emplace(output, boxplot_summary(perturbed));
      }
      result.entries.push_back(std::move(entry));
      cursor += n_star;
    }
  }

  result.records = std::move(campaign.records);
  return result;
}

}  // namespace absa
