#include "absa/lhs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "absa/campaign_store.hpp"
#include "absa/distribution.hpp"
#include "absa/errors.hpp"
#include "absa/rng.hpp"
#include "absa/stats.hpp"

namespace absa {

namespace {

void validate_range(const ParameterSpec& param) {
  if (param.name.empty()) throw InvalidSpec("parameter name must not be empty");
  if (!std::isfinite(param.min) || !std::isfinite(param.max))
    throw InvalidSpec("parameter '" + param.name + "': bounds must be finite");
  if (!(param.min <= param.max))
    throw InvalidSpec("parameter '" + param.name + "': min must be <= max");
}

void validate_shape(const LhsDesign& d) {
  if (d.n_points < 1 || d.q < 1) throw InvalidDimensions("design must have n_points >= 1 and q >= 1");
  if (d.unit.size() != d.n_points || d.interval.size() != d.n_points)
    throw InvalidDimensions("design matrices must have one row per point");
  for (std::size_t row = 0; row < d.n_points; ++row) {
    if (d.unit[row].size() != d.q || d.interval[row].size() != d.q)
      throw InvalidDimensions("design matrices must have one column per parameter");
  }
}

LhsDesign generate_candidate(std::size_t q, std::size_t n_points, std::uint64_t seed,
                             std::size_t candidate_index) {
  LhsDesign d;
  d.n_points = n_points;
  d.q = q;
  d.seed = seed;
  d.criterion = LhsCriterion::none;
  d.candidates = 1;
  d.unit.assign(n_points, std::vector<double>(q, 0.0));
  d.interval.assign(n_points, std::vector<std::size_t>(q, 0));

  Rng rng(derive_seed(seed, "lhs-design", {}, candidate_index));
  std::vector<std::size_t> perm(n_points);
  for (std::size_t col = 0; col < q; ++col) {
    std::iota(perm.begin(), perm.end(), std::size_t{1});
    rng.shuffle(perm);
    for (std::size_t row = 0; row < n_points; ++row) {
      const std::size_t idx = perm[row];
      const double u = rng.uniform01();
      double value = (static_cast<double>(idx - 1) + u) / static_cast<double>(n_points);
      // The jitter must stay strictly below the interval's upper edge; the
      // division can round up onto it, so nudge back inside when that happens.
      const double upper = static_cast<double>(idx) / static_cast<double>(n_points);
      if (value >= upper) value = std::nextafter(upper, 0.0);
      d.unit[row][col] = value;
      d.interval[row][col] = idx;
    }
  }
  return d;
}

}  // namespace

LhsDesign design(std::size_t q, std::size_t n_points, std::uint64_t seed, LhsCriterion criterion,
                 std::size_t candidates) {
  if (q < 1) throw InvalidDimensions("design requires q >= 1");
  if (n_points < 1) throw InvalidDimensions("design requires n_points >= 1");
  if (candidates < 1) throw InvalidDimensions("design requires candidates >= 1");

  const std::size_t pool = criterion == LhsCriterion::maximin ? candidates : 1;
  LhsDesign best = generate_candidate(q, n_points, seed, 0);
  double best_distance = min_pairwise_distance(best);
  for (std::size_t k = 1; k < pool; ++k) {
    LhsDesign candidate = generate_candidate(q, n_points, seed, k);
    const double distance = min_pairwise_distance(candidate);
    if (distance > best_distance) {
      best = std::move(candidate);
      best_distance = distance;
    }
  }
  best.criterion = criterion;
  best.candidates = candidates;
  return best;
}

LhsDesign design_candidate(std::size_t q, std::size_t n_points, std::uint64_t seed,
                           std::size_t candidate_index) {
  if (q < 1) throw InvalidDimensions("design_candidate requires q >= 1");
  if (n_points < 1) throw InvalidDimensions("design_candidate requires n_points >= 1");
  return generate_candidate(q, n_points, seed, candidate_index);
}

double min_pairwise_distance(const LhsDesign& design) {
  validate_shape(design);
  if (design.n_points < 2) return std::numeric_limits<double>::infinity();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < design.n_points; ++i) {
    for (std::size_t j = i + 1; j < design.n_points; ++j) {
      double sum = 0.0;
      for (std::size_t col = 0; col < design.q; ++col) {
        const double diff = design.unit[i][col] - design.unit[j][col];
        sum += diff * diff;
      }
      best = std::min(best, std::sqrt(sum));
    }
  }
  return best;
}

std::pair<double, double> interval_bounds(const ParameterSpec& param, std::size_t r,
                                          std::size_t n_points) {
  validate_range(param);
  if (n_points < 1) throw IndexOutOfRange("interval_bounds requires n_points >= 1");
  if (r < 1 || r > n_points)
    throw IndexOutOfRange("interval index must lie in 1..n_points");

  const double width = (param.max - param.min) / static_cast<double>(n_points);
  double low = param.min + width * static_cast<double>(r - 1);
  double high = r == n_points ? param.max : param.min + width * static_cast<double>(r);
  low = std::clamp(low, param.min, param.max);
  high = std::clamp(high, low, param.max);
  return {low, high};
}

std::vector<std::vector<double>> scale_design(const LhsDesign& design,
                                              const std::vector<ParameterSpec>& params) {
  validate_shape(design);
  if (params.size() != design.q)
    throw DimensionMismatch("scale_design requires one parameter spec per design column");
  for (const auto& param : params) validate_range(param);

  std::vector<std::vector<double>> points(design.n_points, std::vector<double>(design.q, 0.0));
  for (std::size_t row = 0; row < design.n_points; ++row) {
    for (std::size_t col = 0; col < design.q; ++col) {
      const auto& param = params[col];
      const auto [low, high] = interval_bounds(param, design.interval[row][col], design.n_points);
      const double scaled = param.min + design.unit[row][col] * (param.max - param.min);
      points[row][col] = std::clamp(scaled, low, high);
    }
  }
  return points;
}

std::string classify_correlation(double r, const CorrelationScheme& scheme) {
  if (!std::isfinite(r) || std::abs(r) > 1.0)
    throw OutOfRange("correlation coefficient must lie in [-1, 1]");
  const double magnitude = std::abs(r);
  switch (scheme.kind) {
    case CorrelationScheme::Kind::mukaka:
      if (magnitude < 0.3) return "negligible";
      if (magnitude < 0.5) return "weak";
      if (magnitude < 0.7) return "moderate";
      if (magnitude < 0.9) return "strong";
      return "very strong";
    case CorrelationScheme::Kind::schober:
      if (magnitude < 0.1) return "negligible";
      if (magnitude < 0.4) return "weak";
      if (magnitude < 0.7) return "moderate";
      if (magnitude < 0.9) return "strong";
      return "very strong";
    case CorrelationScheme::Kind::krehbiel: {
      if (scheme.sample_count < 1)
        throw InvalidSpec("krehbiel classification requires a positive sample count");
      const double threshold = 2.0 / std::sqrt(static_cast<double>(scheme.sample_count));
      return magnitude >= threshold ? "exists" : "none";
    }
  }
  throw InvalidSpec("unknown correlation scheme");
}

LhsResult run_lhs(const Simulator& sim, const std::vector<ParameterSpec>& params,
                  std::size_t n_points, std::size_t n_star,
                  const std::vector<std::string>& outputs, std::uint64_t master_seed,
                  const LhsRunOptions& options) {
  if (params.empty()) throw InvalidSpec("lhs requires at least one sampled parameter");
  if (n_points < 1) throw InvalidDimensions("lhs requires n_points >= 1");
  if (n_star < 1) throw InvalidSpec("lhs requires n_star >= 1");
  if (outputs.empty()) throw InvalidSpec("lhs requires at least one output");

  const SimulatorSpec& spec = sim.spec();
  for (const auto& output : outputs) {
    if (std::find(spec.outputs.begin(), spec.outputs.end(), output) == spec.outputs.end())
      throw UnknownOutput("output '" + output + "' is not declared by the simulator");
  }

  std::map<std::string, double> base_point = options.extra_calibrated;
  for (const auto& param : params) {
    validate_range(param);
    if (std::find(spec.parameters.begin(), spec.parameters.end(), param.name) ==
        spec.parameters.end())
      throw UnknownParameter("parameter '" + param.name + "' is not declared by the simulator");
    if (!base_point.emplace(param.name, param.calibrated).second)
      throw InvalidSpec("parameter '" + param.name + "' specified more than once");
  }
  for (const auto& name : spec.parameters) {
    if (base_point.find(name) == base_point.end())
      throw InvalidSpec("no value for declared parameter '" + name + "'");
  }

  LhsResult result;
  const std::vector<std::string> design_labels = {"design"};
  result.design = design(params.size(), n_points,
                         derive_seed(master_seed, "lhs", design_labels, 0), options.criterion,
                         options.candidates);
  result.points = scale_design(result.design, params);
  result.n_star_used = n_star;

  result.scheme = options.scheme;
  if (result.scheme.kind == CorrelationScheme::Kind::krehbiel && result.scheme.sample_count == 0)
    result.scheme.sample_count = n_points;

  std::vector<RunRequest> requests;
  requests.reserve(n_points * n_star);
  std::uint64_t run_id = 1;
  for (std::size_t j = 0; j < n_points; ++j) {
    std::map<std::string, double> point_params = base_point;
    for (std::size_t col = 0; col < params.size(); ++col)
      point_params[params[col].name] = result.points[j][col];
    const std::vector<std::string> point_labels = {"point=" + std::to_string(j + 1)};
    for (std::size_t h = 1; h <= n_star; ++h) {
      RunRequest request;
      request.run_id = run_id++;
      request.parameters = point_params;
      request.seed = derive_seed(master_seed, "lhs", point_labels, h);
      requests.push_back(std::move(request));
    }
  }

  auto campaign = run_campaign(sim, requests, options.parallelism, options.csv_file);
  result.records = std::move(campaign.records);

  result.medians.resize(n_points);
  std::vector<double> samples;
  samples.reserve(n_star);
  for (std::size_t j = 0; j < n_points; ++j) {
    const std::size_t offset = j * n_star;
    for (const auto& output : outputs) {
      samples.clear();
      for (std::size_t h = 0; h < n_star; ++h) {
        const RunRecord& record = result.records[offset + h];
        if (!record.ok)
          throw SimulationFailure("run " + std::to_string(record.request.run_id) +
                                  " failed: " + record.failure_reason);
        auto it = record.outputs.find(output);
        if (it == record.outputs.end())
          throw UnknownOutput("run " + std::to_string(record.request.run_id) +
                              " has no output '" + output + "'");
        samples.push_back(it->second);
      }
      result.medians[j][output] = median(Distribution(samples));
    }
  }

  std::vector<double> xs(n_points, 0.0);
  std::vector<double> ys(n_points, 0.0);
  for (std::size_t col = 0; col < params.size(); ++col) {
    for (std::size_t j = 0; j < n_points; ++j) xs[j] = result.points[j][col];
    for (const auto& output : outputs) {
      for (std::size_t j = 0; j < n_points; ++j) ys[j] = result.medians[j].at(output);
      CorrelationEntry entry;
      entry.parameter = params[col].name;
      entry.output = output;
      if (n_points < 2) {
        entry.descriptor = "degenerate";
      } else {
        try {
          // A correct coefficient can overshoot 1 by rounding; the clamp keeps
          // the stored value inside [-1, 1] for classification.
          const double r = std::clamp(pearson_r(xs, ys), -1.0, 1.0);
          entry.r = r;
          entry.descriptor = classify_correlation(r, result.scheme);
        } catch (const DegenerateVariance&) {
          entry.descriptor = "degenerate";
        }
      }
      result.correlations.push_back(std::move(entry));
    }
  }
  return result;
}

}  // namespace absa
