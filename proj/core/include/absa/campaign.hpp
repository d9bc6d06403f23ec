#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "absa/consistency.hpp"
#include "absa/lhs.hpp"
#include "absa/robustness.hpp"
#include "absa/simulator.hpp"
#include "absa/stats.hpp"

namespace absa {

/// Campaign-level consistency settings; outputs, thresholds, and the master
/// seed live at campaign scope.
struct ConsistencySettings {
  std::vector<std::size_t> sizes = {1, 5, 50, 100, 300};
  std::size_t group_count = 20;
  double threshold = 0.56;
};

struct RobustnessSettings {
  /// Replicate count override. When absent, the replicate count comes from a
  /// prior consistency result in the output directory.
  std::optional<std::size_t> n_star;
};

struct LhsSettings {
  /// Number of sampling points. There is no default: the value must be set
  /// before run_lhs can be driven from a config.
  std::size_t n_points = 0;
  LhsCriterion criterion = LhsCriterion::maximin;
  std::size_t candidates = 5;
};

/// Everything one analysis campaign needs, loadable from a single JSON
/// document. See the README for the key-by-key schema.
struct CampaignConfig {
  SimulatorSpec simulator = SimulatorSpec::toy();
  std::vector<std::string> outputs;  // defaults to the simulator's outputs
  std::vector<ParameterSpec> parameters;
  /// Calibrated values for declared parameters that are not analyzed.
  std::map<std::string, double> fixed;
  ConsistencySettings consistency;
  RobustnessSettings robustness;
  LhsSettings lhs;
  std::uint64_t master_seed = 1;
  unsigned parallelism = 1;
  std::filesystem::path out_dir;
  SignificanceThresholds significance{};
  CorrelationScheme correlation = CorrelationScheme::mukaka();

  /// Calibrated values for every declared parameter: analyzed parameters
  /// contribute their calibrated field, the rest come from `fixed`.
  std::map<std::string, double> calibrated_point() const;

  /// Throws InvalidSpec unless every cross-reference resolves (outputs and
  /// parameter names against the simulator spec; fixed and analyzed
  /// parameters together covering the declared set exactly) and every
  /// numeric setting is in range.
  void validate() const;
};

/// Parses and validates a campaign config from a JSON file. Parse errors,
/// type errors, unknown keys, and failed validation all raise InvalidSpec
/// with the offending location; unreadable files raise IoFailure.
CampaignConfig load_campaign_config(const std::filesystem::path& file);

/// Same, from an in-memory document; `origin` names the source in messages.
CampaignConfig parse_campaign_config(const std::string& json_text, const std::string& origin);

/// Canonical JSON rendering of everything that affects numeric results.
/// Deliberately excludes out_dir and parallelism: where results are written
/// and how many workers computed them must not change their identity.
std::string canonical_config_json(const CampaignConfig& config);

/// SHA-256 hex digest of canonical_config_json; stamped into every report.
std::string config_hash(const CampaignConfig& config);

/// Built-in desk-scale campaign against the toy model: consistency ladder
/// [1, 5, 20, 50] with 10 distributions per size, three parameter sweeps of
/// 5 values each, and a 50-point hypercube design.
CampaignConfig demo_config();

}  // namespace absa
