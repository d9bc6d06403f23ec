#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "absa/campaign.hpp"
#include "absa/consistency.hpp"
#include "absa/lhs.hpp"
#include "absa/robustness.hpp"

namespace absa {

/// Per-invocation overrides layered over a CampaignConfig by the CLI.
struct ReportOptions {
  std::filesystem::path out_dir;  // bundle root, required
  std::optional<std::uint64_t> master_seed;
  std::optional<unsigned> parallelism;
  /// Replicate count override for robustness and hypercube runs.
  std::optional<std::size_t> n_star;
};

struct ConsistencyReport {
  ConsistencyResult analysis;
  std::filesystem::path dir;
};

struct RobustnessReport {
  RobustnessResult analysis;
  std::filesystem::path dir;
};

struct LhsReport {
  LhsResult analysis;
  std::filesystem::path dir;
};

struct DemoReport {
  ConsistencyReport consistency;
  RobustnessReport robustness;
  LhsReport lhs;
  std::size_t n_star_used = 0;
  bool n_star_reached = false;  // true when the consistency stage found n*
  std::vector<std::string> warnings;
};

/// Runs a consistency analysis and writes its bundle under
/// out_dir/consistency: results.json, runs.csv, and the max-scaled-A line
/// chart. Reports are pure views: every number in them can be recomputed
/// from runs.csv.
ConsistencyReport write_consistency_report(const CampaignConfig& config,
                                           const ReportOptions& options);

/// Runs a robustness analysis and writes its bundle under
/// out_dir/robustness: results.json, runs.csv, one significance CSV and one
/// A-vs-value chart per parameter, and one boxplot panel per parameter and
/// output. The replicate count comes from resolve_n_star.
RobustnessReport write_robustness_report(const CampaignConfig& config,
                                         const ReportOptions& options);

/// Runs a hypercube sampling analysis and writes its bundle under
/// out_dir/lhs: results.json, runs.csv, design/medians/correlations CSVs,
/// and one scatter chart per parameter and output. The replicate count comes
/// from resolve_n_star.
LhsReport write_lhs_report(const CampaignConfig& config, const ReportOptions& options);

/// Full pipeline at one output root: consistency, then robustness and
/// hypercube sampling at the discovered n*. When the ladder never reaches
/// the threshold, the largest tested size is used instead and a warning is
/// recorded. Also writes demo_summary.json at the root.
DemoReport write_demo_report(const CampaignConfig& config, const ReportOptions& options);

/// Replicate count for robustness and hypercube runs, in precedence order:
/// the explicit option, the config's robustness.n_star, then n_star_overall
/// from out_dir/consistency/results.json. Throws MissingPrerequisite when no
/// source yields one.
std::size_t resolve_n_star(const CampaignConfig& config, const ReportOptions& options);

/// Structural validation of a written results.json (or demo_summary.json):
/// schema version, kind, config hash, and the kind's required fields with
/// range checks. Throws InvalidSpec with the offending detail.
void validate_report(const std::filesystem::path& results_json);

}  // namespace absa
