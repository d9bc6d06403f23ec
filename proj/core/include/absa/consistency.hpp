#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "absa/distribution.hpp"
#include "absa/run_record.hpp"
#include "absa/simulator.hpp"
#include "absa/stats.hpp"

namespace absa {

/// Configuration of a consistency (aleatory uncertainty) analysis: how many
/// same-size output distributions to grow at each ladder size, and the scaled
/// A-measure level below which stochastic noise counts as small.
struct ConsistencyConfig {
  std::vector<std::size_t> sizes = {1, 5, 50, 100, 300};
  std::size_t group_count = 20;  // K, distributions per group
  std::vector<std::string> outputs;
  double threshold = 0.56;
  std::uint64_t master_seed = 0;

  void validate() const;  // throws InvalidSpec
};

/// K equally sized sample distributions of one output at one ladder size.
struct DistributionGroup {
  std::size_t size = 0;  // n, samples per distribution
  std::vector<Distribution> distributions;
};

/// Comparison results for one (ladder size, output) cell: distribution 1
/// against each of distributions 2..K, in that order.
struct GroupAnalysis {
  std::size_t size = 0;
  std::string output;
  std::vector<AMeasureResult> comparisons;  // K-1 entries
  double max_scaled_a = 0.5;
};

struct ConsistencyResult {
  std::vector<std::size_t> sizes;
  std::vector<std::string> outputs;
  std::vector<GroupAnalysis> groups;  // size-major, outputs in config order
  double threshold = 0.56;
  // Smallest ladder size at which an output's max scaled A-measure drops to
  // the threshold; nullopt when the ladder never gets there (NotReached).
  std::map<std::string, std::optional<std::size_t>> n_star_per_output;
  std::optional<std::size_t> n_star_overall;
  std::size_t total_runs = 0;
  std::vector<RunRecord> records;  // full provenance, run_id order
};

/// Number of simulation runs the configuration requires: K * sum(sizes).
std::size_t plan_runs(const ConsistencyConfig& config);

/// Partitions records into distribution groups, one vector of groups per
/// configured output. Records are consumed in ascending run_id order, sizes
/// in configured order, K distributions of n samples each; surplus records
/// are ignored. Throws InsufficientRuns when fewer than plan_runs records are
/// given, SimulationFailure when a consumed record is failed, UnknownOutput
/// when a consumed record lacks a configured output.
std::map<std::string, std::vector<DistributionGroup>> build_groups(
    std::vector<RunRecord> records, const ConsistencyConfig& config);

/// Compares the group's first distribution to each of the others and reports
/// the K-1 A-measures plus their maximum scaled value.
GroupAnalysis analyze_group(const DistributionGroup& group,
                            const SignificanceThresholds& thresholds = {});

/// Smallest configured size whose max scaled A-measure is <= threshold for
/// every output; nullopt when no size qualifies.
std::optional<std::size_t> find_n_star(const ConsistencyResult& result, double threshold);

struct ConsistencyRunOptions {
  /// Calibrated value for every parameter the simulator declares.
  std::map<std::string, double> calibrated;
  unsigned parallelism = 1;
  /// When non-empty, runs are persisted here and ok runs are resumed.
  std::filesystem::path csv_file;
  SignificanceThresholds thresholds{};
};

/// Full workflow: plan seeded requests at the calibrated point, execute the
/// batch, build groups, analyze every (size, output) cell, and locate n*.
/// Fully reproducible from config.master_seed.
ConsistencyResult run_consistency(const Simulator& sim, const ConsistencyConfig& config,
                                  const ConsistencyRunOptions& options = {});

}  // namespace absa
