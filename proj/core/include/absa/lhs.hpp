#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "absa/robustness.hpp"
#include "absa/run_record.hpp"
#include "absa/simulator.hpp"

namespace absa {

enum class LhsCriterion { none, maximin };

/// A Latin hypercube design over the unit cube: N points in q dimensions,
/// one point per interval per column.
struct LhsDesign {
  std::size_t n_points = 0;  // N
  std::size_t q = 0;
  std::vector<std::vector<double>> unit;          // N x q, each in [0,1)
  std::vector<std::vector<std::size_t>> interval; // N x q, indices in 1..N
  std::uint64_t seed = 0;
  LhsCriterion criterion = LhsCriterion::maximin;
  std::size_t candidates = 1;
};

/// Generates a design: per column, a random permutation of the N intervals
/// with uniform jitter inside each. With the maximin criterion, `candidates`
/// designs are generated and the one with the largest minimum pairwise
/// Euclidean distance wins (ties keep the earliest candidate).
LhsDesign design(std::size_t q, std::size_t n_points, std::uint64_t seed,
                 LhsCriterion criterion = LhsCriterion::maximin, std::size_t candidates = 5);

/// The raw candidate design() would generate at this index for the same seed;
/// lets callers re-derive and audit a maximin selection.
LhsDesign design_candidate(std::size_t q, std::size_t n_points, std::uint64_t seed,
                           std::size_t candidate_index);

/// Smallest pairwise Euclidean distance between the design's unit points;
/// +infinity for designs with fewer than two points.
double min_pairwise_distance(const LhsDesign& design);

/// Parameter range of the r-th of N equal intervals: with w = (max-min)/N,
/// bounds are [min + w(r-1), min + w r]; the last interval ends exactly at
/// max.
std::pair<double, double> interval_bounds(const ParameterSpec& param, std::size_t r,
                                          std::size_t n_points);

/// Maps unit coordinates into each parameter's range. Every scaled coordinate
/// is clamped into its interval's bounds, so interval membership survives
/// rounding.
std::vector<std::vector<double>> scale_design(const LhsDesign& design,
                                              const std::vector<ParameterSpec>& params);

struct CorrelationScheme {
  enum class Kind { mukaka, schober, krehbiel };
  Kind kind = Kind::mukaka;
  std::size_t sample_count = 0;  // krehbiel only

  static CorrelationScheme mukaka() { return {Kind::mukaka, 0}; }
  static CorrelationScheme schober() { return {Kind::schober, 0}; }
  static CorrelationScheme krehbiel(std::size_t sample_count) {
    return {Kind::krehbiel, sample_count};
  }
};

/// Descriptor for a correlation magnitude under the chosen scheme. Mukaka and
/// Schober bucket |r| into negligible / weak / moderate / strong /
/// very strong (with different boundaries); Krehbiel answers whether a linear
/// relationship exists at all: "exists" iff |r| >= 2/sqrt(sample_count),
/// otherwise "none".
std::string classify_correlation(double r, const CorrelationScheme& scheme);

struct CorrelationEntry {
  std::string parameter;
  std::string output;
  std::optional<double> r;  // empty when either side has no variance
  std::string descriptor;   // "degenerate" when r is empty
};

struct LhsResult {
  LhsDesign design;
  std::vector<std::vector<double>> points;            // N x q, scaled
  std::vector<std::map<std::string, double>> medians; // per point, per output
  std::vector<CorrelationEntry> correlations;         // parameter-major
  CorrelationScheme scheme;
  std::size_t n_star_used = 0;
  std::vector<RunRecord> records;
};

struct LhsRunOptions {
  LhsCriterion criterion = LhsCriterion::maximin;
  std::size_t candidates = 5;
  unsigned parallelism = 1;
  std::filesystem::path csv_file;
  /// A krehbiel scheme with sample_count 0 is resolved to the design's point
  /// count, which is the number of scatter samples per correlation.
  CorrelationScheme scheme = CorrelationScheme::mukaka();
  /// Calibrated values for declared simulator parameters outside the sampled
  /// q-dimensional space.
  std::map<std::string, double> extra_calibrated;
};

/// Latin hypercube sampling and analysis: designs N points over the given
/// parameters, runs n_star replicates per point, aggregates each point's
/// outputs by median, and correlates every (parameter, output) pair over the
/// N medians.
LhsResult run_lhs(const Simulator& sim, const std::vector<ParameterSpec>& params,
                  std::size_t n_points, std::size_t n_star,
                  const std::vector<std::string>& outputs, std::uint64_t master_seed,
                  const LhsRunOptions& options = {});

}  // namespace absa
