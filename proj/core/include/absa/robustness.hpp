#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "absa/run_record.hpp"
#include "absa/simulator.hpp"
#include "absa/stats.hpp"

namespace absa {

/// One perturbable parameter: its range, its calibrated value, and the
/// ascending list of perturbation levels (which must contain the calibrated
/// value, so every sweep includes the self-comparison point).
struct ParameterSpec {
  std::string name;
  double min = 0.0;
  double max = 1.0;
  double calibrated = 0.5;
  std::vector<double> values;

  void validate() const;  // throws InvalidSpec
};

/// k evenly spaced values over [min, max] inclusive. A grid value within one
/// part in 1e9 of the calibrated value is snapped to it exactly; otherwise
/// the calibrated value is inserted, growing the list by one.
std::vector<double> evenly_spaced_values(double min, double max, std::size_t k,
                                         double calibrated);

/// Total perturbed distributions a sweep generates: sum of values-list
/// lengths over all parameters.
std::size_t total_distributions(const std::vector<ParameterSpec>& params);

/// Results for one (parameter, value) pair across all outputs.
struct RobustnessEntry {
  std::string parameter;
  double value = 0.0;
  bool is_calibrated = false;
  std::map<std::string, AMeasureResult> a;  // a_measure(calibrated, perturbed)
  std::map<std::string, BoxplotSummary> boxplots;
};

struct RobustnessResult {
  std::vector<RobustnessEntry> entries;  // parameter-major, values ascending
  std::vector<std::string> outputs;
  std::size_t n_star_used = 0;
  std::size_t total_distributions = 0;
  std::vector<RunRecord> records;
};

struct SignificancePoint {
  double value;
  double a_hat;
  double a_scaled;
  SignificanceClass significance;
};

/// Extracts one parameter's curve for one output, ascending by value.
std::vector<SignificancePoint> significance_curve(const RobustnessResult& result,
                                                  const std::string& parameter,
                                                  const std::string& output);

struct RobustnessRunOptions {
  unsigned parallelism = 1;
  std::filesystem::path csv_file;
  SignificanceThresholds thresholds{};
  /// Calibrated values for declared simulator parameters that are not in the
  /// swept list; swept parameters contribute their own calibrated field.
  std::map<std::string, double> extra_calibrated;
};

/// One-at-a-time local perturbation study. For each parameter and each of its
/// values, generates n_star runs with every other parameter held calibrated,
/// then compares each perturbed distribution to the sweep's calibrated
/// distribution with the A-measure and summarizes it as a boxplot, per
/// output. Seeds derive from (parameter name, value, replicate), never from
/// list positions, so reordering parameters cannot change any result.
RobustnessResult run_robustness(const Simulator& sim, const std::vector<ParameterSpec>& params,
                                std::size_t n_star, const std::vector<std::string>& outputs,
                                std::uint64_t master_seed,
                                const RobustnessRunOptions& options = {});

}  // namespace absa
