#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "absa/distribution.hpp"

namespace absa {

enum class SignificanceClass { Small, Medium, Large };

std::string to_string(SignificanceClass c);

/// Boundaries of the significance buckets applied to a scaled A-measure:
/// Small on [0.5, small_max], Medium on (small_max, medium_max], Large above.
/// Defaults are Cohen's classic cutoffs.
struct SignificanceThresholds {
  double small_max = 0.56;
  double medium_max = 0.64;
};

struct AMeasureResult {
  double a_hat;     // P(B > C) + 0.5 P(B = C), in [0,1]
  double a_scaled;  // a_hat folded onto [0.5,1]
  SignificanceClass significance;
  std::size_t m;  // |B|
  std::size_t n;  // |C|
};

/// Vargha-Delaney A-measure of distribution b against distribution c:
/// the probability that a random sample of b exceeds a random sample of c,
/// counting ties as one half. Internally rank-based, but the result is
/// bit-identical to exhaustive pair counting: the comparison reduces to an
/// exact integer numerator divided once by 2*m*n. Consequences that hold
/// exactly, not just approximately: a_measure(b,b).a_hat == 0.5, and
/// a_measure(b,c).a_hat + a_measure(c,b).a_hat == 1.
AMeasureResult a_measure(const Distribution& b, const Distribution& c,
                         const SignificanceThresholds& thresholds = {});

/// Folds a raw A-measure onto [0.5, 1], discarding direction.
double scale_a(double a_hat);

/// Buckets a scaled A-measure. Values above the historical 0.71 cutoff are
/// still Large; the classification is total on [0.5, 1].
SignificanceClass classify_significance(double a_scaled,
                                        const SignificanceThresholds& thresholds = {});

/// Cohen's d for known means and standard deviation: |mean_b - mean_c| / sigma.
double cohen_d(double mean_b, double mean_c, double sigma);

/// Pearson product-moment correlation of two paired samples.
/// Requires equal lengths >= 2 and nonzero variance on both sides.
double pearson_r(std::span<const double> x, std::span<const double> y);

struct BoxplotSummary {
  double median;
  double q1;
  double q3;
  double whisker_low;   // most extreme sample >= q1 - 1.5 IQR
  double whisker_high;  // most extreme sample <= q3 + 1.5 IQR
  std::vector<double> outliers;
};

/// Five-number summary plus outliers. Quartiles use linear interpolation of
/// order statistics (index h = (k-1)p, interpolate between floor and ceil),
/// so values are stable across implementations.
BoxplotSummary boxplot_summary(const Distribution& d);

/// Median by the same quantile method as boxplot_summary.
double median(const Distribution& d);

}  // namespace absa
