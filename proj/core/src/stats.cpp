#include "absa/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "absa/errors.hpp"

namespace absa {

std::string to_string(SignificanceClass c) {
  switch (c) {
    case SignificanceClass::Small: return "small";
    case SignificanceClass::Medium: return "medium";
    case SignificanceClass::Large: return "large";
  }
  return "small";
}

namespace {

void validate_thresholds(const SignificanceThresholds& t) {
  bool ok = t.small_max > 0.5 && t.small_max < t.medium_max && t.medium_max <= 1.0;
  if (!ok) throw InvalidSpec("significance thresholds must be strictly increasing within (0.5, 1]");
}

}  // namespace

AMeasureResult a_measure(const Distribution& b, const Distribution& c,
                         const SignificanceThresholds& thresholds) {
  validate_thresholds(thresholds);
  const std::size_t m = b.size();
  const std::size_t n = c.size();

  // Tag each sample with its origin and sort the pooled values. Ties are
  // literal bitwise-equal doubles; simulation outputs are raw values, so
  // exact equality is the intended tie notion.
  struct Tagged { double value; bool from_b; };
  std::vector<Tagged> pool;
  pool.reserve(m + n);
  for (double v : b.samples()) pool.push_back({v, true});
  for (double v : c.samples()) pool.push_back({v, false});
  std::sort(pool.begin(), pool.end(),
            [](const Tagged& x, const Tagged& y) { return x.value < y.value; });

  // Accumulate twice the midrank sum of b over the pooled order, an exact
  // integer even when tie groups produce half-integer midranks. The standard
  // rank-sum identity then gives
  //   2*R_b - m(m+1) = 2*#(b>c) + #(b=c),
  // so one final division yields the Heaviside pair-count value exactly, bit
  // for bit equal to O(mn) enumeration.
  std::uint64_t twice_rank_sum_b = 0;
  std::size_t i = 0;
  while (i < pool.size()) {
    std::size_t j = i;
    std::size_t b_in_group = 0;
    while (j < pool.size() && pool[j].value == pool[i].value) {
      if (pool[j].from_b) ++b_in_group;
      ++j;
    }
    // Ranks i+1 .. j share midrank (i+1+j)/2.
    twice_rank_sum_b += static_cast<std::uint64_t>(b_in_group) * (i + j + 1);
    i = j;
  }

  const std::uint64_t numerator =
      twice_rank_sum_b - static_cast<std::uint64_t>(m) * (m + 1);
  const double a_hat = static_cast<double>(numerator) /
                       (2.0 * static_cast<double>(m) * static_cast<double>(n));

  AMeasureResult r;
  r.a_hat = a_hat;
  r.a_scaled = scale_a(a_hat);
  r.significance = classify_significance(r.a_scaled, thresholds);
  r.m = m;
  r.n = n;
  return r;
}

double scale_a(double a_hat) {
  if (!(a_hat >= 0.0 && a_hat <= 1.0)) throw OutOfRange("a_hat must lie in [0,1]");
  return a_hat >= 0.5 ? a_hat : 1.0 - a_hat;
}

SignificanceClass classify_significance(double a_scaled, const SignificanceThresholds& thresholds) {
  validate_thresholds(thresholds);
  if (!(a_scaled >= 0.5 && a_scaled <= 1.0)) throw OutOfRange("a_scaled must lie in [0.5,1]");
  if (a_scaled <= thresholds.small_max) return SignificanceClass::Small;
  if (a_scaled <= thresholds.medium_max) return SignificanceClass::Medium;
  return SignificanceClass::Large;
}

double cohen_d(double mean_b, double mean_c, double sigma) {
  if (!std::isfinite(mean_b) || !std::isfinite(mean_c))
    throw NonFiniteSample("cohen_d requires finite means");
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw NonPositiveSigma("cohen_d requires sigma > 0");
  return std::abs(mean_b - mean_c) / sigma;
}

namespace {

// Kahan-compensated sum, so correlation accuracy does not depend on input
// length or ordering.
class CompensatedSum {
 public:
  void add(double v) {
    double y = v - c_;
    double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

}  // namespace

double pearson_r(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw LengthMismatch("pearson_r requires equally long inputs");
  if (x.size() < 2)
    throw LengthMismatch("pearson_r requires at least 2 paired samples");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i]))
      throw NonFiniteSample("pearson_r requires finite samples");
  }

  const double n = static_cast<double>(x.size());
  CompensatedSum sx, sy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx.add(x[i]);
    sy.add(y[i]);
  }
  // Means by correctly rounded division: when the sums are integers divided
  // evenly by the length, the means are exact, which keeps integer-valued
  // collinear inputs at exactly +/-1 below.
  const double mean_x = sx.value() / n;
  const double mean_y = sy.value() / n;

  CompensatedSum sxy, sxx, syy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mean_x;
    const double dy = y[i] - mean_y;
    sxy.add(dx * dy);
    sxx.add(dx * dx);
    syy.add(dy * dy);
  }
  if (sxx.value() == 0.0) throw DegenerateVariance("pearson_r: x has zero variance");
  if (syy.value() == 0.0) throw DegenerateVariance("pearson_r: y has zero variance");

  // sqrt of the product (not the product of sqrts) keeps collinear inputs at
  // exactly +/-1 whenever the deviations satisfy dy == b * dx exactly: then
  // sxy == b * sxx and syy == b * b * sxx term by term, and the square root
  // of the rounded perfect square recovers |b| * sxx exactly. That holds for
  // power-of-two slopes over any data and for integer data with exact means.
  return sxy.value() / std::sqrt(sxx.value() * syy.value());
}

namespace {

// Quantile by linear interpolation of order statistics: h = (k-1)p.
double quantile_sorted(const std::vector<double>& s, double p) {
  const double h = static_cast<double>(s.size() - 1) * p;
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = static_cast<std::size_t>(std::ceil(h));
  return s[lo] + (h - static_cast<double>(lo)) * (s[hi] - s[lo]);
}

}  // namespace

BoxplotSummary boxplot_summary(const Distribution& d) {
  std::vector<double> s = d.samples();
  std::sort(s.begin(), s.end());

  BoxplotSummary box;
  box.median = quantile_sorted(s, 0.5);
  box.q1 = quantile_sorted(s, 0.25);
  box.q3 = quantile_sorted(s, 0.75);

  const double iqr = box.q3 - box.q1;
  const double fence_low = box.q1 - 1.5 * iqr;
  const double fence_high = box.q3 + 1.5 * iqr;

  // Whiskers reach the most extreme samples inside the fences, clamped to the
  // box edges so a sparse tail can never push a whisker past its quartile.
  box.whisker_low = box.q1;
  box.whisker_high = box.q3;
  for (double v : s) {
    if (v >= fence_low) {
      box.whisker_low = std::min(box.whisker_low, v);
      break;
    }
  }
  for (auto it = s.rbegin(); it != s.rend(); ++it) {
    if (*it <= fence_high) {
      box.whisker_high = std::max(box.whisker_high, *it);
      break;
    }
  }
  for (double v : s) {
    if (v < fence_low || v > fence_high) box.outliers.push_back(v);
  }
  return box;
}

double median(const Distribution& d) {
  std::vector<double> s = d.samples();
  std::sort(s.begin(), s.end());
  return quantile_sorted(s, 0.5);
}

}  // namespace absa
