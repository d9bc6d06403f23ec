#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <set>
#include <vector>

#include "absa/distribution.hpp"
#include "absa/errors.hpp"
#include "absa/stats.hpp"
#include "support/reference.hpp"

using absa::a_measure;
using absa::boxplot_summary;
using absa::classify_significance;
using absa::cohen_d;
using absa::Distribution;
using absa::median;
using absa::pearson_r;
using absa::scale_a;
using absa::SignificanceClass;
using absa::SignificanceThresholds;

TEST_CASE("distribution construction validates samples") {
  CHECK_THROWS_AS(Distribution(std::vector<double>{}), absa::EmptyDistribution);
  CHECK_THROWS_AS(Distribution({1.0, std::numeric_limits<double>::quiet_NaN()}),
                  absa::NonFiniteSample);
  CHECK_THROWS_AS(Distribution({std::numeric_limits<double>::infinity()}),
                  absa::NonFiniteSample);
  const Distribution d{3.0, 1.0, 2.0};
  CHECK(d.size() == 3);
  CHECK(d.samples()[0] == 3.0);  // construction preserves order
}

TEST_CASE("a_measure on fully separated samples") {
  const auto r = a_measure(Distribution{5, 6, 7}, Distribution{1, 2, 3});
  CHECK(r.a_hat == 1.0);
  CHECK(r.a_scaled == 1.0);
  CHECK(r.significance == SignificanceClass::Large);
  CHECK(r.m == 3);
  CHECK(r.n == 3);
}

TEST_CASE("a_measure with ties matches the closed form") {
  // Pairs of {1,2,3} against {2,2,4}: two strict wins for the second sample
  // appear as losses here, two exact ties, so a_hat = (2*2 + 2) / (2*9) = 1/3.
  const auto r = a_measure(Distribution{1, 2, 3}, Distribution{2, 2, 4});
  CHECK(r.a_hat == 1.0 / 3.0);
  CHECK(r.a_scaled == 1.0 - 1.0 / 3.0);
  CHECK(r.significance == SignificanceClass::Large);
  CHECK(r.m == 3);
  CHECK(r.n == 3);
}

TEST_CASE("a_measure of a distribution against itself is exactly one half") {
  const auto r = a_measure(Distribution{1, 1, 2, 7}, Distribution{1, 1, 2, 7});
  CHECK(r.a_hat == 0.5);
  CHECK(r.a_scaled == 0.5);
  CHECK(r.significance == SignificanceClass::Small);
}

TEST_CASE("a_measure rejects non-finite samples via distribution validation") {
  CHECK_THROWS_AS(Distribution({1.0, std::nan("")}), absa::NonFiniteSample);
}

TEST_CASE("a_measure equals the pair-count oracle bit for bit") {
  std::mt19937_64 engine(20240901);
  for (int iter = 0; iter < 2000; ++iter) {
    const std::size_t m = 1 + engine() % 50;
    const std::size_t n = 1 + engine() % 50;
    const auto b = reference::tie_heavy_sample(engine, m);
    const auto c = reference::tie_heavy_sample(engine, n);
    const auto ab = a_measure(Distribution(b), Distribution(c));
    const auto ba = a_measure(Distribution(c), Distribution(b));
    REQUIRE(ab.a_hat == reference::a_measure_pair_count(b, c));
    // Complementarity and self-equality hold exactly, not approximately.
    REQUIRE(ab.a_hat + ba.a_hat == 1.0);
    REQUIRE(a_measure(Distribution(b), Distribution(b)).a_hat == 0.5);
    // Tie handling agrees with the stochastic-difference identity.
    const double delta = reference::stochastic_difference(b, c);
    REQUIRE(std::abs(ab.a_hat - (delta + 1.0) / 2.0) <= 1e-15);
  }
}

TEST_CASE("a_measure without ties reduces to the win fraction") {
  std::mt19937_64 engine(77);
  for (int iter = 0; iter < 200; ++iter) {
    const std::size_t m = 1 + engine() % 40;
    const std::size_t n = 1 + engine() % 40;
    auto b = reference::continuous_sample(engine, m);
    auto c = reference::continuous_sample(engine, n);
    std::set<double> all(b.begin(), b.end());
    all.insert(c.begin(), c.end());
    if (all.size() != m + n) continue;  // skip the astronomically unlikely tie
    std::size_t wins = 0;
    for (double bv : b)
      for (double cv : c)
        if (bv > cv) ++wins;
    const auto r = a_measure(Distribution(b), Distribution(c));
    REQUIRE(r.a_hat == static_cast<double>(wins) /
                           (static_cast<double>(m) * static_cast<double>(n)));
  }
}

TEST_CASE("shifting one sample upward never lowers the a_measure") {
  std::mt19937_64 engine(4242);
  for (int iter = 0; iter < 300; ++iter) {
    const auto b = reference::tie_heavy_sample(engine, 1 + engine() % 30);
    const auto c = reference::tie_heavy_sample(engine, 1 + engine() % 30);
    const double shift = 0.25 * (1.0 + static_cast<double>(engine() % 8));
    auto lifted = b;
    for (double& v : lifted) v += shift;
    const double base = a_measure(Distribution(b), Distribution(c)).a_hat;
    const double up = a_measure(Distribution(lifted), Distribution(c)).a_hat;
    REQUIRE(up >= base);
  }
}

TEST_CASE("scale_a folds onto the upper half interval") {
  CHECK(scale_a(0.5) == 0.5);
  CHECK(scale_a(1.0) == 1.0);
  CHECK(scale_a(0.0) == 1.0);
  CHECK(scale_a(1.0 / 3.0) == 1.0 - 1.0 / 3.0);
  CHECK_THROWS_AS(scale_a(-0.1), absa::OutOfRange);
  CHECK_THROWS_AS(scale_a(1.1), absa::OutOfRange);
  CHECK_THROWS_AS(scale_a(std::nan("")), absa::OutOfRange);
}

TEST_CASE("scale_a is exactly symmetric around one half") {
  std::mt19937_64 engine(11);
  for (int iter = 0; iter < 10000; ++iter) {
    const double a = static_cast<double>(engine() >> 11) * 0x1.0p-53;
    REQUIRE(scale_a(a) == scale_a(1.0 - a));
  }
}

TEST_CASE("significance classes follow the bucket boundaries") {
  CHECK(classify_significance(0.5) == SignificanceClass::Small);
  CHECK(classify_significance(0.56) == SignificanceClass::Small);
  CHECK(classify_significance(0.57) == SignificanceClass::Medium);
  CHECK(classify_significance(0.64) == SignificanceClass::Medium);
  CHECK(classify_significance(0.6400000001) == SignificanceClass::Large);
  CHECK(classify_significance(0.71) == SignificanceClass::Large);
  CHECK(classify_significance(0.9) == SignificanceClass::Large);
  CHECK(classify_significance(1.0) == SignificanceClass::Large);
  CHECK_THROWS_AS(classify_significance(0.4999), absa::OutOfRange);
  CHECK_THROWS_AS(classify_significance(1.0001), absa::OutOfRange);
  CHECK_THROWS_AS(classify_significance(std::nan("")), absa::OutOfRange);

  const SignificanceThresholds wide{0.6, 0.8};
  CHECK(classify_significance(0.59, wide) == SignificanceClass::Small);
  CHECK(classify_significance(0.7, wide) == SignificanceClass::Medium);
  CHECK(classify_significance(0.81, wide) == SignificanceClass::Large);

  CHECK(absa::to_string(SignificanceClass::Small) == "small");
  CHECK(absa::to_string(SignificanceClass::Medium) == "medium");
  CHECK(absa::to_string(SignificanceClass::Large) == "large");
}

TEST_CASE("cohen_d from summary statistics") {
  CHECK(cohen_d(10.0, 10.0, 2.0) == 0.0);
  CHECK(cohen_d(1.0, 0.0, 1.0) == 1.0);
  CHECK(cohen_d(0.8, 0.0, 1.0) == 0.8);
  CHECK(cohen_d(0.0, 1.0, 1.0) == 1.0);  // direction is discarded
  CHECK_THROWS_AS(cohen_d(1.0, 0.0, 0.0), absa::NonPositiveSigma);
  CHECK_THROWS_AS(cohen_d(1.0, 0.0, -1.0), absa::NonPositiveSigma);
}

TEST_CASE("pearson_r on exact linear relationships") {
  const std::vector<double> x = {1, 2, 3};
  const std::vector<double> doubled = {2, 4, 6};
  const std::vector<double> reversed = {3, 2, 1};
  CHECK(pearson_r(x, doubled) == 1.0);
  CHECK(pearson_r(x, reversed) == -1.0);
}

TEST_CASE("pearson_r frozen value and oracle agreement") {
  const std::vector<double> x = {1, 2, 3, 4};
  const std::vector<double> y = {1, 3, 2, 5};
  const double r = pearson_r(x, y);
  CHECK(r == 0.83152184062029988);
  CHECK(std::abs(r - reference::pearson_two_pass(x, y)) <= 1e-12);
}

TEST_CASE("pearson_r input validation") {
  const std::vector<double> x = {1, 2, 3};
  const std::vector<double> shorter = {1, 2};
  const std::vector<double> flat = {4, 4, 4};
  const std::vector<double> withnan = {1, std::nan(""), 3};
  CHECK_THROWS_AS(pearson_r(x, shorter), absa::LengthMismatch);
  CHECK_THROWS_AS(pearson_r(std::vector<double>{1}, std::vector<double>{2}),
                  absa::LengthMismatch);
  CHECK_THROWS_AS(pearson_r(x, flat), absa::DegenerateVariance);
  CHECK_THROWS_AS(pearson_r(flat, x), absa::DegenerateVariance);
  CHECK_THROWS_AS(pearson_r(x, withnan), absa::NonFiniteSample);
}

TEST_CASE("pearson_r symmetry and affine behavior") {
  std::mt19937_64 engine(555);
  for (int iter = 0; iter < 300; ++iter) {
    const std::size_t n = 3 + engine() % 40;
    auto x = reference::continuous_sample(engine, n);
    auto y = reference::continuous_sample(engine, n);
    const double base = pearson_r(x, y);
    REQUIRE(pearson_r(y, x) == base);
    REQUIRE(std::abs(base) <= 1.0 + 1e-12);

    const double a = 0.5 + static_cast<double>(engine() % 5);
    const double b = static_cast<double>(engine() % 7) - 3.0;
    auto scaled = x;
    for (double& v : scaled) v = a * v + b;
    REQUIRE(std::abs(pearson_r(scaled, y) - base) <= 1e-12);

    auto negated = x;
    for (double& v : negated) v = -v;
    REQUIRE(pearson_r(negated, y) == -base);
  }
}

TEST_CASE("boxplot of a single sample collapses to that value") {
  const auto b = boxplot_summary(Distribution{5.0});
  CHECK(b.median == 5.0);
  CHECK(b.q1 == 5.0);
  CHECK(b.q3 == 5.0);
  CHECK(b.whisker_low == 5.0);
  CHECK(b.whisker_high == 5.0);
  CHECK(b.outliers.empty());
}

TEST_CASE("boxplot quartiles interpolate order statistics") {
  const auto b = boxplot_summary(Distribution{1, 2, 3, 4});
  CHECK(b.median == 2.5);
  CHECK(b.q1 == 1.75);
  CHECK(b.q3 == 3.25);
  CHECK(b.whisker_low == 1.0);
  CHECK(b.whisker_high == 4.0);
  CHECK(b.outliers.empty());
}

TEST_CASE("boxplot flags samples beyond the fences as outliers") {
  const auto b = boxplot_summary(Distribution{1, 2, 3, 4, 100});
  CHECK(b.median == 3.0);
  CHECK(b.q1 == 2.0);
  CHECK(b.q3 == 4.0);
  CHECK(b.whisker_low == 1.0);
  CHECK(b.whisker_high == 4.0);
  REQUIRE(b.outliers.size() == 1);
  CHECK(b.outliers[0] == 100.0);
}

TEST_CASE("boxplot whiskers never cross the box") {
  // The lowest non-outlying sample (1000) sits above q1, so the whisker is
  // clamped to the box edge instead of inverting.
  const auto b = boxplot_summary(Distribution{0, 1000, 1001, 1002});
  CHECK(b.median == 1000.5);
  CHECK(b.q1 == 750.0);
  CHECK(b.q3 == 1001.25);
  CHECK(b.whisker_low == 750.0);
  CHECK(b.whisker_high == 1002.0);
  REQUIRE(b.outliers.size() == 1);
  CHECK(b.outliers[0] == 0.0);
}

TEST_CASE("boxplot invariants on random data") {
  std::mt19937_64 engine(909);
  for (int iter = 0; iter < 500; ++iter) {
    const std::size_t n = 1 + engine() % 60;
    const auto samples = reference::tie_heavy_sample(engine, n);
    const Distribution d(samples);
    const auto b = boxplot_summary(d);
    REQUIRE(b.whisker_low <= b.q1);
    REQUIRE(b.q1 <= b.median);
    REQUIRE(b.median <= b.q3);
    REQUIRE(b.q3 <= b.whisker_high);
    REQUIRE(b.median == median(d));
    const double iqr = b.q3 - b.q1;
    const double lo = b.q1 - 1.5 * iqr;
    const double hi = b.q3 + 1.5 * iqr;
    for (double o : b.outliers) REQUIRE((o < lo || o > hi));
    std::size_t outside = 0;
    for (double s : samples)
      if (s < lo || s > hi) ++outside;
    REQUIRE(outside == b.outliers.size());
    REQUIRE(std::is_sorted(b.outliers.begin(), b.outliers.end()));
  }
}

TEST_CASE("median follows the interpolating quantile rule") {
  CHECK(median(Distribution{7.0}) == 7.0);
  CHECK(median(Distribution{1, 3, 2}) == 2.0);
  CHECK(median(Distribution{1, 2, 3, 4}) == 2.5);
  CHECK(median(Distribution{2, 1}) == 1.5);
}
