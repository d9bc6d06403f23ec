#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <utility>
#include <vector>

#include "absa/errors.hpp"

namespace absa {

/// A non-empty list of finite real samples, typically one simulation output
/// collected over repeated runs. Validated once at construction; immutable
/// afterwards, so it is safe to share across threads.
class Distribution {
 public:
  explicit Distribution(std::vector<double> samples) : samples_(std::move(samples)) {
    if (samples_.empty()) throw EmptyDistribution("distribution has no samples");
    for (double v : samples_) {
      if (!std::isfinite(v)) throw NonFiniteSample("distribution contains a NaN or infinite sample");
    }
  }

  Distribution(std::initializer_list<double> samples)
      : Distribution(std::vector<double>(samples)) {}

  const std::vector<double>& samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }

 private:
  std::vector<double> samples_;
};

}  // namespace absa
