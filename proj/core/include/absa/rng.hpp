#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace absa {

/// Deterministic random source. Wraps std::mt19937_64, whose output sequence
/// the C++ standard pins exactly, and exposes only hand-rolled derivations:
/// the standard library's distribution templates and std::shuffle are
/// implementation-defined, so relying on them would let golden values drift
/// across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound) by rejection sampling; bound >= 1.
  std::uint64_t below(std::uint64_t bound);

  /// Fisher-Yates shuffle using below().
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

/// Stable per-run seed derivation: SHA-256 over the master seed, a campaign
/// name, an ordered list of context labels, and a run index, truncated to 64
/// bits. Identical inputs always give identical seeds on every platform, and
/// distinct run indices are collision-free in practice, so adding or removing
/// runs elsewhere in a campaign never perturbs an existing run.
std::uint64_t derive_seed(std::uint64_t master_seed, std::string_view campaign,
                          std::span<const std::string> context, std::uint64_t run_index);

}  // namespace absa
