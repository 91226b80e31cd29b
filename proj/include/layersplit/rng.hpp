#pragma once

#include <cmath>
#include <cstdint>

namespace layersplit {

/// Counter-based generator: SplitMix64 applied to (key + counter * gamma).
///
/// A stream is identified by a key derived from any number of 64-bit words
/// (seed, level, iteration, pixel index, ...), so every pixel owns an
/// independent stream and results never depend on evaluation order.
class CounterRng {
 public:
  explicit constexpr CounterRng(std::uint64_t key) : key_(mix(key)) {}

  /// Derives a child stream; split(a).split(b) differs from split(b).split(a).
  constexpr CounterRng split(std::uint64_t word) const {
    return CounterRng(mix(key_ ^ mix(word + kGamma)), 0);
  }

  constexpr std::uint64_t next() { return mix(key_ + (++counter_) * kGamma); }

  /// Uniform integer in [0, n). Rejection keeps it unbiased.
  std::uint64_t below(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
      v = next();
    } while (v >= limit);
    return v % n;
  }

  /// Uniform integer in [lo, hi].
  std::int64_t range(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(
                    below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller (one sample per call).
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(6.283185307179586476925 * u2);
  }

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  constexpr CounterRng(std::uint64_t raw_key, int) : key_(raw_key) {}

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace layersplit
