#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>

namespace imdp {

/// Counter-based SplitMix64 generator.
///
/// Output n (n = 1, 2, ...) of the stream keyed by `key` is
///   mix64(key + n * 0x9E3779B97F4A7C15)
/// where mix64(z) applies
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   z =  z ^ (z >> 31)
/// with wrap-around 64-bit arithmetic. Substream i of seed s uses
/// key = mix64(s) + mix64(i + 1). Doubles are (x >> 11) * 2^-53.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : key_(seed) {}
  CounterRng(std::uint64_t seed, std::uint64_t substream)
      : key_(mix64(seed) + mix64(substream + 1)) {}

  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  static constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t next_u64() { return mix64(key_ + (++counter_) * kGamma); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform in (0, 1].
  double uniform_open0() { return 1.0 - uniform(); }

  /// Standard normal via Box-Muller (one output per call).
  double normal() {
    const double r = std::sqrt(-2.0 * std::log(uniform_open0()));
    return r * std::cos(2.0 * std::numbers::pi * uniform());
  }

  /// Index drawn from a discrete distribution by inverse CDF. Falls back to
  /// the last index with positive mass when rounding leaves u uncovered.
  template <typename Probs>
  std::size_t categorical(const Probs& p) {
    const double u = uniform();
    double acc = 0.0;
    std::size_t last = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] <= 0.0) continue;
      acc += p[i];
      last = i;
      if (u < acc) return i;
    }
    return last;
  }

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace imdp
