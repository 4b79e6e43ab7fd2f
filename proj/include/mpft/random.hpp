#pragma once

#include <cstdint>
#include <random>

namespace mpft {

/// Seeded random stream with platform-independent real draws.
///
/// std::uniform_real_distribution is implementation-defined, so reals are built
/// directly from the 53 high bits of mt19937_64, which the standard pins down.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Independent stream for a (seed, purpose, index) triple.
  static Rng derive(std::uint64_t seed, std::uint64_t purpose, std::uint64_t index);

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Index drawn from a discrete distribution given by non-negative weights.
  template <typename Weights>
  int categorical(const Weights& w, int n) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) total += w[i];
    double r = uniform() * total;
    for (int i = 0; i < n; ++i) {
      r -= w[i];
      if (r < 0.0) return i;
    }
    // rounding: fall back to the last index with positive weight
    for (int i = n - 1; i >= 0; --i)
      if (w[i] > 0.0) return i;
    return n - 1;
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace mpft
