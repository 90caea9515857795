#pragma once

#include <cmath>
#include <cstdint>

#include "diffpose/geometry.hpp"

namespace diffpose {

/// Deterministic 64-bit generator (splitmix64). Used everywhere instead of
/// <random> distributions so results are identical across standard libraries.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  /// Derives an independent stream, e.g. per optimizer instance or trial.
  static Rng derive(uint64_t seed, uint64_t stream) {
    Rng r(seed ^ (0x9e3779b97f4a7c15ULL + stream * 0xbf58476d1ce4e5b9ULL));
    r.next_u64();
    return r;
  }

  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0,1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double gaussian() {
    // Box-Muller; u1 kept away from 0.
    const double u1 = std::max(uniform(), 0x1.0p-53);
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  Vec3 unit_vector() {
    for (;;) {
      const Vec3 v(gaussian(), gaussian(), gaussian());
      const double n = v.norm();
      if (n > 1e-12) return v / n;
    }
  }

 private:
  uint64_t state_;
};

}  // namespace diffpose
