#pragma once

#include <cstdint>
#include <random>

namespace radial {

// Deterministic, platform-independent draws: mt19937_64 is pinned by the
// standard and we avoid std::*_distribution (whose output is
// implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform01(); }
  int uniform_int(int a, int b) {  // inclusive ends
    return a + static_cast<int>(eng_() % static_cast<std::uint64_t>(b - a + 1));
  }
  double sign() { return uniform01() < 0.5 ? -1.0 : 1.0; }
  // Magnitude in [lo, hi] with random sign.
  double signed_away_from_zero(double lo, double hi) { return sign() * uniform(lo, hi); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace radial
