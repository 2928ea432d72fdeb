#pragma once

#include <cmath>
#include <cstdint>

namespace capinn::math {

// Splittable counter-based generator (SplitMix64 core). The integer path is
// bit-exact on every platform; gaussian() goes through libm and is only
// reproducible per platform/build.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n).
  uint64_t below(uint64_t n) { return next_u64() % n; }

  // Standard normal via Box-Muller.
  double gaussian() {
    double u1 = uniform();
    double u2 = uniform();
    if (u1 < 0x1.0p-60) u1 = 0x1.0p-60;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  // Independent child stream. Children of the same parent with distinct ids
  // do not overlap, and the parent stream is not advanced.
  Rng split(uint64_t child_id) const {
    uint64_t s = mix(state_ ^ 0xA02BDBF7BB3C0A7ULL);
    s = mix(s + mix(child_id + 0x9E3779B97F4A7C15ULL));
    return Rng(s);
  }

 private:
  static uint64_t mix(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  uint64_t state_;
};

}  // namespace capinn::math
