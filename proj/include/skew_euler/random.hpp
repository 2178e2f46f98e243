#pragma once

#include <cstdint>
#include <random>

#include "skew_euler/grid.hpp"
#include "skew_euler/state.hpp"

namespace skew_euler {

/// Seeded generator with a platform-independent uniform mapping.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform(double lo, double hi) {
    const double u = static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }
  /// Magnitude in [lo, hi] with a random sign.
  double signed_magnitude(double lo, double hi) {
    const double m = uniform(lo, hi);
    return (eng_() & 1u) ? m : -m;
  }
  std::uint64_t bits() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

/// Random admissible state: |phi1|, |phi4| in [0.3, 2], momenta in [-2, 2].
inline SkewState random_state(Rng& rng) {
  return {rng.signed_magnitude(0.3, 2.0), rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0),
          rng.signed_magnitude(0.3, 2.0)};
}

inline SkewState random_gradient(Rng& rng) {
  return {rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0),
          rng.uniform(-3.0, 3.0)};
}

/// Nodewise independent (non-smooth) field with phi1, phi4 in [0.5, 1.5].
inline Field random_field(std::size_t nx, std::size_t ny, Rng& rng) {
  Field f(nx, ny);
  for (std::size_t n = 0; n < f.size(); ++n)
    f.set(n, {rng.uniform(0.5, 1.5), rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5),
              rng.uniform(0.5, 1.5)});
  return f;
}

}  // namespace skew_euler
