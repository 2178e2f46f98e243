#pragma once

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "skew_euler/errors.hpp"

namespace skew_euler {

/// Below this |phi1| the node is treated as vacuum.
inline constexpr double kVacuumThreshold = 1e-13;

/// Primitive variables (rho, u, v, p).
struct PhysicalState {
  double rho = 1.0;
  double u = 0.0;
  double v = 0.0;
  double p = 1.0;

  friend bool operator==(const PhysicalState&, const PhysicalState&) = default;
};

/// Square-root variables (sqrt(rho), sqrt(rho) u, sqrt(rho) v, sqrt(p)).
///
/// Only the squares enter rho and p, so the state is meaningful for any sign
/// of phi1 and phi4. All matrix assembly divides by phi1.
struct SkewState {
  double phi1 = 1.0;
  double phi2 = 0.0;
  double phi3 = 0.0;
  double phi4 = 1.0;

  double operator[](int k) const {
    switch (k) {
      case 0: return phi1;
      case 1: return phi2;
      case 2: return phi3;
      default: return phi4;
    }
  }
  double& operator[](int k) {
    switch (k) {
      case 0: return phi1;
      case 1: return phi2;
      case 2: return phi3;
      default: return phi4;
    }
  }

  Eigen::Vector4d vec() const { return {phi1, phi2, phi3, phi4}; }
  static SkewState from_vec(const Eigen::Vector4d& x) {
    return {x[0], x[1], x[2], x[3]};
  }

  friend bool operator==(const SkewState&, const SkewState&) = default;
};

/// Ideal gas plus the free norm weight alpha2.
///
/// The remaining norm weights are fixed by gamma: beta2 = theta2 = (gamma - 1) / 2.
struct GasModel {
  double gamma = 1.4;
  double alpha2 = 1.0;

  double beta2() const { return 0.5 * (gamma - 1.0); }
  double theta2() const { return 0.5 * (gamma - 1.0); }

  /// Throws ModelError unless gamma > 1 and alpha2 > 0.
  void validate() const {
    if (!(gamma > 1.0) || !std::isfinite(gamma))
      throw ModelError("gamma must be > 1 (norm degenerates at gamma = 1), got " +
                       std::to_string(gamma));
    if (!(alpha2 > 0.0) || !std::isfinite(alpha2))
      throw ModelError("alpha2 must be > 0, got " + std::to_string(alpha2));
  }

  friend bool operator==(const GasModel&, const GasModel&) = default;
};

inline void require_nonvacuum(const SkewState& s) {
  if (!(std::abs(s.phi1) >= kVacuumThreshold))
    throw VacuumError("vacuum state: |phi1| = " + std::to_string(std::abs(s.phi1)));
}

inline SkewState to_skew(const PhysicalState& s) {
  if (!(s.rho > 0.0)) throw DomainError("to_skew: density must be positive");
  if (!(s.p > 0.0)) throw DomainError("to_skew: pressure must be positive");
  const double r = std::sqrt(s.rho);
  return {r, r * s.u, r * s.v, std::sqrt(s.p)};
}

inline PhysicalState from_skew(const SkewState& s) {
  if (s.phi1 == 0.0) throw VacuumError("from_skew: phi1 = 0");
  return {s.phi1 * s.phi1, s.phi2 / s.phi1, s.phi3 / s.phi1, s.phi4 * s.phi4};
}

/// c = sqrt(gamma p / rho) = sqrt(gamma) |phi4 / phi1|.
inline double sound_speed(const SkewState& s, const GasModel& g) {
  if (s.phi1 == 0.0) throw VacuumError("sound_speed: phi1 = 0");
  return std::sqrt(g.gamma) * std::abs(s.phi4 / s.phi1);
}

}  // namespace skew_euler
