#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "skew_euler/errors.hpp"
#include "skew_euler/matrices.hpp"
#include "skew_euler/state.hpp"

namespace skew_euler {

/// Outward unit normal of a boundary.
struct UnitNormal {
  double nx = 1.0;
  double ny = 0.0;
};

inline UnitNormal make_normal(double nx, double ny) {
  if (!(std::abs(nx * nx + ny * ny - 1.0) <= 1e-14))
    throw NormalizationError("normal is not of unit length");
  return {nx, ny};
}

inline void require_unit(const UnitNormal& n) { (void)make_normal(n.nx, n.ny); }

/// (phi1, phi1 u_n, phi1 u_t, phi4) with u_n = nx u + ny v and u_t = -ny u + nx v.
struct RotatedState {
  double phi1 = 1.0;
  double phi1_un = 0.0;
  double phi1_ut = 0.0;
  double phi4 = 1.0;

  Vec4 vec() const { return {phi1, phi1_un, phi1_ut, phi4}; }
  double un() const { return phi1_un / phi1; }
  double ut() const { return phi1_ut / phi1; }
};

inline RotatedState rotate(const SkewState& s, const UnitNormal& n) {
  require_nonvacuum(s);
  require_unit(n);
  return {s.phi1, n.nx * s.phi2 + n.ny * s.phi3, -n.ny * s.phi2 + n.nx * s.phi3, s.phi4};
}

inline double normal_velocity(const SkewState& s, const UnitNormal& n) {
  require_nonvacuum(s);
  return (n.nx * s.phi2 + n.ny * s.phi3) / s.phi1;
}

/// Symmetric boundary contraction matrix; Phi^T M Phi = Phi^T (nx At + ny Bt) Phi at zero free parameters.
inline Mat4 boundary_matrix(const SkewState& s, const UnitNormal& n, const GasModel& g) {
  const double un = normal_velocity(s, n);
  const double r = (g.gamma - 1.0) * s.phi4 / s.phi1;
  const double b2 = g.beta2();
  Mat4 m;
  m << g.alpha2 * un, 0, 0, 0,
       0, b2 * un, 0, n.nx * r,
       0, 0, b2 * un, n.ny * r,
       0, n.nx * r, n.ny * r, (2.0 - g.gamma) * un;
  return m;
}

/// The same contraction in the normal/tangential frame, acting on RotatedState::vec().
inline Mat4 rotated_boundary_matrix(const SkewState& s, const UnitNormal& n, const GasModel& g) {
  const double un = normal_velocity(s, n);
  const double r = (g.gamma - 1.0) * s.phi4 / s.phi1;
  const double b2 = g.beta2();
  Mat4 m;
  m << g.alpha2 * un, 0, 0, 0,
       0, b2 * un, 0, r,
       0, 0, b2 * un, 0,
       0, r, 0, (2.0 - g.gamma) * un;
  return m;
}

/// Phi^T F Phi where F collects the free-parameter terms of nx At + ny Bt. Identically zero.
inline double free_param_contraction(const SkewState& s, const UnitNormal& n,
                                     const FreeParams& fp) {
  const double c2 = n.nx * fp.a12;
  const double c3 = n.ny * fp.b13;
  const double c4 = n.nx * fp.a14 + n.ny * fp.b14;
  Mat4 f;
  f << 0, c2 * s.phi2, c3 * s.phi3, c4 * s.phi4,
       -2 * c2 * s.phi2, c2 * s.phi1, 0, 0,
       -2 * c3 * s.phi3, 0, c3 * s.phi1, 0,
       -2 * c4 * s.phi4, 0, 0, c4 * s.phi1;
  const Vec4 phi = s.vec();
  return phi.dot(f * phi);
}

/// Magnitude of the individual terms of free_param_contraction.
inline double free_param_contraction_scale(const SkewState& s, const UnitNormal& n,
                                           const FreeParams& fp) {
  const double c = std::max({std::abs(n.nx * fp.a12), std::abs(n.ny * fp.b13),
                             std::abs(n.nx * fp.a14 + n.ny * fp.b14)});
  const double m = s.vec().cwiseAbs().maxCoeff();
  return 2.0 * c * m * m * m;
}

/// u_n (alpha2 phi1^2 + (gamma-1)/2 (phi2^2 + phi3^2) + gamma phi4^2).
inline double expanded_contraction(const SkewState& s, const UnitNormal& n, const GasModel& g) {
  const double un = normal_velocity(s, n);
  return un * (g.alpha2 * s.phi1 * s.phi1 + g.beta2() * (s.phi2 * s.phi2 + s.phi3 * s.phi3) +
               g.gamma * s.phi4 * s.phi4);
}

inline void require_gamma_range(const GasModel& g) {
  if (!(g.gamma > 1.0 && g.gamma < 2.0))
    throw ModelError("eigenvalue analysis needs 1 < gamma < 2");
}

/// Threshold normal Mach number b = sqrt(2 (gamma-1) / (gamma (2-gamma))).
inline double mach_threshold(const GasModel& g) {
  require_gamma_range(g);
  return std::sqrt(2.0 * (g.gamma - 1.0) / (g.gamma * (2.0 - g.gamma)));
}

using BoundaryEigenvalues = std::array<std::complex<double>, 4>;

/// Closed-form spectrum of the rotated contraction matrix:
///   l1 = alpha2 un, l2 = (gamma-1)/2 un,
///   l3,4 = (3-gamma)/4 un +- sqrt(((3-gamma)/4 un)^2 - a^2 c^2 (Mn^2 - b^2)).
/// l4 is computed from l3 l4 = a^2 c^2 (Mn^2 - b^2) to keep its sign exact near Mn = b.
inline BoundaryEigenvalues closed_form_eigenvalues(double un, double c, const GasModel& g) {
  require_gamma_range(g);
  if (!(c > 0.0)) throw ModelError("closed_form_eigenvalues: sound speed must be positive");
  const double gm = g.gamma;
  const double a2 = 0.5 * (gm - 1.0) * (2.0 - gm);
  const double mean = 0.25 * (3.0 - gm) * un;
  // a^2 c^2 (Mn^2 - b^2) = a^2 un^2 - (gamma-1)^2 c^2 / gamma
  const double prod = a2 * un * un - (gm - 1.0) * (gm - 1.0) * c * c / gm;
  const double disc = mean * mean - prod;
  BoundaryEigenvalues l;
  l[0] = g.alpha2 * un;
  l[1] = 0.5 * (gm - 1.0) * un;
  if (disc >= 0.0) {
    const double s = std::sqrt(disc);
    // larger-magnitude root first, the other from the product
    const double big = mean >= 0.0 ? mean + s : mean - s;
    const double small = big != 0.0 ? prod / big : 0.0;
    if (mean >= 0.0) {
      l[2] = big;
      l[3] = small;
    } else {
      l[2] = small;
      l[3] = big;
    }
  } else {
    const double s = std::sqrt(-disc);
    l[2] = {mean, s};
    l[3] = {mean, -s};
  }
  return l;
}

struct BcRegimeReport {
  double un = 0.0;
  double Mn = 0.0;
  double b = 0.0;
  BoundaryEigenvalues eigenvalues{};
  std::array<int, 4> eigenvalue_signs{};  // sign of the real part
  int eig_count_negative = 0;             // conditions suggested by the eigenvalue count
  int nonlinear_bc_needed = 0;            // conditions needed by the nonlinear contraction
  bool complex_pair = false;
};

/// Boundary-condition count for a boundary state: eigenvalue verdict plus the
/// nonlinear verdict (none needed for un >= 0 since the contraction is un times a
/// positive quantity; for inflow the eigenvalue count is reported).
inline BcRegimeReport required_bc_count(double un, double c, const GasModel& g) {
  BcRegimeReport r;
  r.un = un;
  r.Mn = un / c;
  r.b = mach_threshold(g);
  r.eigenvalues = closed_form_eigenvalues(un, c, g);
  for (std::size_t k = 0; k < 4; ++k) {
    const double re = r.eigenvalues[k].real();
    r.eigenvalue_signs[k] = re > 0.0 ? 1 : (re < 0.0 ? -1 : 0);
    if (re < 0.0) ++r.eig_count_negative;
    if (r.eigenvalues[k].imag() != 0.0) r.complex_pair = true;
  }
  r.nonlinear_bc_needed = un >= 0.0 ? 0 : r.eig_count_negative;
  return r;
}

struct SpectrumComparison {
  double distance = 0.0;  // max |closed form - numerical| after matching
  double scale = 0.0;     // max |lambda|
  double relative() const { return distance / std::max(scale, 1e-300); }
};

namespace detail {
inline bool complex_less(const std::complex<double>& a, const std::complex<double>& b) {
  return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
}
}  // namespace detail

/// Compares the closed forms with a general (non-symmetric) eigensolver applied
/// to the rotated contraction matrix.
inline SpectrumComparison eigenvalue_crosscheck(const SkewState& s, const UnitNormal& n,
                                                const GasModel& g) {
  const Mat4 m = rotated_boundary_matrix(s, n, g);
  Eigen::EigenSolver<Eigen::Matrix4d> es(m, false);
  BoundaryEigenvalues numeric;
  for (int k = 0; k < 4; ++k) numeric[static_cast<std::size_t>(k)] = es.eigenvalues()[k];
  BoundaryEigenvalues closed =
      closed_form_eigenvalues(normal_velocity(s, n), sound_speed(s, g), g);
  std::sort(numeric.begin(), numeric.end(), detail::complex_less);
  std::sort(closed.begin(), closed.end(), detail::complex_less);
  SpectrumComparison out;
  for (std::size_t k = 0; k < 4; ++k) {
    out.distance = std::max(out.distance, std::abs(numeric[k] - closed[k]));
    out.scale = std::max({out.scale, std::abs(numeric[k]), std::abs(closed[k])});
  }
  return out;
}

/// Local speed used to scale the wall penalty: (gamma-1) |phi4/phi1|.
inline double wall_penalty_scale(const SkewState& s, const GasModel& g) {
  return (g.gamma - 1.0) * std::abs(s.phi4 / s.phi1);
}

/// Dissipative wall term -sigma s (phi1 u_n) (0, nx, ny, 0), before division by the
/// boundary quadrature weight. Its energy contribution 2 Phi^T P g equals
/// -2 sigma s beta2 (phi1 u_n)^2 <= 0, and it vanishes when u_n = 0.
inline Vec4 wall_sat_penalty(const SkewState& s, const UnitNormal& n, const GasModel& g,
                             double sigma) {
  require_nonvacuum(s);
  const double mflux = n.nx * s.phi2 + n.ny * s.phi3;  // phi1 u_n
  const double k = -sigma * wall_penalty_scale(s, g) * mflux;
  return {0.0, k * n.nx, k * n.ny, 0.0};
}

/// Wall term (u_n / 2) (phi1, phi2, phi3, gamma phi4). Its energy contribution
/// 2 Phi^T P g equals the boundary contraction, so adding it removes the energy
/// flux through the wall; it vanishes when u_n = 0.
inline Vec4 wall_flux_cancel(const SkewState& s, const UnitNormal& n, const GasModel& g) {
  const double un = normal_velocity(s, n);
  return 0.5 * un * Vec4(s.phi1, s.phi2, s.phi3, g.gamma * s.phi4);
}

}  // namespace skew_euler
