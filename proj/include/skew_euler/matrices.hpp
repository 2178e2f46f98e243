#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "skew_euler/errors.hpp"
#include "skew_euler/state.hpp"

namespace skew_euler {

using Mat4 = Eigen::Matrix<double, 4, 4, Eigen::RowMajor>;
using Vec4 = Eigen::Vector4d;

enum class Direction { x, y };

/// Diagonal energy weight diag(alpha2, (gamma-1)/2, (gamma-1)/2, 1).
struct NormMatrix {
  Vec4 diag;

  Mat4 matrix() const { return diag.asDiagonal(); }
  Mat4 inverse() const { return diag.cwiseInverse().asDiagonal(); }
  double quadratic(const SkewState& s) const {
    return diag[0] * s.phi1 * s.phi1 + diag[1] * s.phi2 * s.phi2 +
           diag[2] * s.phi3 * s.phi3 + diag[3] * s.phi4 * s.phi4;
  }
};

inline NormMatrix norm_matrix(const GasModel& g) {
  g.validate();
  return {Vec4(g.alpha2, g.beta2(), g.theta2(), 1.0)};
}

/// Free coefficients of the skew matrices. They never enter the energy rate.
struct FreeParams {
  double a12 = 0.0;
  double a14 = 0.0;
  double b13 = 0.0;
  double b14 = 0.0;

  bool is_zero() const { return a12 == 0.0 && a14 == 0.0 && b13 == 0.0 && b14 == 0.0; }
  friend bool operator==(const FreeParams&, const FreeParams&) = default;
};

// Quasi-linear form  Phi_t + A Phi_x + B Phi_y = 0  in the square-root variables.

inline Mat4 coeff_A(const SkewState& s, const GasModel& g) {
  require_nonvacuum(s);
  const double u = s.phi2 / s.phi1;
  const double v = s.phi3 / s.phi1;
  const double r = s.phi4 / s.phi1;
  const double gm = g.gamma;
  Mat4 a;
  a << u, 1, 0, 0,
       -u * u, 3 * u, 0, 4 * r,
       -u * v, v, 2 * u, 0,
       -gm * u * r, gm * r, 0, 2 * u;
  return 0.5 * a;
}

/// Row 3 is (-v^2, 0, 3v, 4 phi4/phi1): the third scalar equation carries
/// 3v/2 on (phi3)_y, not on (phi2)_y.
inline Mat4 coeff_B(const SkewState& s, const GasModel& g) {
  require_nonvacuum(s);
  const double u = s.phi2 / s.phi1;
  const double v = s.phi3 / s.phi1;
  const double r = s.phi4 / s.phi1;
  const double gm = g.gamma;
  Mat4 b;
  b << v, 0, 1, 0,
       -u * v, 2 * v, u, 0,
       -v * v, 0, 3 * v, 4 * r,
       -gm * v * r, 0, gm * r, 2 * v;
  return 0.5 * b;
}

inline Mat4 coeff_quasilinear(Direction d, const SkewState& s, const GasModel& g) {
  return d == Direction::x ? coeff_A(s, g) : coeff_B(s, g);
}

/// x-direction skew matrix; satisfies (At Phi)_x + At^T Phi_x = 2 P A Phi_x.
inline Mat4 coeff_Atilde(const SkewState& s, const GasModel& g, const FreeParams& fp = {}) {
  require_nonvacuum(s);
  const double u = s.phi2 / s.phi1;
  const double r = s.phi4 / s.phi1;
  const double b2 = g.beta2();
  const double gm = g.gamma;
  Mat4 a;
  a << g.alpha2 * u, fp.a12 * s.phi2, 0, fp.a14 * s.phi4,
       -2 * fp.a12 * s.phi2, fp.a12 * s.phi1 + b2 * u, 0, 0,
       0, 0, g.theta2() * u, 0,
       -2 * fp.a14 * s.phi4, 2 * (gm - 1) * r, 0, fp.a14 * s.phi1 + (2 - gm) * u;
  return a;
}

/// y-direction counterpart of coeff_Atilde.
inline Mat4 coeff_Btilde(const SkewState& s, const GasModel& g, const FreeParams& fp = {}) {
  require_nonvacuum(s);
  const double v = s.phi3 / s.phi1;
  const double r = s.phi4 / s.phi1;
  const double gm = g.gamma;
  Mat4 b;
  b << g.alpha2 * v, 0, fp.b13 * s.phi3, fp.b14 * s.phi4,
       0, g.beta2() * v, 0, 0,
       -2 * fp.b13 * s.phi3, 0, fp.b13 * s.phi1 + g.theta2() * v, 0,
       -2 * fp.b14 * s.phi4, 0, 2 * (gm - 1) * r, fp.b14 * s.phi1 + (2 - gm) * v;
  return b;
}

inline Mat4 coeff_skew(Direction d, const SkewState& s, const GasModel& g,
                       const FreeParams& fp = {}) {
  return d == Direction::x ? coeff_Atilde(s, g, fp) : coeff_Btilde(s, g, fp);
}

/// Entrywise derivative d(At)/d(phi_k), k in 0..3.
inline Mat4 coeff_Atilde_partial(const SkewState& s, int k, const GasModel& g,
                                 const FreeParams& fp = {}) {
  require_nonvacuum(s);
  const double i1 = 1.0 / s.phi1;
  const double i1sq = i1 * i1;
  const double gm = g.gamma;
  Mat4 d = Mat4::Zero();
  switch (k) {
    case 0:
      d(0, 0) = -g.alpha2 * s.phi2 * i1sq;
      d(1, 1) = fp.a12 - g.beta2() * s.phi2 * i1sq;
      d(2, 2) = -g.theta2() * s.phi2 * i1sq;
      d(3, 1) = -2 * (gm - 1) * s.phi4 * i1sq;
      d(3, 3) = fp.a14 - (2 - gm) * s.phi2 * i1sq;
      break;
    case 1:
      d(0, 0) = g.alpha2 * i1;
      d(0, 1) = fp.a12;
      d(1, 0) = -2 * fp.a12;
      d(1, 1) = g.beta2() * i1;
      d(2, 2) = g.theta2() * i1;
      d(3, 3) = (2 - gm) * i1;
      break;
    case 2:
      break;
    default:
      d(0, 3) = fp.a14;
      d(3, 0) = -2 * fp.a14;
      d(3, 1) = 2 * (gm - 1) * i1;
      break;
  }
  return d;
}

/// Entrywise derivative d(Bt)/d(phi_k), k in 0..3.
inline Mat4 coeff_Btilde_partial(const SkewState& s, int k, const GasModel& g,
                                 const FreeParams& fp = {}) {
  require_nonvacuum(s);
  const double i1 = 1.0 / s.phi1;
  const double i1sq = i1 * i1;
  const double gm = g.gamma;
  Mat4 d = Mat4::Zero();
  switch (k) {
    case 0:
      d(0, 0) = -g.alpha2 * s.phi3 * i1sq;
      d(1, 1) = -g.beta2() * s.phi3 * i1sq;
      d(2, 2) = fp.b13 - g.theta2() * s.phi3 * i1sq;
      d(3, 2) = -2 * (gm - 1) * s.phi4 * i1sq;
      d(3, 3) = fp.b14 - (2 - gm) * s.phi3 * i1sq;
      break;
    case 1:
      break;
    case 2:
      d(0, 0) = g.alpha2 * i1;
      d(0, 2) = fp.b13;
      d(1, 1) = g.beta2() * i1;
      d(2, 0) = -2 * fp.b13;
      d(2, 2) = g.theta2() * i1;
      d(3, 3) = (2 - gm) * i1;
      break;
    default:
      d(0, 3) = fp.b14;
      d(3, 0) = -2 * fp.b14;
      d(3, 2) = 2 * (gm - 1) * i1;
      break;
  }
  return d;
}

inline Mat4 coeff_skew_partial(Direction d, const SkewState& s, int k, const GasModel& g,
                               const FreeParams& fp = {}) {
  return d == Direction::x ? coeff_Atilde_partial(s, k, g, fp)
                           : coeff_Btilde_partial(s, k, g, fp);
}

/// Sum_k d(M)/d(phi_k) dphi_k for the skew matrix of direction d.
inline Mat4 coeff_skew_directional(Direction d, const SkewState& s, const SkewState& ds,
                                   const GasModel& g, const FreeParams& fp = {}) {
  Mat4 out = Mat4::Zero();
  for (int k = 0; k < 4; ++k)
    if (ds[k] != 0.0) out += ds[k] * coeff_skew_partial(d, s, k, g, fp);
  return out;
}

/// Matrices of the split form
///   Phi_t + (A1 Phi)_x + A2 Phi_x + (B1 Phi)_y + B2 Phi_y = 0
/// with A1 = P^-1 At / 2, A2 = P^-1 At^T / 2, B1 = P^-1 Bt / 2, B2 = P^-1 Bt^T / 2.
struct SplitMatrices {
  Mat4 A1, A2, B1, B2;
};

inline SplitMatrices split_matrices(const SkewState& s, const GasModel& g,
                                    const FreeParams& fp = {}) {
  const Vec4 half_inv = 0.5 * norm_matrix(g).diag.cwiseInverse();
  const Mat4 at = coeff_Atilde(s, g, fp);
  const Mat4 bt = coeff_Btilde(s, g, fp);
  return {half_inv.asDiagonal() * at, half_inv.asDiagonal() * at.transpose(),
          half_inv.asDiagonal() * bt, half_inv.asDiagonal() * bt.transpose()};
}

/// Pointwise residual of (M Phi)' + M^T Phi' - 2 P K Phi' where M is the skew
/// matrix and K the quasi-linear matrix of direction d, and ds plays Phi'.
/// Vanishes identically for admissible states.
inline Vec4 skew_identity_residual(Direction d, const SkewState& s, const SkewState& ds,
                                   const GasModel& g, const FreeParams& fp = {}) {
  const Vec4 phi = s.vec();
  const Vec4 dphi = ds.vec();
  const Mat4 m = coeff_skew(d, s, g, fp);
  const Mat4 dm = coeff_skew_directional(d, s, ds, g, fp);
  const Mat4 pk = norm_matrix(g).matrix() * coeff_quasilinear(d, s, g);
  return dm * phi + m * dphi + m.transpose() * dphi - 2.0 * pk * dphi;
}

/// Magnitude of the largest term in skew_identity_residual, for relative tolerances.
inline double skew_identity_scale(Direction d, const SkewState& s, const SkewState& ds,
                                  const GasModel& g, const FreeParams& fp = {}) {
  const Vec4 phi = s.vec();
  const Vec4 dphi = ds.vec();
  const Mat4 m = coeff_skew(d, s, g, fp);
  const Mat4 dm = coeff_skew_directional(d, s, ds, g, fp);
  const Mat4 pk = norm_matrix(g).matrix() * coeff_quasilinear(d, s, g);
  double scale = 0.0;
  for (const Vec4& t : {Vec4(dm * phi), Vec4(m * dphi), Vec4(m.transpose() * dphi),
                        Vec4(2.0 * pk * dphi)})
    scale = std::max(scale, t.cwiseAbs().maxCoeff());
  return scale;
}

/// Outcome of checking B_i = A_i^T and C + C^T = 0 over a sample set.
struct SkewConditionReport {
  double max_transpose_violation = 0.0;  // max ||B_i - A_i^T||_inf
  double max_c_violation = 0.0;          // max ||C + C^T||_inf
  double scale = 0.0;                    // max entry magnitude seen
  double tolerance = 1e-13;
  bool passed = false;
};

/// Checks the sufficient conditions for energy conservation of
/// P U_t + (A_i U)_{x_i} + B_i U_{x_i} + C U = 0 over the given samples.
template <class State>
SkewConditionReport check_general_skew_conditions(
    const std::vector<std::function<Eigen::MatrixXd(const State&)>>& as,
    const std::vector<std::function<Eigen::MatrixXd(const State&)>>& bs,
    const std::function<Eigen::MatrixXd(const State&)>& c, const std::vector<State>& samples,
    double rel_tol = 1e-13) {
  if (samples.empty()) throw ShapeError("check_general_skew_conditions: no samples");
  if (as.size() != bs.size())
    throw ShapeError("check_general_skew_conditions: A/B list length mismatch");
  SkewConditionReport rep;
  rep.tolerance = rel_tol;
  for (const auto& s : samples) {
    for (std::size_t i = 0; i < as.size(); ++i) {
      const Eigen::MatrixXd a = as[i](s);
      const Eigen::MatrixXd b = bs[i](s);
      if (a.rows() != a.cols() || b.rows() != a.cols() || b.cols() != a.rows())
        throw ShapeError("check_general_skew_conditions: dimension mismatch");
      rep.scale = std::max({rep.scale, a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff()});
      rep.max_transpose_violation =
          std::max(rep.max_transpose_violation, (b - a.transpose()).cwiseAbs().maxCoeff());
    }
    if (c) {
      const Eigen::MatrixXd cm = c(s);
      if (cm.rows() != cm.cols())
        throw ShapeError("check_general_skew_conditions: C not square");
      if (cm.size() > 0) {
        rep.scale = std::max(rep.scale, cm.cwiseAbs().maxCoeff());
        rep.max_c_violation =
            std::max(rep.max_c_violation, (cm + cm.transpose()).cwiseAbs().maxCoeff());
      }
    }
  }
  const double tol = rel_tol * std::max(rep.scale, 1.0);
  rep.passed = rep.max_transpose_violation <= tol && rep.max_c_violation <= tol;
  return rep;
}

}  // namespace skew_euler
