#pragma once

#include <cmath>
#include <numbers>

#include "skew_euler/grid.hpp"
#include "skew_euler/matrices.hpp"
#include "skew_euler/sbp.hpp"
#include "skew_euler/state.hpp"

namespace skew_euler {

/// Smooth manufactured flow on [x_min, x_max] x [y_min, y_max]:
///   rho = 1 + 0.2 sin(kx X - t) cos(ky Y)
///   u   = 0.3 sin(kx X) cos(ky Y) cos(t)
///   v   = 0.3 cos(kx X) sin(ky Y) cos(t)
///   p   = 1 + 0.2 cos(kx X) cos(ky Y - t)
/// with X = x - x_min, kx = 2 pi / Lx (same in y). It is periodic in both
/// directions and has u = 0 on x edges and v = 0 on y edges, so it is a valid
/// solution for periodic as well as wall boundaries.
class ManufacturedSolution {
 public:
  ManufacturedSolution(const Grid2D& g, GasModel gas)
      : x0_(g.x_min), y0_(g.y_min),
        kx_(2.0 * std::numbers::pi / (g.x_max - g.x_min)),
        ky_(2.0 * std::numbers::pi / (g.y_max - g.y_min)),
        gas_(gas) {}

  struct Primitive {
    PhysicalState q, qx, qy, qt;  // value and partial derivatives
  };

  Primitive primitive(double x, double y, double t) const {
    const double X = kx_ * (x - x0_), Y = ky_ * (y - y0_);
    const double sX = std::sin(X), cX = std::cos(X), sY = std::sin(Y), cY = std::cos(Y);
    const double sXt = std::sin(X - t), cXt = std::cos(X - t);
    const double sYt = std::sin(Y - t), cYt = std::cos(Y - t);
    const double ct = std::cos(t), st = std::sin(t);
    Primitive p;
    p.q = {1.0 + 0.2 * sXt * cY, 0.3 * sX * cY * ct, 0.3 * cX * sY * ct, 1.0 + 0.2 * cX * cYt};
    p.qx = {0.2 * kx_ * cXt * cY, 0.3 * kx_ * cX * cY * ct, -0.3 * kx_ * sX * sY * ct,
            -0.2 * kx_ * sX * cYt};
    p.qy = {-0.2 * ky_ * sXt * sY, -0.3 * ky_ * sX * sY * ct, 0.3 * ky_ * cX * cY * ct,
            -0.2 * ky_ * cX * sYt};
    p.qt = {-0.2 * cXt * cY, -0.3 * sX * cY * st, -0.3 * cX * sY * st, 0.2 * cX * sYt};
    return p;
  }

  SkewState phi(double x, double y, double t) const { return to_skew(primitive(x, y, t).q); }

  /// Phi_t + A Phi_x + B Phi_y of the exact field, from the quasi-linear form.
  SkewState source(double x, double y, double t) const {
    const Primitive p = primitive(x, y, t);
    const SkewState s = to_skew(p.q);
    const Vec4 dt = chain(p.q, p.qt), dx = chain(p.q, p.qx), dy = chain(p.q, p.qy);
    const Vec4 r = dt + coeff_A(s, gas_) * dx + coeff_B(s, gas_) * dy;
    return SkewState::from_vec(r);
  }

  Field sample(const Grid2D& g, double t) const {
    return sample_field(g, [&](double x, double y) { return phi(x, y, t); });
  }

 private:
  /// Derivative of Phi given primitive values q and their derivative dq.
  static Vec4 chain(const PhysicalState& q, const PhysicalState& dq) {
    const double r = std::sqrt(q.rho);
    const double dr = dq.rho / (2.0 * r);
    return {dr, dr * q.u + r * dq.u, dr * q.v + r * dq.v, dq.p / (2.0 * std::sqrt(q.p))};
  }

  double x0_, y0_, kx_, ky_;
  GasModel gas_;
};

/// sqrt(sum_nodes w_node |a - b|^2) in the H_x (x) H_y quadrature.
inline double l2_difference(const Field& a, const Field& b, const TensorApplicator& t) {
  Field d = a;
  d.axpy(-1.0, b);
  return std::sqrt(inner_product(d, d, t));
}

}  // namespace skew_euler
