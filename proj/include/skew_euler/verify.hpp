#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "skew_euler/boundary.hpp"
#include "skew_euler/grid.hpp"
#include "skew_euler/matrices.hpp"
#include "skew_euler/random.hpp"
#include "skew_euler/sbp.hpp"
#include "skew_euler/solver.hpp"

namespace skew_euler {

struct SuiteResult {
  std::string name;
  double max_residual = 0.0;
  double tolerance = 0.0;
  std::size_t samples = 0;
  bool passed() const { return max_residual <= tolerance; }
};

/// Names of every identity suite run by run_verify, in order.
inline const std::vector<std::string>& verify_suite_manifest() {
  static const std::vector<std::string> names = {
      "skew_identity_x",       "skew_identity_y",        "split_form_consistency",
      "general_skew_conditions", "free_param_contraction", "boundary_contraction",
      "boundary_eigenvalues",  "mach_threshold",         "sbp_constraint",
      "sbp_integration_by_parts", "energy_identity",
  };
  return names;
}

namespace detail {

inline const std::array<double, 3>& verify_gammas() {
  static const std::array<double, 3> g = {1.4, std::numbers::sqrt2, 5.0 / 3.0};
  return g;
}

inline FreeParams random_free_params(Rng& rng, double bound) {
  return {rng.uniform(-bound, bound), rng.uniform(-bound, bound), rng.uniform(-bound, bound),
          rng.uniform(-bound, bound)};
}

inline UnitNormal random_normal(Rng& rng) {
  const double a = rng.uniform(0.0, 2.0 * std::numbers::pi);
  return {std::cos(a), std::sin(a)};
}

/// sum_ij |M_ij| |x_i| |x_j|: roundoff scale of x^T M x.
inline double abs_quadratic(const Mat4& m, const Vec4& x) {
  return x.cwiseAbs().dot(m.cwiseAbs() * x.cwiseAbs());
}

inline SuiteResult suite_skew_identity(Direction d, Rng& rng, std::size_t samples) {
  SuiteResult r{d == Direction::x ? "skew_identity_x" : "skew_identity_y", 0.0, 1e-12, samples};
  for (std::size_t k = 0; k < samples; ++k) {
    const GasModel g{verify_gammas()[k % 3], rng.uniform(0.5, 2.0)};
    const SkewState s = random_state(rng);
    const SkewState ds = random_gradient(rng);
    const FreeParams fp = random_free_params(rng, 10.0);
    const double res = skew_identity_residual(d, s, ds, g, fp).cwiseAbs().maxCoeff();
    r.max_residual = std::max(r.max_residual, res / skew_identity_scale(d, s, ds, g, fp));
  }
  return r;
}

inline SuiteResult suite_split_consistency(Rng& rng, std::size_t samples) {
  SuiteResult r{"split_form_consistency", 0.0, 1e-12, samples};
  for (std::size_t k = 0; k < samples; ++k) {
    const GasModel g{verify_gammas()[k % 3], rng.uniform(0.5, 2.0)};
    const SkewState s = random_state(rng);
    const SkewState ds = random_gradient(rng);
    const Mat4 p = norm_matrix(g).matrix();
    const SplitMatrices m = split_matrices(s, g);
    const Mat4 at = coeff_Atilde(s, g);
    const Mat4 bt = coeff_Btilde(s, g);
    const double scale = std::max({at.cwiseAbs().maxCoeff(), bt.cwiseAbs().maxCoeff(), 1.0});
    double res = std::max({(p * m.A1 - 0.5 * at).cwiseAbs().maxCoeff(),
                           (p * m.A2 - (p * m.A1).transpose()).cwiseAbs().maxCoeff(),
                           (p * m.B1 - 0.5 * bt).cwiseAbs().maxCoeff(),
                           (p * m.B2 - (p * m.B1).transpose()).cwiseAbs().maxCoeff()}) /
                 scale;
    // A1 dPhi + (dA1) Phi + A2 dPhi = A dPhi, and the y counterpart
    for (Direction d : {Direction::x, Direction::y}) {
      const Mat4& s1 = d == Direction::x ? m.A1 : m.B1;
      const Mat4& s2 = d == Direction::x ? m.A2 : m.B2;
      const Mat4 ds1 = p.inverse() * coeff_skew_directional(d, s, ds, g) * 0.5;
      const Vec4 lhs1 = s1 * ds.vec(), lhs2 = ds1 * s.vec(), lhs3 = s2 * ds.vec();
      const Vec4 rhs = coeff_quasilinear(d, s, g) * ds.vec();
      const double sc = std::max({lhs1.cwiseAbs().maxCoeff(), lhs2.cwiseAbs().maxCoeff(),
                                  lhs3.cwiseAbs().maxCoeff(), rhs.cwiseAbs().maxCoeff()});
      res = std::max(res, (lhs1 + lhs2 + lhs3 - rhs).cwiseAbs().maxCoeff() / sc);
    }
    r.max_residual = std::max(r.max_residual, res);
  }
  return r;
}

inline SuiteResult suite_general_conditions(Rng& rng, std::size_t samples) {
  using Fn = std::function<Eigen::MatrixXd(const SkewState&)>;
  SuiteResult r{"general_skew_conditions", 0.0, 0.0, samples};
  for (double gamma : verify_gammas()) {
    const GasModel g{gamma, 1.0};
    const Mat4 p = norm_matrix(g).matrix();
    std::vector<SkewState> states;
    for (std::size_t k = 0; k < samples; ++k) states.push_back(random_state(rng));
    const std::vector<Fn> as = {[&](const SkewState& s) -> Eigen::MatrixXd { return p * split_matrices(s, g).A1; },
                                [&](const SkewState& s) -> Eigen::MatrixXd { return p * split_matrices(s, g).B1; }};
    const std::vector<Fn> bs = {[&](const SkewState& s) -> Eigen::MatrixXd { return p * split_matrices(s, g).A2; },
                                [&](const SkewState& s) -> Eigen::MatrixXd { return p * split_matrices(s, g).B2; }};
    const Fn c = [](const SkewState&) -> Eigen::MatrixXd { return Eigen::MatrixXd::Zero(4, 4); };
    const SkewConditionReport rep = check_general_skew_conditions<SkewState>(as, bs, c, states);
    r.max_residual = std::max({r.max_residual, rep.max_transpose_violation / std::max(rep.scale, 1.0),
                               rep.max_c_violation / std::max(rep.scale, 1.0)});
    r.tolerance = rep.tolerance;
  }
  return r;
}

inline SuiteResult suite_free_param_contraction(Rng& rng, std::size_t samples) {
  SuiteResult r{"free_param_contraction", 0.0, 1e-11, samples};
  for (std::size_t k = 0; k < samples; ++k) {
    const SkewState s = random_state(rng);
    const UnitNormal n = random_normal(rng);
    const FreeParams fp = random_free_params(rng, 100.0);
    const double v = std::abs(free_param_contraction(s, n, fp));
    r.max_residual = std::max(r.max_residual, v / free_param_contraction_scale(s, n, fp));
  }
  return r;
}

inline SuiteResult suite_boundary_contraction(Rng& rng, std::size_t samples) {
  SuiteResult r{"boundary_contraction", 0.0, 1e-13, samples};
  for (std::size_t k = 0; k < samples; ++k) {
    const GasModel g{verify_gammas()[k % 3], rng.uniform(0.5, 2.0)};
    const SkewState s = random_state(rng);
    const UnitNormal n = random_normal(rng);
    const Vec4 phi = s.vec();
    const Mat4 m = boundary_matrix(s, n, g);
    const Mat4 full = n.nx * coeff_Atilde(s, g) + n.ny * coeff_Btilde(s, g);
    const Mat4 mr = rotated_boundary_matrix(s, n, g);
    const Vec4 phir = rotate(s, n).vec();
    const double q21 = phi.dot(m * phi);
    const double qfull = phi.dot(full * phi);
    const double q22 = phir.dot(mr * phir);
    const double q24 = expanded_contraction(s, n, g);
    const double scale = std::max({abs_quadratic(m, phi), abs_quadratic(full, phi),
                                   abs_quadratic(mr, phir), std::abs(q24), 1e-300});
    const double res = std::max({std::abs(q21 - q24), std::abs(qfull - q24), std::abs(q22 - q24),
                                 (m - 0.5 * (full + full.transpose())).cwiseAbs().maxCoeff()}) /
                       scale;
    r.max_residual = std::max(r.max_residual, res);
  }
  // wall: u_n = 0 on the grid's edge normals gives a vanishing contraction
  const std::array<UnitNormal, 4> walls = {UnitNormal{1, 0}, UnitNormal{-1, 0}, UnitNormal{0, 1},
                                           UnitNormal{0, -1}};
  for (std::size_t k = 0; k < samples; ++k) {
    const GasModel g{1.4, 1.0};
    SkewState s = random_state(rng);
    const UnitNormal n = walls[k % 4];
    (n.nx != 0.0 ? s.phi2 : s.phi3) = 0.0;
    const Vec4 phi = s.vec();
    const Mat4 m = boundary_matrix(s, n, g);
    r.max_residual = std::max(r.max_residual, std::abs(phi.dot(m * phi)) / abs_quadratic(m, phi));
  }
  return r;
}

inline SuiteResult suite_eigenvalues(Rng& rng, std::size_t samples) {
  SuiteResult r{"boundary_eigenvalues", 0.0, 1e-10, samples};
  for (std::size_t k = 0; k < samples; ++k) {
    const GasModel g{k % 2 ? 5.0 / 3.0 : 1.4, rng.uniform(0.5, 2.0)};
    const SkewState s = random_state(rng);
    const UnitNormal n = random_normal(rng);
    r.max_residual = std::max(r.max_residual, eigenvalue_crosscheck(s, n, g).relative());
  }
  return r;
}

/// b(1.4) against 0.97590 (1e-4), b(sqrt 2) against 1 (1e-9), and the sign change
/// of the negative-eigenvalue count within Mn = b +- 1e-6. Residual is the worst
/// deviation scaled by its tolerance (pass iff <= 1).
inline SuiteResult suite_mach_threshold() {
  SuiteResult r{"mach_threshold", 0.0, 1.0, 4};
  const double b14 = mach_threshold({1.4, 1.0});
  const double broot2 = mach_threshold({std::numbers::sqrt2, 1.0});
  r.max_residual = std::max(std::abs(b14 - 0.97590) / 1e-4, std::abs(broot2 - 1.0) / 1e-9);
  for (double gamma : {1.4, std::numbers::sqrt2}) {
    const GasModel g{gamma, 1.0};
    const double b = mach_threshold(g);
    const int below = required_bc_count(b - 1e-6, 1.0, g).eig_count_negative;
    const int above = required_bc_count(b + 1e-6, 1.0, g).eig_count_negative;
    if (below != 1 || above != 0) r.max_residual = std::max(r.max_residual, 2.0);
  }
  return r;
}

inline std::vector<SbpOperator1D> shipped_operators() {
  std::vector<SbpOperator1D> ops;
  for (int order : {2, 4})
    for (Topology t : {Topology::bounded, Topology::periodic})
      for (std::size_t n : {sbp_min_size(order), std::size_t{16}, std::size_t{33}, std::size_t{64}})
        ops.push_back(build_sbp(order, n, 1.0 / static_cast<double>(n), t));
  return ops;
}

inline SuiteResult suite_sbp_constraint() {
  SuiteResult r{"sbp_constraint", 0.0, 1e-15, 0};
  for (const auto& op : shipped_operators()) {
    r.max_residual = std::max(r.max_residual, verify_sbp_constraint(op));
    ++r.samples;
  }
  return r;
}

inline std::vector<Grid2D> identity_grids() {
  Grid2D bounded{32, 48, 0.0, 1.0, 0.0, 1.5, Topology::bounded, Topology::bounded};
  Grid2D periodic{64, 64, 0.0, 1.0, 0.0, 1.0, Topology::periodic, Topology::periodic};
  return {bounded, periodic};
}

/// Relative residual of u^T H D_x v + (D_x u)^T H v - u^T B_x v (and y).
inline double integration_by_parts_residual(const Field& u, const Field& v,
                                            const TensorApplicator& t) {
  const Field dxu = apply_dx(u, t), dxv = apply_dx(v, t);
  const Field dyu = apply_dy(u, t), dyv = apply_dy(v, t);
  auto abs_ip = [&](const Field& a, const Field& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < t.nx(); ++i)
      for (std::size_t j = 0; j < t.ny(); ++j)
        for (int k = 0; k < 4; ++k)
          acc += t.weight(i, j) * std::abs(a.component(k)[a.index(i, j)] * b.component(k)[b.index(i, j)]);
    return acc;
  };
  const double rx = inner_product(u, dxv, t) + inner_product(dxu, v, t) - boundary_term_x(u, v, t);
  const double ry = inner_product(u, dyv, t) + inner_product(dyu, v, t) - boundary_term_y(u, v, t);
  const double sx = abs_ip(u, dxv) + abs_ip(dxu, v);
  const double sy = abs_ip(u, dyv) + abs_ip(dyu, v);
  return std::max(std::abs(rx) / sx, std::abs(ry) / sy);
}

inline SuiteResult suite_integration_by_parts(Rng& rng, std::size_t fields) {
  SuiteResult r{"sbp_integration_by_parts", 0.0, 1e-13, 0};
  for (int order : {2, 4})
    for (const Grid2D& g : identity_grids()) {
      const TensorApplicator t = make_applicator(g, order);
      for (std::size_t k = 0; k < fields; ++k) {
        const Field u = random_field(g.nx, g.ny, rng);
        const Field v = random_field(g.nx, g.ny, rng);
        r.max_residual = std::max(r.max_residual, integration_by_parts_residual(u, v, t));
        ++r.samples;
      }
    }
  return r;
}

inline SuiteResult suite_energy_identity(Rng& rng, std::size_t fields) {
  SuiteResult r{"energy_identity", 0.0, 1e-11, 0};
  for (int order : {2, 4})
    for (const Grid2D& g : identity_grids()) {
      SchemeConfig cfg;
      cfg.grid = g;
      cfg.order = order;
      const Scheme<> scheme(cfg);
      for (std::size_t k = 0; k < fields; ++k) {
        const Field f = random_field(g.nx, g.ny, rng);
        r.max_residual =
            std::max(r.max_residual, scheme.energy_rate_residual(f) / scheme.energy(f));
        ++r.samples;
      }
    }
  return r;
}

}  // namespace detail

/// Runs every identity suite with a fixed seed.
inline std::vector<SuiteResult> run_verify(std::uint64_t seed) {
  Rng rng(seed);
  std::vector<SuiteResult> out;
  out.push_back(detail::suite_skew_identity(Direction::x, rng, 1000));
  out.push_back(detail::suite_skew_identity(Direction::y, rng, 1000));
  out.push_back(detail::suite_split_consistency(rng, 1000));
  out.push_back(detail::suite_general_conditions(rng, 200));
  out.push_back(detail::suite_free_param_contraction(rng, 10000));
  out.push_back(detail::suite_boundary_contraction(rng, 1000));
  out.push_back(detail::suite_eigenvalues(rng, 1000));
  out.push_back(detail::suite_mach_threshold());
  out.push_back(detail::suite_sbp_constraint());
  out.push_back(detail::suite_integration_by_parts(rng, 5));
  out.push_back(detail::suite_energy_identity(rng, 5));
  return out;
}

/// One line per suite: `suite,max_residual,tolerance,samples,PASS|FAIL`.
inline void write_verify_report(std::ostream& os, const std::vector<SuiteResult>& results) {
  os << "suite,max_residual,tolerance,samples,status\n";
  for (const auto& r : results)
    os << r.name << ',' << format_double(r.max_residual) << ',' << format_double(r.tolerance) << ','
       << r.samples << ',' << (r.passed() ? "PASS" : "FAIL") << '\n';
}

}  // namespace skew_euler
