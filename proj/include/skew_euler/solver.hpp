#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "skew_euler/boundary.hpp"
#include "skew_euler/errors.hpp"
#include "skew_euler/grid.hpp"
#include "skew_euler/matrices.hpp"
#include "skew_euler/sbp.hpp"
#include "skew_euler/state.hpp"

namespace skew_euler {

/// Additive source s(x, y, t) in the square-root variables.
using SourceFn = std::function<SkewState(double x, double y, double t)>;

struct SchemeConfig {
  Grid2D grid;
  GasModel gas;
  int order = 4;
  FreeParams free_params;
  double sigma = 1.0;             // wall penalty strength, in units of (gamma-1)|phi4/phi1|
  bool wall_flux_cancel = true;   // add the flux-cancelling wall term on bounded edges
  double cfl = 0.5;
  double dt = 0.0;                // 0: derive from cfl and the initial state
  double t_end = 1.0;
  std::size_t sample_stride = 1;
  std::vector<double> snapshot_times;
  SourceFn source;                // empty: homogeneous equations
};

/// Which parts of the right-hand side to assemble.
struct RhsTerms {
  bool wall = true;
  bool source = true;
};

/// Default split matrices. Alternative providers (with the same call signature)
/// can be substituted for testing.
struct EulerSplit {
  SplitMatrices operator()(const SkewState& s, const GasModel& g, const FreeParams& fp) const {
    return split_matrices(s, g, fp);
  }
};

/// One energy diagnostic sample.
struct EnergySample {
  double t = 0.0;
  double energy = 0.0;          // ||Phi||^2 in the P (x) H norm
  double boundary_flux = 0.0;   // Phi^T (B_x(At) + B_y(Bt)) Phi
  double rate_residual = 0.0;   // |dE/dt + boundary_flux| of the unpenalized homogeneous scheme
  double pressure_work = 0.0;   // boundary quadrature of (gamma-1) u_n p
  double min_phi1 = 0.0;        // min |phi1|
  double min_phi4 = 0.0;        // min |phi4|
  double energy_outflow = 0.0;  // time integral of -dE/dt of the full scheme (RK4 weights)
};

struct RunRecord {
  std::vector<EnergySample> samples;
  std::vector<std::pair<double, Field>> snapshots;
  Field final_field;
  double dt = 0.0;
  std::size_t steps = 0;
};

/// Semi-discrete split-form scheme
///   Phi_t + D_x(A1 Phi) + A2 D_x Phi + D_y(B1 Phi) + B2 D_y Phi = SAT + source
/// on a tensor grid with diagonal-norm SBP operators.
template <class Split = EulerSplit>
class Scheme {
 public:
  explicit Scheme(SchemeConfig cfg, Split split = {})
      : cfg_(std::move(cfg)),
        split_(std::move(split)),
        ops_((cfg_.gas.validate(), cfg_.grid.validate(), make_applicator(cfg_.grid, cfg_.order))),
        norm_(norm_matrix(cfg_.gas)) {}

  const SchemeConfig& config() const { return cfg_; }
  const TensorApplicator& operators() const { return ops_; }
  const NormMatrix& norm() const { return norm_; }

  Field rhs(const Field& f, double t = 0.0, RhsTerms terms = {}) const {
    ops_.check(f, "semi_discrete_rhs");
    const std::size_t n = f.size();
    const GasModel& g = cfg_.gas;

    Field ax(f.nx(), f.ny()), by(f.nx(), f.ny());
    std::vector<SplitMatrices> mats(n);
    for (std::size_t node = 0; node < n; ++node) {
      const SkewState s = f.at(node);
      if (!std::isfinite(s.phi1) || !std::isfinite(s.phi2) || !std::isfinite(s.phi3) ||
          !std::isfinite(s.phi4))
        throw DivergenceError("non-finite state at node " + std::to_string(node) + ", t = " +
                                  std::to_string(t),
                              t);
      if (!(std::abs(s.phi1) >= kVacuumThreshold))
        throw VacuumError("vacuum at node " + std::to_string(node) + " (|phi1| = " +
                              std::to_string(std::abs(s.phi1)) + ")",
                          node);
      mats[node] = split_(s, g, cfg_.free_params);
      const Vec4 phi = s.vec();
      ax.set(node, SkewState::from_vec(mats[node].A1 * phi));
      by.set(node, SkewState::from_vec(mats[node].B1 * phi));
    }
    const Field dax = apply_dx(ax, ops_);
    const Field dby = apply_dy(by, ops_);
    const Field dfx = apply_dx(f, ops_);
    const Field dfy = apply_dy(f, ops_);

    Field out(f.nx(), f.ny());
    for (std::size_t node = 0; node < n; ++node) {
      const Vec4 r = dax.at(node).vec() + mats[node].A2 * dfx.at(node).vec() +
                     dby.at(node).vec() + mats[node].B2 * dfy.at(node).vec();
      out.set(node, SkewState::from_vec(-r));
    }
    if (terms.wall) add_wall_terms(f, out);
    if (terms.source && cfg_.source) add_source(out, t);
    return out;
  }

  double energy(const Field& f) const {
    ops_.check(f, "discrete_energy");
    double acc = 0.0;
    for (std::size_t i = 0; i < f.nx(); ++i)
      for (std::size_t j = 0; j < f.ny(); ++j)
        acc += ops_.weight(i, j) * norm_.quadratic(f.at(i, j));
    return acc;
  }

  /// Sum over bounded edges of edge weight times Phi^T (nx At + ny Bt) Phi.
  double boundary_flux(const Field& f) const {
    double acc = 0.0;
    for_each_boundary_node(f, [&](std::size_t node, const UnitNormal& n, double w, double) {
      const SkewState s = f.at(node);
      const Mat4 m = n.nx * coeff_Atilde(s, cfg_.gas, cfg_.free_params) +
                     n.ny * coeff_Btilde(s, cfg_.gas, cfg_.free_params);
      const Vec4 phi = s.vec();
      acc += w * phi.dot(m * phi);
    });
    return acc;
  }

  double pressure_work(const Field& f) const {
    double acc = 0.0;
    for_each_boundary_node(f, [&](std::size_t node, const UnitNormal& n, double w, double) {
      const SkewState s = f.at(node);
      acc += w * (cfg_.gas.gamma - 1.0) * normal_velocity(s, n) * s.phi4 * s.phi4;
    });
    return acc;
  }

  /// 2 Phi^T (P (x) H) F.
  double energy_rate(const Field& f, const Field& rate) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < f.nx(); ++i)
      for (std::size_t j = 0; j < f.ny(); ++j) {
        const std::size_t node = f.index(i, j);
        double s = 0.0;
        for (int k = 0; k < 4; ++k)
          s += norm_.diag[k] * f.component(k)[node] * rate.component(k)[node];
        acc += ops_.weight(i, j) * s;
      }
    return 2.0 * acc;
  }

  double energy_rate_residual(const Field& f) const {
    const Field r = rhs(f, 0.0, {.wall = false, .source = false});
    return std::abs(energy_rate(f, r) + boundary_flux(f));
  }

  /// Largest |u| + |v| + c over the field.
  double max_wave_speed(const Field& f) const {
    double m = 0.0;
    for (std::size_t node = 0; node < f.size(); ++node) {
      const SkewState s = f.at(node);
      require_nonvacuum(s);
      m = std::max(m, std::abs(s.phi2 / s.phi1) + std::abs(s.phi3 / s.phi1) +
                          sound_speed(s, cfg_.gas));
    }
    return m;
  }

  double min_spacing() const { return std::min(cfg_.grid.hx(), cfg_.grid.hy()); }

  /// Classical four-stage Runge-Kutta step. If `outflow` is given, the energy
  /// leaving the domain during the step (-dE/dt integrated with the same
  /// weights) is added to it.
  Field rk4_step(const Field& f, double t, double dt, double* outflow = nullptr) const {
    const Field k1 = rhs(f, t);
    Field s2 = f;
    s2.axpy(0.5 * dt, k1);
    const Field k2 = rhs(s2, t + 0.5 * dt);
    Field s3 = f;
    s3.axpy(0.5 * dt, k2);
    const Field k3 = rhs(s3, t + 0.5 * dt);
    Field s4 = f;
    s4.axpy(dt, k3);
    const Field k4 = rhs(s4, t + dt);
    Field out = f;
    out.axpy(dt / 6.0, k1).axpy(dt / 3.0, k2).axpy(dt / 3.0, k3).axpy(dt / 6.0, k4);
    if (!out.all_finite())
      throw DivergenceError("non-finite state after step at t = " + std::to_string(t + dt),
                            t + dt);
    if (outflow)
      *outflow -= dt / 6.0 *
                  (energy_rate(f, k1) + 2.0 * energy_rate(s2, k2) + 2.0 * energy_rate(s3, k3) +
                   energy_rate(s4, k4));
    return out;
  }

  EnergySample sample(const Field& f, double t, double outflow = 0.0) const {
    EnergySample e;
    e.t = t;
    e.energy = energy(f);
    e.boundary_flux = boundary_flux(f);
    e.rate_residual = energy_rate_residual(f);
    e.pressure_work = pressure_work(f);
    e.min_phi1 = std::numeric_limits<double>::infinity();
    e.min_phi4 = std::numeric_limits<double>::infinity();
    for (std::size_t node = 0; node < f.size(); ++node) {
      e.min_phi1 = std::min(e.min_phi1, std::abs(f.component(0)[node]));
      e.min_phi4 = std::min(e.min_phi4, std::abs(f.component(3)[node]));
    }
    e.energy_outflow = outflow;
    return e;
  }

  /// Time step used by run(): cfg.dt if set, otherwise cfl * min(h) / max speed,
  /// shrunk so that t_end is an integer number of steps.
  double choose_dt(const Field& initial) const {
    const double limit = cfg_.cfl * min_spacing() / max_wave_speed(initial);
    double dt = cfg_.dt;
    if (dt > 0.0) {
      if (dt > limit * (1.0 + 1e-12))
        throw ConfigError("dt = " + format_double(dt) + " exceeds the CFL limit " +
                              format_double(limit),
                          0);
      return dt;
    }
    const double steps = std::ceil(cfg_.t_end / limit - 1e-9);
    return cfg_.t_end / std::max(steps, 1.0);
  }

  RunRecord run(const Field& initial) const {
    if (!(cfg_.t_end > 0.0)) throw ConfigError("t_end must be positive", 0);
    RunRecord rec;
    rec.dt = choose_dt(initial);
    const double dt = rec.dt;
    const auto nsteps = static_cast<std::size_t>(std::llround(std::ceil(cfg_.t_end / dt - 1e-9)));
    const std::size_t stride = std::max<std::size_t>(cfg_.sample_stride, 1);

    std::vector<double> snaps = cfg_.snapshot_times;
    std::sort(snaps.begin(), snaps.end());
    std::size_t next_snap = 0;

    Field f = initial;
    double outflow = 0.0;
    double t = 0.0;
    auto take_snapshots = [&](double now) {
      while (next_snap < snaps.size() && snaps[next_snap] <= now + 1e-12 * dt) {
        rec.snapshots.emplace_back(now, f);
        ++next_snap;
      }
    };
    rec.samples.push_back(sample(f, t, outflow));
    take_snapshots(t);
    for (std::size_t step = 1; step <= nsteps; ++step) {
      const double h = step == nsteps ? cfg_.t_end - t : dt;
      f = rk4_step(f, t, h, &outflow);
      t = step == nsteps ? cfg_.t_end : static_cast<double>(step) * dt;
      if (step % stride == 0 || step == nsteps) rec.samples.push_back(sample(f, t, outflow));
      take_snapshots(t);
    }
    rec.steps = nsteps;
    rec.final_field = std::move(f);
    return rec;
  }

 private:
  /// Visits every (node, outward normal, edge weight, normal-direction weight)
  /// on bounded edges. Corner nodes are visited once per edge.
  template <class Fn>
  void for_each_boundary_node(const Field& f, Fn&& fn) const {
    const auto& hx = ops_.x_op().quadrature();
    const auto& hy = ops_.y_op().quadrature();
    const std::size_t nx = f.nx(), ny = f.ny();
    if (ops_.x_op().topology() == Topology::bounded)
      for (std::size_t j = 0; j < ny; ++j) {
        fn(f.index(0, j), UnitNormal{-1.0, 0.0}, hy[j], hx[0]);
        fn(f.index(nx - 1, j), UnitNormal{1.0, 0.0}, hy[j], hx[nx - 1]);
      }
    if (ops_.y_op().topology() == Topology::bounded)
      for (std::size_t i = 0; i < nx; ++i) {
        fn(f.index(i, 0), UnitNormal{0.0, -1.0}, hx[i], hy[0]);
        fn(f.index(i, ny - 1), UnitNormal{0.0, 1.0}, hx[i], hy[ny - 1]);
      }
  }

  void add_wall_terms(const Field& f, Field& out) const {
    const bool penalize = cfg_.sigma != 0.0;
    if (!penalize && !cfg_.wall_flux_cancel) return;
    for_each_boundary_node(f, [&](std::size_t node, const UnitNormal& n, double, double wn) {
      const SkewState s = f.at(node);
      Vec4 g = Vec4::Zero();
      if (cfg_.wall_flux_cancel) g += wall_flux_cancel(s, n, cfg_.gas);
      if (penalize) g += wall_sat_penalty(s, n, cfg_.gas, cfg_.sigma);
      out.set(node, SkewState::from_vec(out.at(node).vec() + g / wn));
    });
  }

  void add_source(Field& out, double t) const {
    const Grid2D& gr = cfg_.grid;
    for (std::size_t i = 0; i < gr.nx; ++i)
      for (std::size_t j = 0; j < gr.ny; ++j) {
        const SkewState s = cfg_.source(gr.x(i), gr.y(j), t);
        out.set(i, j, SkewState::from_vec(out.at(i, j).vec() + s.vec()));
      }
  }

  SchemeConfig cfg_;
  Split split_;
  TensorApplicator ops_;
  NormMatrix norm_;
};

template <class Split = EulerSplit>
Field semi_discrete_rhs(const Field& f, const Scheme<Split>& scheme, double t = 0.0,
                        RhsTerms terms = {}) {
  return scheme.rhs(f, t, terms);
}

template <class Split>
double discrete_energy(const Field& f, const Scheme<Split>& scheme) {
  return scheme.energy(f);
}

template <class Split>
double discrete_boundary_flux(const Field& f, const Scheme<Split>& scheme) {
  return scheme.boundary_flux(f);
}

template <class Split>
double energy_rate_residual(const Field& f, const Scheme<Split>& scheme) {
  return scheme.energy_rate_residual(f);
}

template <class Split>
Field rk4_step(const Field& f, const Scheme<Split>& scheme, double t, double dt) {
  return scheme.rk4_step(f, t, dt);
}

inline RunRecord run(const SchemeConfig& cfg, const Field& initial) {
  return Scheme<>(cfg).run(initial);
}

/// CSV `t,energy,boundary_flux,rate_residual,pressure_work,min_phi1,min_phi4`.
inline void write_run_csv(std::ostream& os, const RunRecord& rec) {
  os << "t,energy,boundary_flux,rate_residual,pressure_work,min_phi1,min_phi4\n";
  for (const auto& s : rec.samples)
    os << format_double(s.t) << ',' << format_double(s.energy) << ','
       << format_double(s.boundary_flux) << ',' << format_double(s.rate_residual) << ','
       << format_double(s.pressure_work) << ',' << format_double(s.min_phi1) << ','
       << format_double(s.min_phi4) << '\n';
}

}  // namespace skew_euler
