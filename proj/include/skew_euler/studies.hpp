#pragma once

#include <cmath>
#include <limits>
#include <ostream>
#include <vector>

#include "skew_euler/boundary.hpp"
#include "skew_euler/config.hpp"
#include "skew_euler/manufactured.hpp"
#include "skew_euler/solver.hpp"

namespace skew_euler {

struct SweepRow {
  double Mn = 0.0;
  BoundaryEigenvalues lambda{};
  int neg_count = 0;
};

/// Closed-form boundary eigenvalues over Mn in [mn_min, mn_max] (steps + 1
/// points) with c = 1.
inline std::vector<SweepRow> sweep_eigenvalues(const GasModel& g, double mn_min, double mn_max,
                                               std::size_t steps) {
  std::vector<SweepRow> rows;
  for (std::size_t k = 0; k <= steps; ++k) {
    const double mn = steps == 0 ? mn_min
                                 : mn_min + (mn_max - mn_min) * static_cast<double>(k) /
                                                static_cast<double>(steps);
    const BcRegimeReport r = required_bc_count(mn, 1.0, g);
    rows.push_back({mn, r.eigenvalues, r.eig_count_negative});
  }
  return rows;
}

/// CSV `Mn,lambda1,lambda2,re_lambda3,im_lambda3,re_lambda4,im_lambda4,neg_count`.
inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "Mn,lambda1,lambda2,re_lambda3,im_lambda3,re_lambda4,im_lambda4,neg_count\n";
  for (const auto& r : rows)
    os << format_double(r.Mn) << ',' << format_double(r.lambda[0].real()) << ','
       << format_double(r.lambda[1].real()) << ',' << format_double(r.lambda[2].real()) << ','
       << format_double(r.lambda[2].imag()) << ',' << format_double(r.lambda[3].real()) << ','
       << format_double(r.lambda[3].imag()) << ',' << r.neg_count << '\n';
}

struct ConvergenceRow {
  int level = 0;
  std::size_t nx = 0, ny = 0;
  double h = 0.0;
  double l2_error = 0.0;
  double observed_order = std::numeric_limits<double>::quiet_NaN();
};

/// Node count after `level` uniform refinements: bounded directions keep both
/// end points, periodic ones double.
inline std::size_t refined_count(std::size_t n, Topology t, int level) {
  const std::size_t f = std::size_t{1} << level;
  return t == Topology::periodic ? n * f : (n - 1) * f + 1;
}

/// Manufactured-solution refinement study: runs the configured case on
/// `levels` successively doubled grids and compares with the exact field at t_end.
inline std::vector<ConvergenceRow> converge(const RunConfig& base, int levels) {
  if (base.initial != InitialKind::manufactured)
    throw ConfigError("converge needs initial.kind = manufactured", 0);
  if (levels < 2) throw ConfigError("converge needs at least 2 levels", 0);
  std::vector<ConvergenceRow> rows;
  for (int l = 0; l < levels; ++l) {
    RunConfig c = base;
    c.grid.nx = refined_count(base.grid.nx, base.grid.topo_x, l);
    c.grid.ny = refined_count(base.grid.ny, base.grid.topo_y, l);
    if (c.dt > 0.0) c.dt = base.dt / static_cast<double>(std::size_t{1} << l);
    c.snapshot_times.clear();
    c.sample_stride = std::numeric_limits<std::size_t>::max();
    const Scheme<> scheme(to_scheme_config(c));
    const RunRecord rec = scheme.run(initial_field(c));
    const Field exact = ManufacturedSolution(c.grid, c.gas).sample(c.grid, c.t_end);
    ConvergenceRow row;
    row.level = l;
    row.nx = c.grid.nx;
    row.ny = c.grid.ny;
    row.h = std::max(c.grid.hx(), c.grid.hy());
    row.l2_error = l2_difference(rec.final_field, exact, scheme.operators());
    if (!rows.empty())
      row.observed_order = std::log(rows.back().l2_error / row.l2_error) /
                           std::log(rows.back().h / row.h);
    rows.push_back(row);
  }
  return rows;
}

/// CSV `level,nx,ny,h,l2_error,observed_order` (order empty on the first level).
inline void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows) {
  os << "level,nx,ny,h,l2_error,observed_order\n";
  for (const auto& r : rows) {
    os << r.level << ',' << r.nx << ',' << r.ny << ',' << format_double(r.h) << ','
       << format_double(r.l2_error) << ',';
    if (!std::isnan(r.observed_order)) os << format_double(r.observed_order);
    os << '\n';
  }
}

}  // namespace skew_euler
