// Acceptance runner. One PASS/FAIL line per criterion; `--only N` runs one.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "skew_euler/skew_euler.hpp"

using namespace skew_euler;

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

void check(Outcome& o, bool ok, const std::string& what) {
  o.pass = o.pass && ok;
  if (!o.detail.empty()) o.detail += "; ";
  o.detail += what + (ok ? "" : " [x]");
}

Outcome criterion_1() {
  Outcome o;
  Rng rng(1001);
  const auto t0 = Clock::now();
  const SuiteResult x = detail::suite_skew_identity(Direction::x, rng, 1000);
  const SuiteResult y = detail::suite_skew_identity(Direction::y, rng, 1000);
  const double dt = seconds_since(t0);
  check(o, x.max_residual <= 1e-12, "x residual " + fmt(x.max_residual) + " <= 1e-12");
  check(o, y.max_residual <= 1e-12, "y residual " + fmt(y.max_residual) + " <= 1e-12");
  check(o, dt < 1.0, "runtime " + fmt(dt) + " s < 1 s");
  return o;
}

Outcome criterion_2() {
  Outcome o;
  Rng rng(1002);
  const SuiteResult r = detail::suite_free_param_contraction(rng, 10000);
  check(o, r.max_residual <= 1e-11, "10000 samples, max |value|/scale " + fmt(r.max_residual) + " <= 1e-11");
  return o;
}

Outcome criterion_3() {
  Outcome o;
  Rng rng(1003);
  // direct comparison with the closed-form quadratic
  double worst = 0.0, wall = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const GasModel g{detail::verify_gammas()[k % 3], rng.uniform(0.5, 2.0)};
    const SkewState s = random_state(rng);
    const UnitNormal n = detail::random_normal(rng);
    const double un = (s.phi2 * n.nx + s.phi3 * n.ny) / s.phi1;
    const double closed = un * (g.alpha2 * s.phi1 * s.phi1 +
                                0.5 * (g.gamma - 1) * (s.phi2 * s.phi2 + s.phi3 * s.phi3) +
                                g.gamma * s.phi4 * s.phi4);
    const Vec4 phi = s.vec();
    const Mat4 m = boundary_matrix(s, n, g);
    const double q = phi.dot(m * phi);
    worst = std::max(worst, std::abs(q - closed) / std::max(detail::abs_quadratic(m, phi), std::abs(closed)));
  }
  const std::array<UnitNormal, 4> walls = {UnitNormal{1, 0}, UnitNormal{-1, 0}, UnitNormal{0, 1}, UnitNormal{0, -1}};
  for (int k = 0; k < 1000; ++k) {
    SkewState s = random_state(rng);
    const UnitNormal n = walls[k % 4];
    (n.nx != 0.0 ? s.phi2 : s.phi3) = 0.0;
    const Mat4 m = boundary_matrix(s, n, {1.4, 1.0});
    wall = std::max(wall, std::abs(s.vec().dot(m * s.vec())) / detail::abs_quadratic(m, s.vec()));
  }
  const SuiteResult lib = detail::suite_boundary_contraction(rng, 1000);
  check(o, worst <= 1e-13, "closed form residual " + fmt(worst) + " <= 1e-13");
  check(o, wall <= 1e-13, "wall residual " + fmt(wall) + " <= 1e-13");
  check(o, lib.max_residual <= 1e-13, "rotated/expanded forms " + fmt(lib.max_residual) + " <= 1e-13");
  return o;
}

Outcome criterion_4() {
  Outcome o;
  const double b14 = mach_threshold({1.4, 1.0});
  const double b2 = mach_threshold({std::numbers::sqrt2, 1.0});
  check(o, std::abs(b14 - 0.97590) <= 1e-4, "b(1.4) = " + std::to_string(b14));
  check(o, std::abs(b2 - 1.0) <= 1e-9, "b(sqrt2) - 1 = " + fmt(b2 - 1.0));
  Rng rng(1004);
  double spectrum = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const GasModel g{k % 2 ? 5.0 / 3.0 : 1.4, rng.uniform(0.5, 2.0)};
    spectrum = std::max(spectrum, eigenvalue_crosscheck(random_state(rng), detail::random_normal(rng), g).relative());
  }
  check(o, spectrum <= 1e-10, "closed form vs numerical spectrum " + fmt(spectrum) + " <= 1e-10");
  // bisection on the count change; it must bracket b within 1e-6
  for (double gamma : {1.4, std::numbers::sqrt2, 5.0 / 3.0}) {
    const GasModel g{gamma, 1.0};
    double lo = 0.0, hi = 3.0;
    if (required_bc_count(lo, 1.0, g).eig_count_negative != 1 ||
        required_bc_count(hi, 1.0, g).eig_count_negative != 0) {
      check(o, false, "count not 1 -> 0 on [0, 3] for gamma " + fmt(gamma));
      continue;
    }
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (required_bc_count(mid, 1.0, g).eig_count_negative == 1 ? lo : hi) = mid;
    }
    const double err = std::abs(0.5 * (lo + hi) - mach_threshold(g));
    check(o, err <= 1e-6, "transition at b for gamma " + fmt(gamma) + " (|err| " + fmt(err) + ")");
  }
  return o;
}

Outcome criterion_5() {
  Outcome o;
  const SuiteResult c = detail::suite_sbp_constraint();
  check(o, c.max_residual <= 1e-15, std::to_string(c.samples) + " operators, max |Q+Q^T-B| " + fmt(c.max_residual) + " <= 1e-15");
  Rng rng(1005);
  const SuiteResult ibp = detail::suite_integration_by_parts(rng, 20);
  check(o, ibp.max_residual <= 1e-13, "integration by parts " + fmt(ibp.max_residual) + " <= 1e-13");
  return o;
}

Outcome criterion_6() {
  Outcome o;
  Rng rng(1006);
  for (int order : {2, 4})
    for (const Grid2D& g : detail::identity_grids()) {
      SchemeConfig cfg;
      cfg.grid = g;
      cfg.order = order;
      const Scheme<> s(cfg);
      double worst = 0.0;
      for (int k = 0; k < 100; ++k) {
        const Field f = random_field(g.nx, g.ny, rng);
        worst = std::max(worst, s.energy_rate_residual(f) / s.energy(f));
      }
      check(o, worst <= 1e-11,
            std::string(g.topo_x == Topology::periodic ? "periodic " : "bounded ") +
                std::to_string(g.nx) + "x" + std::to_string(g.ny) + " order " +
                std::to_string(order) + ": " + fmt(worst));
    }
  return o;
}

Outcome criterion_7() {
  Outcome o;
  const auto t0 = Clock::now();
  const Grid2D g{64, 64, 0, 1, 0, 1, Topology::periodic, Topology::periodic};
  const double k = 2 * std::numbers::pi, a = 0.3;
  const Field f0 = sample_field(g, [&](double x, double y) {
    return to_skew({1 + 0.5 * a * std::sin(k * x) * std::sin(k * y), 0.2 + a * std::sin(k * y),
                    -0.1 + a * std::cos(k * x), 1 + 0.5 * a * std::cos(k * (x + y))});
  });
  std::vector<double> drift, dts;
  double worst_rate = 0.0;
  for (double cfl : {0.5, 0.25, 0.125}) {
    SchemeConfig c;
    c.grid = g;
    c.order = 4;
    c.t_end = 1.0;
    c.cfl = cfl;
    const RunRecord rec = Scheme<>(c).run(f0);
    const double e0 = rec.samples.front().energy;
    drift.push_back(std::abs(rec.samples.back().energy - e0) / e0);
    dts.push_back(rec.dt);
    for (const auto& smp : rec.samples) worst_rate = std::max(worst_rate, smp.rate_residual / smp.energy);
  }
  const double runtime = seconds_since(t0);
  std::string ds;
  for (std::size_t i = 0; i < drift.size(); ++i)
    ds += (i ? ", " : "") + fmt(drift[i]) + " (C " + fmt(drift[i] / std::pow(dts[i], 4)) + ")";
  check(o, true, "drift " + ds);
  for (std::size_t i = 1; i < drift.size(); ++i) {
    const double p = std::log(drift[i - 1] / drift[i]) / std::log(dts[i - 1] / dts[i]);
    check(o, std::abs(p - 4.0) <= 0.3, "Richardson order " + fmt(p) + " in 4.0 +- 0.3");
  }
  check(o, worst_rate <= 1e-11, "rate residual " + fmt(worst_rate) + " <= 1e-11");
  check(o, runtime < 60.0, "runtime " + fmt(runtime) + " s < 60 s");
  return o;
}

Outcome criterion_8() {
  Outcome o;
  const auto t0 = Clock::now();
  for (int order : {2, 4}) {
    RunConfig c;
    c.grid = {33, 33, 0, 1, 0, 1, Topology::bounded, Topology::bounded};
    c.order = order;
    c.initial = InitialKind::manufactured;
    c.t_end = 0.5;
    const auto rows = converge(c, 3);
    const double need = order == 2 ? 1.8 : 2.8;
    std::string errs;
    for (const auto& r : rows) errs += (errs.empty() ? "" : "/") + fmt(r.l2_error);
    for (std::size_t i = 1; i < rows.size(); ++i)
      check(o, rows[i].observed_order >= need,
            "order " + std::to_string(order) + " " + std::to_string(rows[i - 1].nx) + "->" +
                std::to_string(rows[i].nx) + ": " + fmt(rows[i].observed_order) + " >= " + fmt(need));
    check(o, true, "L2 errors " + errs);
  }
  const double runtime = seconds_since(t0);
  check(o, runtime < 300.0, "runtime " + fmt(runtime) + " s < 300 s");
  return o;
}

Outcome criterion_9() {
  Outcome o;
  Rng rng(1009);
  double worst = 0.0;  // error in units of eps * sum |K_rc u_c|
  for (auto [tx, ty] : {std::pair{Topology::bounded, Topology::bounded}, std::pair{Topology::periodic, Topology::periodic},
                        std::pair{Topology::bounded, Topology::periodic}}) {
    const Grid2D g{6, 7, 0, 1, 0, 1.3, tx, ty};
    const TensorApplicator t = make_applicator(g, 2);
    const Eigen::MatrixXd dx = t.x_op().dense_d(), dy = t.y_op().dense_d();
    const std::size_t n = g.nx * g.ny;
    Eigen::MatrixXd kx = Eigen::MatrixXd::Zero(n, n), ky = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < g.nx; ++i)
      for (std::size_t j = 0; j < g.ny; ++j) {
        for (std::size_t a = 0; a < g.nx; ++a) kx(g.index(i, j), g.index(a, j)) = dx(i, a);
        for (std::size_t b = 0; b < g.ny; ++b) ky(g.index(i, j), g.index(i, b)) = dy(j, b);
      }
    const Field f = random_field(g.nx, g.ny, rng);
    const Field ax = apply_dx(f, t), ay = apply_dy(f, t);
    for (int c = 0; c < 4; ++c) {
      const Eigen::Map<const Eigen::VectorXd> u(f.component(c).data(), static_cast<Eigen::Index>(n));
      const Eigen::VectorXd ex = kx * u, ey = ky * u;
      const Eigen::VectorXd mx = kx.cwiseAbs() * u.cwiseAbs(), my = ky.cwiseAbs() * u.cwiseAbs();
      for (std::size_t r = 0; r < n; ++r) {
        const auto rr = static_cast<Eigen::Index>(r);
        if (mx[rr] > 0) worst = std::max(worst, std::abs(ax.component(c)[r] - ex[rr]) / (kEps * mx[rr]));
        if (my[rr] > 0) worst = std::max(worst, std::abs(ay.component(c)[r] - ey[rr]) / (kEps * my[rr]));
      }
    }
  }
  check(o, worst <= 4.0, "max |tensor - dense| = " + fmt(worst) + " eps (<= 4)");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria = {criterion_1, criterion_2, criterion_3,
                                                          criterion_4, criterion_5, criterion_6,
                                                          criterion_7, criterion_8, criterion_9};
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--only" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: acceptance [--only N]\n");
      return 2;
    }
  }
  if (only < 0 || only > static_cast<int>(criteria.size())) {
    std::fprintf(stderr, "criterion must be in 1..%zu\n", criteria.size());
    return 2;
  }
  bool all = true;
  for (int c = 1; c <= static_cast<int>(criteria.size()); ++c) {
    if (only && c != only) continue;
    Outcome o;
    try {
      o = criteria[c - 1]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %d: %s  %s\n", c, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
