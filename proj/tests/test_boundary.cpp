#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "skew_euler/boundary.hpp"
#include "skew_euler/random.hpp"
#include "skew_euler/studies.hpp"
#include "skew_euler/verify.hpp"

using namespace skew_euler;

namespace {
UnitNormal angle_normal(double a) { return {std::cos(a), std::sin(a)}; }
}  // namespace

TEST(Boundary, NormalValidation) {
  EXPECT_THROW(make_normal(1.0, 0.1), NormalizationError);
  EXPECT_THROW(make_normal(0.0, 0.0), NormalizationError);
  EXPECT_NO_THROW(make_normal(0.6, 0.8));
  EXPECT_THROW(rotate({1, 0, 0, 1}, UnitNormal{2.0, 0.0}), NormalizationError);
}

TEST(Boundary, RotationExamples) {
  const SkewState s{2, 2, 4, 3};  // u = 1, v = 2
  const RotatedState rx = rotate(s, {1, 0});
  EXPECT_DOUBLE_EQ(rx.phi1_un, s.phi2);
  EXPECT_DOUBLE_EQ(rx.phi1_ut, s.phi3);
  const RotatedState ry = rotate(s, {0, 1});
  EXPECT_DOUBLE_EQ(ry.phi1_un, s.phi3);
  EXPECT_DOUBLE_EQ(ry.phi1_ut, -s.phi2);
  EXPECT_DOUBLE_EQ(normal_velocity(s, {0, 1}), 2.0);

  Rng rng(3);
  for (int k = 0; k < 500; ++k) {
    const SkewState q = random_state(rng);
    const RotatedState r = rotate(q, angle_normal(rng.uniform(0, 2 * std::numbers::pi)));
    const double a = r.phi1_un * r.phi1_un + r.phi1_ut * r.phi1_ut;
    const double b = q.phi2 * q.phi2 + q.phi3 * q.phi3;
    EXPECT_NEAR(a, b, 1e-14 * std::max(b, 1e-300));
    EXPECT_EQ(r.phi1, q.phi1);
    EXPECT_EQ(r.phi4, q.phi4);
  }
}

TEST(Boundary, MatrixAtRest) {
  const GasModel g{1.4, 1.0};
  const SkewState s{1.2, 0, 0, 0.9};
  const UnitNormal n = angle_normal(0.7);
  const Mat4 m = boundary_matrix(s, n, g);
  const double r = 0.4 * 0.9 / 1.2;
  Mat4 expect = Mat4::Zero();
  expect(1, 3) = expect(3, 1) = r * n.nx;
  expect(2, 3) = expect(3, 2) = r * n.ny;
  EXPECT_LE((m - expect).cwiseAbs().maxCoeff(), 1e-16);
}

TEST(Boundary, ContractionExample) {
  const GasModel g{1.4, 1.0};
  const SkewState s{1, 1, 0, 1};
  EXPECT_NEAR(expanded_contraction(s, {1, 0}, g), 2.6, 1e-15);
  const Vec4 phi = s.vec();
  EXPECT_NEAR(phi.dot(boundary_matrix(s, {1, 0}, g) * phi), 2.6, 1e-15);
}

TEST(Boundary, ContractionEqualities) {
  Rng rng(13);
  for (int k = 0; k < 1000; ++k) {
    const GasModel g{k % 2 ? 1.4 : 5.0 / 3.0, rng.uniform(0.5, 2)};
    const SkewState s = random_state(rng);
    const UnitNormal n = angle_normal(rng.uniform(0, 2 * std::numbers::pi));
    const Vec4 phi = s.vec();
    const Mat4 m = boundary_matrix(s, n, g);
    const Mat4 full = n.nx * coeff_Atilde(s, g) + n.ny * coeff_Btilde(s, g);
    EXPECT_LE((m - 0.5 * (full + full.transpose())).cwiseAbs().maxCoeff(), 1e-15 * (1 + full.cwiseAbs().maxCoeff()));
    const double e = expanded_contraction(s, n, g);
    const double scale = detail::abs_quadratic(m, phi);
    EXPECT_LE(std::abs(phi.dot(m * phi) - e), 1e-13 * scale);
    EXPECT_LE(std::abs(phi.dot(full * phi) - e), 1e-13 * detail::abs_quadratic(full, phi));
    const Vec4 pr = rotate(s, n).vec();
    const Mat4 mr = rotated_boundary_matrix(s, n, g);
    EXPECT_LE(std::abs(pr.dot(mr * pr) - e), 1e-13 * detail::abs_quadratic(mr, pr));
  }
}

TEST(Boundary, WallContractionVanishes) {
  Rng rng(14);
  for (int k = 0; k < 100; ++k) {
    SkewState s = random_state(rng);
    s.phi2 = 0.0;
    EXPECT_EQ(expanded_contraction(s, {1, 0}, {}), 0.0);
    EXPECT_EQ(expanded_contraction(s, {-1, 0}, {}), 0.0);
  }
}

TEST(Boundary, FreeParameterContraction) {
  Rng rng(15);
  for (int k = 0; k < 1000; ++k) {
    const SkewState s = random_state(rng);
    const UnitNormal n = angle_normal(rng.uniform(0, 2 * std::numbers::pi));
    EXPECT_EQ(free_param_contraction(s, n, {}), 0.0);
    const FreeParams ones{1, 1, 1, 1};
    EXPECT_LE(std::abs(free_param_contraction(s, {1, 0}, ones)),
              1e-13 * free_param_contraction_scale(s, {1, 0}, ones));
    const FreeParams fp{rng.uniform(-100, 100), rng.uniform(-100, 100), rng.uniform(-100, 100),
                        rng.uniform(-100, 100)};
    EXPECT_LE(std::abs(free_param_contraction(s, n, fp)),
              1e-11 * free_param_contraction_scale(s, n, fp));
    // same quantity taken from the skew matrices themselves
    const GasModel g{1.4, 1.0};
    const Mat4 diff = n.nx * (coeff_Atilde(s, g, fp) - coeff_Atilde(s, g)) +
                      n.ny * (coeff_Btilde(s, g, fp) - coeff_Btilde(s, g));
    const Vec4 phi = s.vec();
    EXPECT_LE(std::abs(phi.dot(diff * phi)), 1e-12 * detail::abs_quadratic(diff, phi));
  }
}

TEST(Boundary, ThresholdConstants) {
  EXPECT_NEAR(mach_threshold({1.4, 1.0}), 0.97590, 1e-4);
  EXPECT_NEAR(mach_threshold({1.4, 1.0}), std::sqrt(0.8 / 0.84), 1e-15);
  EXPECT_NEAR(mach_threshold({std::numbers::sqrt2, 1.0}), 1.0, 1e-9);
  EXPECT_THROW(mach_threshold({2.0, 1.0}), ModelError);
  EXPECT_THROW(closed_form_eigenvalues(0.1, 1.0, {2.5, 1.0}), ModelError);
  EXPECT_THROW(closed_form_eigenvalues(0.1, 0.0, {1.4, 1.0}), ModelError);
}

TEST(Boundary, EigenvaluesAtWall) {
  const GasModel g{1.4, 1.0};
  const BoundaryEigenvalues l = closed_form_eigenvalues(0.0, 1.0, g);
  EXPECT_EQ(l[0], 0.0);
  EXPECT_EQ(l[1], 0.0);
  const double expect = 0.4 / std::sqrt(1.4);
  EXPECT_NEAR(expect, 0.3381, 1e-4);
  EXPECT_NEAR(std::max(l[2].real(), l[3].real()), expect, 1e-15);
  EXPECT_NEAR(std::min(l[2].real(), l[3].real()), -expect, 1e-15);
  // numerical spectrum of the rotated matrix for a resting state with c = 1
  const double phi4 = 1.0 / std::sqrt(1.4);
  const SpectrumComparison cmp = eigenvalue_crosscheck({1, 0, 0, phi4}, {0.6, 0.8}, g);
  EXPECT_LE(cmp.relative(), 1e-12);
}

TEST(Boundary, EigenvalueAtThresholdVanishes) {
  const GasModel g{1.4, 1.0};
  const double b = mach_threshold(g);
  const BoundaryEigenvalues l = closed_form_eigenvalues(b, 1.0, g);
  EXPECT_LE(std::min(std::abs(l[2]), std::abs(l[3])), 1e-15);
  EXPECT_NEAR(std::max(l[2].real(), l[3].real()), 0.5 * (3 - 1.4) * b, 1e-15);
}

TEST(Boundary, SpectrumCrosscheck) {
  Rng rng(16);
  for (int k = 0; k < 1000; ++k) {
    const GasModel g{k % 2 ? 1.4 : 5.0 / 3.0, rng.uniform(0.5, 2)};
    const SkewState s = random_state(rng);
    const UnitNormal n = angle_normal(rng.uniform(0, 2 * std::numbers::pi));
    EXPECT_LE(eigenvalue_crosscheck(s, n, g).relative(), 1e-10);
  }
}

TEST(Boundary, Alpha2EntersOnlyFirstEigenvalue) {
  const BoundaryEigenvalues a = closed_form_eigenvalues(0.3, 1.1, {1.4, 1.0});
  const BoundaryEigenvalues b = closed_form_eigenvalues(0.3, 1.1, {1.4, 3.0});
  EXPECT_DOUBLE_EQ(b[0].real(), 3.0 * a[0].real());
  for (int k = 1; k < 4; ++k) EXPECT_EQ(a[k], b[k]);
}

TEST(Boundary, RegimeCounts) {
  const GasModel g{1.4, 1.0};
  const BcRegimeReport sup_out = required_bc_count(2.0, 1.0, g);
  EXPECT_EQ(sup_out.eig_count_negative, 0);
  EXPECT_EQ(sup_out.nonlinear_bc_needed, 0);
  const BcRegimeReport sub_out = required_bc_count(0.5, 1.0, g);
  EXPECT_EQ(sub_out.eig_count_negative, 1);
  EXPECT_EQ(sub_out.nonlinear_bc_needed, 0);
  EXPECT_EQ(required_bc_count(-2.0, 1.0, g).eig_count_negative, 4);
  EXPECT_EQ(required_bc_count(-2.0, 1.0, g).nonlinear_bc_needed, 4);
  EXPECT_EQ(required_bc_count(-0.5, 1.0, g).eig_count_negative, 3);
  EXPECT_DOUBLE_EQ(sub_out.Mn, 0.5);
  EXPECT_FALSE(sub_out.complex_pair);

  const double b = mach_threshold(g);
  EXPECT_EQ(required_bc_count(b - 1e-6, 1.0, g).eig_count_negative, 1);
  EXPECT_EQ(required_bc_count(b + 1e-6, 1.0, g).eig_count_negative, 0);
  const GasModel r2{std::numbers::sqrt2, 1.0};
  EXPECT_EQ(required_bc_count(1.0 - 1e-6, 1.0, r2).eig_count_negative, 1);
  EXPECT_EQ(required_bc_count(1.0 + 1e-6, 1.0, r2).eig_count_negative, 0);
}

TEST(Boundary, SweepTransition) {
  const auto rows = sweep_eigenvalues({1.4, 1.0}, 0.9, 1.05, 150);
  ASSERT_EQ(rows.size(), 151u);
  std::size_t first_zero = rows.size();
  for (std::size_t k = 0; k < rows.size(); ++k)
    if (rows[k].neg_count == 0) {
      first_zero = k;
      break;
    }
  ASSERT_LT(first_zero, rows.size());
  EXPECT_EQ(rows[first_zero - 1].neg_count, 1);
  EXPECT_LE(rows[first_zero - 1].Mn, 0.9759);
  EXPECT_GE(rows[first_zero].Mn, 0.9759);
  for (std::size_t k = first_zero; k < rows.size(); ++k) EXPECT_EQ(rows[k].neg_count, 0);

  std::stringstream ss;
  write_sweep_csv(ss, rows);
  EXPECT_EQ(ss.str().substr(0, ss.str().find('\n')),
            "Mn,lambda1,lambda2,re_lambda3,im_lambda3,re_lambda4,im_lambda4,neg_count");
}

TEST(Boundary, WallPenalty) {
  const GasModel g{1.4, 1.0};
  const Vec4 pdiag = norm_matrix(g).diag;
  EXPECT_EQ(wall_sat_penalty({1.1, 0, 0.4, 0.8}, {1, 0}, g, 1.0), Vec4::Zero());
  EXPECT_EQ(wall_sat_penalty({1.1, 0.3, 0.4, 0.8}, {1, 0}, g, 0.0), Vec4::Zero());
  Rng rng(18);
  for (int k = 0; k < 1000; ++k) {
    const SkewState s = random_state(rng);
    const UnitNormal n = angle_normal(rng.uniform(0, 2 * std::numbers::pi));
    const double sigma = rng.uniform(0, 10);
    const Vec4 p = wall_sat_penalty(s, n, g, sigma);
    const double rate = 2 * s.vec().dot(pdiag.asDiagonal() * p);
    const double mflux = s.phi1 * normal_velocity(s, n);
    const double expect = -2 * sigma * wall_penalty_scale(s, g) * g.beta2() * mflux * mflux;
    EXPECT_LE(rate, 0.0);
    EXPECT_NEAR(rate, expect, 1e-13 * (std::abs(expect) + 1e-300) + 1e-300);
    // the flux-cancelling term removes exactly the contraction
    const double cancel = 2 * s.vec().dot(pdiag.asDiagonal() * wall_flux_cancel(s, n, g));
    const double e = expanded_contraction(s, n, g);
    EXPECT_NEAR(cancel, e, 1e-13 * std::abs(e) + 1e-15);
  }
}
