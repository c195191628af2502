#include <gtest/gtest.h>

#include <cmath>

#include "sdw/errors.hpp"
#include "sdw/geodesic.hpp"
#include "support.hpp"

using namespace sdw;
using sdw::testing::kPi;

namespace {

GeodesicSolution flow(const MetricField& m, RVector x0, RVector v0, int steps = 200) {
  return integrate_flow(m, x0, v0, steps);
}

}  // namespace

TEST(Flow, FlatStraightLine) {
  auto sol = flow(catalog::flat(2), {0.0, 0.0}, {1.0, 2.0}, 10);
  ASSERT_EQ(sol.nodes.size(), 11u);
  for (std::size_t i = 0; i < sol.nodes.size(); ++i) {
    const double s = sol.s(i);
    EXPECT_NEAR(sol.nodes[i].x[0], s, 1e-15);
    EXPECT_NEAR(sol.nodes[i].x[1], 2 * s, 1e-15);
    EXPECT_NEAR(sol.nodes[i].p[0], 1.0, 1e-15);
    EXPECT_NEAR(sol.nodes[i].p[1], 2.0, 1e-15);
    const RMatrix b = sol.propagator[i].block(0, 2, 2, 2);
    EXPECT_NEAR(b(0, 0), s, 1e-15);
    EXPECT_NEAR(b(1, 1), s, 1e-15);
    EXPECT_NEAR(b(0, 1), 0.0, 1e-15);
  }
}

TEST(Flow, MinkowskiEnergyConserved) {
  auto sol = flow(catalog::minkowski2(), {0.0, 0.0}, {1.0, 0.0});
  EXPECT_DOUBLE_EQ(sol.energy(), -0.5);
  for (const auto& n : sol.nodes) {
    const double e = 0.5 * (n.p[0] * n.v[0] + n.p[1] * n.v[1]);
    EXPECT_NEAR(e, -0.5, 1e-14);
  }
}

TEST(Flow, SphereEquatorIsAGreatCircle) {
  auto sol = flow(catalog::sphere2(), {kPi / 2, 0.0}, {0.0, 1.0});
  EXPECT_NEAR(sol.nodes.back().x[0], kPi / 2, 1e-10);
  EXPECT_NEAR(sol.nodes.back().x[1], 1.0, 1e-10);
}

TEST(Flow, InclinedSphereGeodesicStaysOnItsGreatCircle) {
  // the great circle through the start point with the start direction, checked by the
  // embedding: the path stays in the plane orthogonal to n = p0 x t0
  const double th = 1.1, ph = 0.2, vth = 0.6, vph = 0.9;
  auto sol = flow(catalog::sphere2(), {th, ph}, {vth, vph});
  auto embed = [](double t, double f) {
    return std::array<double, 3>{std::sin(t) * std::cos(f), std::sin(t) * std::sin(f), std::cos(t)};
  };
  const auto p0 = embed(th, ph);
  const std::array<double, 3> e_th = {std::cos(th) * std::cos(ph), std::cos(th) * std::sin(ph), -std::sin(th)};
  const std::array<double, 3> e_ph = {-std::sin(th) * std::sin(ph), std::sin(th) * std::cos(ph), 0.0};
  std::array<double, 3> t0{}, n{};
  for (int i = 0; i < 3; ++i) t0[i] = vth * e_th[i] + vph * e_ph[i];
  n = {p0[1] * t0[2] - p0[2] * t0[1], p0[2] * t0[0] - p0[0] * t0[2], p0[0] * t0[1] - p0[1] * t0[0]};
  const double speed = std::sqrt(vth * vth + std::sin(th) * std::sin(th) * vph * vph);
  for (std::size_t i = 0; i < sol.nodes.size(); i += 20) {
    const auto q = embed(sol.nodes[i].x[0], sol.nodes[i].x[1]);
    EXPECT_NEAR(q[0] * n[0] + q[1] * n[1] + q[2] * n[2], 0.0, 1e-10);
    const double angle = std::acos(std::clamp(q[0] * p0[0] + q[1] * p0[1] + q[2] * p0[2], -1.0, 1.0));
    EXPECT_NEAR(angle, speed * sol.s(i), 1e-9);
  }
}

TEST(Flow, PropagatorIsSymplectic) {
  auto sol = flow(catalog::hyperbolic2(), {1.0, 0.1}, {0.4, -0.7});
  const RMatrix& phi = sol.propagator.back();
  EXPECT_NEAR(determinant(phi), 1.0, 1e-10);
  RMatrix j(4, 4);
  j(0, 2) = j(1, 3) = 1.0;
  j(2, 0) = j(3, 1) = -1.0;
  const RMatrix defect = phi.transpose() * j * phi - j;
  EXPECT_LT(frobenius_norm(defect), 1e-10);
}

TEST(Bvp, FlatConvergesInOneNewtonStep) {
  auto sol = shoot_bvp(catalog::flat(2), RVector{0.0, 0.0}, RVector{1.0, 2.0});
  EXPECT_NEAR(sol.v0[0], 1.0, 1e-14);
  EXPECT_NEAR(sol.v0[1], 2.0, 1e-14);
  EXPECT_LE(sol.newton_iterations, 1);
}

TEST(Bvp, SphereQuarterEquator) {
  auto sol = shoot_bvp(catalog::sphere2(), RVector{kPi / 2, 0.0}, RVector{kPi / 2, kPi / 2}, RVector{0.0, 1.0});
  EXPECT_NEAR(sol.v0[0], 0.0, 1e-10);
  EXPECT_NEAR(sol.v0[1], kPi / 2, 1e-10);
  EXPECT_NEAR(sol.energy(), kPi * kPi / 8, 1e-10);
  EXPECT_LT(sol.residual, 1e-12);
}

TEST(Bvp, HitsTheEndpointOnCurvedCharts) {
  const RVector a = {0.8, 0.1}, b = {1.5, -0.6};
  for (const auto& m : {catalog::sphere2(), catalog::hyperbolic2(), catalog::desitter2()}) {
    auto sol = shoot_bvp(m, a, b);
    EXPECT_NEAR(sol.nodes.back().x[0], b[0], 1e-11) << m.name();
    EXPECT_NEAR(sol.nodes.back().x[1], b[1], 1e-11) << m.name();
  }
}

TEST(Bvp, AntipodalEndpointsAreConjugate) {
  const RVector x = {1.2, 1.5};
  const RVector xp = {kPi - 1.2, 1.5 - kPi};
  EXPECT_THROW(shoot_bvp(catalog::sphere2(), xp, x), ConjugatePointError);
}

TEST(JacobiBlock, FlatIsDifferenceTimesIdentity) {
  auto sol = flow(catalog::flat(2), {0.3, 0.1}, {0.5, -1.0}, 50);
  for (auto [s, t] : {std::pair{50, 0}, std::pair{10, 40}, std::pair{25, 5}}) {
    const RMatrix j = jacobi_block(sol, s, t);
    const double ds = sol.s(s) - sol.s(t);
    EXPECT_NEAR(j(0, 0), ds, 1e-14);
    EXPECT_NEAR(j(1, 1), ds, 1e-14);
    EXPECT_NEAR(determinant(j), ds * ds, 1e-14);
  }
  EXPECT_LT(frobenius_norm(jacobi_block(sol, 17, 17)), 1e-15);
}

TEST(JacobiBlock, SphereEquatorTransverseSine) {
  const double rho = 0.8 * kPi;
  auto sol = flow(catalog::sphere2(), {kPi / 2, 0.0}, {0.0, rho});
  for (std::size_t s : {40u, 100u, 200u}) {
    const RMatrix j = jacobi_block(sol, s, 0);
    EXPECT_NEAR(j(0, 0), std::sin(rho * sol.s(s)) / rho, 1e-9);
    EXPECT_NEAR(j(1, 1), sol.s(s), 1e-9);
  }
}

TEST(ConjugateCheck, FlatPassesWithUnitDeterminant) {
  auto sol = flow(catalog::flat(2), {0.0, 0.0}, {1.0, 2.0}, 40);
  auto r = check_conjugate_free(sol);
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.min_normalized_det, 1.0, 1e-12);
}

TEST(ConjugateCheck, SphereArcBelowPiPasses) {
  auto sol = flow(catalog::sphere2(), {kPi / 2, -0.45 * kPi}, {0.0, 0.9 * kPi});
  auto r = check_conjugate_free(sol);
  EXPECT_TRUE(r.pass);
  EXPECT_FALSE(r.crossing);
  // the smallest normalized value is sin(rho)/rho for the full arc
  EXPECT_NEAR(r.min_normalized_det, std::sin(0.9 * kPi) / (0.9 * kPi), 1e-6);
}

TEST(ConjugateCheck, SphereArcAbovePiFails) {
  auto sol = flow(catalog::sphere2(), {kPi / 2, -0.6 * kPi}, {0.0, 1.2 * kPi});
  auto r = check_conjugate_free(sol);
  EXPECT_FALSE(r.pass);
  ASSERT_TRUE(r.crossing);
  EXPECT_NEAR(r.arc_separation, kPi, 1e-2);
}
