#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "sdw/bundle.hpp"
#include "sdw/errors.hpp"
#include "sdw/synge.hpp"
#include "support.hpp"

using namespace sdw;
using namespace sdw::testing;

namespace {

struct TwoPoint {
  WorldFunctionData wf;
  VanVleckData vv;
};

// geodesic from x' to x
TwoPoint two_point(const MetricField& m, RVector x, RVector xp) {
  auto sol = shoot_bvp(m, xp, x);
  auto wf = world_function(sol);
  auto vv = van_vleck(m, wf, x, xp);
  return {wf, vv};
}

}  // namespace

TEST(WorldFunction, FlatHalfSquaredDistance) {
  auto t = two_point(catalog::flat(2), {1.0, 2.0}, {0.0, 0.0});
  EXPECT_NEAR(t.wf.sigma, 2.5, 1e-14);
  EXPECT_NEAR(t.wf.grad_x[0], 1.0, 1e-14);
  EXPECT_NEAR(t.wf.grad_x[1], 2.0, 1e-14);
  EXPECT_NEAR(t.wf.grad_xp[0], -1.0, 1e-14);
  EXPECT_NEAR(t.wf.grad_xp[1], -2.0, 1e-14);
  EXPECT_NEAR(t.wf.mixed(0, 0), -1.0, 1e-13);
  EXPECT_NEAR(t.wf.mixed(1, 1), -1.0, 1e-13);
  EXPECT_NEAR(t.wf.mixed(0, 1), 0.0, 1e-13);
  EXPECT_NEAR(t.vv.delta, 1.0, 1e-13);
  EXPECT_NEAR(t.vv.delta_sqrt, 1.0, 1e-13);
}

TEST(WorldFunction, MinkowskiSpacelikeAndSignRule) {
  auto t = two_point(catalog::minkowski2(), {1.0, 0.0}, {0.0, 0.0});
  EXPECT_NEAR(t.wf.sigma, -0.5, 1e-14);
  EXPECT_NEAR(t.wf.mixed(0, 0), 1.0, 1e-13);
  EXPECT_NEAR(t.wf.mixed(1, 1), -1.0, 1e-13);
  EXPECT_NEAR(t.vv.delta, -1.0, 1e-9);
  EXPECT_NEAR(t.vv.delta_sqrt, 1.0, 1e-9);
  EXPECT_EQ(t.vv.sign, -1);
}

TEST(WorldFunction, SignRuleIsTheSignOfTheMetricDeterminant) {
  EXPECT_EQ(expected_delta_sign(2, 2), 1);
  EXPECT_EQ(expected_delta_sign(2, 0), -1);
  EXPECT_EQ(expected_delta_sign(4, 2), -1);   // Lorentzian (-,+,+,+)
  EXPECT_EQ(expected_delta_sign(3, 1), -1);   // (-,+,+)
  EXPECT_EQ(expected_delta_sign(3, -1), 1);   // (-,-,+)
  EXPECT_EQ(expected_delta_sign(1, 1), 1);
}

TEST(WorldFunction, SphereQuarterCircle) {
  auto t = two_point(catalog::sphere2(), {kPi / 2, kPi / 4}, {kPi / 2, -kPi / 4});
  EXPECT_NEAR(t.wf.sigma, kPi * kPi / 8, 1e-10);
  EXPECT_NEAR(t.vv.delta, kPi / 2, 1e-6);
}

TEST(WorldFunction, SphereGenericPairs) {
  const RVector pairs[][2] = {{{0.7, 0.3}, {1.9, -0.8}}, {{1.2, 1.0}, {2.4, 0.1}}, {{2.5, -1.2}, {0.9, 0.6}}};
  for (const auto& p : pairs) {
    const double rho = sphere_distance(p[0], p[1]);
    auto t = two_point(catalog::sphere2(), p[0], p[1]);
    EXPECT_NEAR(t.wf.sigma, 0.5 * rho * rho, 1e-8 * std::max(1.0, t.wf.sigma));
    EXPECT_NEAR(t.vv.delta, rho / std::sin(rho), 1e-8);
  }
}

TEST(WorldFunction, HyperbolicPairs) {
  const RVector pairs[][2] = {{{1.0, 0.0}, {1.4, 0.9}}, {{0.5, -1.0}, {1.8, 0.7}}};
  for (const auto& p : pairs) {
    const double rho = hyperbolic_distance(p[0], p[1]);
    auto t = two_point(catalog::hyperbolic2(), p[0], p[1]);
    EXPECT_NEAR(t.wf.sigma, 0.5 * rho * rho, 1e-8 * std::max(1.0, t.wf.sigma));
    EXPECT_NEAR(t.vv.delta, rho / std::sinh(rho), 1e-8);
  }
}

TEST(WorldFunction, GradientIdentity) {
  // g^{mu nu} sigma_mu sigma_nu = 2 sigma at both ends
  auto m = catalog::desitter2();
  const RVector x = {0.3, 0.9}, xp = {-0.2, -0.4};
  auto t = two_point(m, x, xp);
  auto ginv_x = m.metric_at<double>(std::span<const double>(x)).ginv;
  auto ginv_xp = m.metric_at<double>(std::span<const double>(xp)).ginv;
  double q = 0.0, qp = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      q += ginv_x(i, j) * t.wf.grad_x[i] * t.wf.grad_x[j];
      qp += ginv_xp(i, j) * t.wf.grad_xp[i] * t.wf.grad_xp[j];
    }
  EXPECT_NEAR(q, 2 * t.wf.sigma, 1e-10);
  EXPECT_NEAR(qp, 2 * t.wf.sigma, 1e-10);
}

TEST(Adjoint, IdentityFormIsConjugateTranspose) {
  std::mt19937_64 rng(7);
  const CMatrix m = random_matrix(3, rng);
  const CMatrix a = adjoint(m, FiberForm::identity(3));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(a(i, j), std::conj(m(j, i)));
}

TEST(Adjoint, IndefiniteForm) {
  FiberForm form(CMatrix{{1.0, 0.0}, {0.0, -1.0}});
  const CMatrix a = adjoint(CMatrix{{0.0, 1.0}, {0.0, 0.0}}, form);
  EXPECT_EQ(a(0, 0), Complex(0.0));
  EXPECT_EQ(a(0, 1), Complex(0.0));
  EXPECT_EQ(a(1, 0), Complex(-1.0));
  EXPECT_EQ(a(1, 1), Complex(0.0));
}

TEST(Adjoint, IsAnInvolution) {
  std::mt19937_64 rng(11);
  const CMatrix s{{2.0, Complex(0.5, 0.3)}, {Complex(0.5, -0.3), -1.0}};
  FiberForm form(s);
  for (int trial = 0; trial < 100; ++trial) {
    const CMatrix m = random_matrix(2, rng);
    EXPECT_LT(max_abs_diff(adjoint(adjoint(m, form), form), m), 1e-14);
  }
}

TEST(FiberForm, RejectsNonHermitianOrSingular) {
  EXPECT_THROW(FiberForm(CMatrix{{1.0, 2.0}, {0.0, 1.0}}), ValidationError);
  EXPECT_THROW(FiberForm(CMatrix{{1.0, 1.0}, {1.0, 1.0}}), ValidationError);
}

TEST(Gauge, ValidationRejectsNonHermitianPotential) {
  const int d = 2;
  auto zero = ExpressionMatrix(2, std::vector<ComplexExpression>(2, czero()));
  ExpressionMatrix b = {{cexpr("1", "0", d), cexpr("x0", "0", d)}, {cexpr("0", "0", d), cexpr("1", "0", d)}};
  GaugeFields g(d, 2, {zero, zero}, b);
  const ChartBox box{{-1.0, -1.0}, {1.0, 1.0}};
  EXPECT_THROW(g.validate(FiberForm::identity(2), box), ValidationError);
  // hermitian A is not a connection of a compatible form
  ExpressionMatrix a = {{cexpr("1", "0", d), czero()}, {czero(), czero()}};
  GaugeFields h(d, 2, {a, zero}, zero);
  EXPECT_THROW(h.validate(FiberForm::identity(2), box), ValidationError);
  EXPECT_NO_THROW(test_gauge().validate(FiberForm::identity(2), box));
}

TEST(Transport, ZeroConnectionIsIdentity) {
  auto sol = shoot_bvp(catalog::sphere2(), RVector{0.8, 0.2}, RVector{1.7, -0.5});
  auto t = parallel_transport(catalog::sphere2(), sol, GaugeFields::zero(2, 2));
  EXPECT_LT(max_abs_diff(t.H, CMatrix::identity(2)), 1e-15);
}

TEST(Transport, ConstantConnectionOneDimension) {
  // d = 1, A = i, dx = pi: H = exp(-i pi) = -1
  auto m = catalog::flat(1);
  auto gauge = constant_gauge(1, {CMatrix{{Complex(0.0, 1.0)}}});
  auto sol = shoot_bvp(m, RVector{0.0}, RVector{kPi});
  auto t = parallel_transport(m, sol, gauge);
  EXPECT_NEAR(t.H(0, 0).real(), -1.0, 1e-8);
  EXPECT_NEAR(t.H(0, 0).imag(), 0.0, 1e-8);
}

TEST(Transport, ConstantConnectionIsMatrixExponential) {
  std::mt19937_64 rng(3);
  const std::vector<CMatrix> a = {random_anti_hermitian(3, rng), random_anti_hermitian(3, rng)};
  auto gauge = constant_gauge(2, a);
  auto m = catalog::flat(2);
  const RVector xp = {-0.4, 0.3}, x = {0.9, -0.5};
  auto sol = shoot_bvp(m, xp, x);
  auto t = parallel_transport(m, sol, gauge);
  const CMatrix gen = Complex(x[0] - xp[0]) * a[0] + Complex(x[1] - xp[1]) * a[1];
  EXPECT_LT(max_abs_diff(t.H, expm(-gen)), 1e-10);
  EXPECT_LT(max_abs_diff(t.H_inv, expm(gen)), 1e-10);
}

TEST(Transport, ReversePathInverseAndAdjoint) {
  auto gauge = test_gauge();
  FiberForm form = FiberForm::identity(2);
  for (const auto& m : {catalog::sphere2(), catalog::hyperbolic2(), catalog::desitter2(), catalog::minkowski2()}) {
    auto sol = shoot_bvp(m, RVector{0.9, -0.3}, RVector{1.3, 0.4});
    auto t = parallel_transport(m, sol, gauge);
    EXPECT_LT(frobenius_norm(t.H * t.H_inv - CMatrix::identity(2)), 1e-9) << m.name();
    EXPECT_LT(frobenius_norm(t.H - adjoint(t.H_inv, form)), 1e-9) << m.name();
  }
}
