#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "sdw/borel.hpp"
#include "sdw/errors.hpp"
#include "support.hpp"

using namespace sdw;
using namespace sdw::borel;
using sdw::testing::kPi;

namespace {

// independent copy of the cutoff formula
double chi_ref(double t) {
  auto ph = [](double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; };
  const double a = std::fabs(t);
  const double p = ph(2.0 * (1.0 - a)), q = ph(2.0 * a - 1.0);
  if (p + q == 0.0) return a < 1.0 ? 1.0 : 0.0;
  return p / (p + q);
}

Grid line(double lo, double hi, int n) { return Grid{{lo}, {hi}, {n}}; }

GriddedFunction constant(const Grid& g, Complex c) {
  return GriddedFunction::sample(g, [c](std::span<const double>) { return c; });
}

double factorial(int n) { return std::tgamma(n + 1.0); }

Complex ipow(int n) { return std::pow(Complex(0.0, 1.0), n); }

}  // namespace

TEST(Cutoff, PlateauSupportAndMonotoneTransition) {
  const Cutoff chi = build_cutoff();
  EXPECT_EQ(chi(0.4), 1.0);
  EXPECT_EQ(chi(-0.4), 1.0);
  EXPECT_EQ(chi(1.2), 0.0);
  EXPECT_EQ(chi(-1.0), 0.0);
  const double mid = chi(0.75);
  EXPECT_GT(mid, 0.0);
  EXPECT_LT(mid, 1.0);
  EXPECT_NEAR(mid, 0.5, 1e-15);  // the two arguments coincide at 3/4
  double prev = 1.0;
  for (int i = 0; i <= 1000; ++i) {
    const double t = 0.5 + 0.5 * i / 1000.0;
    const double c = chi(t);
    EXPECT_LE(c, prev + 1e-15);
    EXPECT_NEAR(c, chi_ref(t), 1e-15);
    prev = c;
  }
}

TEST(Cutoff, DerivativeSupsAreFinite) {
  const auto c = cutoff_derivative_sups(3);
  ASSERT_EQ(c.size(), 4u);
  EXPECT_NEAR(c[0], 1.0, 1e-15);
  for (double v : c) EXPECT_TRUE(std::isfinite(v));
}

TEST(EstimateSup, ConstantFunction) {
  const Grid g = line(0.0, 1.0, 20);
  EXPECT_NEAR(estimate_sup(constant(g, 1.0), 0), 1.0, 1e-15);
  EXPECT_NEAR(estimate_sup(constant(g, 1.0), 3), 1.0, 1e-12);
  BorelBuilder b({constant(g, 1.0)});
  EXPECT_NEAR(b.L()[0], kSupSafety, 1e-15);
}

TEST(EstimateSup, SineFirstDerivative) {
  const Grid g = line(0.0, 2 * kPi, 801);
  auto h = GriddedFunction::sample(g, [](std::span<const double> x) { return Complex(std::sin(x[0])); });
  EXPECT_NEAR(estimate_sup(h, 1), 1.0, 1e-3);
}

TEST(EstimateSup, ExponentialSecondDerivative) {
  const Grid g = line(0.0, 1.0, 401);
  auto h = GriddedFunction::sample(g, [](std::span<const double> x) { return Complex(std::exp(2 * x[0])); });
  const double exact = 4 * std::exp(2.0);
  EXPECT_NEAR(estimate_sup(h, 2), exact, 1e-3 * exact);
}

TEST(EstimateSup, MixedPartialsInTwoDimensions) {
  // sup of all derivatives up to order 2 of sin(x) sin(2y) is |d_yy| = 4
  const Grid g{{0.0, 0.0}, {kPi, kPi}, {121, 121}};
  auto h = GriddedFunction::sample(g, [](std::span<const double> x) { return Complex(std::sin(x[0]) * std::sin(2 * x[1])); });
  EXPECT_NEAR(estimate_sup(h, 2), 4.0, 1e-3);
}

TEST(EstimateSup, CoarseGridIsRejected) {
  const Grid g = line(0.0, 1.0, 5);
  EXPECT_NO_THROW(estimate_sup(constant(g, 1.0), 1));
  EXPECT_THROW(estimate_sup(constant(g, 1.0), 2), ValidationError);
}

TEST(Builder, ScalesFollowTheSupEstimates) {
  const Grid g = line(0.0, 1.0, 20);
  std::vector<GriddedFunction> h;
  for (int n = 0; n < 6; ++n) h.push_back(constant(g, factorial(n)));
  BorelBuilder b(h);
  for (int n = 0; n < 6; ++n) {
    EXPECT_NEAR(b.L()[n], kSupSafety * factorial(n), 1e-9 * factorial(n));
    EXPECT_DOUBLE_EQ(b.lam()[n], std::min(1.0 / (n + 1), 1.0 / b.L()[n]));
  }
  EXPECT_THROW(BorelBuilder({}), ValidationError);
  EXPECT_THROW(BorelBuilder({constant(g, 1.0), constant(line(0.0, 2.0, 20), 1.0)}), ValidationError);
}

TEST(BorelSum, ZeroCoefficients) {
  const Grid g = line(0.0, 1.0, 10);
  BorelBuilder b({constant(g, 0.0), constant(g, 0.0), constant(g, 0.0)});
  EXPECT_EQ(borel_sum(b, 3, 0.2), Complex(0.0));
}

TEST(BorelSum, AtZeroReturnsLeadingCoefficient) {
  const Grid g = line(0.0, 1.0, 12);
  auto h0 = GriddedFunction::sample(g, [](std::span<const double> x) { return Complex(std::cos(x[0]), x[0]); });
  BorelBuilder b({h0, constant(g, 5.0), constant(g, -2.0)});
  for (std::size_t p : {0u, 5u, 11u}) EXPECT_EQ(borel_sum(b, p, 0.0), h0.values[p]);
  EXPECT_THROW(borel_sum(b, 12, 0.0), ValidationError);
}

TEST(BorelSum, UnitCoefficientsMatchDirectSummation) {
  const int count = 30;
  const Grid g = line(0.0, 1.0, count + 4);
  std::vector<GriddedFunction> h(count, constant(g, 1.0));
  BorelBuilder b(h);
  const double lambda = 0.05;
  Complex ref(0.0);
  int inside = 0, nonzero = 0;
  for (int n = 0; n < count; ++n) {
    // L_n = 1.25 for every n
    const double lam_n = std::min(1.0 / (n + 1), 1.0 / 1.25);
    const double c = chi_ref(lambda / lam_n);
    if (lambda / lam_n <= 1.0 + 1e-12) ++inside;
    if (c > 0.0) ++nonzero;
    ref += c * std::pow(Complex(0.0, lambda), n);
  }
  EXPECT_EQ(inside, 20);   // n <= 19
  EXPECT_EQ(nonzero, 19);  // chi vanishes at the edge n = 19
  EXPECT_LT(std::abs(borel_sum(b, 7, lambda) - ref), 1e-15);
  // truncation
  Complex ref3(0.0);
  for (int n = 0; n <= 3; ++n) ref3 += std::pow(Complex(0.0, lambda), n);
  EXPECT_LT(std::abs(borel_sum(b, 7, lambda, 3) - ref3), 1e-15);
}

TEST(TaylorMatch, UnitCoefficientsBoundedByGeometricTail) {
  const Grid g = line(0.0, 1.0, 20);
  std::vector<GriddedFunction> h(12, constant(g, 1.0));
  BorelBuilder b(h);
  std::vector<double> lambdas;
  for (int i = 1; i < 100; ++i) lambdas.push_back(0.1 * i / 100.0);
  const double defect = taylor_match_check(b, 4, 3, lambdas);
  // |sum_{n>=4} chi (i lambda)^n| / lambda^4 <= 1 / (1 - lambda) on the surviving range
  double bound = 0.0;
  for (double l : lambdas)
    if (l < 0.5 * b.lam()[3]) bound = std::max(bound, 1.0 / (1.0 - l));
  EXPECT_LE(defect, bound);
  EXPECT_LE(defect, 2.0);
  EXPECT_GT(defect, 0.5);
}

TEST(TaylorMatch, SingleLeadingCoefficientHasNoDefect) {
  const Grid g = line(0.0, 1.0, 10);
  BorelBuilder b({constant(g, Complex(2.0, -1.0))});
  const std::vector<double> lambdas = {0.01, 0.1, 0.3};
  EXPECT_EQ(taylor_match_check(b, 2, 0, lambdas), 0.0);
}

TEST(TaylorMatch, FactorialGrowthStaysFinite) {
  const Grid g = line(0.0, 1.0, 20);
  std::vector<GriddedFunction> h;
  for (int n = 0; n < 12; ++n) h.push_back(constant(g, factorial(n)));
  BorelBuilder b(h);
  std::vector<double> lambdas;
  for (int i = 1; i <= 200; ++i) lambdas.push_back(0.5 * i / 200.0);
  for (int N = 0; N <= 4; ++N) {
    const double defect = taylor_match_check(b, 0, N, lambdas);
    EXPECT_TRUE(std::isfinite(defect)) << N;
  }
  // the sum stays bounded where the formal series diverges
  for (double l : {0.1, 0.3, 0.6, 1.0}) EXPECT_TRUE(std::isfinite(std::abs(borel_sum(b, 0, l))));
  EXPECT_THROW(taylor_match_check(b, 0, 3, std::vector<double>{0.9}), ValidationError);
}

TEST(LambdaDerivative, RecoversTaylorCoefficients) {
  const Grid g = line(0.0, 1.0, 16);
  std::vector<GriddedFunction> h;
  for (int n = 0; n < 7; ++n)
    h.push_back(GriddedFunction::sample(g, [n](std::span<const double> x) {
      return Complex(std::cos(x[0] + n), 0.5 * std::sin(x[0] - n));
    }));
  BorelBuilder b(h);
  for (std::size_t p : {0u, 9u}) {
    for (int n = 0; n <= 3; ++n) {
      const Complex want = ipow(n) * factorial(n) * h[n].values[p];
      EXPECT_LT(std::abs(lambda_derivative(b, p, n) - want), 1e-6 * std::max(1.0, std::abs(want))) << n;
    }
  }
  EXPECT_THROW(lambda_derivative(b, 0, 5), ValidationError);
}

TEST(LambdaDerivative, FactorialGrowth) {
  const Grid g = line(0.0, 1.0, 20);
  std::vector<GriddedFunction> h;
  for (int n = 0; n < 8; ++n) h.push_back(constant(g, factorial(n)));
  BorelBuilder b(h);
  for (int n = 0; n <= 3; ++n) {
    const Complex want = ipow(n) * factorial(n) * factorial(n);
    EXPECT_LT(std::abs(lambda_derivative(b, 3, n) - want), 1e-6 * std::abs(want)) << n;
  }
}
