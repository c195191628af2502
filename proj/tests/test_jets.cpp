#include <gtest/gtest.h>

#include <cmath>

#include "sdw/errors.hpp"
#include "sdw/jets.hpp"

using namespace sdw;

namespace {

using RJet = Jet<double>;

double fact(int n) { return n <= 1 ? 1.0 : n * fact(n - 1); }

// generalized binomial coefficient C(r, k)
double binom(double r, int k) {
  double c = 1.0;
  for (int i = 0; i < k; ++i) c *= (r - i) / (i + 1);
  return c;
}

RJet var1(double x0, int order) { return RJet::variable(JetLayout::get(1, order), 0, x0); }

}  // namespace

TEST(JetLayout, GradedPrefixAndFind) {
  const JetLayout& l4 = JetLayout::get(2, 4);
  const JetLayout& l2 = JetLayout::get(2, 2);
  EXPECT_EQ(l4.size(), 15u);
  EXPECT_EQ(l2.size(), 6u);
  EXPECT_EQ(l4.prefix_size(2), 6u);
  for (std::size_t i = 0; i < l2.size(); ++i) EXPECT_EQ(l2.multi_index(i), l4.multi_index(i));
  EXPECT_EQ(l4.multi_index(l4.find({1, 3})), (MultiIndex{1, 3}));
  EXPECT_THROW(l4.find({3, 2}), OrderError);
  EXPECT_DOUBLE_EQ(l4.factorial(l4.find({2, 2})), 4.0);
}

TEST(Jet, ProductOfSeparableFunctions) {
  // exp(x) sin(y) at (0.3, 0.7): coefficient of x^a y^b is e^0.3/a! * sin^(b)(0.7)/b!
  const double x0 = 0.3, y0 = 0.7;
  const JetLayout& l = JetLayout::get(2, 5);
  RJet x = RJet::variable(l, 0, x0), y = RJet::variable(l, 1, y0);
  RJet f = exp(x) * sin(y);
  const double dsin[4] = {std::sin(y0), std::cos(y0), -std::sin(y0), -std::cos(y0)};
  for (std::size_t i = 0; i < l.size(); ++i) {
    const auto& a = l.multi_index(i);
    const double want = std::exp(x0) / fact(a[0]) * dsin[a[1] % 4] / fact(a[1]);
    EXPECT_NEAR(f.coeff(i), want, 1e-14) << a[0] << "," << a[1];
  }
}

TEST(Jet, ReciprocalLnPowSqrtSeries) {
  const double x0 = 1.7;
  const int order = 6;
  RJet t = var1(x0, order);
  RJet rec = reciprocal(t), lg = ln(t), pw = pow(t, 2.5), sq = sqrt(t);
  for (int k = 0; k <= order; ++k) {
    EXPECT_NEAR(rec.coeff(k), std::pow(-1.0, k) / std::pow(x0, k + 1), 1e-13);
    const double ln_k = k == 0 ? std::log(x0) : std::pow(-1.0, k + 1) / (k * std::pow(x0, k));
    EXPECT_NEAR(lg.coeff(k), ln_k, 1e-13);
    EXPECT_NEAR(pw.coeff(k), binom(2.5, k) * std::pow(x0, 2.5 - k), 1e-12);
    EXPECT_NEAR(sq.coeff(k), binom(0.5, k) * std::pow(x0, 0.5 - k), 1e-13);
  }
}

TEST(Jet, TrigAndHyperbolicDerivativeIdentities) {
  RJet t = var1(0.4, 6);
  // d tan = 1 + tan^2, d atan = 1/(1+t^2), d sinh = cosh, cosh^2 - sinh^2 = 1
  RJet dtan = derivative(tan(t), 0);
  RJet rhs = truncate(RJet(1.0) + tan(t) * tan(t), 5);
  RJet datan = derivative(atan(t), 0);
  RJet rhs2 = truncate(reciprocal(RJet(1.0) + t * t), 5);
  RJet one = cosh(t) * cosh(t) - sinh(t) * sinh(t);
  for (int k = 0; k <= 5; ++k) {
    EXPECT_NEAR(dtan.coeff(k), rhs.coeff(k), 1e-13);
    EXPECT_NEAR(datan.coeff(k), rhs2.coeff(k), 1e-13);
    EXPECT_NEAR(derivative(sinh(t), 0).coeff(k), truncate(cosh(t), 5).coeff(k), 1e-13);
    EXPECT_NEAR(one.coeff(k), k == 0 ? 1.0 : 0.0, 1e-13);
  }
}

TEST(Jet, ComplexExponentialIsEulerFormula) {
  using CJ = Jet<Complex>;
  const JetLayout& l = JetLayout::get(1, 5);
  CJ t = CJ::variable(l, 0, Complex(0.9));
  CJ lhs = exp(t * Complex(0.0, 1.0));
  CJ rhs = cos(t) + sin(t) * Complex(0.0, 1.0);
  for (std::size_t i = 0; i < l.size(); ++i) EXPECT_LT(std::abs(lhs.coeff(i) - rhs.coeff(i)), 1e-14);
}

TEST(Jet, NestedJetsGiveMixedDerivatives) {
  // f(a, b) = (a b)^2 with a the outer and b the inner variable: d_a d_b f = 4 a b
  using Inner = Jet<double>;
  using Outer = Jet<Inner>;
  const JetLayout& li = JetLayout::get(1, 2);
  const JetLayout& lo = JetLayout::get(1, 2);
  const double a0 = 0.6, b0 = -1.3;
  Outer a = Outer::variable(lo, 0, Inner(a0));
  Outer b(Inner::variable(li, 0, b0));
  Outer f = (a * b) * (a * b);
  const Inner da = extract(f, {1});
  EXPECT_NEAR(extract(da, {1}), 4.0 * a0 * b0, 1e-14);
  EXPECT_NEAR(extract(da, {0}), 2.0 * a0 * b0 * b0, 1e-14);
}

TEST(Jet, MixedOrdersCombineAtTheLowerOrder) {
  RJet a = var1(0.5, 4), b = var1(0.5, 2);
  RJet c = a * b + a;
  EXPECT_EQ(c.order(), 2);
  EXPECT_NEAR(c.coeff(2), 1.0, 1e-15);
}

TEST(Jet, RvalueAndScalarFormsAgreeWithGeneralForms) {
  RJet x = var1(0.3, 4);
  RJet s = sin(x), e = exp(x);
  RJet general = (s * e) + (s * s) - (e * RJet(2.5));
  RJet fast = s * e + s * s - e * 2.5;
  RJet scalar_left = 2.0 * s;
  for (std::size_t i = 0; i < general.size(); ++i) {
    EXPECT_NEAR(general.coeff(i), fast.coeff(i), 1e-15);
    EXPECT_NEAR(scalar_left.coeff(i), 2.0 * s.coeff(i), 1e-15);
  }
  RJet moved = std::move(s) + e;  // reuses the left operand's storage
  EXPECT_NEAR(moved.coeff(0), std::sin(0.3) + std::exp(0.3), 1e-15);
}

TEST(Jet, RealToComplexPromotion) {
  RJet x = var1(0.2, 3);
  Jet<Complex> z(exp(x));
  EXPECT_EQ(z.order(), 3);
  for (int k = 0; k <= 3; ++k) EXPECT_NEAR(z.coeff(k).real(), std::exp(0.2) / fact(k), 1e-15);
}

TEST(Jet, StructuralOperations) {
  const JetLayout& l = JetLayout::get(2, 3);
  RJet x = RJet::variable(l, 0, 1.0), y = RJet::variable(l, 1, 2.0);
  RJet f = x * x * y;
  EXPECT_NEAR(extract(f, {2, 1}), 2.0, 1e-15);
  EXPECT_NEAR(extract(derivative(f, 1), {0, 0}), 1.0, 1e-15);
  RJet g = scale_variables(f, 0.5);  // f(0.5 w)
  EXPECT_NEAR(extract(g, {2, 1}), 2.0 * 0.125, 1e-15);
  RJet h = embed(f, 3);
  EXPECT_EQ(h.dim(), 3);
  EXPECT_NEAR(extract(h, {1, 0, 0}), 2.0 * 1.0 * 2.0, 1e-15);
  EXPECT_NEAR(extract(h, {0, 0, 1}), 0.0, 0.0);
}

TEST(Jet, Errors) {
  RJet a = RJet::variable(JetLayout::get(1, 2), 0, 1.0);
  RJet b = RJet::variable(JetLayout::get(2, 2), 0, 1.0);
  EXPECT_THROW(a + b, LayoutError);
  EXPECT_THROW(extract(a, {3}), OrderError);
  EXPECT_THROW(derivative(truncate(a, 0), 0), OrderError);
  EXPECT_THROW(ln(var1(-1.0, 2)), DomainError);
  EXPECT_THROW(reciprocal(var1(0.0, 2)), DomainError);
}
