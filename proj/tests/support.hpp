#pragma once

// Fixtures shared by the unit tests and the acceptance binary.

#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "sdw/gauge.hpp"
#include "sdw/geometry.hpp"
#include "sdw/matrix.hpp"

namespace sdw::testing {

inline constexpr double kPi = std::numbers::pi;

inline ComplexExpression cexpr(const std::string& re, const std::string& im, int dim) {
  return {parse_expression(re, dim), parse_expression(im, dim)};
}

inline ComplexExpression czero() { return {Expression::number(0.0), Expression::number(0.0)}; }

/// k = 2, d = 2 gauge with position-dependent anti-hermitian A and hermitian B (S = I).
inline GaugeFields test_gauge() {
  const int d = 2;
  std::vector<ExpressionMatrix> a = {
      {{cexpr("0", "0.4*sin(x1)", d), cexpr("0.3*x0", "0.2", d)},
       {cexpr("-0.3*x0", "0.2", d), cexpr("0", "-0.5*cos(x0)", d)}},
      {{cexpr("0", "0.3*x0", d), cexpr("0.25", "0.1*x1", d)},
       {cexpr("-0.25", "0.1*x1", d), cexpr("0", "0.2", d)}},
  };
  ExpressionMatrix b = {{cexpr("0.5*cos(x1)", "0", d), cexpr("0.2*x0", "0.3", d)},
                        {cexpr("0.2*x0", "-0.3", d), cexpr("-0.4", "0", d)}};
  return GaugeFields(d, 2, std::move(a), std::move(b));
}

/// Constant connection A_mu = a[mu] (k x k) with B = 0.
inline GaugeFields constant_gauge(int dim, const std::vector<CMatrix>& a) {
  const std::size_t k = a.front().rows();
  auto num = [](double v) { return Expression::number(v); };
  std::vector<ExpressionMatrix> am;
  for (int mu = 0; mu < dim; ++mu) {
    ExpressionMatrix e(k, std::vector<ComplexExpression>(k));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) e[i][j] = {num(a[mu](i, j).real()), num(a[mu](i, j).imag())};
    am.push_back(std::move(e));
  }
  ExpressionMatrix b(k, std::vector<ComplexExpression>(k, czero()));
  return GaugeFields(dim, k, std::move(am), std::move(b));
}

/// Random anti-hermitian k x k matrix (S = I).
inline CMatrix random_anti_hermitian(std::size_t k, std::mt19937_64& rng, double scale = 0.5) {
  std::uniform_real_distribution<double> u(-scale, scale);
  CMatrix m(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    m(i, i) = Complex(0.0, u(rng));
    for (std::size_t j = i + 1; j < k; ++j) {
      m(i, j) = Complex(u(rng), u(rng));
      m(j, i) = -std::conj(m(i, j));
    }
  }
  return m;
}

inline CMatrix random_matrix(std::size_t k, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  CMatrix m(k, k);
  for (auto& v : m.data()) v = Complex(u(rng), u(rng));
  return m;
}

/// Matrix exponential by scaling and squaring of a Taylor series.
inline CMatrix expm(const CMatrix& a) {
  const double norm = frobenius_norm(a);
  int squarings = 0;
  while (norm / std::ldexp(1.0, squarings) > 0.1) ++squarings;
  const CMatrix s = Complex(std::ldexp(1.0, -squarings)) * a;
  CMatrix term = CMatrix::identity(a.rows()), sum = term;
  for (int n = 1; n <= 20; ++n) {
    term = Complex(1.0 / n) * (term * s);
    sum = sum + term;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

inline double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

struct PointPair {
  RVector x;
  RVector x_prime;
};

/// Geodesic distance for the constant-curvature catalog metrics, used to bound pair draws.
inline double sphere_distance(const RVector& a, const RVector& b) {
  const double c = std::cos(a[0]) * std::cos(b[0]) + std::sin(a[0]) * std::sin(b[0]) * std::cos(a[1] - b[1]);
  return std::acos(std::clamp(c, -1.0, 1.0));
}

inline double hyperbolic_distance(const RVector& a, const RVector& b) {
  const double c = std::cosh(a[0]) * std::cosh(b[0]) - std::sinh(a[0]) * std::sinh(b[0]) * std::cos(a[1] - b[1]);
  return std::acosh(std::max(1.0, c));
}

/// Uniform draws from the box with Euclidean coordinate separation in [min_sep, max_sep].
inline std::vector<PointPair> random_pairs(std::size_t count, const RVector& lo, const RVector& hi, double min_sep,
                                           double max_sep, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<PointPair> out;
  const std::size_t d = lo.size();
  while (out.size() < count) {
    PointPair p{RVector(d), RVector(d)};
    for (std::size_t i = 0; i < d; ++i) {
      std::uniform_real_distribution<double> u(lo[i], hi[i]);
      p.x[i] = u(rng);
      p.x_prime[i] = u(rng);
    }
    double sep = 0.0;
    for (std::size_t i = 0; i < d; ++i) sep += (p.x[i] - p.x_prime[i]) * (p.x[i] - p.x_prime[i]);
    sep = std::sqrt(sep);
    if (sep >= min_sep && sep <= max_sep) out.push_back(std::move(p));
  }
  return out;
}

}  // namespace sdw::testing
