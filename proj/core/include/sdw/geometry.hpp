#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sdw/expression.hpp"
#include "sdw/matrix.hpp"

namespace sdw {

/// Axis-aligned coordinate box used for validation sampling and random point draws.
struct ChartBox {
  RVector lo;
  RVector hi;
  bool contains(std::span<const double> x) const;
};

template <class T>
struct MetricPoint {
  Matrix<T> g;
  Matrix<T> ginv;
  T det;
};

/// Christoffel symbols of the second kind, gamma[l](m, n) = Gamma^l_{mn}.
template <class T>
struct ChristoffelData {
  std::vector<Matrix<T>> gamma;
};

/// Metric g_{mu nu}(x) of a single coordinate chart, given by closed-form expressions.
///
/// First and second partial derivatives are differentiated symbolically once at
/// construction, so connection and curvature evaluation does not consume jet order.
class MetricField {
 public:
  /// Throws ValidationError if the component matrix is not structurally symmetric or
  /// references a coordinate outside the dimension. When `box` is given the metric is
  /// sampled there to detect the signature and reject degenerate points.
  MetricField(int dim, std::vector<std::vector<Expression>> components, std::string name = "custom",
              std::optional<ChartBox> box = std::nullopt);

  static MetricField from_strings(const std::vector<std::vector<std::string>>& components,
                                  std::string name = "custom", std::optional<ChartBox> box = std::nullopt);

  int dim() const noexcept { return dim_; }
  /// Sum of eigenvalue signs, detected at sample points of the chart box.
  int signature() const noexcept { return signature_; }
  const std::string& name() const noexcept { return name_; }
  const std::optional<ChartBox>& box() const noexcept { return box_; }
  const Expression& component(int i, int j) const { return g_[i][j]; }

  /// Samples `count` deterministic points of the box and checks nondegeneracy and a constant
  /// signature; returns the signature.
  int validate_signature(int count = 64) const;

  template <class T>
  Matrix<T> metric(std::span<const T> x) const {
    Matrix<T> g(dim_, dim_);
    for (int i = 0; i < dim_; ++i)
      for (int j = i; j < dim_; ++j) g(i, j) = g(j, i) = g_[i][j].evaluate(x);
    return g;
  }

  /// g, g^{-1} and det g; throws SingularMetricError at a degenerate base point.
  template <class T>
  MetricPoint<T> metric_at(std::span<const T> x) const {
    Matrix<T> g = metric(x);
    T det = determinant(g);
    if (std::abs(base_scalar(det)) <= singular_tol_ * std::pow(std::max(1.0, frobenius_norm(g)), dim_))
      throw SingularMetricError("metric is singular at the evaluation point (det g = " +
                                std::to_string(base_scalar(det).real()) + ")");
    Matrix<T> ginv = inverse(g);
    return {std::move(g), std::move(ginv), std::move(det)};
  }

  /// d_l g as a d x d matrix.
  template <class T>
  Matrix<T> dmetric(int l, std::span<const T> x) const {
    Matrix<T> out(dim_, dim_);
    for (int i = 0; i < dim_; ++i)
      for (int j = i; j < dim_; ++j) out(i, j) = out(j, i) = dg_[l][i][j].evaluate(x);
    return out;
  }

  /// d_l d_r g as a d x d matrix.
  template <class T>
  Matrix<T> d2metric(int l, int r, std::span<const T> x) const {
    Matrix<T> out(dim_, dim_);
    const auto& e = d2g_[std::min(l, r)][std::max(l, r)];
    for (int i = 0; i < dim_; ++i)
      for (int j = i; j < dim_; ++j) out(i, j) = out(j, i) = e[i][j].evaluate(x);
    return out;
  }

  template <class T>
  ChristoffelData<T> christoffel(std::span<const T> x) const {
    return christoffel_from(metric_at(x).ginv, derivatives(x));
  }

  template <class T>
  std::vector<Matrix<T>> derivatives(std::span<const T> x) const {
    std::vector<Matrix<T>> dg;
    dg.reserve(dim_);
    for (int l = 0; l < dim_; ++l) dg.push_back(dmetric(l, x));
    return dg;
  }

  /// Gamma^l_{mn} = 1/2 g^{lr} (d_m g_{rn} + d_n g_{rm} - d_r g_{mn}).
  template <class T>
  static ChristoffelData<T> christoffel_from(const Matrix<T>& ginv, const std::vector<Matrix<T>>& dg) {
    const int d = static_cast<int>(ginv.rows());
    // lowered[r](m, n) = 1/2 (d_m g_{rn} + d_n g_{rm} - d_r g_{mn})
    std::vector<Matrix<T>> lowered(d, Matrix<T>(d, d));
    for (int r = 0; r < d; ++r)
      for (int m = 0; m < d; ++m)
        for (int n = m; n < d; ++n)
          lowered[r](m, n) = lowered[r](n, m) = (dg[m](r, n) + dg[n](r, m) - dg[r](m, n)) * 0.5;
    ChristoffelData<T> out;
    out.gamma.assign(d, Matrix<T>(d, d));
    for (int l = 0; l < d; ++l)
      for (int m = 0; m < d; ++m)
        for (int n = m; n < d; ++n) {
          T acc(0.0);
          for (int r = 0; r < d; ++r) acc = acc + ginv(l, r) * lowered[r](m, n);
          out.gamma[l](m, n) = out.gamma[l](n, m) = acc;
        }
    return out;
  }

  /// Ricci scalar from the Riemann tensor of Gamma and its first derivatives.
  template <class T>
  T scalar_curvature(std::span<const T> x) const;

 private:
  int dim_;
  std::string name_;
  std::optional<ChartBox> box_;
  std::vector<std::vector<Expression>> g_;
  std::vector<std::vector<std::vector<Expression>>> dg_;                // [l][i][j]
  std::vector<std::vector<std::vector<std::vector<Expression>>>> d2g_;  // [l][r][i][j], l <= r
  int signature_ = 0;
  double singular_tol_ = 1e-12;
};

template <class T>
T MetricField::scalar_curvature(std::span<const T> x) const {
  const int d = dim_;
  auto mp = metric_at(x);
  auto dg = derivatives(x);
  auto chr = christoffel_from(mp.ginv, dg);
  // d_k g^{-1} = -g^{-1} (d_k g) g^{-1}
  std::vector<Matrix<T>> dginv;
  for (int k = 0; k < d; ++k) dginv.push_back(-(mp.ginv * dg[k] * mp.ginv));
  // dgamma[k][l](m, n) = d_k Gamma^l_{mn}
  std::vector<std::vector<Matrix<T>>> dgamma(d, std::vector<Matrix<T>>(d, Matrix<T>(d, d)));
  for (int k = 0; k < d; ++k) {
    std::vector<Matrix<T>> d2(d);
    for (int m = 0; m < d; ++m) d2[m] = d2metric(k, m, x);
    for (int l = 0; l < d; ++l)
      for (int m = 0; m < d; ++m)
        for (int n = m; n < d; ++n) {
          T acc(0.0);
          for (int r = 0; r < d; ++r) {
            T low = (dg[m](r, n) + dg[n](r, m) - dg[r](m, n)) * 0.5;
            T dlow = (d2[m](r, n) + d2[n](r, m) - d2[r](m, n)) * 0.5;
            acc = acc + dginv[k](l, r) * low + mp.ginv(l, r) * dlow;
          }
          dgamma[k][l](m, n) = dgamma[k][l](n, m) = acc;
        }
  }
  // Ric_{sn} = d_r G^r_{ns} - d_n G^r_{rs} + G^r_{rl} G^l_{ns} - G^r_{nl} G^l_{rs}
  T scalar(0.0);
  for (int s = 0; s < d; ++s)
    for (int n = 0; n < d; ++n) {
      T ric(0.0);
      for (int r = 0; r < d; ++r) {
        ric = ric + dgamma[r][r](n, s) - dgamma[n][r](r, s);
        for (int l = 0; l < d; ++l)
          ric = ric + chr.gamma[r](r, l) * chr.gamma[l](n, s) - chr.gamma[r](n, l) * chr.gamma[l](r, s);
      }
      scalar = scalar + mp.ginv(s, n) * ric;
    }
  return scalar;
}

/// Catalog of closed-form metrics.
namespace catalog {
MetricField flat(int dim);
MetricField minkowski2();
/// Round sphere of radius r in (theta, phi) coordinates.
MetricField sphere2(double radius = 1.0);
/// Hyperbolic plane of curvature radius r in geodesic polar coordinates.
MetricField hyperbolic2(double radius = 1.0);
/// Two-dimensional de Sitter space diag(-1, a^2 cosh^2(t/a)).
MetricField desitter2(double radius = 1.0);
/// Lookup by name; throws ValidationError for unknown names.
MetricField by_name(const std::string& name, double radius = 1.0, int dim = 2);
}  // namespace catalog

}  // namespace sdw
