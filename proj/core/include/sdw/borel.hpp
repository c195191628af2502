#pragma once

// Smooth function of lambda with prescribed Taylor coefficients at 0:
//   H(x, lambda) = sum_n i^n chi(lambda / lambda_n) lambda^n h_n(x),
//   lambda_n = min(1/(n+1), 1/L_n),  L_n >= sup_{|alpha| <= n} |d^alpha h_n|.

#include <functional>
#include <span>
#include <vector>

#include "sdw/matrix.hpp"

namespace sdw::borel {

/// phi(u) = exp(-1/u) for u > 0, else 0.
double phi(double u);

/// chi(t) = phi(2(1-|t|)) / (phi(2(1-|t|)) + phi(2|t|-1)): 1 on [-1/2, 1/2], 0 outside (-1, 1).
class Cutoff {
 public:
  double operator()(double t) const;
};

Cutoff build_cutoff();

/// Finite-difference estimates of sup |chi^(k)| for k = 0..kmax (diagnostic only).
std::vector<double> cutoff_derivative_sups(int kmax, int samples = 4001);

/// Regular grid over an axis-aligned box, row-major with the last axis fastest.
struct Grid {
  RVector lo;
  RVector hi;
  std::vector<int> counts;

  int dim() const { return static_cast<int>(counts.size()); }
  std::size_t size() const;
  double spacing(int axis) const;
  RVector point(std::size_t flat) const;
  std::size_t stride(int axis) const;
};

struct GriddedFunction {
  Grid grid;
  std::vector<Complex> values;

  static GriddedFunction sample(const Grid& grid, const std::function<Complex(std::span<const double>)>& f);
};

/// max over the grid of |finite-difference d^alpha h| over |alpha| <= n, with fourth-order
/// stencils up to the boundary. Throws ValidationError when an axis has fewer than n + 4 points.
double estimate_sup(const GriddedFunction& h, int n);

/// Multiplies the grid estimate of L_n.
inline constexpr double kSupSafety = 1.25;

class BorelBuilder {
 public:
  /// h[n] sampled on a common grid.
  explicit BorelBuilder(std::vector<GriddedFunction> h);

  int size() const { return static_cast<int>(h_.size()); }
  const std::vector<GriddedFunction>& h() const { return h_; }
  const Cutoff& chi() const { return chi_; }
  /// Safety-scaled sup estimates.
  const std::vector<double>& L() const { return L_; }
  const std::vector<double>& lam() const { return lam_; }
  const std::vector<double>& C() const { return C_; }

 private:
  std::vector<GriddedFunction> h_;
  Cutoff chi_;
  std::vector<double> L_;
  std::vector<double> lam_;
  std::vector<double> C_;
};

/// sum_{n <= n_trunc} i^n chi(lambda/lambda_n) lambda^n h_n(x_point). Negative n_trunc means
/// every available coefficient.
Complex borel_sum(const BorelBuilder& b, std::size_t point, double lambda, int n_trunc = -1);

/// max over lambda in the grid, restricted to (0, min_{n<=N} lambda_n / 2), of
/// |borel_sum - sum_{n<=N} i^n lambda^n h_n| / lambda^{N+1}. Throws ValidationError when no
/// grid value survives the restriction.
double taylor_match_check(const BorelBuilder& b, std::size_t point, int N, std::span<const double> lambda_grid);

/// d^n/dlambda^n of borel_sum at 0 by central differences with one Richardson step. A
/// non-positive step selects lambda_min / 8 with lambda_min = min_{m <= n+2} lambda_m.
Complex lambda_derivative(const BorelBuilder& b, std::size_t point, int n, double step = 0.0);

}  // namespace sdw::borel
