#include "sdw/borel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sdw/errors.hpp"

namespace sdw::borel {

double phi(double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; }

double Cutoff::operator()(double t) const {
  const double a = std::abs(t);
  if (a <= 0.5) return 1.0;
  if (a >= 1.0) return 0.0;
  const double p = phi(2.0 * (1.0 - a));
  const double q = phi(2.0 * a - 1.0);
  return p / (p + q);
}

Cutoff build_cutoff() { return Cutoff{}; }

std::size_t Grid::size() const {
  std::size_t n = 1;
  for (int c : counts) n *= static_cast<std::size_t>(c);
  return n;
}

double Grid::spacing(int axis) const {
  const int c = counts[axis];
  return c > 1 ? (hi[axis] - lo[axis]) / (c - 1) : 0.0;
}

std::size_t Grid::stride(int axis) const {
  std::size_t s = 1;
  for (int a = dim() - 1; a > axis; --a) s *= static_cast<std::size_t>(counts[a]);
  return s;
}

RVector Grid::point(std::size_t flat) const {
  RVector x(dim());
  for (int a = dim() - 1; a >= 0; --a) {
    const std::size_t c = flat % static_cast<std::size_t>(counts[a]);
    flat /= static_cast<std::size_t>(counts[a]);
    x[a] = lo[a] + static_cast<double>(c) * spacing(a);
  }
  return x;
}

GriddedFunction GriddedFunction::sample(const Grid& grid, const std::function<Complex(std::span<const double>)>& f) {
  if (grid.lo.size() != grid.counts.size() || grid.hi.size() != grid.counts.size() || grid.counts.empty())
    throw ValidationError("grid bounds and counts must have the same nonzero length");
  for (int c : grid.counts)
    if (c < 1) throw ValidationError("grid counts must be positive");
  GriddedFunction out{grid, {}};
  out.values.resize(grid.size());
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    const RVector x = grid.point(i);
    out.values[i] = f(x);
  }
  return out;
}

namespace {

std::vector<Complex> differentiate(const std::vector<Complex>& v, const Grid& grid, int axis) {
  // fourth-order stencils: central inside, shifted one-sided on the two outer layers
  const std::size_t st = grid.stride(axis);
  const int n = grid.counts[axis];
  const double h12 = 12.0 * grid.spacing(axis);
  std::vector<Complex> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const int c = static_cast<int>((i / st) % static_cast<std::size_t>(n));
    auto at = [&](int offset) { return v[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(i) + offset * static_cast<std::ptrdiff_t>(st))]; };
    if (c == 0)
      out[i] = (-25.0 * at(0) + 48.0 * at(1) - 36.0 * at(2) + 16.0 * at(3) - 3.0 * at(4)) / h12;
    else if (c == 1)
      out[i] = (-3.0 * at(-1) - 10.0 * at(0) + 18.0 * at(1) - 6.0 * at(2) + at(3)) / h12;
    else if (c == n - 2)
      out[i] = (3.0 * at(1) + 10.0 * at(0) - 18.0 * at(-1) + 6.0 * at(-2) - at(-3)) / h12;
    else if (c == n - 1)
      out[i] = (25.0 * at(0) - 48.0 * at(-1) + 36.0 * at(-2) - 16.0 * at(-3) + 3.0 * at(-4)) / h12;
    else
      out[i] = (-at(2) + 8.0 * at(1) - 8.0 * at(-1) + at(-2)) / h12;
  }
  return out;
}

double max_abs(const std::vector<Complex>& v) {
  double m = 0.0;
  for (const auto& z : v) m = std::max(m, std::abs(z));
  return m;
}

}  // namespace

double estimate_sup(const GriddedFunction& h, int n) {
  if (n < 0) throw ValidationError("derivative order must be non-negative");
  const Grid& grid = h.grid;
  if (n > 0)
    for (int a = 0; a < grid.dim(); ++a)
      if (grid.counts[a] < n + 4)
        throw ValidationError("grid too coarse for derivatives of order " + std::to_string(n) + ": axis " +
                              std::to_string(a) + " has " + std::to_string(grid.counts[a]) + " points, need " +
                              std::to_string(n + 4));
  // level sets of derivatives; entries carry the lowest axis still allowed, so each
  // multi-index is generated once
  struct Entry {
    std::vector<Complex> values;
    int first_axis;
  };
  std::vector<Entry> level{{h.values, 0}};
  double sup = max_abs(h.values);
  for (int k = 1; k <= n; ++k) {
    std::vector<Entry> next;
    for (const auto& e : level)
      for (int a = e.first_axis; a < grid.dim(); ++a) {
        next.push_back({differentiate(e.values, grid, a), a});
        sup = std::max(sup, max_abs(next.back().values));
      }
    level = std::move(next);
  }
  return sup;
}

std::vector<double> cutoff_derivative_sups(int kmax, int samples) {
  const Cutoff chi;
  Grid grid{{-1.0}, {1.0}, {samples}};
  std::vector<Complex> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = chi(grid.point(i)[0]);
  std::vector<double> out{max_abs(v)};
  for (int k = 1; k <= kmax; ++k) {
    v = differentiate(v, grid, 0);
    out.push_back(max_abs(v));
  }
  return out;
}

BorelBuilder::BorelBuilder(std::vector<GriddedFunction> h) : h_(std::move(h)) {
  if (h_.empty()) throw ValidationError("Borel construction needs at least one coefficient function");
  for (const auto& f : h_)
    if (f.grid.counts != h_[0].grid.counts || f.grid.lo != h_[0].grid.lo || f.grid.hi != h_[0].grid.hi)
      throw ValidationError("all coefficient functions must share one grid");
  for (int n = 0; n < size(); ++n) {
    const double L = kSupSafety * estimate_sup(h_[n], n);
    L_.push_back(L);
    lam_.push_back(std::min(1.0 / (n + 1), L > 0.0 ? 1.0 / L : std::numeric_limits<double>::infinity()));
  }
  C_ = cutoff_derivative_sups(std::min(size() - 1, 3));
}

namespace {

Complex i_power(int n) {
  switch (n % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

void check_point(const BorelBuilder& b, std::size_t point) {
  if (point >= b.h()[0].values.size())
    throw ValidationError("grid point " + std::to_string(point) + " out of range");
}

}  // namespace

Complex borel_sum(const BorelBuilder& b, std::size_t point, double lambda, int n_trunc) {
  check_point(b, point);
  const int last = n_trunc < 0 ? b.size() - 1 : std::min(n_trunc, b.size() - 1);
  Complex sum(0.0);
  for (int n = 0; n <= last; ++n) {
    const double c = b.chi()(lambda / b.lam()[n]);
    if (c == 0.0) continue;
    sum += i_power(n) * (c * std::pow(lambda, n)) * b.h()[n].values[point];
  }
  return sum;
}

double taylor_match_check(const BorelBuilder& b, std::size_t point, int N, std::span<const double> lambda_grid) {
  check_point(b, point);
  if (N < 0 || N >= b.size())
    throw ValidationError("match order " + std::to_string(N) + " needs coefficients 0.." + std::to_string(N));
  double lam_min = std::numeric_limits<double>::infinity();
  for (int n = 0; n <= N; ++n) lam_min = std::min(lam_min, b.lam()[n]);
  double defect = 0.0;
  bool any = false;
  for (double lambda : lambda_grid) {
    if (!(lambda > 0.0 && lambda < 0.5 * lam_min)) continue;
    any = true;
    Complex poly(0.0);
    for (int n = 0; n <= N; ++n) poly += i_power(n) * std::pow(lambda, n) * b.h()[n].values[point];
    defect = std::max(defect, std::abs(borel_sum(b, point, lambda) - poly) / std::pow(lambda, N + 1));
  }
  if (!any) throw ValidationError("no lambda value inside (0, min lambda_n / 2)");
  return defect;
}

Complex lambda_derivative(const BorelBuilder& b, std::size_t point, int n, double step) {
  if (n < 0 || n > 4) throw ValidationError("lambda derivatives are available for orders 0..4");
  auto f = [&](double l) { return borel_sum(b, point, l); };
  if (n == 0) return f(0.0);
  if (step <= 0.0) {
    double lam_min = std::numeric_limits<double>::infinity();
    for (int m = 0; m <= std::min(n + 2, b.size() - 1); ++m) lam_min = std::min(lam_min, b.lam()[m]);
    step = lam_min / 8.0;
  }
  auto diff = [&](double h) -> Complex {
    switch (n) {
      case 1: return (f(h) - f(-h)) / (2.0 * h);
      case 2: return (f(h) - 2.0 * f(0.0) + f(-h)) / (h * h);
      case 3: return (f(2 * h) - 2.0 * f(h) + 2.0 * f(-h) - f(-2 * h)) / (2.0 * h * h * h);
      default: return (f(2 * h) - 4.0 * f(h) + 6.0 * f(0.0) - 4.0 * f(-h) + f(-2 * h)) / (h * h * h * h);
    }
  };
  return (4.0 * diff(step / 2.0) - diff(step)) / 3.0;
}

}  // namespace sdw::borel
