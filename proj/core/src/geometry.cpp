#include "sdw/geometry.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace sdw {

bool ChartBox::contains(std::span<const double> x) const {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] < lo[i] || x[i] > hi[i]) return false;
  return true;
}

std::vector<double> symmetric_eigenvalues(RMatrix a) {
  const std::size_t n = a.rows();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a(i, i);
  return ev;
}

MetricField::MetricField(int dim, std::vector<std::vector<Expression>> components, std::string name,
                         std::optional<ChartBox> box)
    : dim_(dim), name_(std::move(name)), box_(std::move(box)), g_(std::move(components)) {
  if (dim_ < 1) throw ValidationError("metric dimension must be positive");
  if (static_cast<int>(g_.size()) != dim_) throw ValidationError("metric must have d rows");
  for (const auto& row : g_)
    if (static_cast<int>(row.size()) != dim_) throw ValidationError("metric must be a d x d matrix");
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) {
      if (g_[i][j].max_variable() >= dim_)
        throw ValidationError("metric component references a coordinate beyond the dimension");
      if (!(g_[i][j] == g_[j][i]))
        throw ValidationError("metric is not symmetric: g[" + std::to_string(i) + "][" + std::to_string(j) +
                              "] = " + g_[i][j].to_string() + " but g[" + std::to_string(j) + "][" +
                              std::to_string(i) + "] = " + g_[j][i].to_string());
    }
  if (box_ && (static_cast<int>(box_->lo.size()) != dim_ || static_cast<int>(box_->hi.size()) != dim_))
    throw ValidationError("chart box dimension does not match the metric");

  dg_.assign(dim_, std::vector<std::vector<Expression>>(dim_, std::vector<Expression>(dim_)));
  for (int l = 0; l < dim_; ++l)
    for (int i = 0; i < dim_; ++i)
      for (int j = i; j < dim_; ++j) dg_[l][i][j] = dg_[l][j][i] = g_[i][j].derivative(l);

  d2g_.assign(dim_, std::vector<std::vector<std::vector<Expression>>>(
                        dim_, std::vector<std::vector<Expression>>(dim_, std::vector<Expression>(dim_))));
  for (int l = 0; l < dim_; ++l)
    for (int r = l; r < dim_; ++r)
      for (int i = 0; i < dim_; ++i)
        for (int j = i; j < dim_; ++j) d2g_[l][r][i][j] = d2g_[l][r][j][i] = dg_[l][i][j].derivative(r);

  signature_ = validate_signature();
}

MetricField MetricField::from_strings(const std::vector<std::vector<std::string>>& components, std::string name,
                                      std::optional<ChartBox> box) {
  const int d = static_cast<int>(components.size());
  std::vector<std::vector<Expression>> g(d);
  for (int i = 0; i < d; ++i) {
    if (static_cast<int>(components[i].size()) != d) throw ValidationError("metric must be a d x d matrix");
    for (int j = 0; j < d; ++j) g[i].push_back(parse_expression(components[i][j], d));
  }
  return MetricField(d, std::move(g), std::move(name), std::move(box));
}

namespace {

int signature_at(const MetricField& m, const RVector& x) {
  RMatrix g = m.metric<double>(x);
  auto ev = symmetric_eigenvalues(g);
  double scale = 0.0;
  for (double e : ev) scale = std::max(scale, std::abs(e));
  int sig = 0;
  for (double e : ev) {
    if (!std::isfinite(e) || std::abs(e) <= 1e-12 * std::max(scale, 1e-300))
      throw ValidationError("metric is degenerate or non-finite at a sample point");
    sig += e > 0 ? 1 : -1;
  }
  return sig;
}

}  // namespace

int MetricField::validate_signature(int count) const {
  std::vector<RVector> samples;
  if (box_) {
    std::mt19937_64 rng(0x5eed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    RVector center(dim_);
    for (int i = 0; i < dim_; ++i) center[i] = 0.5 * (box_->lo[i] + box_->hi[i]);
    samples.push_back(center);
    for (int k = 1; k < count; ++k) {
      RVector x(dim_);
      for (int i = 0; i < dim_; ++i) x[i] = box_->lo[i] + (box_->hi[i] - box_->lo[i]) * u(rng);
      samples.push_back(std::move(x));
    }
  } else {
    samples.push_back(RVector(dim_, 0.5));
  }
  int sig = signature_at(*this, samples.front());
  for (std::size_t k = 1; k < samples.size(); ++k)
    if (signature_at(*this, samples[k]) != sig)
      throw ValidationError("metric signature is not constant across the chart box");
  return sig;
}

namespace catalog {

namespace {

std::string num(double v) { return Expression::number(v).to_string(); }

Expression parse(const std::string& s, int d) { return parse_expression(s, d); }

MetricField diagonal(const std::vector<std::string>& diag, std::string name, ChartBox box) {
  const int d = static_cast<int>(diag.size());
  std::vector<std::vector<Expression>> g(d, std::vector<Expression>(d, Expression::number(0.0)));
  for (int i = 0; i < d; ++i) g[i][i] = parse(diag[i], d);
  return MetricField(d, std::move(g), std::move(name), std::move(box));
}

}  // namespace

MetricField flat(int dim) {
  return diagonal(std::vector<std::string>(dim, "1"), "flat",
                  ChartBox{RVector(dim, -2.0), RVector(dim, 2.0)});
}

MetricField minkowski2() { return diagonal({"-1", "1"}, "minkowski2", ChartBox{{-2.0, -2.0}, {2.0, 2.0}}); }

MetricField sphere2(double radius) {
  const std::string r2 = num(radius * radius);
  return diagonal({r2, r2 + "*sin(x0)^2"}, "sphere2", ChartBox{{0.35, -1.5}, {std::numbers::pi - 0.35, 1.5}});
}

MetricField hyperbolic2(double radius) {
  const std::string r2 = num(radius * radius);
  return diagonal({r2, r2 + "*sinh(x0)^2"}, "hyperbolic2", ChartBox{{0.3, -1.5}, {2.0, 1.5}});
}

MetricField desitter2(double radius) {
  const std::string r2 = num(radius * radius);
  return diagonal({"-" + r2, r2 + "*cosh(x0)^2"}, "desitter2", ChartBox{{-1.0, -1.5}, {1.0, 1.5}});
}

MetricField by_name(const std::string& name, double radius, int dim) {
  if (name == "flat") return flat(dim);
  if (name == "minkowski2") return minkowski2();
  if (name == "sphere2") return sphere2(radius);
  if (name == "hyperbolic2") return hyperbolic2(radius);
  if (name == "desitter2") return desitter2(radius);
  throw ValidationError("unknown catalog metric '" + name + "'");
}

}  // namespace catalog

}  // namespace sdw
