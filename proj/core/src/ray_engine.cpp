#include "sdw/ray_engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sdw/errors.hpp"
#include "sdw/parallel.hpp"
#include "sdw/quadrature.hpp"

namespace sdw {

namespace {

JetMatrix scale_matrix(const JetMatrix& m, double s) {
  return m.map([s](const CJet& j) { return scale_variables(j, s); });
}

std::vector<CJet> truncate_vector(const std::vector<CJet>& v, int order) {
  std::vector<CJet> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(truncate(x, order));
  return out;
}

}  // namespace

RayEngine::RayEngine(const MetricField& m, const GaugeFields& gauge, RVector base, RVector velocity,
                     const RayEngineOptions& options, CMatrix seed)
    : m_(m),
      gauge_(gauge),
      base_(std::move(base)),
      v0_(std::move(velocity)),
      options_(options),
      dim_(m.dim()),
      k_(gauge.k()),
      seed_(seed.empty() ? CMatrix::identity(gauge.k()) : std::move(seed)) {
  if (gauge.dim() != dim_) throw ValidationError("gauge fields and metric have different dimensions");
  if (static_cast<int>(base_.size()) != dim_ || static_cast<int>(v0_.size()) != dim_)
    throw ValidationError("ray base point and velocity must have the metric dimension");
  if (seed_.rows() != k_ || seed_.cols() != k_) throw ValidationError("seed matrix must be k x k");
  if (options_.steps < 1) throw ValidationError("steps must be positive");
  auto rule = gauss_legendre(options_.quad_nodes);
  nodes_ = std::move(rule.nodes);
  weights_ = std::move(rule.weights);
}

double RayEngine::frame_count(int quad_nodes, int depth) {
  // number of multisets of size j from quad_nodes items is C(quad_nodes + j - 1, j)
  double total = 0.0, term = 1.0;
  for (int j = 0; j <= depth; ++j) {
    if (j > 0) term = term * (quad_nodes + j - 1) / j;
    total += term;
  }
  return total;
}

double RayEngine::tau(const Key& nodes) const {
  double t = 1.0;
  for (int i : nodes) t *= nodes_[i];
  return t;
}

void RayEngine::need_point(const Key& nodes, int order) {
  if (planning_) {
    auto [it, inserted] = planned_order_.try_emplace(nodes, order);
    if (!inserted) it->second = std::max(it->second, order);
    return;
  }
  auto it = points_.find(nodes);
  if (it == points_.end() || it->second.order < order)
    throw std::logic_error("ray engine: evaluation outside the prepared plan");
}

void RayEngine::prepare(const std::vector<Request>& requests) {
  int depth = 0;
  for (const auto& r : requests) {
    if (r.level < 0 || r.order < 0) throw ValidationError("ray engine request needs nonnegative level and order");
    depth = std::max(depth, r.level);
  }
  const double estimate = frame_count(options_.quad_nodes, depth);
  if (estimate > options_.cost_guard) {
    std::ostringstream os;
    os << "cost guard exceeded: recursion to depth " << depth << " with " << options_.quad_nodes
       << " quadrature nodes needs " << estimate << " evaluation points (guard " << options_.cost_guard << ")";
    throw NumericalError(os.str());
  }

  planning_ = true;
  planned_order_.clear();
  for (const auto& r : requests) {
    switch (r.kind) {
      case Request::Kind::G: eval_g(r.level, r.order, {}); break;
      case Request::Kind::J: eval_j(r.level, r.order, {}); break;
      case Request::Kind::F:
        need_point({}, r.order);
        eval_g(r.level, r.order, {});
        break;
    }
  }
  planning_ = false;
  g_memo_.clear();
  j_memo_.clear();

  // keep previously built points that are good enough
  std::vector<std::pair<Key, int>> todo;
  for (const auto& [key, order] : planned_order_) {
    auto it = points_.find(key);
    if (it == points_.end() || it->second.order < order) todo.emplace_back(key, order);
  }
  if (todo.empty()) {
    prepared_ = true;
    return;
  }

  std::vector<RayPoint> built(todo.size());
  parallel_for(
      todo.size(), [&](std::size_t i) { built[i] = build_point(todo[i].first, todo[i].second); }, options_.threads);
  for (std::size_t i = 0; i < todo.size(); ++i) points_[todo[i].first] = std::move(built[i]);
  prepared_ = true;
}

RayPoint RayEngine::build_point(const Key& key, int fo) const {
  const int d = dim_;
  const double t = tau(key);
  // discrete exponential map at u = tau v0 + w, integrated over the full step count so that
  // every point sees the same smooth function of u
  const JetLayout& layout = JetLayout::get(d, fo + 3);
  using RJet = Jet<double>;
  std::vector<RJet> x0, v;
  for (int i = 0; i < d; ++i) {
    x0.emplace_back(base_[i]);
    v.push_back(RJet::variable(layout, i, t * v0_[i]));
  }
  auto st = integrate_final(m_, &gauge_, initial_state<RJet>(m_, x0, v, false, k_), options_.steps);
  std::vector<CJet> X;
  for (const auto& xi : st.x) X.emplace_back(xi);
  const JetMatrix& H = st.H;

  JetMatrix DX(d, d);
  for (int mu = 0; mu < d; ++mu)
    for (int a = 0; a < d; ++a) DX(mu, a) = derivative(X[mu], a);
  const auto X2 = truncate_vector(X, fo + 2);
  JetMatrix gX = m_.metric(std::span<const CJet>(X2));
  JetMatrix g_hat = DX.transpose() * gX * DX;

  const CJet det_dx = determinant(DX);
  const Complex det_dx0 = base_scalar(det_dx);
  if (!(det_dx0.real() > 0.0) || !std::isfinite(det_dx0.real()))
    throw ConjugatePointError("exponential map is singular along the geodesic (focal point of x')");
  const CJet det_gx = determinant(gX);
  const double sign_gx = base_scalar(det_gx).real() < 0 ? -1.0 : 1.0;
  const double det_gp = std::abs(determinant(m_.metric<double>(base_)));

  RayPoint pt;
  pt.order = fo;
  pt.g_hat = g_hat;
  pt.delta_sqrt = pow(det_dx, -0.5) * pow(det_gx * sign_gx, -0.25) * std::pow(det_gp, 0.25);
  pt.E = pt.delta_sqrt * truncate(H, fo + 2);
  pt.E_inv = truncate(inverse(truncate(H, fo)) * reciprocal(truncate(pt.delta_sqrt, fo)), fo);

  const JetMatrix ginv1 = inverse(truncate(g_hat, fo + 1));
  std::vector<JetMatrix> dg;
  for (int a = 0; a < d; ++a) dg.push_back(derivative(g_hat, a));
  const auto chr = MetricField::christoffel_from(ginv1, dg);

  LocalFrame& fr = pt.frame;
  fr.dim = d;
  fr.k = k_;
  fr.ginv = truncate(ginv1, fo);
  fr.gamma_trace.assign(d, CJet(0.0));
  for (int c = 0; c < d; ++c) {
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) fr.gamma_trace[c] = fr.gamma_trace[c] - ginv1(a, b) * chr.gamma[c](a, b);
    fr.gamma_trace[c] = truncate(fr.gamma_trace[c], fo);
  }

  const auto X0 = truncate_vector(X, fo);
  fr.potential = gauge_.B(std::span<const CJet>(X0));
  if (gauge_.has_connection()) {
    const auto X1 = truncate_vector(X, fo + 1);
    const JetMatrix DX1 = truncate(DX, fo + 1);
    std::vector<JetMatrix> a_chart;
    for (int mu = 0; mu < d; ++mu) a_chart.push_back(gauge_.A(mu, std::span<const CJet>(X1)));
    std::vector<JetMatrix> a_low(d, JetMatrix(k_, k_)), a_up(d, JetMatrix(k_, k_));
    for (int a = 0; a < d; ++a)
      for (int mu = 0; mu < d; ++mu) a_low[a] = a_low[a] + DX1(mu, a) * a_chart[mu];
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) a_up[a] = a_up[a] + ginv1(a, b) * a_low[b];
    JetMatrix extra(k_, k_);
    for (int a = 0; a < d; ++a) {
      extra = extra + derivative(a_up[a], a) + a_low[a] * a_up[a];
      for (int b = 0; b < d; ++b) extra = extra + chr.gamma[a](a, b) * a_up[b];
    }
    fr.potential = fr.potential + extra;
    for (auto& a : a_up) fr.a_up.push_back(truncate(a, fo));
  }
  fr.potential = truncate(fr.potential, fo);
  return pt;
}

JetMatrix RayEngine::eval_g(int level, int order, const Key& nodes) {
  if (level == 0) return constant_matrix(seed_);
  MemoKey mk{level, order, nodes};
  if (auto it = g_memo_.find(mk); it != g_memo_.end()) return it->second;
  JetMatrix acc(k_, k_);
  const int q = static_cast<int>(nodes_.size());
  for (int i = 0; i < q; ++i) {
    Key next = nodes;
    next.insert(std::upper_bound(next.begin(), next.end(), i), i);
    JetMatrix jv = eval_j(level - 1, order, next);
    if (planning_) continue;
    const double w = weights_[i] * std::pow(nodes_[i], level - 1);
    acc = acc + scale_matrix(jv, nodes_[i]) * CJet(w);
  }
  g_memo_.emplace(std::move(mk), acc);
  return acc;
}

JetMatrix RayEngine::eval_j(int level, int order, const Key& nodes) {
  MemoKey mk{level, order, nodes};
  if (auto it = j_memo_.find(mk); it != j_memo_.end()) return it->second;
  need_point(nodes, order);
  JetMatrix G = eval_g(level, order + 2, nodes);
  if (planning_) {
    j_memo_.emplace(std::move(mk), JetMatrix());
    return {};
  }
  const RayPoint& pt = points_.at(nodes);
  JetMatrix F = truncate(pt.E * G, order + 2);
  JetMatrix out = truncate(pt.E_inv * kg_apply(pt.frame, F), order);
  j_memo_.emplace(std::move(mk), out);
  return out;
}

JetMatrix RayEngine::g(int n, int order) {
  if (!prepared_) throw std::logic_error("ray engine used before prepare()");
  return eval_g(n, order, {});
}

JetMatrix RayEngine::j(int n, int order) {
  if (!prepared_) throw std::logic_error("ray engine used before prepare()");
  return eval_j(n, order, {});
}

JetMatrix RayEngine::f(int n, int order) {
  need_point({}, order);
  return truncate(top().E * g(n, order), order);
}

const RayPoint& RayEngine::top() const {
  auto it = points_.find(Key{});
  if (it == points_.end()) throw std::logic_error("ray engine: the endpoint frame was not requested");
  return it->second;
}

}  // namespace sdw
