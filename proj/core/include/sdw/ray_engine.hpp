#pragma once

// Hadamard recursion evaluated in exponential coordinates u at the base point x':
// X(u) = exp_{x'}(u). The outer geodesic is u = tau v0, tau in [0, 1], and every quadrature
// node of every nested integral lies on that ray, so no boundary value problem is needed
// below the outer one: each node is a jet-lifted integration of the exponential map with
// initial velocity tau v0 + w. At each point the operator coefficients are rebuilt in u
// coordinates from the pulled-back metric.
//
//   g_0 = c,  g_n(u) = int_0^1 s^{n-1} J(g_{n-1})(s u) ds,  J(g) = E^{-1} KG(E g),  E = Delta^{1/2} H

#include <cstdint>
#include <map>
#include <vector>

#include "sdw/flow.hpp"
#include "sdw/frame.hpp"

namespace sdw {

struct RayEngineOptions {
  int steps = 200;
  int quad_nodes = 16;
  /// Maximum number of evaluation points (frames) the recursion may visit.
  double cost_guard = 1e7;
  unsigned threads = 0;
};

/// Operator data at one point of the ray, in u coordinates relative to that point.
struct RayPoint {
  int order = 0;
  LocalFrame frame;   // order `order`
  JetMatrix E;        // Delta^{1/2} H, order + 2
  JetMatrix E_inv;    // order
  CJet delta_sqrt;    // order + 2
  JetMatrix g_hat;    // pulled-back metric, order + 2
};

class RayEngine {
 public:
  struct Request {
    enum class Kind { G, J, F } kind;
    int level;  // n of g_n, or of the argument g_n of J
    int order;  // jet order in the u variables at tau = 1
  };

  /// base = x', velocity = v0 with exp_{x'}(v0) = x. `seed` is g_0 (identity when empty).
  RayEngine(const MetricField& m, const GaugeFields& gauge, RVector base, RVector velocity,
            const RayEngineOptions& options, CMatrix seed = {});

  /// Plans the recursion for the requests, integrates the ray and builds every frame.
  /// Throws NumericalError when the planned frame count exceeds the cost guard.
  void prepare(const std::vector<Request>& requests);

  /// g_n at tau = 1 as jets in w = u - v0 of the given order (must have been requested).
  JetMatrix g(int n, int order);
  /// J(g_n) at tau = 1.
  JetMatrix j(int n, int order);
  /// f_n = E g_n at tau = 1.
  JetMatrix f(int n, int order);

  /// Data at tau = 1.
  const RayPoint& top() const;
  std::size_t evaluation_points() const noexcept { return points_.size(); }
  int dim() const noexcept { return dim_; }
  std::size_t k() const noexcept { return k_; }
  const RVector& velocity() const noexcept { return v0_; }
  const RVector& base() const noexcept { return base_; }

  /// Number of distinct quadrature multisets of size <= depth, i.e. frames of a full recursion.
  static double frame_count(int quad_nodes, int depth);

 private:
  using Key = std::vector<int>;  // sorted quadrature node indices
  struct MemoKey {
    int level;
    int order;
    Key nodes;
    auto operator<=>(const MemoKey&) const = default;
  };

  JetMatrix eval_g(int level, int order, const Key& nodes);
  JetMatrix eval_j(int level, int order, const Key& nodes);
  void need_point(const Key& nodes, int order);
  double tau(const Key& nodes) const;
  RayPoint build_point(const Key& nodes, int order) const;

  const MetricField& m_;
  const GaugeFields& gauge_;
  RVector base_;
  RVector v0_;
  RayEngineOptions options_;
  int dim_;
  std::size_t k_;
  CMatrix seed_;
  std::vector<double> nodes_;
  std::vector<double> weights_;

  bool planning_ = false;
  bool prepared_ = false;
  std::map<Key, int> planned_order_;
  std::map<Key, RayPoint> points_;
  std::map<MemoKey, JetMatrix> g_memo_;
  std::map<MemoKey, JetMatrix> j_memo_;
};

}  // namespace sdw
