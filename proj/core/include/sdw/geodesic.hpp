#pragma once

#include <optional>
#include <span>
#include <vector>

#include "sdw/flow.hpp"
#include "sdw/geometry.hpp"

namespace sdw {

struct GeodesicOptions {
  int steps = 200;
  double newton_tol = 1e-12;
  int max_iter = 50;
  /// Minimum volume-normalized det d gamma(1) / d gamma'(0) accepted at convergence.
  double conjugate_tol = 1e-3;
};

struct GeodesicNode {
  RVector x;
  RVector p;
  RVector v;  // g^{-1} p
  RMatrix g;  // metric at x
};

/// Affinely parametrized geodesic on s in [0, 1] with its fundamental propagator.
struct GeodesicSolution {
  RVector x_start;
  RVector x_end;
  RVector v0;
  int steps = 0;
  std::vector<GeodesicNode> nodes;
  std::vector<RMatrix> propagator;  // Phi(s_i), 2d x 2d in (position, momentum) blocks
  int newton_iterations = 0;
  double residual = 0.0;

  double s(std::size_t i) const { return static_cast<double>(i) / steps; }
  /// 1/2 g(v0, v0), conserved along the flow.
  double energy() const;
};

GeodesicSolution integrate_flow(const MetricField& m, std::span<const double> x0, std::span<const double> v0,
                                int steps);

/// Newton shooting for gamma(0) = x_start, gamma(1) = x_end. The default guess is x_end - x_start.
/// Throws ConjugatePointError when the endpoint Jacobian is (near) singular.
GeodesicSolution shoot_bvp(const MetricField& m, std::span<const double> x_start, std::span<const double> x_end,
                           std::optional<RVector> v_guess = std::nullopt, const GeodesicOptions& options = {});

/// d gamma(s) / d gamma'(t) at fixed gamma(t), for grid indices s and t.
RMatrix jacobi_block(const GeodesicSolution& sol, std::size_t s_index, std::size_t t_index);

struct ConjugateReport {
  bool pass = true;
  double tol = 0.0;
  double min_normalized_det = 1.0;
  std::size_t s_index = 0;
  std::size_t t_index = 0;
  /// Set when the normalized determinant changes sign along some row t.
  bool crossing = false;
  double crossing_s = 0.0;
  double crossing_t = 0.0;
  /// |crossing_s - crossing_t| times the geodesic speed.
  double arc_separation = 0.0;
};

/// Signed, volume-normalized D(s,t) = det J(s,t) sqrt|g(s)| / sqrt|g(t)| / (s-t)^d over all
/// distinct grid pairs. PASS iff min D >= tol.
ConjugateReport check_conjugate_free(const GeodesicSolution& sol, double tol = 1e-3);

/// Geodesic lifted to jet scalars; endpoints may be jets in any common layout.
template <class T>
struct LiftedGeodesic {
  std::vector<T> x_start;
  std::vector<T> x_end;
  std::vector<T> v0;
  FlowState<T> final_state;
};

/// Number of jet-lifted Newton steps that recovers all Taylor orders <= order.
int lifted_newton_steps(int order);

/// Starting from a converged numeric initial velocity, runs Newton steps in jet arithmetic so that
/// v0 carries the Taylor expansion of the endpoints. The final state includes the propagator and,
/// when transport_k > 0, the modified parallel transport.
template <class T>
LiftedGeodesic<T> shoot_lifted(const MetricField& m, const GaugeFields* gauge, std::span<const T> x_start,
                               std::span<const T> x_end, const RVector& v_numeric, int steps, int newton_steps,
                               std::size_t transport_k) {
  const int d = m.dim();
  LiftedGeodesic<T> out;
  out.x_start.assign(x_start.begin(), x_start.end());
  out.x_end.assign(x_end.begin(), x_end.end());
  out.v0.clear();
  for (double v : v_numeric) out.v0.push_back(T(v));
  Matrix<T> g0 = m.metric(x_start);
  for (int it = 0; it < newton_steps; ++it) {
    auto init = initial_state<T>(m, x_start, out.v0, true, 0);
    FlowState<T> fin = integrate_final(m, nullptr, std::move(init), steps);
    Matrix<T> jac = fin.phi.block(0, d, d, d) * g0;
    Matrix<T> r(d, 1);
    for (int i = 0; i < d; ++i) r(i, 0) = out.x_end[i] - fin.x[i];
    Matrix<T> dv = solve(jac, r);
    for (int i = 0; i < d; ++i) out.v0[i] = out.v0[i] + dv(i, 0);
  }
  auto init = initial_state<T>(m, x_start, out.v0, true, transport_k);
  out.final_state = integrate_final(m, transport_k > 0 ? gauge : nullptr, std::move(init), steps);
  return out;
}

}  // namespace sdw
