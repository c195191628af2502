#pragma once

// Hamiltonian geodesic flow with optional variational (Jacobi) system and modified parallel
// transport, generic over double and jet scalars. Fixed-step classical RK4.
//
//   x' = g^{-1} p,   p_l' = 1/2 d_l g_{mn} x'^m x'^n,   H' = -x'^m A_m H

#include <cmath>
#include <span>
#include <vector>

#include "sdw/gauge.hpp"
#include "sdw/geometry.hpp"

namespace sdw {

template <class T>
struct FlowState {
  std::vector<T> x;
  std::vector<T> p;
  Matrix<T> phi;                // d(x, p)(s) / d(x, p)(0), 2d x 2d; empty when not tracked
  Matrix<complex_of_t<T>> H;    // k x k transport; empty when not tracked
};

template <class T>
FlowState<T> initial_state(const MetricField& m, std::span<const T> x0, std::span<const T> v0, bool variational,
                           std::size_t transport_k) {
  FlowState<T> s;
  s.x.assign(x0.begin(), x0.end());
  Matrix<T> g = m.metric(x0);
  const int d = m.dim();
  s.p.assign(d, T(0.0));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) s.p[i] = s.p[i] + g(i, j) * v0[j];
  if (variational) s.phi = Matrix<T>::identity(2 * d);
  if (transport_k > 0) s.H = Matrix<complex_of_t<T>>::identity(transport_k);
  return s;
}

/// g^{-1}(x) p
template <class T>
std::vector<T> velocity(const MetricField& m, const std::vector<T>& x, const std::vector<T>& p) {
  auto mp = m.metric_at<T>(x);
  const int d = m.dim();
  std::vector<T> v(d, T(0.0));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) v[i] = v[i] + mp.ginv(i, j) * p[j];
  return v;
}

template <class T>
FlowState<T> flow_rhs(const MetricField& m, const GaugeFields* gauge, const FlowState<T>& s) {
  const int d = m.dim();
  std::span<const T> x(s.x);
  auto mp = m.metric_at(x);
  std::vector<T> v(d, T(0.0));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) v[i] = v[i] + mp.ginv(i, j) * s.p[j];

  std::vector<Matrix<T>> dg = m.derivatives(x);
  // dgv[l] = d_l g . v; metric components are often independent of some coordinates
  std::vector<std::vector<T>> dgv(d, std::vector<T>(d, T(0.0)));
  for (int l = 0; l < d; ++l)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        if (!is_constant_zero(dg[l](i, j))) dgv[l][i] += dg[l](i, j) * v[j];

  FlowState<T> r;
  r.x = v;
  r.p.assign(d, T(0.0));
  for (int l = 0; l < d; ++l)
    for (int i = 0; i < d; ++i)
      if (!is_constant_zero(dgv[l][i])) r.p[l] += dgv[l][i] * v[i] * 0.5;

  if (!s.phi.empty()) {
    // dv/dx column rho = -g^{-1} d_rho g v
    Matrix<T> dvdx(d, d);
    for (int rho = 0; rho < d; ++rho)
      for (int mu = 0; mu < d; ++mu) {
        T acc(0.0);
        for (int nu = 0; nu < d; ++nu) acc = acc + mp.ginv(mu, nu) * dgv[rho][nu];
        dvdx(mu, rho) = -acc;
      }
    Matrix<T> lin(2 * d, 2 * d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        lin(i, j) = dvdx(i, j);
        lin(i, d + j) = mp.ginv(i, j);
      }
    for (int l = 0; l < d; ++l) {
      // dp_l'/dp_k = (d_l g v) . g^{-1}
      for (int k = 0; k < d; ++k) {
        T acc(0.0);
        for (int nu = 0; nu < d; ++nu) acc = acc + dgv[l][nu] * mp.ginv(nu, k);
        lin(d + l, d + k) = acc;
      }
      // dp_l'/dx^rho = 1/2 v d_rho d_l g v + (d_l g v) . dv/dx^rho
      for (int rho = 0; rho < d; ++rho) {
        Matrix<T> d2 = m.d2metric(rho, l, x);
        T acc(0.0);
        for (int i = 0; i < d; ++i) {
          T row(0.0);
          for (int j = 0; j < d; ++j) row = row + d2(i, j) * v[j];
          acc = acc + row * v[i] * 0.5 + dgv[l][i] * dvdx(i, rho);
        }
        lin(d + l, rho) = acc;
      }
    }
    r.phi = lin * s.phi;
  }

  if (!s.H.empty()) {
    if (gauge && gauge->has_connection()) {
      auto a = gauge->contract(std::span<const T>(v), x);
      r.H = -(a * s.H);
    } else {
      r.H = Matrix<complex_of_t<T>>(s.H.rows(), s.H.cols());
    }
  }
  return r;
}

namespace flow_detail {
template <class T>
void add_scaled(T& a, const T& b, double h) {
  if constexpr (is_jet_v<T>) {
    a.add_scaled(b, h);
  } else {
    a += b * h;
  }
}
}  // namespace flow_detail

/// r += h k, componentwise.
template <class T>
void axpy_inplace(FlowState<T>& r, double h, const FlowState<T>& k) {
  using flow_detail::add_scaled;
  for (std::size_t i = 0; i < r.x.size(); ++i) add_scaled(r.x[i], k.x[i], h);
  for (std::size_t i = 0; i < r.p.size(); ++i) add_scaled(r.p[i], k.p[i], h);
  for (std::size_t i = 0; i < r.phi.data().size(); ++i) add_scaled(r.phi.data()[i], k.phi.data()[i], h);
  for (std::size_t i = 0; i < r.H.data().size(); ++i) add_scaled(r.H.data()[i], k.H.data()[i], h);
}

/// s + h k, componentwise.
template <class T>
FlowState<T> axpy(const FlowState<T>& s, double h, const FlowState<T>& k) {
  FlowState<T> r = s;
  axpy_inplace(r, h, k);
  return r;
}

template <class T>
FlowState<T> rk4_step(const MetricField& m, const GaugeFields* gauge, const FlowState<T>& s, double h) {
  FlowState<T> out = s;
  FlowState<T> stage = s;
  FlowState<T> k = flow_rhs(m, gauge, s);
  axpy_inplace(out, h / 6.0, k);
  axpy_inplace(stage, 0.5 * h, k);
  k = flow_rhs(m, gauge, stage);
  axpy_inplace(out, h / 3.0, k);
  stage = s;
  axpy_inplace(stage, 0.5 * h, k);
  k = flow_rhs(m, gauge, stage);
  axpy_inplace(out, h / 3.0, k);
  stage = s;
  axpy_inplace(stage, h, k);
  k = flow_rhs(m, gauge, stage);
  axpy_inplace(out, h / 6.0, k);
  return out;
}

template <class T>
bool state_finite(const FlowState<T>& s) {
  auto ok = [](const auto& v) { return std::isfinite(std::abs(base_scalar(v))); };
  for (const auto& v : s.x)
    if (!ok(v)) return false;
  for (const auto& v : s.p)
    if (!ok(v)) return false;
  for (const auto& v : s.phi.data())
    if (!ok(v)) return false;
  for (const auto& v : s.H.data())
    if (!ok(v)) return false;
  return true;
}

/// Integrates over s in [0, 1] with `steps` equal steps; returns all steps + 1 nodes.
template <class T>
std::vector<FlowState<T>> integrate_states(const MetricField& m, const GaugeFields* gauge, FlowState<T> s,
                                           int steps) {
  if (steps < 1) throw ValidationError("integration needs at least one step");
  std::vector<FlowState<T>> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  out.push_back(s);
  const double h = 1.0 / steps;
  for (int i = 0; i < steps; ++i) {
    s = rk4_step(m, gauge, s, h);
    if (!state_finite(s)) throw NumericalError("geodesic flow produced a non-finite state");
    out.push_back(s);
  }
  return out;
}

/// Final state only.
template <class T>
FlowState<T> integrate_final(const MetricField& m, const GaugeFields* gauge, FlowState<T> s, int steps) {
  if (steps < 1) throw ValidationError("integration needs at least one step");
  const double h = 1.0 / steps;
  for (int i = 0; i < steps; ++i) {
    s = rk4_step(m, gauge, s, h);
    if (!state_finite(s)) throw NumericalError("geodesic flow produced a non-finite state");
  }
  return s;
}

}  // namespace sdw
