#pragma once

#include "sdw/geodesic.hpp"

namespace sdw {

/// sigma, its first covariant derivatives at both ends and the mixed second derivative.
struct WorldFunctionData {
  double sigma = 0.0;
  RVector grad_x;   // sigma_{;mu} at x = gamma(1)
  RVector grad_xp;  // sigma_{;mu'} at x' = gamma(0)
  RMatrix mixed;    // sigma_{;mu;nu'}
};

struct VanVleckData {
  double delta = 0.0;
  double delta_sqrt = 0.0;  // sqrt|delta|
  int sign = 1;
};

/// (-1)^{(d - sign g)/2}, i.e. the sign of det g.
int expected_delta_sign(int dim, int signature);

/// Throws ConjugatePointError when the position-momentum block of Phi(1) is singular.
WorldFunctionData world_function(const GeodesicSolution& sol);

/// Throws NumericalError when the sign of delta contradicts the signature rule.
VanVleckData van_vleck(const MetricField& m, const WorldFunctionData& wf, std::span<const double> x,
                       std::span<const double> xp);

/// sqrt(|x|) for jets with a real nonzero base value.
template <class T>
T sqrt_abs(const T& x) {
  const double re = base_scalar(x).real();
  return sqrt(re < 0 ? -x : x);
}

/// Two-point functions of a jet-lifted geodesic from gamma(0) = x' to gamma(1) = x.
template <class T>
struct TwoPointJets {
  T sigma;
  std::vector<T> p_start;  // p(0) = -sigma_{;mu'}
  std::vector<T> p_end;    // p(1) = sigma_{;mu}
  Matrix<T> mixed;
  T delta;
  T delta_sqrt;
  Matrix<complex_of_t<T>> H;  // empty unless transported
};

template <class T>
TwoPointJets<T> two_point_jets(const MetricField& m, const LiftedGeodesic<T>& geo) {
  const int d = m.dim();
  TwoPointJets<T> out;
  Matrix<T> g0 = m.metric(std::span<const T>(geo.x_start));
  Matrix<T> g1 = m.metric(std::span<const T>(geo.final_state.x));
  out.sigma = T(0.0);
  out.p_start.assign(d, T(0.0));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) out.p_start[i] = out.p_start[i] + g0(i, j) * geo.v0[j];
  for (int i = 0; i < d; ++i) out.sigma = out.sigma + out.p_start[i] * geo.v0[i] * 0.5;
  out.p_end = geo.final_state.p;
  const Matrix<T>& phi = geo.final_state.phi;
  Matrix<T> a = phi.block(0, 0, d, d), b = phi.block(0, d, d, d);
  Matrix<T> c = phi.block(d, 0, d, d), dd = phi.block(d, d, d, d);
  out.mixed = c - dd * solve(b, a);
  out.delta = determinant(-out.mixed) / (sqrt_abs(determinant(g0)) * sqrt_abs(determinant(g1)));
  out.delta_sqrt = sqrt_abs(out.delta);
  out.H = geo.final_state.H;
  return out;
}

}  // namespace sdw
