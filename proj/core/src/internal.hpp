#pragma once

// Helpers shared by the coefficient and check routines.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sdw/frame.hpp"
#include "sdw/geodesic.hpp"
#include "sdw/synge.hpp"

namespace sdw::detail {

inline std::vector<CJet> constant_point(std::span<const double> x) {
  std::vector<CJet> out;
  for (double v : x) out.emplace_back(Complex(v));
  return out;
}

inline RVector scaled(const RVector& v, double s) {
  RVector out = v;
  for (double& x : out) x *= s;
  return out;
}

inline RVector lower(const RMatrix& g, const RVector& v) {
  RVector out(v.size(), 0.0);
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) out[i] += g(i, j) * v[j];
  return out;
}

/// Two-point functions of the geodesic from `start` to `end` (jets), whose numeric initial
/// velocity is already known.
inline TwoPointJets<CJet> lift_two_point(const MetricField& m, const GaugeFields& gauge,
                                         std::span<const CJet> start, std::span<const CJet> end,
                                         const RVector& v_numeric, int order, int steps) {
  auto geo = shoot_lifted<CJet>(m, &gauge, start, end, v_numeric, steps, lifted_newton_steps(order), gauge.k());
  return two_point_jets(m, geo);
}

inline JetMatrix e_matrix(const TwoPointJets<CJet>& tp) { return tp.delta_sqrt * tp.H; }

std::string describe_pair(std::span<const double> x, std::span<const double> x_prime);

/// Relative Frobenius difference |a - b| / max(1, |a|).
inline double relative_difference(const CMatrix& a, const CMatrix& b) {
  return frobenius_norm(a - b) / std::max(1.0, frobenius_norm(a));
}

}  // namespace sdw::detail
