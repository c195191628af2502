#include "sdw/synge.hpp"

#include <cmath>

namespace sdw {

int expected_delta_sign(int dim, int signature) { return ((dim - signature) / 2) % 2 == 0 ? 1 : -1; }

WorldFunctionData world_function(const GeodesicSolution& sol) {
  const std::size_t d = sol.x_start.size();
  WorldFunctionData wf;
  wf.sigma = sol.energy();
  wf.grad_x = sol.nodes.back().p;
  wf.grad_xp = sol.nodes.front().p;
  for (double& v : wf.grad_xp) v = -v;
  const RMatrix& phi = sol.propagator.back();
  RMatrix a = phi.block(0, 0, d, d), b = phi.block(0, d, d, d);
  RMatrix c = phi.block(d, 0, d, d), dd = phi.block(d, d, d, d);
  try {
    wf.mixed = c - dd * solve(b, a, 1e-13);
  } catch (const NumericalError&) {
    throw ConjugatePointError("x and x' are conjugate along the geodesic: the mixed derivative of sigma is undefined");
  }
  return wf;
}

VanVleckData van_vleck(const MetricField& m, const WorldFunctionData& wf, std::span<const double> x,
                       std::span<const double> xp) {
  const double det_g = determinant(m.metric<double>(x));
  const double det_gp = determinant(m.metric<double>(xp));
  VanVleckData out;
  out.delta = determinant(-wf.mixed) / (std::sqrt(std::abs(det_g)) * std::sqrt(std::abs(det_gp)));
  if (!std::isfinite(out.delta) || out.delta == 0.0)
    throw ConjugatePointError("van Vleck-Morette determinant is singular for this pair");
  out.delta_sqrt = std::sqrt(std::abs(out.delta));
  out.sign = out.delta > 0 ? 1 : -1;
  const int expected = expected_delta_sign(m.dim(), m.signature());
  if (out.sign != expected)
    throw NumericalError("van Vleck-Morette determinant has sign " + std::to_string(out.sign) +
                         " but the signature requires " + std::to_string(expected));
  return out;
}

}  // namespace sdw
