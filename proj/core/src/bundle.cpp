#include "sdw/bundle.hpp"

namespace sdw {

TransportResult parallel_transport(const MetricField& m, const GeodesicSolution& sol, const GaugeFields& gauge) {
  const std::size_t k = gauge.k();
  TransportResult out;
  auto fwd = initial_state<double>(m, sol.x_start, sol.v0, false, k);
  out.H = integrate_final(m, &gauge, std::move(fwd), sol.steps).H;

  RVector back_v = sol.nodes.back().v;
  for (double& v : back_v) v = -v;
  auto rev = initial_state<double>(m, sol.nodes.back().x, back_v, false, k);
  out.H_inv = integrate_final(m, &gauge, std::move(rev), sol.steps).H;
  return out;
}

}  // namespace sdw
