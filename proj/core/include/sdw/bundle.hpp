#pragma once

#include "sdw/gauge.hpp"
#include "sdw/geodesic.hpp"

namespace sdw {

struct TransportResult {
  CMatrix H;      // H(x, x'), transport from x' = gamma(0) to x = gamma(1)
  CMatrix H_inv;  // H(x', x), transport along the reversed geodesic
};

/// Solves dH/ds = -gamma'^mu A_mu(gamma) H, H(0) = I, on the grid of `sol`, and the same
/// equation along the reversed path for H(x', x).
TransportResult parallel_transport(const MetricField& m, const GeodesicSolution& sol, const GaugeFields& gauge);

}  // namespace sdw
