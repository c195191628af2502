#include "sdw/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "sdw/errors.hpp"

namespace sdw {

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw ValidationError("quadrature needs at least one node");
  QuadratureRule q;
  q.nodes.resize(n);
  q.weights.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-16) break;
    }
    // map [-1, 1] -> [0, 1]; ascending order
    const double w = 2.0 / ((1.0 - z * z) * pp * pp);
    q.nodes[i] = 0.5 * (1.0 - z);
    q.nodes[n - 1 - i] = 0.5 * (1.0 + z);
    q.weights[i] = q.weights[n - 1 - i] = 0.5 * w;
  }
  return q;
}

}  // namespace sdw
