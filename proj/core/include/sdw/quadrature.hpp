#pragma once

#include <vector>

namespace sdw {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [0, 1].
QuadratureRule gauss_legendre(int n);

}  // namespace sdw
