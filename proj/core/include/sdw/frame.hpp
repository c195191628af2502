#pragma once

// Local data of the generalized Klein-Gordon operator at one point, in some coordinate
// system, evaluated over jets.

#include <span>
#include <vector>

#include "sdw/gauge.hpp"
#include "sdw/geometry.hpp"

namespace sdw {

using CJet = Jet<Complex>;
using JetMatrix = Matrix<CJet>;

/// Operator coefficients in coordinates whose first `dim` jet variables are the coordinates:
///   KG F = g^{ab} d_a d_b F + c^a d_a F + 2 A^a d_a F + V F
/// where c^a = -g^{bc} Gamma^a_{bc} and V = d_a A^a + Gamma^a_{ab} A^b + A_a A^a + B.
struct LocalFrame {
  int dim = 0;
  std::size_t k = 0;
  JetMatrix ginv;
  std::vector<CJet> gamma_trace;   // c^a
  std::vector<JetMatrix> a_up;     // A^a, empty when there is no connection
  JetMatrix potential;             // V
};

/// Applies the operator to a fiber matrix field F given as jets. The frame's jets and F must
/// share a variable space whose first `frame.dim` variables are the frame coordinates; F needs
/// order >= 2 in those variables for a meaningful result of order (order F - 2).
JetMatrix kg_apply(const LocalFrame& frame, const JetMatrix& F);

/// Re-expresses every jet of the frame with `new_dim` variables (trailing ones unused).
LocalFrame embed_frame(const LocalFrame& frame, int new_dim);

/// Truncates every jet of the frame.
LocalFrame truncate_frame(const LocalFrame& frame, int order);

/// Frame of chart coordinates at the jet point y (y_i = base_i + variable i, possibly with
/// further variables). Result order is that of y.
LocalFrame chart_frame(const MetricField& m, const GaugeFields& gauge, std::span<const CJet> y);

/// Constant jet matrix from a numeric matrix.
JetMatrix constant_matrix(const CMatrix& c);

/// Matrix of derivatives of each entry.
JetMatrix derivative(const JetMatrix& f, int var);

}  // namespace sdw
