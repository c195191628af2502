#include "sdw/geodesic.hpp"

#include <cmath>
#include <sstream>

namespace sdw {

namespace {

double norm2(const RVector& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double sqrt_abs_det(const RMatrix& g) { return std::sqrt(std::abs(determinant(g))); }

// Final state of the flow with the propagator, or nullopt when the flow breaks down.
std::optional<FlowState<double>> try_shoot(const MetricField& m, std::span<const double> x0, const RVector& v,
                                           int steps) {
  try {
    auto init = initial_state<double>(m, x0, v, true, 0);
    return integrate_final(m, nullptr, std::move(init), steps);
  } catch (const NumericalError&) {
    return std::nullopt;
  } catch (const SingularMetricError&) {
    return std::nullopt;
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

std::string format_vector(std::span<const double> v) {
  std::ostringstream os;
  os.precision(6);
  os << "(";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << ")";
  return os.str();
}

}  // namespace

double GeodesicSolution::energy() const {
  const RMatrix& g = nodes.front().g;
  double e = 0.0;
  for (std::size_t i = 0; i < v0.size(); ++i)
    for (std::size_t j = 0; j < v0.size(); ++j) e += g(i, j) * v0[i] * v0[j];
  return 0.5 * e;
}

GeodesicSolution integrate_flow(const MetricField& m, std::span<const double> x0, std::span<const double> v0,
                                int steps) {
  if (static_cast<int>(x0.size()) != m.dim() || static_cast<int>(v0.size()) != m.dim())
    throw ValidationError("geodesic start point and velocity must have the metric dimension");
  auto states = integrate_states(m, nullptr, initial_state<double>(m, x0, v0, true, 0), steps);
  GeodesicSolution sol;
  sol.x_start.assign(x0.begin(), x0.end());
  sol.v0.assign(v0.begin(), v0.end());
  sol.steps = steps;
  sol.nodes.reserve(states.size());
  sol.propagator.reserve(states.size());
  for (auto& st : states) {
    GeodesicNode node;
    auto mp = m.metric_at<double>(st.x);
    node.x = st.x;
    node.p = st.p;
    node.v.assign(st.x.size(), 0.0);
    for (std::size_t i = 0; i < st.x.size(); ++i)
      for (std::size_t j = 0; j < st.x.size(); ++j) node.v[i] += mp.ginv(i, j) * st.p[j];
    node.g = mp.g;
    sol.nodes.push_back(std::move(node));
    sol.propagator.push_back(std::move(st.phi));
  }
  sol.x_end = sol.nodes.back().x;
  return sol;
}

GeodesicSolution shoot_bvp(const MetricField& m, std::span<const double> x_start, std::span<const double> x_end,
                           std::optional<RVector> v_guess, const GeodesicOptions& options) {
  const int d = m.dim();
  if (static_cast<int>(x_start.size()) != d || static_cast<int>(x_end.size()) != d)
    throw ValidationError("geodesic endpoints must have the metric dimension");
  RVector v(d);
  if (v_guess) {
    if (static_cast<int>(v_guess->size()) != d) throw ValidationError("velocity guess has the wrong dimension");
    v = *v_guess;
  } else {
    for (int i = 0; i < d; ++i) v[i] = x_end[i] - x_start[i];
  }
  const RMatrix g0 = m.metric<double>(x_start);
  const double scale = std::max(1.0, norm2(RVector(x_end.begin(), x_end.end())));

  auto residual_of = [&](const FlowState<double>& fin) {
    RVector r(d);
    for (int i = 0; i < d; ++i) r[i] = fin.x[i] - x_end[i];
    return r;
  };

  auto normalized_det = [&](const FlowState<double>& st) {
    const RMatrix jac = st.phi.block(0, d, d, d) * g0;
    return determinant(jac) * sqrt_abs_det(m.metric<double>(st.x)) / sqrt_abs_det(g0);
  };
  // a stalled Newton iteration next to a degenerate Jacobian means conjugate endpoints
  auto fail = [&](const FlowState<double>& st, const std::string& what) {
    const double nd = normalized_det(st);
    if (!(std::abs(nd) >= options.conjugate_tol))
      throw ConjugatePointError("endpoints " + format_vector(x_start) + " and " + format_vector(x_end) +
                                " are conjugate along the geodesic (" + what + ", normalized Jacobi determinant " +
                                std::to_string(nd) + ")");
    throw NumericalError(what);
  };

  auto state = try_shoot(m, x_start, v, options.steps);
  if (!state) throw NumericalError("geodesic flow from the initial guess left the chart or diverged");
  RVector r = residual_of(*state);
  double res = norm2(r);
  int iter = 0;
  while (res >= options.newton_tol * scale) {
    if (iter >= options.max_iter)
      fail(*state, "geodesic shooting did not converge in " + std::to_string(options.max_iter) +
                       " iterations (residual " + std::to_string(res) + ")");
    ++iter;
    RMatrix jac = state->phi.block(0, d, d, d) * g0;
    RMatrix rhs(d, 1);
    for (int i = 0; i < d; ++i) rhs(i, 0) = -r[i];
    RMatrix dv;
    try {
      dv = solve(jac, rhs, 1e-14);
    } catch (const NumericalError&) {
      throw ConjugatePointError("singular shooting Jacobian between " + format_vector(x_start) + " and " +
                                format_vector(x_end) + ": the endpoints are conjugate along the geodesic");
    }
    double step = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < 30; ++halving, step *= 0.5) {
      RVector trial = v;
      for (int i = 0; i < d; ++i) trial[i] += step * dv(i, 0);
      auto trial_state = try_shoot(m, x_start, trial, options.steps);
      if (!trial_state) continue;
      RVector tr = residual_of(*trial_state);
      double tres = norm2(tr);
      if (tres < res || (step == 1.0 && tres < 10 * options.newton_tol * scale)) {
        v = trial;
        state = std::move(trial_state);
        r = tr;
        res = tres;
        accepted = true;
        break;
      }
    }
    if (!accepted) fail(*state, "geodesic shooting line search failed (residual " + std::to_string(res) + ")");
  }

  const double normalized = normalized_det(*state);
  if (!(normalized >= options.conjugate_tol))
    throw ConjugatePointError("endpoints " + format_vector(x_start) + " and " + format_vector(x_end) +
                              " are conjugate along the geodesic (normalized Jacobi determinant " +
                              std::to_string(normalized) + ")");

  GeodesicSolution sol = integrate_flow(m, x_start, v, options.steps);
  sol.x_end.assign(x_end.begin(), x_end.end());
  sol.newton_iterations = iter;
  sol.residual = res;
  return sol;
}

RMatrix jacobi_block(const GeodesicSolution& sol, std::size_t s_index, std::size_t t_index) {
  const std::size_t d = sol.x_start.size();
  if (s_index >= sol.propagator.size() || t_index >= sol.propagator.size())
    throw ValidationError("jacobi_block: grid index out of range");
  RMatrix rel = sol.propagator[s_index] * inverse(sol.propagator[t_index]);
  return rel.block(0, d, d, d) * sol.nodes[t_index].g;
}

ConjugateReport check_conjugate_free(const GeodesicSolution& sol, double tol) {
  const std::size_t n = sol.propagator.size();
  const std::size_t d = sol.x_start.size();
  ConjugateReport rep;
  rep.tol = tol;
  rep.min_normalized_det = std::numeric_limits<double>::infinity();
  std::vector<double> vol(n);
  for (std::size_t i = 0; i < n; ++i) vol[i] = sqrt_abs_det(sol.nodes[i].g);
  const double speed = std::sqrt(std::abs(2.0 * sol.energy()));

  for (std::size_t t = 0; t < n; ++t) {
    RMatrix inv_t = inverse(sol.propagator[t]);
    RMatrix right = inv_t.block(0, d, 2 * d, d) * sol.nodes[t].g;  // momentum columns -> velocity
    double prev = 1.0;
    for (std::size_t s = 0; s < n; ++s) {
      if (s == t) continue;
      RMatrix block = sol.propagator[s].block(0, 0, d, 2 * d) * right;
      const double sep = sol.s(s) - sol.s(t);
      const double dnorm = determinant(block) * vol[s] / vol[t] / std::pow(sep, static_cast<double>(d));
      if (dnorm < rep.min_normalized_det) {
        rep.min_normalized_det = dnorm;
        rep.s_index = s;
        rep.t_index = t;
      }
      if (s > t) {
        if (!rep.crossing && prev > 0.0 && dnorm <= 0.0) {
          const double s_prev = s == t + 1 ? sol.s(t) : sol.s(s - 1);
          const double f_prev = s == t + 1 ? 1.0 : prev;
          const double frac = f_prev / (f_prev - dnorm);
          rep.crossing = true;
          rep.crossing_t = sol.s(t);
          rep.crossing_s = s_prev + frac * (sol.s(s) - s_prev);
          rep.arc_separation = std::abs(rep.crossing_s - rep.crossing_t) * speed;
        }
        prev = dnorm;
      }
    }
  }
  rep.pass = rep.min_normalized_det >= tol;
  return rep;
}

int lifted_newton_steps(int order) {
  int steps = 0;
  while ((1 << steps) < order + 1) ++steps;
  return steps;
}

}  // namespace sdw
