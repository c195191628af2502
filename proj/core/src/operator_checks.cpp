#include <cmath>
#include <map>
#include <random>

#include "internal.hpp"
#include "sdw/hadamard.hpp"

namespace sdw {

namespace {

const Complex I(0.0, 1.0);

JetMatrix embed_matrix(const JetMatrix& m, int new_dim) {
  return m.map([new_dim](const CJet& j) { return embed(j, new_dim); });
}

}  // namespace

std::vector<JetMatrix> sd_series_jets(RayEngine& engine, int n_max) {
  std::vector<RayEngine::Request> req;
  for (int n = 0; n <= n_max; ++n) req.push_back({RayEngine::Request::Kind::F, n, 2});
  engine.prepare(req);
  std::vector<JetMatrix> out;
  for (int n = 0; n <= n_max; ++n) out.push_back(engine.f(n, 2));
  return out;
}

std::vector<double> lambda_identity_residuals(const MetricField& m, const GaugeFields& gauge, std::span<const double> x,
                                     std::span<const double> x_prime, int n_max, std::span<const double> lambdas,
                                     const HadamardOptions& options, std::optional<RVector> v_guess) {
  GeodesicSolution sol = conjugate_free_geodesic(m, x, x_prime, options.geodesic, std::move(v_guess), nullptr);
  RayEngine engine(m, gauge, RVector(x_prime.begin(), x_prime.end()), sol.v0, options.ray());
  const auto f = sd_series_jets(engine, n_max);
  std::vector<double> out;
  for (double l : lambdas) out.push_back(lambda_identity_check(engine, m, f, l));
  return out;
}

double lambda_identity_check(RayEngine& engine, const MetricField& m, const std::vector<JetMatrix>& f_coeffs,
                             double lambda) {
  if (lambda == 0.0) throw ValidationError("the lambda identity needs lambda != 0");
  const int d = engine.dim();
  const int D = d + 1;  // w_0 .. w_{d-1}, then l = lambda - lambda_0
  const std::size_t k = engine.k();
  const RayPoint& top = engine.top();
  if (top.order < 2) throw OrderError("the lambda identity needs the endpoint frame at order 2");

  const JetLayout& layout = JetLayout::get(D, 2);
  const JetMatrix E = embed_matrix(truncate(top.E, 2), D);
  const JetMatrix E_inv = embed_matrix(truncate(top.E_inv, 2), D);
  const LocalFrame frame = embed_frame(truncate_frame(top.frame, 2), D);

  // sigma(w) = 1/2 g'(v0 + w, v0 + w)
  const RVector& v0 = engine.velocity();
  std::vector<CJet> u;
  for (int a = 0; a < d; ++a) u.push_back(CJet::variable(layout, a, Complex(v0[a])));
  const RMatrix gp = m.metric<double>(engine.base());
  CJet sigma(0.0);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) sigma = sigma + u[a] * u[b] * (0.5 * gp(a, b));
  const CJet lam = CJet::variable(layout, d, Complex(lambda));

  JetMatrix F(k, k);
  CJet power(1.0);
  for (std::size_t n = 0; n < f_coeffs.size(); ++n) {
    JetMatrix fn = f_coeffs[n].empty() ? JetMatrix(k, k) : embed_matrix(truncate(f_coeffs[n], 2), D);
    F = F + (power * CJet(std::pow(I, static_cast<int>(n)))) * fn;
    power = power * lam;
  }

  // left side: E (sigma_{,a} g^{ab} d_b G + lambda d_lambda G) - i lambda KG(F)
  const JetMatrix G = E_inv * F;
  JetMatrix inner = lam * derivative(G, d);
  for (int a = 0; a < d; ++a) {
    CJet sa = derivative(sigma, a);
    for (int b = 0; b < d; ++b) inner = inner + (sa * frame.ginv(a, b)) * derivative(G, b);
  }
  const CMatrix lhs =
      base_values(E * inner) - (I * lambda) * base_values(kg_apply(frame, F));

  // right side through the oscillatory factor
  const double sgn = lambda > 0 ? 1.0 : -1.0;
  const CJet phase = exp(sigma * reciprocal(lam * 2.0) * CJet(I)) * pow(lam * sgn, -0.5 * d);
  const JetMatrix Phi = phase * F;
  const CMatrix bracket = base_values(kg_apply(frame, Phi) + CJet(I) * derivative(Phi, d));
  const Complex sigma0 = base_scalar(sigma);
  const Complex prefactor =
      -I * lambda * std::pow(std::abs(lambda), 0.5 * d) * std::exp(-I * sigma0 / (2.0 * lambda));
  const CMatrix rhs = prefactor * bracket;
  return frobenius_norm(lhs - rhs);
}

CoincidenceResult coincidence_hermiticity(const MetricField& m, const GaugeFields& gauge, const FiberForm& form,
                          std::span<const double> x_prime, const HadamardOptions& options, double rho0) {
  const int d = m.dim();
  const RVector xp(x_prime.begin(), x_prime.end());
  RVector u(d);
  double norm = 0.0;
  for (int i = 0; i < d; ++i) {
    u[i] = i == 0 ? 1.0 : 0.3 / i;
    norm += u[i] * u[i];
  }
  for (double& v : u) v /= std::sqrt(norm);
  const auto xs = detail::constant_point(xp);

  auto kg_e = [&](double rho) {
    RVector y = xp;
    for (int i = 0; i < d; ++i) y[i] += rho * u[i];
    GeodesicSolution sol = shoot_bvp(m, xp, y, detail::scaled(u, rho), options.geodesic);
    auto yj = lift_point(y, 2);
    auto tp = detail::lift_two_point(m, gauge, xs, yj, sol.v0, 2, options.geodesic.steps);
    return base_values(kg_apply(chart_frame(m, gauge, yj), detail::e_matrix(tp)));
  };
  auto sym = [&](double rho) { return Complex(0.5) * (kg_e(rho) + kg_e(-rho)); };

  CoincidenceResult r;
  r.rho = {rho0, rho0 / 2, rho0 / 4};
  const CMatrix s0 = sym(r.rho[0]), s1 = sym(r.rho[1]), s2 = sym(r.rho[2]);
  // even in rho: eliminate rho^2, then rho^4
  const CMatrix r1a = Complex(1.0 / 3.0) * (Complex(4.0) * s1 - s0);
  const CMatrix r1b = Complex(1.0 / 3.0) * (Complex(4.0) * s2 - s1);
  r.M = Complex(1.0 / 15.0) * (Complex(16.0) * r1b - r1a);
  r.change = frobenius_norm(r.M - r1b);
  if (!std::isfinite(r.change) || r.change > 1e-4 * std::max(1.0, frobenius_norm(r.M)))
    throw NumericalError("coincidence extrapolation did not settle (last change " + std::to_string(r.change) + ")");
  r.defect = frobenius_norm(r.M - form.adjoint(r.M));
  return r;
}

double p_prime_order0(const MetricField& m, const GaugeFields& gauge, const FiberForm& form,
                     std::span<const double> x, std::span<const double> x_prime, const HadamardOptions& options,
                     std::optional<RVector> v_guess) {
  const int d = m.dim();
  // geodesic from x to a = x' and back
  GeodesicSolution to_a = shoot_bvp(m, x, x_prime, v_guess ? std::optional<RVector>(detail::scaled(*v_guess, -1.0)) : std::nullopt,
                                    options.geodesic);
  GeodesicSolution to_x = shoot_bvp(m, x_prime, x, detail::scaled(to_a.nodes.back().v, -1.0), options.geodesic);
  const int steps = options.geodesic.steps;
  auto a = lift_point(x_prime, 1);
  auto b = detail::constant_point(x);
  auto tp_ab = detail::lift_two_point(m, gauge, b, a, to_a.v0, 1, steps);  // functions of (a, x)
  auto tp_ba = detail::lift_two_point(m, gauge, a, b, to_x.v0, 1, steps);  // functions of (x, a)
  const JetMatrix E_ab = detail::e_matrix(tp_ab);
  const JetMatrix G = inverse(E_ab) * form.adjoint(detail::e_matrix(tp_ba));
  auto ginv = m.metric_at<double>(x_prime).ginv;
  CMatrix inner(gauge.k(), gauge.k());
  for (int mu = 0; mu < d; ++mu) {
    const double s_mu = base_scalar(tp_ab.p_end[mu]).real();
    for (int nu = 0; nu < d; ++nu) inner = inner + Complex(s_mu * ginv(mu, nu)) * base_values(derivative(G, nu));
  }
  return frobenius_norm(form.adjoint(base_values(E_ab) * inner));
}

namespace {

using Laurent = std::map<int, JetMatrix>;

// Two-point data with jets in (first argument, second argument), 2d variables.
struct PairBase {
  int d = 0;
  CJet sigma;
  JetMatrix E;
  JetMatrix E_inv;
  LocalFrame frame;
};

PairBase make_pair_base(const MetricField& m, const GaugeFields& gauge, const RVector& first, const RVector& second,
                        const RVector& v_numeric, int order, int steps) {
  const int d = m.dim();
  const JetLayout& layout = JetLayout::get(2 * d, order);
  std::vector<CJet> fj, sj;
  for (int i = 0; i < d; ++i) {
    fj.push_back(CJet::variable(layout, i, Complex(first[i])));
    sj.push_back(CJet::variable(layout, d + i, Complex(second[i])));
  }
  auto tp = detail::lift_two_point(m, gauge, sj, fj, v_numeric, order, steps);
  PairBase b;
  b.d = d;
  b.sigma = tp.sigma;
  b.E = detail::e_matrix(tp);
  b.E_inv = inverse(b.E);
  b.frame = chart_frame(m, gauge, fj);
  return b;
}

// lambda^n coefficient of P(F): E (sigma_{,a} g^{ab} d_b G_n + n G_n) - i KG(F_{n-1}), G = E^{-1} F
Laurent apply_p(const PairBase& b, const Laurent& F) {
  std::map<int, bool> keys;
  for (const auto& [n, v] : F) keys[n] = keys[n + 1] = true;
  std::vector<CJet> sa;
  for (int a = 0; a < b.d; ++a) sa.push_back(derivative(b.sigma, a));
  Laurent out;
  for (const auto& [n, unused] : keys) {
    (void)unused;
    JetMatrix term;
    if (auto it = F.find(n); it != F.end()) {
      JetMatrix G = b.E_inv * it->second;
      JetMatrix inner = CJet(static_cast<double>(n)) * G;
      for (int a = 0; a < b.d; ++a)
        for (int c = 0; c < b.d; ++c) inner = inner + (sa[a] * b.frame.ginv(a, c)) * derivative(G, c);
      term = b.E * inner;
    }
    if (auto it = F.find(n - 1); it != F.end()) {
      JetMatrix kg = CJet(-I) * kg_apply(b.frame, it->second);
      term = term.empty() ? kg : term + kg;
    }
    out.emplace(n, std::move(term));
  }
  return out;
}

// F^*(x, x', lambda) = F(x', x, -lambda)^dagger
Laurent star(const Laurent& F, const FiberForm& form, int d) {
  std::vector<int> swap(2 * d);
  for (int v = 0; v < 2 * d; ++v) swap[v] = v < d ? v + d : v - d;
  Laurent out;
  for (const auto& [n, v] : F) {
    JetMatrix swapped = v.map([&](const CJet& j) { return remap_variables(j, 2 * d, swap); });
    out.emplace(n, CJet(n % 2 ? -1.0 : 1.0) * form.adjoint(swapped));
  }
  return out;
}

Laurent i_over_lambda(const Laurent& F) {
  Laurent out;
  for (const auto& [n, v] : F) out.emplace(n - 1, CJet(I) * v);
  return out;
}

}  // namespace

double p_commutation(const MetricField& m, const GaugeFields& gauge, const FiberForm& form,
                          std::span<const double> x, std::span<const double> x_prime, std::uint64_t seed,
                          const HadamardOptions& options) {
  const int d = m.dim();
  const std::size_t k = gauge.k();
  const int order = 4;
  const RVector xv(x.begin(), x.end()), xp(x_prime.begin(), x_prime.end());
  GeodesicSolution fwd = shoot_bvp(m, xp, xv, std::nullopt, options.geodesic);
  GeodesicSolution rev = shoot_bvp(m, xv, xp, detail::scaled(fwd.nodes.back().v, -1.0), options.geodesic);
  const PairBase base_f = make_pair_base(m, gauge, xv, xp, fwd.v0, order, options.geodesic.steps);
  const PairBase base_r = make_pair_base(m, gauge, xp, xv, rev.v0, order, options.geodesic.steps);

  // smooth test series of degree 2 at (x, x')
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-0.5, 0.5);
  auto random_matrix = [&] {
    CMatrix c(k, k);
    for (auto& v : c.data()) v = Complex(uni(rng), uni(rng));
    return c;
  };
  const JetLayout& layout = JetLayout::get(2 * d, order);
  std::vector<CJet> y, yp;
  for (int i = 0; i < d; ++i) {
    y.push_back(CJet::variable(layout, i, Complex(xv[i])));
    yp.push_back(CJet::variable(layout, d + i, Complex(xp[i])));
  }
  Laurent F;
  for (int n = 0; n <= 2; ++n) {
    JetMatrix fn = constant_matrix(random_matrix());
    fn = fn + sin(y[0] - yp[0] * 0.5) * constant_matrix(random_matrix());
    fn = fn + (y[d - 1] * yp[0]) * constant_matrix(random_matrix());
    fn = fn + exp((y[0] + yp[d - 1]) * 0.3) * constant_matrix(random_matrix());
    F.emplace(n, fn);
  }

  auto p = [&](const Laurent& f) { return apply_p(base_f, f); };
  auto p_prime = [&](const Laurent& f) { return star(apply_p(base_r, star(f, form, d)), form, d); };
  const Laurent lhs = p(i_over_lambda(p_prime(F)));
  const Laurent rhs = p_prime(i_over_lambda(p(F)));

  double worst = 0.0;
  std::map<int, bool> keys;
  for (const auto& [n, v] : lhs) keys[n] = true;
  for (const auto& [n, v] : rhs) keys[n] = true;
  for (const auto& [n, unused] : keys) {
    (void)unused;
    CMatrix a = lhs.count(n) ? base_values(lhs.at(n)) : CMatrix(k, k);
    CMatrix b = rhs.count(n) ? base_values(rhs.at(n)) : CMatrix(k, k);
    worst = std::max(worst, frobenius_norm(a - b));
  }
  return worst;
}

}  // namespace sdw
