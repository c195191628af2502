#include "sdw/hadamard.hpp"

#include <cmath>
#include <sstream>

#include "internal.hpp"
#include "sdw/quadrature.hpp"

namespace sdw {

namespace detail {

std::string describe_pair(std::span<const double> x, std::span<const double> x_prime) {
  std::ostringstream os;
  os.precision(6);
  auto put = [&os](std::span<const double> v) {
    os << "(";
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
    os << ")";
  };
  os << "x = ";
  put(x);
  os << ", x' = ";
  put(x_prime);
  return os.str();
}

}  // namespace detail

namespace {

const Complex I(0.0, 1.0);

Complex ipow_i(int n) {
  static const Complex table[4] = {Complex(1, 0), Complex(0, 1), Complex(-1, 0), Complex(0, -1)};
  return table[((n % 4) + 4) % 4];
}

// sigma_{,a} in exponential coordinates at x': g'(v0)
RVector ray_sigma_gradient(const MetricField& m, std::span<const double> x_prime, const RVector& v0) {
  return detail::lower(m.metric<double>(x_prime), v0);
}

// sigma_{,a} g^{ab} d_b G at the top of the ray, G of order >= 1.
CMatrix sigma_gradient_term(const RayEngine& engine, const RVector& sigma_a, const JetMatrix& G) {
  const int d = engine.dim();
  const auto& ginv = engine.top().frame.ginv;
  CMatrix out(engine.k(), engine.k());
  for (int b = 0; b < d; ++b) {
    Complex coef = 0.0;
    for (int a = 0; a < d; ++a) coef += sigma_a[a] * base_scalar(ginv(a, b));
    out = out + coef * base_values(derivative(G, b));
  }
  return out;
}

}  // namespace

GeodesicSolution conjugate_free_geodesic(const MetricField& m, std::span<const double> x,
                                         std::span<const double> x_prime, const GeodesicOptions& options,
                                         std::optional<RVector> v_guess, ConjugateReport* report) {
  GeodesicSolution sol;
  try {
    sol = shoot_bvp(m, x_prime, x, std::move(v_guess), options);
  } catch (const ConjugatePointError& e) {
    throw ConjugatePointError(std::string(e.what()) + " for " + detail::describe_pair(x, x_prime));
  }
  ConjugateReport rep = check_conjugate_free(sol, options.conjugate_tol);
  if (!rep.pass) {
    std::ostringstream os;
    os << "conjugate points along the geodesic for " << detail::describe_pair(x, x_prime)
       << " (normalized Jacobi determinant " << rep.min_normalized_det << " below " << rep.tol << ")";
    throw ConjugatePointError(os.str());
  }
  if (report) *report = rep;
  return sol;
}


CoefficientTable seeley_dewitt(const MetricField& m, const GaugeFields& gauge, std::span<const double> x,
                               std::span<const double> x_prime, int n_max, const HadamardOptions& options,
                               std::optional<RVector> v_guess, const CMatrix& seed) {
  if (n_max < 0) throw ValidationError("n_max must be nonnegative");
  CoefficientTable t;
  t.x.assign(x.begin(), x.end());
  t.x_prime.assign(x_prime.begin(), x_prime.end());
  t.n_max = n_max;
  t.steps = options.geodesic.steps;
  t.quad_nodes = options.quad_nodes;
  GeodesicSolution sol = conjugate_free_geodesic(m, x, x_prime, options.geodesic, std::move(v_guess), &t.conjugate);
  t.v0 = sol.v0;
  t.v_end = sol.nodes.back().v;
  t.newton_iterations = sol.newton_iterations;
  auto wf = world_function(sol);
  auto vv = van_vleck(m, wf, x, x_prime);
  t.sigma = wf.sigma;
  t.delta = vv.delta;
  t.delta_sqrt = vv.delta_sqrt;
  t.H = parallel_transport(m, sol, gauge).H;

  RayEngine engine(m, gauge, t.x_prime, sol.v0, options.ray(), seed);
  std::vector<RayEngine::Request> req;
  for (int n = 0; n <= n_max; ++n) req.push_back({RayEngine::Request::Kind::F, n, 0});
  engine.prepare(req);
  for (int n = 0; n <= n_max; ++n) {
    t.g.push_back(base_values(engine.g(n, 0)));
    t.f.push_back(base_values(engine.f(n, 0)));
  }
  t.evaluation_points = engine.evaluation_points();
  return t;
}

SymmetryResult symmetry_residual(const MetricField& m, const GaugeFields& gauge, const FiberForm& form,
                                 std::span<const double> x, std::span<const double> x_prime, int n_max,
                                 const HadamardOptions& options, std::optional<RVector> v_guess) {
  SymmetryResult r;
  r.forward = seeley_dewitt(m, gauge, x, x_prime, n_max, options, std::move(v_guess));
  r.reverse = seeley_dewitt(m, gauge, x_prime, x, n_max, options, detail::scaled(r.forward.v_end, -1.0));
  for (int n = 0; n <= n_max; ++n) {
    const CMatrix& a = r.forward.f[n];
    r.residual.push_back(detail::relative_difference(a, form.adjoint(r.reverse.f[n])));
  }
  return r;
}

double hadamard_pde_residual(const MetricField& m, const GaugeFields& gauge, std::span<const double> x,
                             std::span<const double> x_prime, int n, const HadamardOptions& options,
                             std::optional<RVector> v_guess) {
  if (n < 0) throw ValidationError("pde residual needs n >= 0");
  GeodesicSolution sol = conjugate_free_geodesic(m, x, x_prime, options.geodesic, std::move(v_guess), nullptr);
  RayEngine engine(m, gauge, RVector(x_prime.begin(), x_prime.end()), sol.v0, options.ray());
  std::vector<RayEngine::Request> req{{RayEngine::Request::Kind::F, n, 1}};
  if (n >= 1) req.push_back({RayEngine::Request::Kind::J, n - 1, 0});
  engine.prepare(req);
  const RVector sigma_a = ray_sigma_gradient(m, x_prime, sol.v0);
  JetMatrix G = engine.g(n, 1);
  if (n == 0) {
    double s = 0.0;
    for (int a = 0; a < m.dim(); ++a) s += std::pow(frobenius_norm(base_values(derivative(G, a))), 2);
    return std::sqrt(s);
  }
  CMatrix res = sigma_gradient_term(engine, sigma_a, G) + Complex(n) * base_values(G) -
                base_values(engine.j(n - 1, 0));
  return frobenius_norm(res);
}

LambdaPolynomial LambdaPolynomial::from_coefficients(const std::vector<CMatrix>& f) {
  LambdaPolynomial p;
  for (std::size_t n = 0; n < f.size(); ++n) p.coeffs.push_back(ipow_i(static_cast<int>(n)) * f[n]);
  return p;
}

CMatrix LambdaPolynomial::evaluate(double lambda) const {
  if (coeffs.empty()) return {};
  CMatrix out(coeffs.front().rows(), coeffs.front().cols());
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) out = Complex(lambda) * out + *it;
  return out;
}

LambdaPolynomial LambdaPolynomial::star(const LambdaPolynomial& reversed, const FiberForm& form) {
  LambdaPolynomial p;
  for (std::size_t n = 0; n < reversed.coeffs.size(); ++n)
    p.coeffs.push_back(Complex(n % 2 ? -1.0 : 1.0) * form.adjoint(reversed.coeffs[n]));
  return p;
}

LambdaPolynomial p_operator_series(const MetricField& m, const GaugeFields& gauge, std::span<const double> x,
                                   std::span<const double> x_prime, int n_max, const HadamardOptions& options,
                                   const CMatrix& seed, std::optional<RVector> v_guess) {
  if (n_max < 0) throw ValidationError("n_max must be nonnegative");
  GeodesicSolution sol = conjugate_free_geodesic(m, x, x_prime, options.geodesic, std::move(v_guess), nullptr);
  RayEngine engine(m, gauge, RVector(x_prime.begin(), x_prime.end()), sol.v0, options.ray(), seed);
  std::vector<RayEngine::Request> req;
  for (int n = 0; n <= n_max; ++n) {
    req.push_back({RayEngine::Request::Kind::F, n, 1});
    if (n >= 1) req.push_back({RayEngine::Request::Kind::J, n - 1, 0});
  }
  engine.prepare(req);
  const RVector sigma_a = ray_sigma_gradient(m, x_prime, sol.v0);
  const CMatrix E = base_values(engine.top().E);
  LambdaPolynomial p;
  for (int n = 0; n <= n_max; ++n) {
    JetMatrix G = engine.g(n, 1);
    CMatrix c = sigma_gradient_term(engine, sigma_a, G) + Complex(n) * base_values(G);
    if (n >= 1) c = c - base_values(engine.j(n - 1, 0));
    p.coeffs.push_back(ipow_i(n) * (E * c));
  }
  return p;
}

CMatrix apply_kg(const FieldFunction& field, const MetricField& m, const GaugeFields& gauge,
                 std::span<const double> x) {
  auto y = lift_point(x, 2);
  LocalFrame frame = chart_frame(m, gauge, y);
  return base_values(kg_apply(frame, field(y)));
}

CMatrix j_operator(const FieldFunction& g_eval, const MetricField& m, const GaugeFields& gauge,
                   std::span<const double> x, std::span<const double> x_prime, const HadamardOptions& options,
                   std::optional<RVector> v_guess) {
  GeodesicSolution sol = shoot_bvp(m, x_prime, x, std::move(v_guess), options.geodesic);
  auto y = lift_point(x, 2);
  auto xs = detail::constant_point(x_prime);
  auto tp = detail::lift_two_point(m, gauge, xs, y, sol.v0, 2, options.geodesic.steps);
  JetMatrix E = detail::e_matrix(tp);
  LocalFrame frame = chart_frame(m, gauge, y);
  CMatrix kg = base_values(kg_apply(frame, E * g_eval(y)));
  return inverse(base_values(E)) * kg;
}

IdentityReport verify_identities(const MetricField& m, const GaugeFields& gauge, const FiberForm& form,
                                 std::span<const double> x, std::span<const double> x_prime,
                                 const HadamardOptions& options, std::optional<RVector> v_guess) {
  const int d = m.dim();
  IdentityReport rep;
  GeodesicSolution sol = conjugate_free_geodesic(m, x, x_prime, options.geodesic, std::move(v_guess), nullptr);
  auto y = lift_point(x, 2);
  auto xs = detail::constant_point(x_prime);
  auto tp = detail::lift_two_point(m, gauge, xs, y, sol.v0, 2, options.geodesic.steps);

  auto mp = m.metric_at<double>(x);
  auto chr = m.christoffel<double>(x);
  const double sigma = base_scalar(tp.sigma).real();
  std::vector<double> s1(d);
  RMatrix s2(d, d);
  std::vector<double> D1(d);
  for (int a = 0; a < d; ++a) {
    CJet da = derivative(tp.sigma, a);
    s1[a] = base_scalar(da).real();
    for (int b = 0; b < d; ++b) s2(a, b) = base_scalar(derivative(da, b)).real();
    D1[a] = base_scalar(derivative(tp.delta_sqrt, a)).real();
  }
  const double D = base_scalar(tp.delta_sqrt).real();
  double grad2 = 0.0, box = 0.0, transport = 0.0;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      grad2 += mp.ginv(a, b) * s1[a] * s1[b];
      double hess = s2(a, b);
      for (int l = 0; l < d; ++l) hess -= chr.gamma[l](a, b) * s1[l];
      box += mp.ginv(a, b) * hess;
      transport += mp.ginv(a, b) * s1[a] * D1[b];
    }
  rep.sigma_gradient = std::abs(grad2 - 2.0 * sigma) / std::max(1.0, 2.0 * std::abs(sigma));
  rep.delta_transport = std::abs(transport - 0.5 * (d - box) * D) / std::max(1.0, std::abs(D));

  auto tr = parallel_transport(m, sol, gauge);
  rep.transport_inverse = frobenius_norm(tr.H * tr.H_inv - CMatrix::identity(gauge.k()));
  rep.transport_adjoint = frobenius_norm(tr.H - form.adjoint(tr.H_inv));
  rep.pde_n1 = hadamard_pde_residual(m, gauge, x, x_prime, 1, options, sol.v0);
  return rep;
}

namespace {

// Delta^{1/2}(y, x') H(y, x') from plain numeric solves.
CMatrix numeric_e(const MetricField& m, const GaugeFields& gauge, std::span<const double> y,
                  std::span<const double> x_prime, const RVector& v_guess, const GeodesicOptions& opts) {
  GeodesicSolution sol = shoot_bvp(m, x_prime, y, v_guess, opts);
  auto wf = world_function(sol);
  auto vv = van_vleck(m, wf, y, x_prime);
  return Complex(vv.delta_sqrt) * parallel_transport(m, sol, gauge).H;
}

// J(I)(y, x') = E^{-1} KG(E) with central differences and one Richardson step.
CMatrix fd_j_identity(const MetricField& m, const GaugeFields& gauge, const RVector& y0,
                      std::span<const double> x_prime, const RVector& v_guess, const HadamardOptions& options) {
  const int d = m.dim();
  const std::size_t k = gauge.k();
  double scale = 1.0;
  for (double v : y0) scale = std::max(scale, std::abs(v));
  const double h0 = options.fd_step * scale;
  auto at = [&](int a, double sa, int b, double sb) {
    RVector y = y0;
    if (a >= 0) y[a] += sa;
    if (b >= 0) y[b] += sb;
    return numeric_e(m, gauge, y, x_prime, v_guess, options.geodesic);
  };
  const CMatrix E0 = at(-1, 0, -1, 0);
  struct Diffs {
    std::vector<CMatrix> first;
    std::vector<std::vector<CMatrix>> second;
  };
  auto diffs = [&](double h) {
    Diffs out;
    out.first.resize(d);
    out.second.assign(d, std::vector<CMatrix>(d));
    std::vector<CMatrix> plus(d), minus(d);
    for (int a = 0; a < d; ++a) {
      plus[a] = at(a, h, -1, 0);
      minus[a] = at(a, -h, -1, 0);
      out.first[a] = Complex(1.0 / (2 * h)) * (plus[a] - minus[a]);
      out.second[a][a] = Complex(1.0 / (h * h)) * (plus[a] - Complex(2.0) * E0 + minus[a]);
    }
    for (int a = 0; a < d; ++a)
      for (int b = a + 1; b < d; ++b) {
        CMatrix v = at(a, h, b, h) - at(a, h, b, -h) - at(a, -h, b, h) + at(a, -h, b, -h);
        out.second[a][b] = out.second[b][a] = Complex(1.0 / (4 * h * h)) * v;
      }
    return out;
  };
  Diffs coarse = diffs(h0), fine = diffs(0.5 * h0);
  auto rich = [](const CMatrix& c, const CMatrix& f) { return Complex(1.0 / 3.0) * (Complex(4.0) * f - c); };

  auto y_jets = lift_point(y0, 0);
  LocalFrame fr = chart_frame(m, gauge, y_jets);
  CMatrix kg = base_values(fr.potential) * E0;
  for (int a = 0; a < d; ++a) {
    CMatrix first = rich(coarse.first[a], fine.first[a]);
    CMatrix coef = CMatrix::identity(k) * base_scalar(fr.gamma_trace[a]);
    if (!fr.a_up.empty()) coef = coef + Complex(2.0) * base_values(fr.a_up[a]);
    kg = kg + coef * first;
    for (int b = 0; b < d; ++b)
      kg = kg + base_scalar(fr.ginv(a, b)) * rich(coarse.second[a][b], fine.second[a][b]);
  }
  return inverse(E0) * kg;
}

}  // namespace

CrossCheckReport fd_crosscheck(const MetricField& m, const GaugeFields& gauge, std::span<const double> x,
                               std::span<const double> x_prime, const HadamardOptions& options,
                               std::optional<RVector> v_guess) {
  CrossCheckReport rep;
  GeodesicSolution sol = conjugate_free_geodesic(m, x, x_prime, options.geodesic, std::move(v_guess), nullptr);
  const RVector xp(x_prime.begin(), x_prime.end());
  RayEngine engine(m, gauge, xp, sol.v0, options.ray());
  engine.prepare({{RayEngine::Request::Kind::J, 0, 0}, {RayEngine::Request::Kind::F, 1, 0}});
  rep.j_jet = base_values(engine.j(0, 0));
  rep.f1_jet = base_values(engine.f(1, 0));

  const RVector xv(x.begin(), x.end());
  rep.j_fd = fd_j_identity(m, gauge, xv, x_prime, sol.v0, options);
  auto rule = gauss_legendre(options.quad_nodes);
  CMatrix g1(gauge.k(), gauge.k());
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const RVector vi = detail::scaled(sol.v0, rule.nodes[i]);
    GeodesicSolution part = integrate_flow(m, x_prime, vi, options.geodesic.steps);
    g1 = g1 + Complex(rule.weights[i]) * fd_j_identity(m, gauge, part.x_end, x_prime, vi, options);
  }
  rep.f1_fd = numeric_e(m, gauge, x, x_prime, sol.v0, options.geodesic) * g1;
  rep.j_difference = detail::relative_difference(rep.j_jet, rep.j_fd);
  rep.f1_difference = detail::relative_difference(rep.f1_jet, rep.f1_fd);
  rep.flagged = rep.j_difference > 1e-4 || rep.f1_difference > 1e-4;
  return rep;
}

}  // namespace sdw
