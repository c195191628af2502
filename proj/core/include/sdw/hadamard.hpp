#pragma once

// Seeley-DeWitt coefficients f_n(x, x') = Delta^{1/2} H g_n and the operator checks built on
// them: sesqui-symmetry, the transport PDE, the lambda-series operators P and P', and the
// coincidence-limit hermiticity of KG(Delta^{1/2} H).

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "sdw/bundle.hpp"
#include "sdw/geodesic.hpp"
#include "sdw/ray_engine.hpp"
#include "sdw/synge.hpp"

namespace sdw {

struct HadamardOptions {
  GeodesicOptions geodesic;
  int quad_nodes = 16;
  double cost_guard = 1e7;
  unsigned threads = 0;
  /// Relative finite-difference step of the cross-check mode.
  double fd_step = 1e-4;

  RayEngineOptions ray() const { return {geodesic.steps, quad_nodes, cost_guard, threads}; }
};

/// Boundary value problem from x' to x followed by the conjugate-point check; failures throw
/// ConjugatePointError naming the pair.
GeodesicSolution conjugate_free_geodesic(const MetricField& m, std::span<const double> x,
                                         std::span<const double> x_prime, const GeodesicOptions& options = {},
                                         std::optional<RVector> v_guess = std::nullopt,
                                         ConjugateReport* report = nullptr);

struct CoefficientTable {
  RVector x;
  RVector x_prime;
  int n_max = 0;
  RVector v0;     // initial velocity of the geodesic from x' to x
  RVector v_end;  // its velocity at x
  std::vector<CMatrix> g;
  std::vector<CMatrix> f;
  double sigma = 0.0;
  double delta = 0.0;
  double delta_sqrt = 0.0;
  CMatrix H;
  int steps = 0;
  int quad_nodes = 0;
  std::size_t evaluation_points = 0;
  int newton_iterations = 0;
  ConjugateReport conjugate;
};

/// Geodesic from x' to x, conjugate-point check (failure throws ConjugatePointError with the
/// pair in the message), then the recursion up to n_max. `seed` replaces g_0 = I.
CoefficientTable seeley_dewitt(const MetricField& m, const GaugeFields& gauge, std::span<const double> x,
                               std::span<const double> x_prime, int n_max, const HadamardOptions& options = {},
                               std::optional<RVector> v_guess = std::nullopt, const CMatrix& seed = {});

struct SymmetryResult {
  std::vector<double> residual;  // per n
  CoefficientTable forward;      // f_n(x, x')
  CoefficientTable reverse;      // f_n(x', x)
};

/// r_n = |f_n(x,x') - f_n(x',x)^dagger|_F / max(1, |f_n(x,x')|_F).
SymmetryResult symmetry_residual(const MetricField& m, const GaugeFields& gauge, const FiberForm& form,
                                 std::span<const double> x, std::span<const double> x_prime, int n_max,
                                 const HadamardOptions& options = {}, std::optional<RVector> v_guess = std::nullopt);

/// |sigma_{,mu} g_n^{,mu} + n g_n - J(g_{n-1})|_F at (x, x'), n >= 1. For n = 0 returns the
/// norm of the gradient of g_0.
double hadamard_pde_residual(const MetricField& m, const GaugeFields& gauge, std::span<const double> x,
                             std::span<const double> x_prime, int n, const HadamardOptions& options = {},
                             std::optional<RVector> v_guess = std::nullopt);

/// F(x, x', lambda) = sum_n c_n lambda^n with c_n = i^n f_n, truncated at coeffs.size() - 1.
struct LambdaPolynomial {
  std::vector<CMatrix> coeffs;

  static LambdaPolynomial from_coefficients(const std::vector<CMatrix>& f);
  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  CMatrix evaluate(double lambda) const;
  /// F^*(x, x', lambda) = F(x', x, -lambda)^dagger, given the polynomial of the reversed pair:
  /// coefficients (-1)^n c_n(x', x)^dagger.
  static LambdaPolynomial star(const LambdaPolynomial& reversed, const FiberForm& form);
};

/// lambda-coefficients of P(F^SD c) for the truncated series through n_max:
/// the lambda^n coefficient is i^n E (sigma_{,mu} g_n^{,mu} + n g_n - J(g_{n-1})).
LambdaPolynomial p_operator_series(const MetricField& m, const GaugeFields& gauge, std::span<const double> x,
                                   std::span<const double> x_prime, int n_max, const HadamardOptions& options = {},
                                   const CMatrix& seed = {}, std::optional<RVector> v_guess = std::nullopt);

/// KG applied to a fiber field F(y), evaluated on order-2 jets at x.
using FieldFunction = std::function<JetMatrix(std::span<const CJet>)>;
CMatrix apply_kg(const FieldFunction& field, const MetricField& m, const GaugeFields& gauge,
                 std::span<const double> x);

/// J(g)(x, x') = E^{-1} KG(E g) with E(y) = Delta^{1/2}(y,x') H(y,x') from jet-lifted geodesic
/// boundary value problems from x' to y.
CMatrix j_operator(const FieldFunction& g_eval, const MetricField& m, const GaugeFields& gauge,
                   std::span<const double> x, std::span<const double> x_prime, const HadamardOptions& options = {},
                   std::optional<RVector> v_guess = std::nullopt);

struct CoincidenceResult {
  CMatrix M;             // extrapolated coincidence value of KG(Delta^{1/2} H)
  double defect = 0.0;   // |M - M^dagger|_F
  double change = 0.0;   // difference between the last two extrapolation levels
  std::vector<double> rho;
};

/// Richardson extrapolation of KG(E)(y, x') for y = x' +- rho u, rho in {rho0, rho0/2, rho0/4}.
/// Throws NumericalError when the extrapolation does not settle.
CoincidenceResult coincidence_hermiticity(const MetricField& m, const GaugeFields& gauge, const FiberForm& form,
                          std::span<const double> x_prime, const HadamardOptions& options = {}, double rho0 = 0.05);

/// Order-0 lambda coefficient of P'(F^SD)(x, x'), which equals the adjoint of
/// E sigma_{,mu} g^{mu nu} d_nu (E(a,x)^{-1} E(x,a)^dagger) at a = x'. Returns its Frobenius norm.
double p_prime_order0(const MetricField& m, const GaugeFields& gauge, const FiberForm& form,
                     std::span<const double> x, std::span<const double> x_prime, const HadamardOptions& options = {},
                     std::optional<RVector> v_guess = std::nullopt);

/// Both sides of
///   P(F) = -i lambda |lambda|^{d/2} e^{-i sigma/2lambda} [KG + i d_lambda](F |lambda|^{-d/2} e^{i sigma/2lambda})
/// for F = sum_n i^n lambda^n f_n with f_n = F_coeffs[n](w) given as order-2 jets in the ray
/// coordinates of `engine` (prepared with an order-2 F request). Returns |LHS - RHS|_F.
double lambda_identity_check(RayEngine& engine, const MetricField& m, const std::vector<JetMatrix>& f_coeffs,
                             double lambda);

/// Builds the degree-n_max truncation of F^SD for lambda_identity_check.
std::vector<JetMatrix> sd_series_jets(RayEngine& engine, int n_max);

/// lambda_identity_check for the degree-n_max series of the pair at each lambda.
std::vector<double> lambda_identity_residuals(const MetricField& m, const GaugeFields& gauge, std::span<const double> x,
                                     std::span<const double> x_prime, int n_max, std::span<const double> lambdas,
                                     const HadamardOptions& options = {}, std::optional<RVector> v_guess = std::nullopt);

/// Surrogate of the commutation of P (first argument) and P' (second argument) on a smooth test
/// series of degree 2: max_n |[P(i P'(F)/lambda) - P'(i P(F)/lambda)]_n|_F.
double p_commutation(const MetricField& m, const GaugeFields& gauge, const FiberForm& form,
                          std::span<const double> x, std::span<const double> x_prime, std::uint64_t seed,
                          const HadamardOptions& options = {});

struct IdentityReport {
  double sigma_gradient = 0.0;     // |sigma_{,mu} sigma^{,mu} - 2 sigma| / max(1, 2|sigma|)
  double delta_transport = 0.0;    // |sigma^{,mu} d_mu Delta^{1/2} - (d - box sigma)/2 Delta^{1/2}| / max(1, Delta^{1/2})
  double transport_inverse = 0.0;  // |H(x,x') H(x',x) - I|_F
  double transport_adjoint = 0.0;  // |H(x,x') - H(x',x)^dagger|_F
  double pde_n1 = 0.0;
};

IdentityReport verify_identities(const MetricField& m, const GaugeFields& gauge, const FiberForm& form,
                                 std::span<const double> x, std::span<const double> x_prime,
                                 const HadamardOptions& options = {}, std::optional<RVector> v_guess = std::nullopt);

struct CrossCheckReport {
  CMatrix j_jet;        // J(I)(x, x') from jets
  CMatrix j_fd;         // same by finite differences of numerically solved E(y)
  CMatrix f1_jet;
  CMatrix f1_fd;
  double j_difference = 0.0;
  double f1_difference = 0.0;
  bool flagged = false;  // any relative difference above 1e-4
};

/// Finite-difference channel: central differences with one Richardson step on E(y) obtained
/// from plain numeric boundary value problems.
CrossCheckReport fd_crosscheck(const MetricField& m, const GaugeFields& gauge, std::span<const double> x,
                               std::span<const double> x_prime, const HadamardOptions& options = {},
                               std::optional<RVector> v_guess = std::nullopt);

}  // namespace sdw
