#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <optional>

#include "sdw/errors.hpp"
#include "sdw/parallel.hpp"
#include "sdw/synge.hpp"
#include "sdw/version.hpp"

namespace sdw::cli {

namespace {

Json matrix_json(const CMatrix& m) {
  Json re = Json::array(), im = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) {
      re.push_back(m(r, c).real());
      im.push_back(m(r, c).imag());
    }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"re", re}, {"im", im}};
}

Json matrices_json(const std::vector<CMatrix>& ms) {
  Json out = Json::array();
  for (const auto& m : ms) out.push_back(matrix_json(m));
  return out;
}

Json pair_json(std::size_t index, const PointPair& p) {
  return Json{{"index", index}, {"x", p.x}, {"x_prime", p.x_prime}};
}

Json conjugate_json(const ConjugateReport& r) {
  Json j{{"pass", r.pass}, {"tol", r.tol}, {"min_normalized_det", r.min_normalized_det},
         {"s_index", r.s_index}, {"t_index", r.t_index}, {"crossing", r.crossing}};
  if (r.crossing)
    j["crossing_s"] = r.crossing_s, j["crossing_t"] = r.crossing_t, j["arc_separation"] = r.arc_separation;
  return j;
}

// shortest text that round-trips
std::string fmt(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string vec_text(const RVector& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + fmt(v[i]);
  return s;
}

std::string describe(std::size_t index, const PointPair& p) {
  return "pair " + std::to_string(index) + " (x = [" + vec_text(p.x) + "], x' = [" + vec_text(p.x_prime) + "])";
}

std::vector<std::string> matrix_header(const std::string& prefix, std::size_t k) {
  std::vector<std::string> h;
  for (std::size_t r = 0; r < k; ++r)
    for (std::size_t c = 0; c < k; ++c) {
      h.push_back(prefix + "_" + std::to_string(r) + std::to_string(c) + "_re");
      h.push_back(prefix + "_" + std::to_string(r) + std::to_string(c) + "_im");
    }
  return h;
}

void append_matrix(std::vector<std::string>& row, const CMatrix& m) {
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) {
      row.push_back(fmt(m(r, c).real()));
      row.push_back(fmt(m(r, c).imag()));
    }
}

int exit_code_of(const std::exception_ptr& e) {
  try {
    std::rethrow_exception(e);
  } catch (const ValidationError&) {
    return kInvalidConfig;
  } catch (const ParseError&) {
    return kInvalidConfig;
  } catch (...) {
    return kNumericalFailure;
  }
}

// Runs fn on every pair (in parallel, results kept in input order); the first failing pair in
// input order aborts the command with its context.
template <class Result>
std::vector<Result> for_each_pair(const Scenario& s, const RunFlags& flags,
                                  const std::function<Result(const PointPair&, const HadamardOptions&)>& fn) {
  if (s.points.empty()) throw CommandError{kInvalidConfig, "config has no point pairs (add \"points\" or \"sampling\")"};
  const std::size_t n = s.points.size();
  std::vector<std::optional<Result>> out(n);
  std::vector<std::exception_ptr> errors(n);
  const HadamardOptions inner = s.numerics.options(n > 1 ? 1u : flags.threads);
  parallel_for(
      n,
      [&](std::size_t i) {
        try {
          out[i].emplace(fn(s.points[i], inner));
        } catch (...) {
          errors[i] = std::current_exception();
        }
      },
      flags.threads);
  std::vector<Result> results;
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i]) {
      std::string what = "unknown error";
      try {
        std::rethrow_exception(errors[i]);
      } catch (const std::exception& e) {
        what = e.what();
      } catch (...) {
      }
      throw CommandError{exit_code_of(errors[i]), describe(i, s.points[i]) + ": " + what};
    }
    results.push_back(std::move(*out[i]));
  }
  return results;
}

Json base_document(const Scenario& s, const RunFlags& flags, int order) {
  Json resolved = s.resolved;
  resolved["run"] = Json{{"command", flags.command}, {"order", order},        {"tol", flags.tol},
                         {"seed", flags.seed},       {"format", flags.format}, {"fd_crosscheck", flags.fd_crosscheck}};
  return Json{{"scenario", s.name}, {"command", flags.command}, {"version", kVersion}, {"config_resolved", resolved}};
}

const std::vector<std::string> kPairColumns = {"pair", "x", "x_prime"};

std::vector<std::string> pair_cells(std::size_t i, const PointPair& p) {
  return {std::to_string(i), vec_text(p.x), vec_text(p.x_prime)};
}

void require_manifold(const Scenario& s) {
  if (!s.metric) throw CommandError{kInvalidConfig, "config has no \"manifold\" block"};
}

// ---------------------------------------------------------------------------------------

Report run_geodesic(const Scenario& s, const RunFlags& flags) {
  require_manifold(s);
  struct Row {
    GeodesicSolution sol;
    ConjugateReport rep;
    WorldFunctionData wf;
    VanVleckData vv;
  };
  const MetricField& m = *s.metric;
  auto rows = for_each_pair<Row>(s, flags, [&](const PointPair& p, const HadamardOptions& o) {
    Row r;
    r.sol = conjugate_free_geodesic(m, p.x, p.x_prime, o.geodesic, p.v_guess, &r.rep);
    r.wf = world_function(r.sol);
    r.vv = van_vleck(m, r.wf, p.x, p.x_prime);
    return r;
  });
  Report rep;
  rep.document = base_document(s, flags, 0);
  Json results = Json::array();
  rep.csv.push_back(kPairColumns);
  for (const char* c : {"sigma", "delta", "newton_iterations", "bvp_residual", "conjugate_pass", "min_normalized_det"})
    rep.csv[0].push_back(c);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Row& r = rows[i];
    results.push_back(Json{{"pair", pair_json(i, s.points[i])},
                           {"v0", r.sol.v0},
                           {"v_end", r.sol.nodes.back().v},
                           {"newton_iterations", r.sol.newton_iterations},
                           {"bvp_residual", r.sol.residual},
                           {"sigma", r.wf.sigma},
                           {"delta", r.vv.delta},
                           {"conjugate_report", conjugate_json(r.rep)}});
    auto row = pair_cells(i, s.points[i]);
    for (const auto& v : {fmt(r.wf.sigma), fmt(r.vv.delta), std::to_string(r.sol.newton_iterations),
                          fmt(r.sol.residual), std::string(r.rep.pass ? "true" : "false"), fmt(r.rep.min_normalized_det)})
      row.push_back(v);
    rep.csv.push_back(row);
  }
  rep.document["results"] = results;
  return rep;
}

Report run_coefficients(const Scenario& s, const RunFlags& flags, int order) {
  require_manifold(s);
  struct Row {
    CoefficientTable t;
    std::optional<CrossCheckReport> fd;
  };
  const MetricField& m = *s.metric;
  const GaugeFields& g = *s.gauge;
  auto rows = for_each_pair<Row>(s, flags, [&](const PointPair& p, const HadamardOptions& o) {
    Row r{seeley_dewitt(m, g, p.x, p.x_prime, order, o, p.v_guess), std::nullopt};
    if (flags.fd_crosscheck) r.fd = fd_crosscheck(m, g, p.x, p.x_prime, o, p.v_guess);
    return r;
  });
  Report rep;
  rep.document = base_document(s, flags, order);
  const std::size_t k = g.k();
  rep.csv.push_back(kPairColumns);
  for (const char* c : {"n", "sigma", "delta"}) rep.csv[0].push_back(c);
  for (const auto& h : matrix_header("f", k)) rep.csv[0].push_back(h);
  Json results = Json::array();
  bool flagged = false;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const CoefficientTable& t = rows[i].t;
    Json r{{"pair", pair_json(i, s.points[i])},
           {"sigma", t.sigma},
           {"delta", t.delta},
           {"delta_sqrt", t.delta_sqrt},
           {"conjugate_report", conjugate_json(t.conjugate)},
           {"v0", t.v0},
           {"H", matrix_json(t.H)},
           {"f", matrices_json(t.f)},
           {"g", matrices_json(t.g)},
           {"evaluation_points", t.evaluation_points},
           {"residuals", Json::object()}};
    if (rows[i].fd) {
      const CrossCheckReport& fd = *rows[i].fd;
      r["fd_crosscheck"] = Json{{"j_jet", matrix_json(fd.j_jet)},   {"j_fd", matrix_json(fd.j_fd)},
                                {"f1_jet", matrix_json(fd.f1_jet)}, {"f1_fd", matrix_json(fd.f1_fd)},
                                {"j_difference", fd.j_difference},  {"f1_difference", fd.f1_difference},
                                {"flagged", fd.flagged}};
      flagged = flagged || fd.flagged;
    }
    results.push_back(r);
    for (int n = 0; n <= order; ++n) {
      auto row = pair_cells(i, s.points[i]);
      row.push_back(std::to_string(n));
      row.push_back(fmt(t.sigma));
      row.push_back(fmt(t.delta));
      append_matrix(row, t.f[n]);
      rep.csv.push_back(row);
    }
  }
  rep.document["results"] = results;
  if (flags.fd_crosscheck) rep.document["summary"] = Json{{"fd_flagged", flagged}};
  if (flagged) rep.exit_code = kResidualExceeded;
  return rep;
}

Report run_audit_symmetry(const Scenario& s, const RunFlags& flags, int order) {
  require_manifold(s);
  const MetricField& m = *s.metric;
  const GaugeFields& g = *s.gauge;
  const FiberForm& form = *s.form;
  auto rows = for_each_pair<SymmetryResult>(s, flags, [&](const PointPair& p, const HadamardOptions& o) {
    return symmetry_residual(m, g, form, p.x, p.x_prime, order, o, p.v_guess);
  });
  Report rep;
  rep.document = base_document(s, flags, order);
  rep.csv.push_back(kPairColumns);
  for (const char* c : {"n", "symmetry_residual"}) rep.csv[0].push_back(c);
  Json results = Json::array();
  double worst = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const SymmetryResult& r = rows[i];
    results.push_back(Json{{"pair", pair_json(i, s.points[i])},
                           {"sigma", r.forward.sigma},
                           {"delta", r.forward.delta},
                           {"conjugate_report", conjugate_json(r.forward.conjugate)},
                           {"f", matrices_json(r.forward.f)},
                           {"residuals", Json{{"symmetry", r.residual}}}});
    for (std::size_t n = 0; n < r.residual.size(); ++n) {
      worst = std::max(worst, r.residual[n]);
      auto row = pair_cells(i, s.points[i]);
      row.push_back(std::to_string(n));
      row.push_back(fmt(r.residual[n]));
      rep.csv.push_back(row);
    }
  }
  rep.document["results"] = results;
  const bool pass = worst <= flags.tol;
  rep.document["summary"] = Json{{"max_symmetry_residual", worst}, {"tol", flags.tol}, {"pass", pass}};
  if (!pass) rep.exit_code = kResidualExceeded;
  return rep;
}

Report run_verify_identities(const Scenario& s, const RunFlags& flags, int order) {
  require_manifold(s);
  struct Row {
    IdentityReport id;
    std::vector<double> pde;
    std::vector<double> lambda_identity;
    double p_prime0 = 0.0;
    CoincidenceResult coincidence;
  };
  const MetricField& m = *s.metric;
  const GaugeFields& g = *s.gauge;
  const FiberForm& form = *s.form;
  const std::vector<double> lambdas{0.3, 1.0};
  auto rows = for_each_pair<Row>(s, flags, [&](const PointPair& p, const HadamardOptions& o) {
    Row r;
    r.id = verify_identities(m, g, form, p.x, p.x_prime, o, p.v_guess);
    for (int n = 1; n <= std::max(order, 1); ++n) r.pde.push_back(hadamard_pde_residual(m, g, p.x, p.x_prime, n, o, p.v_guess));
    r.lambda_identity = lambda_identity_residuals(m, g, p.x, p.x_prime, std::max(order, 2), lambdas, o, p.v_guess);
    r.p_prime0 = p_prime_order0(m, g, form, p.x, p.x_prime, o, p.v_guess);
    r.coincidence = coincidence_hermiticity(m, g, form, p.x_prime, o);
    return r;
  });
  Report rep;
  rep.document = base_document(s, flags, order);
  rep.csv.push_back(kPairColumns);
  for (const char* c : {"n", "pde", "sigma_gradient", "delta_transport", "transport_inverse", "transport_adjoint",
                        "lambda_identity_max", "p_prime_order0", "coincidence_defect"})
    rep.csv[0].push_back(c);
  Json results = Json::array();
  double worst = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Row& r = rows[i];
    const double l2 = *std::max_element(r.lambda_identity.begin(), r.lambda_identity.end());
    Json l2j = Json::array();
    for (std::size_t j = 0; j < lambdas.size(); ++j) l2j.push_back(Json{{"lambda", lambdas[j]}, {"residual", r.lambda_identity[j]}});
    results.push_back(Json{
        {"pair", pair_json(i, s.points[i])},
        {"residuals",
         Json{{"pde", r.pde},
              {"identities", Json{{"sigma_gradient", r.id.sigma_gradient},
                                  {"delta_transport", r.id.delta_transport},
                                  {"transport_inverse", r.id.transport_inverse},
                                  {"transport_adjoint", r.id.transport_adjoint}}},
              {"lambda_identity", l2j},
              {"p_prime_order0", r.p_prime0},
              {"coincidence", Json{{"defect", r.coincidence.defect}, {"change", r.coincidence.change}, {"M", matrix_json(r.coincidence.M)}}}}}});
    for (double v : {r.id.sigma_gradient, r.id.delta_transport, r.id.transport_inverse, r.id.transport_adjoint, l2,
                     r.p_prime0, r.coincidence.defect})
      worst = std::max(worst, v);
    for (double v : r.pde) worst = std::max(worst, v);
    for (std::size_t n = 0; n < r.pde.size(); ++n) {
      auto row = pair_cells(i, s.points[i]);
      row.push_back(std::to_string(n + 1));
      for (double v : {r.pde[n], r.id.sigma_gradient, r.id.delta_transport, r.id.transport_inverse,
                       r.id.transport_adjoint, l2, r.p_prime0, r.coincidence.defect})
        row.push_back(fmt(v));
      rep.csv.push_back(row);
    }
  }
  rep.document["results"] = results;
  const bool pass = worst <= flags.tol;
  rep.document["summary"] = Json{{"max_residual", worst}, {"tol", flags.tol}, {"pass", pass}};
  if (!pass) rep.exit_code = kResidualExceeded;
  return rep;
}

Report run_borel_demo(const Scenario& s, const RunFlags& flags, int order) {
  if (!s.borel) throw CommandError{kInvalidConfig, "config has no \"borel\" block"};
  const BorelConfig& bc = *s.borel;
  std::vector<borel::GriddedFunction> h;
  const int dim = bc.grid.dim();
  for (const Json& c : bc.coefficients) {
    ComplexExpression e{c["re"].is_number() ? Expression::number(c["re"].get<double>())
                                            : parse_expression(c["re"].get<std::string>(), dim),
                        c["im"].is_number() ? Expression::number(c["im"].get<double>())
                                            : parse_expression(c["im"].get<std::string>(), dim)};
    h.push_back(borel::GriddedFunction::sample(bc.grid, [&e](std::span<const double> x) { return e.evaluate(x); }));
  }
  const borel::BorelBuilder b(std::move(h));
  if (order >= b.size())
    throw CommandError{kInvalidConfig, "match order " + std::to_string(order) + " needs " + std::to_string(order + 1) +
                                           " coefficient functions"};
  const std::size_t pt = bc.point_index;
  double lam_min = 1.0;
  for (int n = 0; n <= order; ++n) lam_min = std::min(lam_min, b.lam()[n]);
  std::vector<double> grid;
  for (int i = 1; i <= bc.lambda_samples; ++i) grid.push_back(0.5 * lam_min * i / (bc.lambda_samples + 1));
  const double defect = borel::taylor_match_check(b, pt, order, grid);

  Report rep;
  rep.document = base_document(s, flags, order);
  rep.csv.push_back({"n", "h_re", "h_im", "L", "lambda", "derivative_re", "derivative_im", "expected_re", "expected_im",
                     "relative_error"});
  Json results = Json::array();
  double worst = 0.0;
  double factorial = 1.0;
  Complex ipow(1.0, 0.0);
  for (int n = 0; n < b.size(); ++n) {
    if (n > 0) factorial *= n, ipow *= Complex(0.0, 1.0);
    const Complex hn = b.h()[n].values[pt];
    Json r{{"n", n}, {"h", Json{{"re", hn.real()}, {"im", hn.imag()}}}, {"L", b.L()[n]}, {"lambda", b.lam()[n]}};
    std::vector<std::string> row{std::to_string(n), fmt(hn.real()), fmt(hn.imag()), fmt(b.L()[n]), fmt(b.lam()[n])};
    if (n <= std::min(order, 4)) {
      const Complex d = borel::lambda_derivative(b, pt, n);
      const Complex want = ipow * factorial * hn;
      const double rel = std::abs(d - want) / std::max(1.0, std::abs(want));
      worst = std::max(worst, rel);
      r["derivative"] = Json{{"re", d.real()}, {"im", d.imag()}};
      r["expected"] = Json{{"re", want.real()}, {"im", want.imag()}};
      r["relative_error"] = rel;
      for (double v : {d.real(), d.imag(), want.real(), want.imag(), rel}) row.push_back(fmt(v));
    } else {
      for (int j = 0; j < 5; ++j) row.push_back("");
    }
    results.push_back(r);
    rep.csv.push_back(row);
  }
  Json samples = Json::array();
  for (double l : {0.0, 0.25 * lam_min, 0.5 * lam_min, lam_min, 0.5, 1.0}) {
    const Complex v = borel::borel_sum(b, pt, l);
    samples.push_back(Json{{"lambda", l}, {"re", v.real()}, {"im", v.imag()}});
  }
  rep.document["results"] = results;
  rep.document["cutoff_derivative_sups"] = b.C();
  rep.document["samples"] = samples;
  rep.document["taylor_match"] =
      Json{{"order", order}, {"defect", defect}, {"lambda_max", grid.back()}, {"finite", std::isfinite(defect)}};
  const bool pass = std::isfinite(defect) && worst <= flags.tol;
  rep.document["summary"] = Json{{"max_derivative_error", worst}, {"tol", flags.tol}, {"pass", pass}};
  if (!pass) rep.exit_code = kResidualExceeded;
  return rep;
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

}  // namespace

Report run_command(const Scenario& s, const RunFlags& flags) {
  const std::string& c = flags.command;
  if (c == "borel-demo") return run_borel_demo(s, flags, flags.order < 0 ? 3 : flags.order);
  const int order = flags.order < 0 ? s.numerics.jet_order : flags.order;
  if (c == "geodesic") return run_geodesic(s, flags);
  if (c == "coefficients") return run_coefficients(s, flags, order);
  if (c == "audit-symmetry") return run_audit_symmetry(s, flags, order);
  if (c == "verify-identities") return run_verify_identities(s, flags, order);
  throw CommandError{kInvalidConfig, "unknown command " + c};
}

std::string render(const Report& report, const std::string& format) {
  if (format == "csv") {
    std::string out;
    for (const auto& row : report.csv) {
      for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_cell(row[i]);
      out += "\n";
    }
    return out;
  }
  return report.document.dump(2) + "\n";
}

}  // namespace sdw::cli
