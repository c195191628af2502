#include "config.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "sdw/errors.hpp"
#include "sdw/expression.hpp"

namespace sdw::cli {

namespace {

[[noreturn]] void invalid(const std::string& where, const std::string& what) {
  throw ValidationError("config " + where + ": " + what);
}

const Json& require(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) invalid(where, std::string("missing key \"") + key + "\"");
  return obj.at(key);
}

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) invalid(where, "expected a number");
  return j.get<double>();
}

int integer(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) invalid(where, "expected an integer");
  return j.get<int>();
}

RVector vector_of(const Json& j, std::size_t size, const std::string& where) {
  if (!j.is_array() || j.size() != size) invalid(where, "expected an array of " + std::to_string(size) + " numbers");
  RVector out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

// number | string | {re, im}; returns the normalized {re, im} JSON and the parsed pair
Json normalize_complex(const Json& j, const std::string& where) {
  auto part = [&](const Json& p, const std::string& w) -> Json {
    if (p.is_number() || p.is_string()) return p;
    invalid(w, "expected a number or an expression string");
  };
  if (j.is_object()) {
    for (const auto& [key, _] : j.items())
      if (key != "re" && key != "im") invalid(where, "unknown key \"" + key + "\" in complex value");
    Json out;
    out["re"] = j.contains("re") ? part(j["re"], where + ".re") : Json("0");
    out["im"] = j.contains("im") ? part(j["im"], where + ".im") : Json("0");
    return out;
  }
  Json out;
  out["re"] = part(j, where);
  out["im"] = "0";
  return out;
}

Expression expression_of(const Json& j, int dim) {
  if (j.is_number()) return Expression::number(j.get<double>());
  return parse_expression(j.get<std::string>(), dim);
}

ComplexExpression complex_of(const Json& normalized, int dim) {
  return {expression_of(normalized["re"], dim), expression_of(normalized["im"], dim)};
}

// dimension 0 rejects any coordinate reference
Complex constant_of(const Json& normalized) {
  return complex_of(normalized, 0).evaluate<double>(std::span<const double>());
}

// k x k matrix of complex entries; fills `resolved` with the normalized form
ExpressionMatrix complex_matrix(Json j, std::size_t k, int dim, const std::string& where, Json& resolved) {
  if (!j.is_array() || j.size() != k) invalid(where, "expected " + std::to_string(k) + " rows");
  ExpressionMatrix out(k);
  resolved = Json::array();
  for (std::size_t r = 0; r < k; ++r) {
    const std::string w = where + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || j[r].size() != k) invalid(w, "expected " + std::to_string(k) + " entries");
    Json row = Json::array();
    for (std::size_t c = 0; c < k; ++c) {
      Json n = normalize_complex(j[r][c], w + "[" + std::to_string(c) + "]");
      out[r].push_back(complex_of(n, dim));
      row.push_back(n);
    }
    resolved.push_back(row);
  }
  return out;
}

Json zero_matrix_json(std::size_t k) {
  Json m = Json::array();
  for (std::size_t r = 0; r < k; ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < k; ++c) row.push_back(Json{{"re", "0"}, {"im", "0"}});
    m.push_back(row);
  }
  return m;
}

// uniform in [0, 1) from the top 53 bits, identical on every platform
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

MetricField load_metric(const Json& manifold, Json& resolved) {
  const int dim = integer(require(manifold, "dim", "manifold"), "manifold.dim");
  if (dim < 1) invalid("manifold.dim", "must be positive");
  resolved["dim"] = dim;
  const Json& metric = require(manifold, "metric", "manifold");

  std::optional<ChartBox> box;
  if (manifold.contains("box")) {
    const Json& b = manifold["box"];
    box = ChartBox{vector_of(require(b, "lo", "manifold.box"), dim, "manifold.box.lo"),
                   vector_of(require(b, "hi", "manifold.box"), dim, "manifold.box.hi")};
    for (int i = 0; i < dim; ++i)
      if (!(box->lo[i] < box->hi[i])) invalid("manifold.box", "lo must be below hi on every axis");
  }

  std::optional<MetricField> m;
  if (metric.is_string() || metric.is_object()) {
    const std::string name = metric.is_string() ? metric.get<std::string>()
                                                : require(metric, "catalog", "manifold.metric").get<std::string>();
    const double radius = metric.is_object() && metric.contains("radius")
                              ? number(metric["radius"], "manifold.metric.radius")
                              : 1.0;
    if (!(radius > 0.0)) invalid("manifold.metric.radius", "must be positive");
    MetricField cat = catalog::by_name(name, radius, dim);
    if (cat.dim() != dim) invalid("manifold.dim", "catalog metric \"" + name + "\" has dimension " + std::to_string(cat.dim()));
    resolved["metric"] = Json{{"catalog", name}, {"radius", radius}};
    if (box) {
      std::vector<std::vector<Expression>> comps(dim, std::vector<Expression>(dim, Expression::number(0.0)));
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) comps[i][j] = cat.component(i, j);
      m.emplace(dim, std::move(comps), name, box);
    } else {
      m.emplace(std::move(cat));
    }
  } else if (metric.is_array()) {
    if (metric.size() != static_cast<std::size_t>(dim)) invalid("manifold.metric", "expected " + std::to_string(dim) + " rows");
    std::vector<std::vector<std::string>> comps;
    Json res = Json::array();
    for (int i = 0; i < dim; ++i) {
      const Json& row = metric[i];
      const std::string w = "manifold.metric[" + std::to_string(i) + "]";
      if (!row.is_array() || row.size() != static_cast<std::size_t>(dim)) invalid(w, "expected " + std::to_string(dim) + " entries");
      std::vector<std::string> r;
      for (int j = 0; j < dim; ++j) {
        if (row[j].is_number()) {
          std::ostringstream os;
          os.precision(17);
          os << row[j].get<double>();
          r.push_back(os.str());
        } else if (row[j].is_string()) {
          r.push_back(row[j].get<std::string>());
        } else {
          invalid(w + "[" + std::to_string(j) + "]", "expected an expression");
        }
      }
      res.push_back(row);
      comps.push_back(std::move(r));
    }
    if (!box) box = ChartBox{RVector(dim, -1.0), RVector(dim, 1.0)};
    m.emplace(MetricField::from_strings(comps, "custom", box));
    resolved["metric"] = res;
  } else {
    invalid("manifold.metric", "expected a catalog name, a catalog object or a matrix of expressions");
  }
  if (m->box()) resolved["box"] = Json{{"lo", m->box()->lo}, {"hi", m->box()->hi}};
  resolved["signature"] = m->signature();
  return std::move(*m);
}

}  // namespace

HadamardOptions Numerics::options(unsigned threads) const {
  HadamardOptions o;
  o.geodesic.steps = steps;
  o.geodesic.newton_tol = newton_tol;
  o.geodesic.max_iter = newton_max_iter;
  o.geodesic.conjugate_tol = conjugate_tol;
  o.quad_nodes = quad_nodes;
  o.cost_guard = cost_guard;
  o.threads = threads;
  return o;
}

Json read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("config " + path + " is not valid JSON: " + e.what());
  }
}

BorelConfig load_borel(const Json& block, Json& resolved) {
  BorelConfig b;
  const Json grid = block.contains("grid") ? block["grid"] : Json{{"lo", {0.0}}, {"hi", {1.0}}, {"counts", {41}}};
  const Json& counts = require(grid, "counts", "borel.grid");
  if (!counts.is_array() || counts.empty()) invalid("borel.grid.counts", "expected a nonempty array");
  const std::size_t dim = counts.size();
  for (std::size_t i = 0; i < dim; ++i) b.grid.counts.push_back(integer(counts[i], "borel.grid.counts"));
  b.grid.lo = vector_of(require(grid, "lo", "borel.grid"), dim, "borel.grid.lo");
  b.grid.hi = vector_of(require(grid, "hi", "borel.grid"), dim, "borel.grid.hi");
  for (int c : b.grid.counts)
    if (c < 1) invalid("borel.grid.counts", "must be positive");

  if (block.contains("coefficients")) {
    const Json& c = block["coefficients"];
    if (!c.is_array() || c.empty()) invalid("borel.coefficients", "expected a nonempty array");
    for (std::size_t n = 0; n < c.size(); ++n) b.coefficients.push_back(normalize_complex(c[n], "borel.coefficients"));
  } else {
    double f = 1.0;
    for (int n = 0; n < 8; ++n) {
      if (n > 0) f *= n;
      b.coefficients.push_back(Json{{"re", f}, {"im", "0"}});
    }
  }
  if (block.contains("point_index")) {
    const Json& p = block["point_index"];
    if (!p.is_number_unsigned()) invalid("borel.point_index", "expected a non-negative integer");
    b.point_index = p.get<std::size_t>();
  }
  if (b.point_index >= b.grid.size()) invalid("borel.point_index", "outside the grid");
  if (block.contains("lambda_samples")) b.lambda_samples = integer(block["lambda_samples"], "borel.lambda_samples");
  if (b.lambda_samples < 1) invalid("borel.lambda_samples", "must be positive");

  resolved = Json::object();
  resolved["coefficients"] = b.coefficients;
  resolved["grid"] = Json{{"lo", b.grid.lo}, {"hi", b.grid.hi}, {"counts", b.grid.counts}};
  resolved["point_index"] = b.point_index;
  resolved["lambda_samples"] = b.lambda_samples;
  return b;
}

Scenario default_borel_scenario() {
  Scenario s;
  s.name = "borel_default";
  s.resolved["scenario"] = s.name;
  Json res;
  s.borel = load_borel(Json::object(), res);
  s.resolved["borel"] = res;
  return s;
}

Scenario load_scenario(const Json& config, std::uint64_t seed) {
  if (!config.is_object()) invalid("root", "expected an object");
  static const char* known[] = {"scenario", "manifold", "bundle", "numerics", "points", "sampling", "borel"};
  for (const auto& [key, _] : config.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) invalid("root", "unknown key \"" + key + "\"");
  }

  Scenario s;
  s.name = config.contains("scenario") ? config["scenario"].get<std::string>() : "unnamed";
  s.resolved["scenario"] = s.name;

  if (config.contains("borel")) {
    Json res;
    s.borel = load_borel(config["borel"], res);
    s.resolved["borel"] = res;
    if (!config.contains("manifold")) return s;
  }

  Json manifold;
  s.metric.emplace(load_metric(require(config, "manifold", "root"), manifold));
  s.resolved["manifold"] = manifold;
  const int dim = s.metric->dim();

  // bundle
  const Json bundle = config.contains("bundle") ? config["bundle"] : Json{{"k", 1}};
  const int k_int = integer(require(bundle, "k", "bundle"), "bundle.k");
  if (k_int < 1) invalid("bundle.k", "must be positive");
  const std::size_t k = static_cast<std::size_t>(k_int);
  Json bres;
  bres["k"] = k;

  CMatrix S = CMatrix::identity(k);
  Json s_json = Json::array();
  if (bundle.contains("form_S")) {
    complex_matrix(bundle["form_S"], k, 0, "bundle.form_S", s_json);
    for (std::size_t r = 0; r < k; ++r)
      for (std::size_t c = 0; c < k; ++c)
        S(r, c) = constant_of(s_json[r][c]);
  } else {
    for (std::size_t r = 0; r < k; ++r) {
      Json row = Json::array();
      for (std::size_t c = 0; c < k; ++c) row.push_back(Json{{"re", r == c ? "1" : "0"}, {"im", "0"}});
      s_json.push_back(row);
    }
  }
  s.form.emplace(S);
  bres["form_S"] = s_json;

  std::vector<ExpressionMatrix> A;
  Json a_json = Json::array();
  if (bundle.contains("A")) {
    const Json& a = bundle["A"];
    if (!a.is_array() || a.size() != static_cast<std::size_t>(dim))
      invalid("bundle.A", "expected " + std::to_string(dim) + " matrices");
    for (int mu = 0; mu < dim; ++mu) {
      Json res;
      A.push_back(complex_matrix(a[mu], k, dim, "bundle.A[" + std::to_string(mu) + "]", res));
      a_json.push_back(res);
    }
  } else {
    for (int mu = 0; mu < dim; ++mu) {
      Json z = zero_matrix_json(k);
      A.push_back(complex_matrix(z, k, dim, "bundle.A", z));
      a_json.push_back(z);
    }
  }
  bres["A"] = a_json;

  Json b_json = bundle.contains("B") ? bundle["B"] : zero_matrix_json(k);
  ExpressionMatrix B = complex_matrix(b_json, k, dim, "bundle.B", b_json);
  bres["B"] = b_json;
  s.gauge.emplace(dim, k, std::move(A), std::move(B));
  if (s.metric->box()) s.gauge->validate(*s.form, *s.metric->box());
  s.resolved["bundle"] = bres;

  // numerics
  Numerics& nm = s.numerics;
  if (config.contains("numerics")) {
    const Json& n = config["numerics"];
    if (!n.is_object()) invalid("numerics", "expected an object");
    for (const auto& [key, val] : n.items()) {
      const std::string w = "numerics." + key;
      if (key == "steps") nm.steps = integer(val, w);
      else if (key == "quad_nodes") nm.quad_nodes = integer(val, w);
      else if (key == "jet_order") nm.jet_order = integer(val, w);
      else if (key == "newton_tol") nm.newton_tol = number(val, w);
      else if (key == "newton_max_iter") nm.newton_max_iter = integer(val, w);
      else if (key == "conjugate_tol") nm.conjugate_tol = number(val, w);
      else if (key == "cost_guard") nm.cost_guard = number(val, w);
      else invalid("numerics", "unknown key \"" + key + "\"");
    }
  }
  if (nm.steps < 1 || nm.quad_nodes < 1 || nm.jet_order < 0 || nm.newton_max_iter < 1 || !(nm.newton_tol > 0) ||
      !(nm.cost_guard > 0))
    invalid("numerics", "values out of range");
  s.resolved["numerics"] = Json{{"steps", nm.steps},           {"quad_nodes", nm.quad_nodes},
                                {"jet_order", nm.jet_order},   {"newton_tol", nm.newton_tol},
                                {"newton_max_iter", nm.newton_max_iter}, {"conjugate_tol", nm.conjugate_tol},
                                {"cost_guard", nm.cost_guard}};

  // points
  if (config.contains("points")) {
    const Json& pts = config["points"];
    if (!pts.is_array()) invalid("points", "expected an array");
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const std::string w = "points[" + std::to_string(i) + "]";
      PointPair p;
      p.x = vector_of(require(pts[i], "x", w), dim, w + ".x");
      p.x_prime = vector_of(require(pts[i], "x_prime", w), dim, w + ".x_prime");
      if (pts[i].contains("v_guess")) p.v_guess = vector_of(pts[i]["v_guess"], dim, w + ".v_guess");
      s.points.push_back(std::move(p));
    }
  }
  if (config.contains("sampling")) {
    const Json& smp = config["sampling"];
    const int count = integer(require(smp, "count", "sampling"), "sampling.count");
    if (count < 0) invalid("sampling.count", "must be non-negative");
    ChartBox box = s.metric->box() ? *s.metric->box() : ChartBox{RVector(dim, -1.0), RVector(dim, 1.0)};
    if (smp.contains("lo")) box.lo = vector_of(smp["lo"], dim, "sampling.lo");
    if (smp.contains("hi")) box.hi = vector_of(smp["hi"], dim, "sampling.hi");
    const double max_sep = smp.contains("max_separation") ? number(smp["max_separation"], "sampling.max_separation") : 1.0;
    const double min_sep = smp.contains("min_separation") ? number(smp["min_separation"], "sampling.min_separation") : 0.05;
    std::mt19937_64 rng(seed);
    int drawn = 0;
    for (long attempt = 0; drawn < count; ++attempt) {
      if (attempt > 10000L * (count + 1)) invalid("sampling", "could not draw pairs within the separation bounds");
      RVector x(dim), xp(dim);
      for (int i = 0; i < dim; ++i) x[i] = box.lo[i] + (box.hi[i] - box.lo[i]) * unit(rng);
      for (int i = 0; i < dim; ++i) xp[i] = box.lo[i] + (box.hi[i] - box.lo[i]) * unit(rng);
      double sep = 0.0;
      for (int i = 0; i < dim; ++i) sep += (x[i] - xp[i]) * (x[i] - xp[i]);
      sep = std::sqrt(sep);
      if (sep < min_sep || sep > max_sep) continue;
      s.points.push_back({x, xp, std::nullopt});
      ++drawn;
    }
    s.resolved["sampling"] = Json{{"count", count},
                                  {"lo", box.lo},
                                  {"hi", box.hi},
                                  {"min_separation", min_sep},
                                  {"max_separation", max_sep}};
  }
  Json pts = Json::array();
  for (const auto& p : s.points) {
    Json j{{"x", p.x}, {"x_prime", p.x_prime}};
    if (p.v_guess) j["v_guess"] = *p.v_guess;
    pts.push_back(j);
  }
  s.resolved["points"] = pts;
  return s;
}

}  // namespace sdw::cli
