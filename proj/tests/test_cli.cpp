#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "app.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "sdw");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = sdw::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string config(const std::string& name) { return std::string(SDW_CONFIG_DIR) + "/" + name; }

fs::path write_temp(const std::string& name, const std::string& text) {
  const fs::path dir = fs::temp_directory_path() / "sdw_cli_test";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream(p) << text;
  return p;
}

double factorial(int n) { return std::tgamma(n + 1.0); }

const char* kFlatScalar = R"({
  "scenario": "flat_scalar",
  "manifold": {"dim": 2, "metric": "flat"},
  "bundle": {"k": 1, "B": [[{"re": "-1", "im": "0"}]]},
  "numerics": {"jet_order": 1},
  "points": [{"x": [0.3, 0.1], "x_prime": [-0.2, 0.4]}]
})";

}  // namespace

TEST(Cli, FlatMassiveCoefficients) {
  auto r = run({"coefficients", "--config", config("flat_massive.cfg"), "--order", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json doc = Json::parse(r.out);
  EXPECT_EQ(doc["scenario"], "flat_massive");
  ASSERT_EQ(doc["results"].size(), 2u);
  for (const auto& res : doc["results"]) {
    ASSERT_EQ(res["f"].size(), 4u);
    for (int n = 0; n <= 3; ++n) {
      const double want = std::pow(-1.0, n) / factorial(n);
      EXPECT_NEAR(res["f"][n]["re"][0].get<double>(), want, 1e-8 * std::fabs(want));
      EXPECT_NEAR(res["f"][n]["im"][0].get<double>(), 0.0, 1e-10);
    }
  }
  // the resolved configuration carries every numeric default
  const Json& num = doc["config_resolved"]["numerics"];
  for (const char* key : {"steps", "quad_nodes", "jet_order", "newton_tol", "newton_max_iter", "conjugate_tol", "cost_guard"})
    EXPECT_TRUE(num.contains(key)) << key;
  EXPECT_TRUE(doc.contains("version"));
}

TEST(Cli, SphereGaugeAuditPasses) {
  auto r = run({"audit-symmetry", "--config", config("sphere_gauge.cfg"), "--order", "2", "--tol", "1e-6"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json doc = Json::parse(r.out);
  ASSERT_EQ(doc["results"].size(), 2u);
  for (const auto& res : doc["results"]) {
    ASSERT_EQ(res["residuals"]["symmetry"].size(), 3u);
    for (const auto& v : res["residuals"]["symmetry"]) EXPECT_LE(v.get<double>(), 1e-6);
  }
  EXPECT_TRUE(doc["summary"]["pass"].get<bool>());
}

TEST(Cli, AuditAboveToleranceExitsOne) {
  auto r = run({"audit-symmetry", "--config", config("sphere_gauge.cfg"), "--order", "1", "--tol", "1e-300"});
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(Json::parse(r.out)["summary"]["pass"].get<bool>());
}

TEST(Cli, AntipodalGeodesicExitsThree) {
  auto r = run({"geodesic", "--config", config("sphere2.cfg")});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("conjugate"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("1.2"), std::string::npos) << r.err;
}

TEST(Cli, GeodesicReport) {
  auto r = run({"geodesic", "--config", config("flat_massive.cfg")});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json doc = Json::parse(r.out);
  const auto& first = doc["results"][0];
  // sigma = |x - x'|^2 / 2 for (0.4, -0.2) and (-0.3, 0.5)
  EXPECT_NEAR(first["sigma"].get<double>(), 0.5 * (0.49 + 0.49), 1e-12);
  EXPECT_NEAR(first["delta"].get<double>(), 1.0, 1e-12);
  EXPECT_TRUE(first["conjugate_report"]["pass"].get<bool>());
}

TEST(Cli, ReportsAreDeterministic) {
  const auto a = run({"coefficients", "--config", config("sphere_gauge.cfg"), "--order", "1"});
  const auto b = run({"coefficients", "--config", config("sphere_gauge.cfg"), "--order", "1", "--threads", "1"});
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, SeededSamplingIsReproducible) {
  const auto p = write_temp("sampled.cfg", R"({
    "scenario": "sampled",
    "manifold": {"dim": 2, "metric": "flat"},
    "numerics": {"jet_order": 0},
    "sampling": {"count": 3, "lo": [-1, -1], "hi": [1, 1], "max_separation": 1.5}
  })");
  const auto a = run({"geodesic", "--config", p.string(), "--seed", "42"});
  const auto b = run({"geodesic", "--config", p.string(), "--seed", "42"});
  const auto c = run({"geodesic", "--config", p.string(), "--seed", "43"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, c.out);
  EXPECT_EQ(Json::parse(a.out)["results"].size(), 3u);
}

TEST(Cli, CsvHasOneRowPerPairAndOrder) {
  const auto p = write_temp("flat_scalar.cfg", kFlatScalar);
  const fs::path out = p.parent_path() / "flat.csv";
  auto r = run({"coefficients", "--config", p.string(), "--format", "csv", "--output", out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(out);
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  ASSERT_EQ(lines.size(), 3u);  // header, n = 0, n = 1 (jet_order is the default order)
  EXPECT_EQ(lines[0].rfind("pair,", 0), 0u);
  EXPECT_NE(lines[0].find("f_00_re"), std::string::npos);
}

TEST(Cli, VerifyIdentities) {
  auto r = run({"verify-identities", "--config", config("sphere_gauge.cfg"), "--order", "1", "--tol", "1e-6"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json doc = Json::parse(r.out);
  EXPECT_TRUE(doc["summary"]["pass"].get<bool>());
  const Json& id = doc["results"][0]["residuals"]["identities"];
  EXPECT_LE(id["sigma_gradient"].get<double>(), 1e-8);
  EXPECT_LE(id["transport_inverse"].get<double>(), 1e-9);
}

TEST(Cli, BorelDemo) {
  auto r = run({"borel-demo"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json doc = Json::parse(r.out);
  EXPECT_TRUE(doc["taylor_match"]["finite"].get<bool>());
  EXPECT_LE(doc["summary"]["max_derivative_error"].get<double>(), 1e-6);
}

TEST(Cli, FiniteDifferenceCrosscheck) {
  const auto p = write_temp("flat_scalar_fd.cfg", kFlatScalar);
  auto r = run({"coefficients", "--config", p.string(), "--fd-crosscheck"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_FALSE(Json::parse(r.out)["summary"]["fd_flagged"].get<bool>());
}

TEST(Cli, InvalidConfigurationsExitTwo) {
  const std::vector<std::pair<std::string, std::string>> bad = {
      {"non_hermitian_B", R"({"manifold": {"dim": 2, "metric": "flat"},
         "bundle": {"k": 2, "B": [[{"re": "1", "im": "0"}, {"re": "x0", "im": "0"}],
                                  [{"re": "0", "im": "0"}, {"re": "1", "im": "0"}]]},
         "points": [{"x": [0.1, 0.2], "x_prime": [0.3, 0.4]}]})"},
      {"asymmetric_metric", R"({"manifold": {"dim": 2, "metric": [["1", "x0"], ["0", "1"]]},
         "points": [{"x": [0.1, 0.2], "x_prime": [0.3, 0.4]}]})"},
      {"singular_form", R"({"manifold": {"dim": 2, "metric": "flat"},
         "bundle": {"k": 2, "form_S": [[1, 1], [1, 1]]},
         "points": [{"x": [0.1, 0.2], "x_prime": [0.3, 0.4]}]})"},
      {"unknown_key", R"({"manifold": {"dim": 2, "metric": "flat"}, "colour": 1})"},
      {"bad_expression", R"({"manifold": {"dim": 2, "metric": [["1 +", "0"], ["0", "1"]]}})"},
      {"not_json", "{ manifold"},
  };
  for (const auto& [name, text] : bad) {
    const auto p = write_temp(name + ".cfg", text);
    auto r = run({"coefficients", "--config", p.string()});
    EXPECT_EQ(r.code, 2) << name << ": " << r.err;
    EXPECT_FALSE(r.err.empty()) << name;
  }
  EXPECT_EQ(run({"coefficients"}).code, 2);
  EXPECT_EQ(run({"bogus"}).code, 2);
  EXPECT_EQ(run({"coefficients", "--config", config("flat_massive.cfg"), "--format", "xml"}).code, 2);
}
