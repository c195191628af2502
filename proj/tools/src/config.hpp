#pragma once

// Scenario configuration: JSON file -> validated metric, fiber data, numerics and point pairs.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "sdw/borel.hpp"
#include "sdw/gauge.hpp"
#include "sdw/geometry.hpp"
#include "sdw/hadamard.hpp"

namespace sdw::cli {

using Json = nlohmann::ordered_json;

struct PointPair {
  RVector x;
  RVector x_prime;
  std::optional<RVector> v_guess;
};

struct Numerics {
  int steps = 200;
  int quad_nodes = 16;
  int jet_order = 2;  // default coefficient order when --order is absent
  double newton_tol = 1e-12;
  int newton_max_iter = 50;
  double conjugate_tol = 1e-3;
  double cost_guard = 1e7;

  HadamardOptions options(unsigned threads) const;
};

struct BorelConfig {
  std::vector<Json> coefficients;  // expressions in the grid coordinates
  borel::Grid grid;
  std::size_t point_index = 0;
  int lambda_samples = 200;
};

struct Scenario {
  std::string name;
  std::optional<MetricField> metric;
  std::optional<FiberForm> form;
  std::optional<GaugeFields> gauge;
  Numerics numerics;
  std::vector<PointPair> points;
  std::optional<BorelConfig> borel;
  Json resolved;  // input with every default filled in
};

/// Parses and validates; throws ValidationError (or ParseError from expressions) on bad input.
/// `seed` drives the optional "sampling" block.
Scenario load_scenario(const Json& config, std::uint64_t seed);

/// Reads a file and parses JSON; throws ValidationError on I/O or syntax errors.
Json read_config_file(const std::string& path);

/// Scenario holding only the default Borel block.
Scenario default_borel_scenario();

/// Resolves the Borel block; coefficient h_n defaults to n! for n = 0..7.
BorelConfig load_borel(const Json& block, Json& resolved);

}  // namespace sdw::cli
