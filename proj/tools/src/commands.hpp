#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "config.hpp"

namespace sdw::cli {

enum ExitCode : int { kOk = 0, kResidualExceeded = 1, kInvalidConfig = 2, kNumericalFailure = 3 };

struct RunFlags {
  std::string command;
  std::string config_path;
  int order = -1;  // negative: numerics.jet_order (borel-demo: 3)
  double tol = 1e-6;
  std::string output;
  std::string format = "json";
  std::uint64_t seed = 0;
  bool fd_crosscheck = false;
  unsigned threads = 0;
};

struct Report {
  Json document;
  std::vector<std::vector<std::string>> csv;  // header first
  int exit_code = kOk;
};

/// Thrown for per-pair failures; carries the exit code and the pair context.
struct CommandError {
  int exit_code;
  std::string message;
};

Report run_command(const Scenario& scenario, const RunFlags& flags);

/// JSON text (2-space indent, trailing newline) or RFC 4180 CSV.
std::string render(const Report& report, const std::string& format);

}  // namespace sdw::cli
