#pragma once

#include <ostream>

namespace sdw::cli {

/// Parses arguments, runs the subcommand and writes the report. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sdw::cli
