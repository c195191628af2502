#include "app.hpp"

#include <fstream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "sdw/errors.hpp"
#include "sdw/version.hpp"

namespace sdw::cli {

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Off-diagonal Seeley-DeWitt coefficients and their consistency checks", "sdw"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1, 1);

  RunFlags flags;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"geodesic", "Solve the geodesic boundary value problem and report conjugate points"},
      {"coefficients", "Seeley-DeWitt coefficients f_n for each point pair"},
      {"audit-symmetry", "Residuals of f_n(x,x') = f_n(x',x)^dagger; exit 1 above --tol"},
      {"verify-identities", "World function, van Vleck, transport and lambda-operator identities"},
      {"borel-demo", "Smooth function of lambda with prescribed Taylor coefficients"},
  };
  for (const auto& [name, description] : commands) {
    CLI::App* sub = app.add_subcommand(name, description);
    sub->add_option("--config", flags.config_path, "Scenario file (JSON)")->check(CLI::ExistingFile);
    sub->add_option("--order", flags.order, "Highest coefficient order n")->check(CLI::Range(0, 12));
    sub->add_option("--tol", flags.tol, "Residual tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--output", flags.output, "Report file (default: standard output)");
    sub->add_option("--format", flags.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--seed", flags.seed, "Seed of the random pair sampling");
    sub->add_flag("--fd-crosscheck", flags.fd_crosscheck, "Compare jets against finite differences");
    sub->add_option("--threads", flags.threads, "Worker threads (0: hardware concurrency)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalidConfig;
  }
  flags.command = app.get_subcommands().front()->get_name();

  try {
    Scenario scenario;
    if (flags.config_path.empty()) {
      if (flags.command != "borel-demo") throw ValidationError("--config is required for " + flags.command);
      scenario = default_borel_scenario();
    } else {
      scenario = load_scenario(read_config_file(flags.config_path), flags.seed);
      if (flags.command == "borel-demo" && !scenario.borel) {
        const std::string name = scenario.name;
        scenario = default_borel_scenario();
        scenario.name = name;
        scenario.resolved["scenario"] = name;
      }
    }
    const Report report = run_command(scenario, flags);
    const std::string text = render(report, flags.format);
    if (flags.output.empty()) {
      out << text;
    } else {
      std::ofstream f(flags.output, std::ios::binary);
      if (!f) throw ValidationError("cannot write " + flags.output);
      f << text;
    }
    if (report.exit_code == kResidualExceeded) err << "sdw: residual above tolerance " << flags.tol << "\n";
    return report.exit_code;
  } catch (const CommandError& e) {
    err << "sdw: " << e.message << "\n";
    return e.exit_code;
  } catch (const ValidationError& e) {
    err << "sdw: invalid configuration: " << e.what() << "\n";
    return kInvalidConfig;
  } catch (const ParseError& e) {
    err << "sdw: invalid expression: " << e.what() << "\n";
    return kInvalidConfig;
  } catch (const Error& e) {
    err << "sdw: numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  }
}

}  // namespace sdw::cli
