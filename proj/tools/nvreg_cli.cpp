// nvreg: microdisk design, chain coupling and CZ gate simulation.

#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "CLI11.hpp"
#include "nvreg/commands.hpp"

namespace {

using Precise = boost::multiprecision::cpp_bin_float_50;

nvreg::acceptance::BesselOracle boost_oracle() {
  return {[](int m, double x) { return static_cast<double>(boost::math::cyl_bessel_j(m, Precise(x))); },
          [](int m, double x) { return static_cast<double>(boost::math::cyl_neumann(m, Precise(x))); }};
}

struct Flags {
  std::string config;
  std::string out;
  std::string format = "csv";
  double tolerance = 0.0;
  unsigned threads = 1;
};

void add_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "INI configuration file (built-in defaults when omitted)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", f.out, "output file (stdout when omitted)");
  cmd->add_option("--format", f.format, "output format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--tolerance", f.tolerance,
                  "quadrature tolerance (coupling-sweep, dispersion, reproduce-tables) or gate error tolerance (gate-sim)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--threads", f.threads, "worker threads (0 = hardware concurrency)");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace nvreg;
  CLI::App app{"Diamond microdisk register simulator"};
  app.require_subcommand(1);
  Flags flags;
  const std::map<std::string, std::string> help{
      {"disk-solve", "solve microdisk thickness for each (m, R) row"},
      {"coupling-sweep", "hopping kappa versus disk spacing"},
      {"dispersion", "chain band Omega(K) and rim field"},
      {"gate-sim", "simulate the controlled-Z protocol"},
      {"reproduce-tables", "run the reference checks"},
  };
  for (const auto& [name, text] : help) add_flags(app.add_subcommand(name, text), flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? commands::kOk : commands::kUsage;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    const config::Config cfg = flags.config.empty() ? config::default_config() : config::load_config(flags.config);
    commands::RunOptions options;
    if (flags.tolerance > 0.0) options.tolerance = flags.tolerance;
    options.threads = flags.threads;

    commands::CommandResult result;
    if (command == "disk-solve") result = commands::disk_solve(cfg, options);
    else if (command == "coupling-sweep") result = commands::coupling_sweep(cfg, options);
    else if (command == "dispersion") result = commands::dispersion(cfg, options);
    else if (command == "gate-sim") result = commands::gate_sim(cfg, options);
    else result = commands::reproduce_tables(cfg, boost_oracle(), options);

    std::ofstream file;
    if (!flags.out.empty()) {
      file.open(flags.out);
      if (!file) {
        std::cerr << "nvreg: cannot write '" << flags.out << "'\n";
        return commands::kUsage;
      }
    }
    std::ostream& out = flags.out.empty() ? std::cout : file;
    if (flags.format == "json") output::write_json(out, result.report);
    else output::write_csv(out, result.report);
    for (const auto& line : result.messages) std::cerr << line << "\n";
    return result.exit_code;
  } catch (const ConfigError& e) {
    std::cerr << "nvreg: configuration error: " << e.what() << "\n";
    return commands::kUsage;
  } catch (const Error& e) {
    std::cerr << "nvreg: numerical failure: " << e.what() << "\n";
    return commands::kNumerical;
  }
}
