// qclsim command line: run a configured ensemble, run invariant suites, or
// evaluate bracket residuals of catalog fields.

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qclsim/check.hpp"
#include "qclsim/run.hpp"

namespace {

qclsim::Vector parse_point(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      values.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw qclsim::ConfigError("--at: '" + item + "' is not a number");
    }
  }
  return Eigen::Map<qclsim::Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum-classical Liouville dynamics by surface-hopping trajectories"};
  app.require_subcommand(1);

  std::string config_path;
  int threads = 0;
  auto* run = app.add_subcommand("run", "Run the ensemble described by a JSON config");
  run->add_option("config", config_path, "Config file")->required();
  run->add_option("--threads", threads, "Worker threads (default: QCLSIM_THREADS or all cores)");

  std::string suite;
  auto* check = app.add_subcommand("check", "Run an invariant suite");
  check->add_option("suite", suite, "bracket, adiabatic, jump, thermostat, spin, sampling or all")
      ->required();

  std::vector<std::string> fields;
  std::string point;
  double hbar = 1.0;
  auto* bracket = app.add_subcommand("bracket", "Bracket residuals of three catalog fields");
  bracket->add_option("fields", fields, "Three field names")->required()->expected(3);
  bracket->add_option("--at", point, "Comma-separated point, e.g. 1,1")->required();
  bracket->add_option("--hbar", hbar, "Reduced Planck constant");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*run) {
      qclsim::RunOptions options;
      options.threads = threads;
      return qclsim::run_file(config_path, options);
    }
    if (*check) {
      const qclsim::CheckReport report = qclsim::check(suite);
      std::cout << report.json() << "\n";
      std::cerr << report.summary();
      return report.passed() ? 0 : 1;
    }
    std::cout << qclsim::bracket_tool(fields, parse_point(point), hbar) << "\n";
    return 0;
  } catch (const qclsim::ConfigError& e) {
    std::cerr << "qclsim: " << e.what() << "\n";
    return 2;
  } catch (const qclsim::Error& e) {
    std::cerr << "qclsim: " << e.what() << "\n";
    return 1;
  }
}
