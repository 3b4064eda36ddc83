#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "qclsim/check.hpp"
#include "qclsim/config.hpp"
#include "qclsim/run.hpp"

using namespace qclsim;
namespace fs = std::filesystem;

namespace {

const char* kRabi = R"({
  "model": {"name": "two_level_quartic", "omega": 1.0, "gamma0": 0.0},
  "bath": {"type": "hamiltonian"},
  "dynamics": {"dt": 0.01, "n_steps": 100, "n_traj": 40, "transitions": "on", "output_every": 10},
  "initial": {"subsystem": [[1, 0], [0, 0]], "bath": "canonical", "temperature": 0.5},
  "observables": ["identity", "sz"],
  "seed": 7
})";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("qclsim_unit_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("config parsing and defaults") {
  const RunConfig c = parse_config(kRabi);
  CHECK(c.model.gamma0 == 0.0);
  CHECK(c.model.a == 1.0);
  CHECK(c.dynamics.n_traj == 40);
  CHECK(c.dynamics.transitions);
  CHECK(c.seed == 7);
  CHECK(c.observables.size() == 2);
  CHECK(c.subsystem_matrix()(0, 0) == Complex(1.0));
}

TEST_CASE("config echo re-parses to the same run") {
  RunConfig c = parse_config(kRabi);
  c.initial.subsystem = {{0.5, Complex(0.0, 0.5)}, {Complex(0.0, -0.5), 0.5}};
  c.seed = 18446744073709551615ull;
  CHECK(parse_config(to_json(c)) == c);
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_config("{"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"model": {"name": "two_level_quartic", "gama0": 1}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"model": {"name": "spin_bath", "a": 1}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"colour": 1})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"dynamics": {"n_traj": 0}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"dynamics": {"transitions": "maybe"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"initial": {"subsystem": [[1, 0], [0, 1]]}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"observables": ["Sz"]})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"bath": {"type": "spin"}})"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("decoupled two-level system oscillates as cos(2 Omega t)") {
  const EnsembleEstimate e = simulate(parse_config(kRabi), 2);
  REQUIRE(e.times.size() == 11);
  for (std::size_t t = 0; t < e.times.size(); ++t) {
    CHECK(e.mean[0][t].real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(e.mean[1][t].real() == doctest::Approx(std::cos(2.0 * e.times[t])).epsilon(1e-6));
    CHECK(e.mean_abs_weight[t] == doctest::Approx(1.0));
  }
}

TEST_CASE("results do not depend on the worker count") {
  RunConfig c = parse_config(kRabi);
  c.model.gamma0 = 1.0;
  c.dynamics.n_traj = 150;
  const std::string one = series_csv(simulate(c, 1));
  CHECK(series_csv(simulate(c, 3)) == one);
  CHECK(series_csv(simulate(c, 8)) == one);
  c.seed = 8;
  CHECK(series_csv(simulate(c, 1)) != one);
}

TEST_CASE("adiabatic runs conserve energy") {
  RunConfig c = parse_config(kRabi);
  c.model.gamma0 = 1.0;
  c.dynamics.transitions = false;
  c.dynamics.dt = 1e-3;
  c.dynamics.n_steps = 2000;
  c.dynamics.output_every = 200;
  c.dynamics.n_traj = 20;
  c.initial.bath = "point";
  c.initial.q = {-0.8};
  c.initial.p = {0.6};
  const EnsembleEstimate e = simulate(c, 2);
  for (double d : e.energy_drift) CHECK(d < 1e-6);
}

TEST_CASE("spin runs report the casimir drift") {
  const RunConfig c = parse_config(R"({
    "model": {"name": "spin_bath", "c1": 0.2},
    "bath": {"type": "spin"},
    "dynamics": {"dt": 0.01, "n_steps": 50, "n_traj": 20, "output_every": 25},
    "initial": {"bath": "sphere"},
    "observables": ["identity", "Sz"]
  })");
  const EnsembleEstimate e = simulate(c, 2);
  REQUIRE(e.casimir_drift.size() == 3);
  for (double d : e.casimir_drift) CHECK(d < 1e-12);
}

TEST_CASE("series csv layout") {
  const EnsembleEstimate e = simulate(parse_config(kRabi), 1);
  const std::string csv = series_csv(e);
  const std::string header = csv.substr(0, csv.find('\n'));
  CHECK(header ==
        "t,identity_re,identity_im,identity_stderr,sz_re,sz_im,sz_stderr,mean_abs_weight,"
        "energy_drift,casimir_drift");
  // one row per output time, parsed back losslessly
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(row, cell, ',')) v.push_back(std::stod(cell));
    REQUIRE(v.size() == 10);
    CHECK(v[0] == e.times[rows]);
    CHECK(v[4] == e.mean[1][rows].real());
    ++rows;
  }
  CHECK(rows == e.times.size());
}

TEST_CASE("run writes series and metadata") {
  RunConfig c = parse_config(kRabi);
  const fs::path dir = scratch("run");
  c.output = dir.string();
  std::ostringstream log;
  REQUIRE(run(c, RunOptions{2, &log}) == 0);
  const std::string first = slurp(dir / "series.csv");
  CHECK(first.find("\r") == std::string::npos);
  const auto meta = nlohmann::json::parse(slurp(dir / "meta.json"));
  CHECK(meta["seed"] == 7);
  CHECK(parse_config(meta["config"].dump()) == c);
  REQUIRE(run(c, RunOptions{1, &log}) == 0);
  CHECK(slurp(dir / "series.csv") == first);
  fs::remove_all(dir);
}

TEST_CASE("run exit codes") {
  std::ostringstream log;
  CHECK(run_file("/nonexistent/config.json", RunOptions{1, &log}) == 2);
  RunConfig bad = parse_config(kRabi);
  bad.dynamics.dt = -1.0;
  CHECK(run(bad, RunOptions{1, &log}) == 2);
  RunConfig blowup = parse_config(kRabi);
  blowup.model.gamma0 = 1.0;
  blowup.dynamics.dt = 1e3;
  blowup.output = scratch("blowup").string();
  CHECK(run(blowup, RunOptions{1, &log}) == 3);
  fs::remove_all(blowup.output);
}

TEST_CASE("thread resolution") {
  CHECK(resolve_threads(4, 2) == 2);
  CHECK(resolve_threads(3, 100) == 3);
  CHECK(resolve_threads(0, 1) == 1);
}

TEST_CASE("check suites") {
  CHECK(check("jump").passed());
  CHECK(check("bracket").passed());
  CHECK_THROWS_AS(check("nonsense"), ConfigError);
  const auto j = nlohmann::json::parse(check("bracket").json());
  CHECK(j["suite"] == "bracket");
  Vector x(2);
  x << 1.0, 1.0;
  const auto b = nlohmann::json::parse(bracket_tool({"Q", "P", "Q2P"}, x, 1.0));
  CHECK(b["jacobi_holds"] == true);
  CHECK_THROWS(bracket_tool({"Q", "P", "bogus"}, x, 1.0));
}
