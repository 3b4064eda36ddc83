#pragma once

// Built-in invariant suites (`qclsim check <suite>`) and the bracket residual
// tool (`qclsim bracket`).

#include <string>
#include <vector>

#include "qclsim/types.hpp"

namespace qclsim {

struct CheckItem {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct CheckReport {
  std::string suite;
  std::vector<CheckItem> items;

  bool passed() const;
  std::string json() const;
  std::string summary() const;
};

/// Suites: bracket, adiabatic, jump, thermostat, spin, sampling, all.
std::vector<std::string> check_suites();
/// Throws ConfigError for an unknown suite.
CheckReport check(const std::string& suite);

/// Antisymmetry residual of the three fields, self-bracket residual of the
/// catalog Hamiltonian of their structure, and the Jacobi residual, as JSON.
std::string bracket_tool(const std::vector<std::string>& fields, const Vector& point,
                         double hbar);

}  // namespace qclsim
