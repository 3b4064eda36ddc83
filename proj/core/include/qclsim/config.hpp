#pragma once

// Run configuration: a JSON document with four blocks (model, bath, dynamics,
// initial) plus observables, seed and output directory. Unknown keys are
// rejected at every level.

#include <cstdint>
#include <string>
#include <vector>

#include "qclsim/types.hpp"

namespace qclsim {

struct ModelConfig {
  std::string name = "two_level_quartic";  // two_level_quartic | two_level_harmonic | spin_bath
  double omega = 1.0;
  double a = 1.0;
  double b = 1.0;
  double gamma0 = 1.0;
  double mass = 1.0;
  double hbar = 1.0;
  std::vector<double> frequencies{1.0};
  std::vector<double> couplings{0.0};
  double c1 = 0.0;
  double c2 = 1.0;
  double mu = 0.5;
  double b_field = 1.0;

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

struct BathConfig {
  std::string type = "hamiltonian";  // hamiltonian | langevin | nose_hoover | nhc | spin
  double zeta = 0.0;
  double temperature = 1.0;
  double k_b = 1.0;
  double m_eta = 1.0;
  double m_eta2 = 1.0;
  int n_thermostatted = 1;
  bool noise = true;

  friend bool operator==(const BathConfig&, const BathConfig&) = default;
};

struct DynamicsConfig {
  double dt = 1e-3;
  std::int64_t n_steps = 1000;
  std::int64_t n_traj = 100;
  bool transitions = true;
  std::string frustrated_policy = "reject";
  std::int64_t output_every = 1;

  friend bool operator==(const DynamicsConfig&, const DynamicsConfig&) = default;
};

struct InitialConfig {
  std::vector<std::vector<Complex>> subsystem{{1.0, 0.0}, {0.0, 0.0}};  // diabatic basis
  std::string bath = "canonical";  // canonical | wigner | point | sphere
  double temperature = 1.0;
  std::vector<double> q;
  std::vector<double> p;
  std::vector<double> spin{0.0, 0.0, 1.0};
  std::vector<double> wigner_omega;  // defaults to the model's harmonic frequencies
  std::string pair_sampling = "stratified";

  friend bool operator==(const InitialConfig&, const InitialConfig&) = default;
};

struct RunConfig {
  ModelConfig model;
  BathConfig bath;
  DynamicsConfig dynamics;
  InitialConfig initial;
  std::vector<std::string> observables{"identity"};
  std::uint64_t seed = 1;
  std::string output = "qclsim_out";

  bool spin() const { return bath.type == "spin"; }
  ComplexMatrix subsystem_matrix() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parses and validates; throws ConfigError on malformed JSON, unknown keys or
/// out-of-range values.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

/// Canonical JSON echo (all keys relevant to the chosen model written out).
std::string to_json(const RunConfig& config, int indent = 2);

void validate(const RunConfig& config);

}  // namespace qclsim
