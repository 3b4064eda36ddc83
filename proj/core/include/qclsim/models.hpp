#pragma once

// Model catalog: two-level subsystems coupled to canonical baths, the single
// classical spin bath, and the Nose / Nose-Hoover-chain extensions.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qclsim/bracket.hpp"
#include "qclsim/types.hpp"

namespace qclsim {

/// Classical coordinates of a canonical bath plus optional thermostat variables
/// (none, one Nose pair, or a two-link chain).
struct BathState {
  Vector q;
  Vector p;
  Vector eta_q;
  Vector eta_p;
};

/// Quantum subsystem coupled to canonical bath coordinates Q with conjugate
/// momenta P, all of mass M:
///   H_W = P^2/2M + V(Q) + h(Q).
class CanonicalModel {
 public:
  virtual ~CanonicalModel() = default;

  virtual std::string name() const = 0;
  virtual int levels() const = 0;
  virtual int bath_dim() const = 0;
  virtual double mass() const = 0;
  virtual double hbar() const = 0;

  /// Adiabatic Hamiltonian h(Q): subsystem plus coupling, without V(Q).
  virtual ComplexMatrix h_matrix(const Vector& q) const = 0;
  /// dh/dQ_I for each bath coordinate.
  virtual std::vector<ComplexMatrix> h_gradient(const Vector& q) const = 0;

  /// Classical bath potential V(Q).
  virtual double potential(const Vector& q) const = 0;
  virtual Vector potential_gradient(const Vector& q) const = 0;

  /// Frequencies when V is a sum of harmonic wells centred at zero.
  virtual std::optional<Vector> harmonic_frequencies() const { return std::nullopt; }
};

/// Two-level system coupled to a quartic oscillator:
///   h(Q) = -hbar Omega sx - hbar gamma0 Q sz,  V(Q) = a/4 Q^4 - b/2 Q^2.
class TwoLevelQuartic final : public CanonicalModel {
 public:
  struct Params {
    double omega = 1.0;
    double a = 1.0;
    double b = 1.0;
    double gamma0 = 1.0;
    double mass = 1.0;
    double hbar = 1.0;
  };

  explicit TwoLevelQuartic(Params params);

  const Params& params() const { return params_; }

  std::string name() const override { return "two_level_quartic"; }
  int levels() const override { return 2; }
  int bath_dim() const override { return 1; }
  double mass() const override { return params_.mass; }
  double hbar() const override { return params_.hbar; }
  ComplexMatrix h_matrix(const Vector& q) const override;
  std::vector<ComplexMatrix> h_gradient(const Vector& q) const override;
  double potential(const Vector& q) const override;
  Vector potential_gradient(const Vector& q) const override;

 private:
  Params params_;
};

/// Two-level system bilinearly coupled to independent harmonic oscillators:
///   h(Q) = -hbar Omega sx - hbar sum_j c_j Q_j sz,  V = sum_j M w_j^2 Q_j^2 / 2.
class TwoLevelHarmonic final : public CanonicalModel {
 public:
  struct Params {
    double omega = 1.0;
    Vector frequencies = Vector::Ones(1);
    Vector couplings = Vector::Zero(1);
    double mass = 1.0;
    double hbar = 1.0;
  };

  explicit TwoLevelHarmonic(Params params);

  const Params& params() const { return params_; }

  std::string name() const override { return "two_level_harmonic"; }
  int levels() const override { return 2; }
  int bath_dim() const override { return static_cast<int>(params_.frequencies.size()); }
  double mass() const override { return params_.mass; }
  double hbar() const override { return params_.hbar; }
  ComplexMatrix h_matrix(const Vector& q) const override;
  std::vector<ComplexMatrix> h_gradient(const Vector& q) const override;
  double potential(const Vector& q) const override;
  Vector potential_gradient(const Vector& q) const override;
  std::optional<Vector> harmonic_frequencies() const override { return params_.frequencies; }

 private:
  Params params_;
};

/// Model assembled from callables; used for ad-hoc surfaces in tests and
/// benchmarks.
class CustomModel final : public CanonicalModel {
 public:
  struct Spec {
    std::string name = "custom";
    int levels = 2;
    int bath_dim = 1;
    double mass = 1.0;
    double hbar = 1.0;
    std::function<ComplexMatrix(const Vector&)> h;
    std::function<std::vector<ComplexMatrix>(const Vector&)> h_gradient;
    std::function<double(const Vector&)> potential;
    std::function<Vector(const Vector&)> potential_gradient;
  };

  explicit CustomModel(Spec spec);

  std::string name() const override { return spec_.name; }
  int levels() const override { return spec_.levels; }
  int bath_dim() const override { return spec_.bath_dim; }
  double mass() const override { return spec_.mass; }
  double hbar() const override { return spec_.hbar; }
  ComplexMatrix h_matrix(const Vector& q) const override { return spec_.h(q); }
  std::vector<ComplexMatrix> h_gradient(const Vector& q) const override;
  double potential(const Vector& q) const override;
  Vector potential_gradient(const Vector& q) const override;

 private:
  Spec spec_;
};

/// Single classical spin S (|S| = 1) coupled to a two-level subsystem:
///   H(S) = -Omega sx - c1 b sz - mu S.sigma - c2 b S_z + S_z^2/2.
/// The last two terms are the classical spin energy; the rest is h_S(S).
struct SpinBathModel {
  double omega = 1.0;
  double c1 = 0.0;
  double c2 = 1.0;
  double mu = 0.5;
  double b_field = 1.0;
  double hbar = 1.0;

  ComplexMatrix h_matrix(const Vector3& s) const;
  /// dh/dS_a for a = x, y, z.
  std::vector<ComplexMatrix> h_gradient(const Vector3& s) const;
  double classical_energy(const Vector3& s) const;
  Vector3 classical_gradient(const Vector3& s) const;
};

/// Canonical model extended by a Nose thermostat:
///   H^N = P^2/2M + P_eta^2/2M_eta + N kB T Q_eta + V(Q) + h(Q).
struct NoseExtension {
  std::shared_ptr<const CanonicalModel> base;
  double m_eta = 1.0;
  double temperature = 1.0;
  int n_thermostatted = 1;
  double k_b = 1.0;

  double kt() const { return k_b * temperature; }
  void validate() const;
};

/// Canonical model extended by a two-link Nose-Hoover chain:
///   ... + P_eta1^2/2M_eta1 + P_eta2^2/2M_eta2 + N kB T Q_eta1 + kB T Q_eta2.
struct NhcExtension {
  std::shared_ptr<const CanonicalModel> base;
  double m_eta1 = 1.0;
  double m_eta2 = 1.0;
  double temperature = 1.0;
  int n_thermostatted = 1;
  double k_b = 1.0;

  double kt() const { return k_b * temperature; }
  void validate() const;
};

/// P^2/2M + V(Q).
double classical_energy(const CanonicalModel& model, const BathState& state);
/// Adds the Nose kinetic and potential terms.
double classical_energy(const NoseExtension& model, const BathState& state);
/// Adds both chain kinetic and potential terms.
double classical_energy(const NhcExtension& model, const BathState& state);

/// Full H_W(X) as an operator field over X = (Q, P), with its natural structure.
OperatorField hamiltonian_field(std::shared_ptr<const CanonicalModel> model);
/// Full H(S) as an operator field over (S_x, S_y, S_z).
OperatorField hamiltonian_field(const SpinBathModel& model);
/// H^N over (Q, Q_eta, P, P_eta).
OperatorField hamiltonian_field(const NoseExtension& model);
/// H^NHC over (Q, Q_eta1, Q_eta2, P, P_eta1, P_eta2).
OperatorField hamiltonian_field(const NhcExtension& model);

}  // namespace qclsim
