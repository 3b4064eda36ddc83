#pragma once

// Adiabatic frames: eigen-decomposition of h at a bath configuration with
// gauge-fixed eigenvectors, Hellmann-Feynman forces and nonadiabatic coupling
// vectors, plus the classical-spin analogue carrying the geometric connection.

#include <utility>
#include <vector>

#include "qclsim/models.hpp"
#include "qclsim/types.hpp"

namespace qclsim {

/// Eigenvalues closer than this fraction of max|E| are treated as degenerate.
inline constexpr double kDegeneracyRelTol = 1e-8;

struct AdiabaticFrame {
  Vector energies;                     // ascending E_alpha
  ComplexMatrix vectors;               // column alpha is |alpha; Q>
  Matrix forces;                       // forces(alpha, I) = -dE_alpha/dQ_I
  std::vector<ComplexMatrix> couplings;  // couplings[I](alpha, beta) = <alpha|d_I beta>
  Vector config;
  double hbar = 1.0;
  bool degenerate = false;             // some gap below the degeneracy tolerance

  int levels() const { return static_cast<int>(energies.size()); }
  int bath_dim() const { return static_cast<int>(couplings.size()); }

  /// d_{alpha beta} as a bath-dimension vector.
  ComplexVector coupling(int alpha, int beta) const;
  /// True when |E_alpha - E_beta| is below the degeneracy tolerance.
  bool near_degenerate(int alpha, int beta) const;
  /// Matrix elements <alpha|op|beta> in this frame.
  ComplexMatrix to_adiabatic(const ComplexMatrix& op) const;
};

/// Builds the frame at q. With a reference frame the eigenvector phases are
/// chosen for maximal positive real overlap with it; otherwise the largest
/// component of each eigenvector is made real and positive.
///
/// Two-level real-symmetric h uses the analytic mixing-angle couplings;
/// anything else uses a Hermitian eigensolver and finite differences of the
/// eigenvectors.
AdiabaticFrame build_frame(const CanonicalModel& model, const Vector& q,
                           const AdiabaticFrame* reference = nullptr);

/// (E_alpha - E_alpha') / hbar.
double bohr_frequency(const AdiabaticFrame& frame, int alpha, int alpha_prime);

/// (E_alpha - E_beta) d_{alpha beta} / ((P/M) . d_{alpha beta}).
Vector shift_vector(const AdiabaticFrame& frame, int alpha, int beta, const Vector& p,
                    double mass);

/// Classical energy plus the mean adiabatic energy (E_alpha + E_alpha')/2.
double surface_energy(double classical_energy, const AdiabaticFrame& frame, Pair pair);
double surface_energy(const CanonicalModel& model, const AdiabaticFrame& frame, Pair pair,
                      const BathState& state);

struct SpinFrame {
  Vector energies;
  ComplexMatrix vectors;
  Matrix energy_gradients;               // (alpha, a) = dE_alpha/dS_a
  std::vector<ComplexMatrix> couplings;  // couplings[a](alpha, beta) = <alpha|d/dS_a beta>
  Matrix connection;                     // (alpha, a) = phi_alpha,a = -i d^S_{alpha alpha, a}
  Vector3 spin = Vector3::Zero();
  double hbar = 1.0;
  bool degenerate = false;

  int levels() const { return static_cast<int>(energies.size()); }
  ComplexVector coupling(int alpha, int beta) const;
  bool near_degenerate(int alpha, int beta) const;
  ComplexMatrix to_adiabatic(const ComplexMatrix& op) const;
  /// d(phi_alpha)/dt = S_dot . phi_alpha for each level.
  Vector geometric_rate(const Vector3& s_dot) const;
};

/// Frame over the three spin components at |S| = 1. The gauge is the local
/// canonical one (fixed component real positive), so the diagonal couplings
/// carry the geometric connection.
SpinFrame build_spin_frame(const SpinBathModel& model, const Vector3& s);

namespace detail {
/// Ascending eigenpairs of a Hermitian matrix.
std::pair<Vector, ComplexMatrix> eigh(const ComplexMatrix& h);
/// Index of the largest-magnitude component of each column.
std::vector<Eigen::Index> gauge_components(const ComplexMatrix& vectors);
/// Makes the given component of each column real and positive.
void fix_gauge(ComplexMatrix& vectors, const std::vector<Eigen::Index>& components);
/// Rotates each column's phase so that its overlap with the reference is real positive.
void align_gauge(ComplexMatrix& vectors, const ComplexMatrix& reference);
}  // namespace detail

}  // namespace qclsim
