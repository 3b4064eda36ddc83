#pragma once

// Initial ensembles: canonical bath configurations, ground-state Wigner
// Gaussians, spin directions, and initial subsystem matrix elements in the
// adiabatic basis.

#include <cstddef>
#include <string>
#include <vector>

#include "qclsim/adiabatic.hpp"
#include "qclsim/models.hpp"
#include "qclsim/rng.hpp"
#include "qclsim/types.hpp"

namespace qclsim {

struct PhasePoint {
  Vector q;
  Vector p;
};

struct MetropolisOptions {
  int burn_in_sweeps = 1000;
  int sweeps_between_samples = 10;
  double initial_step = 0.5;
  double runaway_bound = 1e6;
};

/// Canonical samples of P^2/2M + V(Q) at temperature T. Momenta are exact
/// Maxwell draws; positions come from the exact Gaussian when V is harmonic and
/// from a single Metropolis chain otherwise (step tuned to 30-60 % acceptance
/// during burn-in). A chain that wanders past `runaway_bound` means V does not
/// confine and raises ConfigError.
std::vector<PhasePoint> sample_canonical(const CanonicalModel& model, double temperature,
                                         std::size_t count, RandomStream& rng,
                                         double k_b = 1.0, MetropolisOptions options = {});

/// Independent Gaussians with Var(Q) = hbar/(2 M w), Var(P) = hbar M w / 2 per mode.
std::vector<PhasePoint> sample_wigner_gaussian(double mass, const Vector& omega, double hbar,
                                               std::size_t count, RandomStream& rng);

/// Uniform directions on the unit sphere.
std::vector<Vector3> sample_sphere(std::size_t count, RandomStream& rng);

enum class PairSampling { stratified, uniform, magnitude };

std::string to_string(PairSampling mode);
PairSampling parse_pair_sampling(const std::string& name);

/// Nonzero adiabatic elements W_{beta beta'} of an initial subsystem matrix.
struct PairTable {
  std::vector<Pair> pairs;
  std::vector<Complex> values;
};

/// Checks that `rho` is Hermitian with unit trace.
void validate_subsystem(const ComplexMatrix& rho);

/// V^dagger rho V restricted to elements above 1e-14 of the largest one.
PairTable adiabatic_elements(const ComplexMatrix& rho, const ComplexMatrix& vectors);

struct PairChoice {
  Pair pair;
  Complex w0;
};

/// Draws one pair. `stratified` cycles through the table by trajectory index,
/// `uniform` picks at random, both with w0 = value * K. `magnitude` picks with
/// probability |value| / sum|value| and w0 = value / probability.
PairChoice choose_pair(const PairTable& table, PairSampling mode, std::size_t trajectory,
                       RandomStream& rng);

/// Frame transform plus pair choice at one sampled configuration.
PairChoice initial_subsystem(const AdiabaticFrame& frame, const ComplexMatrix& rho,
                             PairSampling mode, std::size_t trajectory, RandomStream& rng);

}  // namespace qclsim
