#pragma once

// Classical-like propagation of canonical bath coordinates on a mean adiabatic
// surface: plain velocity Verlet, Langevin (OU splitting), Nose-Hoover and a
// two-link Nose-Hoover chain. All integrators are symmetric compositions.

#include <complex>
#include <functional>

#include "qclsim/adiabatic.hpp"
#include "qclsim/models.hpp"
#include "qclsim/rng.hpp"
#include "qclsim/types.hpp"

namespace qclsim {

/// Potential energy and force of the surface the bath moves on.
struct SurfacePoint {
  double energy = 0.0;
  Vector force;
};

using MeanSurface = std::function<SurfacePoint(const Vector& q)>;

/// Surface V(Q) + (E_alpha + E_alpha')/2 with force -dV/dQ + (F^alpha + F^alpha')/2,
/// evaluated from frames built on demand.
MeanSurface mean_surface(const CanonicalModel& model, Pair pair);

/// One velocity-Verlet step. Time reversible: a step with -dt undoes +dt.
BathState classical_step(BathState state, const MeanSurface& surface, double mass, double dt);

struct LangevinParams {
  double zeta = 0.0;  // friction, mass/time
  double temperature = 1.0;
  double k_b = 1.0;
  bool noise = true;

  void validate() const;
};

/// Exact Ornstein-Uhlenbeck update of the momenta over a time h:
///   p <- c p + sqrt(M kB T (1 - c^2)) xi,  c = exp(-zeta h / M).
void ou_momentum_update(Vector& p, double mass, const LangevinParams& params, double h,
                        RandomStream& rng);

/// O(dt/2) B A B O(dt/2): with zeta = 0 or noise off the middle part is
/// exactly classical_step.
BathState langevin_step(BathState state, const MeanSurface& surface, double mass,
                        const LangevinParams& params, double dt, RandomStream& rng);

/// Nose-Hoover: thermostat(dt/2) - Verlet(dt) - thermostat(dt/2), where the
/// thermostat part itself is the symmetric split
///   P_eta half kick, P scaling with Q_eta drift, P_eta half kick.
BathState nose_hoover_step(BathState state, const MeanSurface& surface,
                           const NoseExtension& params, double dt);

/// Two-link chain version of nose_hoover_step.
BathState nhc_step(BathState state, const MeanSurface& surface, const NhcExtension& params,
                   double dt);

/// Thermostat force on P_eta: P^2/M - N kB T.
double thermostat_force(const NoseExtension& params, const BathState& state);

/// Phase-space compressibility of the Nose flow: -N P_eta / M_eta.
double compressibility(const BathState& state, const NoseExtension& params);
/// Chain compressibility: -N P_eta1/M_eta1 - P_eta2/M_eta2.
double compressibility(const BathState& state, const NhcExtension& params);

/// H^T = P^2/2M + V(Q) + E_alpha(Q) + sum_k P_eta_k^2 / 2M_eta_k. Along the
/// thermostatted flow on surface alpha, beta dH^T/dt equals the compressibility.
double thermostat_free_energy(const NoseExtension& params, const AdiabaticFrame& frame,
                              int alpha, const BathState& state);
double thermostat_free_energy(const NhcExtension& params, const AdiabaticFrame& frame,
                              int alpha, const BathState& state);

/// Bracket of the first-order stationary correction:
///   (1 - e^{-beta (E_a' - E_a)}) / (E_a - E_a') + beta/2 (1 + e^{-beta (E_a' - E_a)}).
double first_order_bracket(double beta, double e_alpha, double e_alpha_prime);

/// Stationary thermostatted density up to first order in hbar.
///   order 0 (diagonal pair):  exp(-beta H^T_alpha), unnormalised;
///   order 1 (off-diagonal):   -i (P/M).d_{alpha alpha'} W0_{alpha alpha} * first_order_bracket.
/// The order-0 weight is annihilated by (iL + kappa) on surface alpha.
Complex stationary_weight(const NoseExtension& params, const AdiabaticFrame& frame,
                          const BathState& state, int order, Pair pair);
Complex stationary_weight(const NhcExtension& params, const AdiabaticFrame& frame,
                          const BathState& state, int order, Pair pair);

}  // namespace qclsim
