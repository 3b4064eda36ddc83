#pragma once

// Classical spin bath: S-dot = grad H x S integrated by a symmetric composition
// of exact axis rotations, the adiabatic propagator with dynamical and
// geometric phases, and the O(tau) spin transition terms.

#include <functional>
#include <vector>

#include "qclsim/adiabatic.hpp"
#include "qclsim/models.hpp"
#include "qclsim/rng.hpp"
#include "qclsim/sstp.hpp"
#include "qclsim/types.hpp"

namespace qclsim {

struct SpinState {
  Vector3 s = Vector3::UnitZ();
  Pair pair;
  Complex phase_dyn{1.0, 0.0};
  Complex phase_geo{1.0, 0.0};
  double weight = 1.0;
};

using SpinGradient = std::function<Vector3(const Vector3&)>;

/// Rotation of s about coordinate axis `axis` by `angle` (right-handed).
Vector3 rotate_about_axis(const Vector3& s, int axis, double angle);
/// Rotation of s about a unit vector.
Vector3 rotate_about(const Vector3& s, const Vector3& axis, double angle);

/// grad H x S.
inline Vector3 spin_velocity(const Vector3& s, const Vector3& gradient) {
  return gradient.cross(s);
}

/// Rx(h/2) Ry(h/2) Rz(h) Ry(h/2) Rx(h/2). Each factor rotates about e_a by
/// theta = h g_a(R_a(theta/2) S), solved by fixed-point iteration, so |S| is
/// kept by construction and the map is time reversible.
Vector3 spin_step(const Vector3& s, const SpinGradient& gradient, double dt);

/// Gradient of the mean surface H_S + (E_alpha + E_alpha')/2 with respect to S.
Vector3 mean_spin_gradient(const SpinBathModel& model, const Vector3& s, Pair pair);
/// H_S + (E_alpha + E_alpha')/2.
double spin_surface_energy(const SpinBathModel& model, const Vector3& s, Pair pair);

/// One adiabatic step: S on the mean surface, then
///   phase_dyn *= exp(-i dt omega_bar),  phase_geo *= exp(-i dt (phi_a - phi_a').S_dot)
/// with both rates averaged over the step ends. `frame` holds the frame at the
/// current S and is replaced by the frame at the new S.
void adiabatic_spin_propagate(SpinState& state, const SpinBathModel& model, double dt,
                              SpinFrame& frame);
void adiabatic_spin_propagate(SpinState& state, const SpinBathModel& model, double dt);

/// O(tau) factors of one single-index flip.
struct SpinTransitionTerm {
  Pair target;
  bool first_index = true;
  Complex rate;             // d^S.(B grad H_S), conjugated for first-index flips
  double delta_e = 0.0;     // E_old - E_new
  Vector3 axis = Vector3::Zero();  // Re d^S of the flipped pair
  double higher_order = 0.0;       // magnitude of the matching higher-order term
};

/// Flips of the state's pair with their transition rates and the size of the
/// higher-order terms (reported only; they are not sampled).
std::vector<SpinTransitionTerm> spin_transition_terms(const SpinFrame& frame,
                                                      const SpinBathModel& model,
                                                      const SpinState& state);

/// S rotated along the flow S_dot = S x d for a time deltaE / (2 rate),
/// the spin counterpart of the momentum jump. Returns false when the rate vanishes.
bool spin_jump(Vector3& s, const SpinTransitionTerm& term);

/// Full step: adiabatic propagation followed, when `transitions` is set, by one
/// stochastic flip attempt weighted as in the canonical engine.
BranchRecord spin_sstp_step(SpinState& state, const SpinBathModel& model, double dt,
                            bool transitions, SpinFrame& frame, RandomStream& rng);

}  // namespace qclsim
