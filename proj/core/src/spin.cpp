#include "qclsim/spin.hpp"

#include <cmath>

namespace qclsim {

namespace {

constexpr int kFixedPointIterations = 100;
constexpr double kFixedPointTol = 1e-15;

struct LevelData {
  double e0, e1;
  Vector3 g0, g1;
};

// Eigenvalues and their S-gradients of a 2x2 Hermitian h(S).
LevelData two_level(const SpinBathModel& model, const Vector3& s) {
  const ComplexMatrix h = model.h_matrix(s);
  const auto dh = model.h_gradient(s);
  const double mean = 0.5 * (h(0, 0).real() + h(1, 1).real());
  const double a = 0.5 * (h(0, 0).real() - h(1, 1).real());
  const Complex c = h(0, 1);
  const double r = std::sqrt(a * a + std::norm(c));
  LevelData out{mean - r, mean + r, Vector3::Zero(), Vector3::Zero()};
  for (int k = 0; k < 3; ++k) {
    const double dmean = 0.5 * (dh[k](0, 0).real() + dh[k](1, 1).real());
    const double da = 0.5 * (dh[k](0, 0).real() - dh[k](1, 1).real());
    const Complex dc = dh[k](0, 1);
    const double dr = r > 0.0 ? (a * da + (std::conj(c) * dc).real()) / r : 0.0;
    out.g0[k] = dmean - dr;
    out.g1[k] = dmean + dr;
  }
  return out;
}

void check_pair(const SpinBathModel& model, Pair pair) {
  const int n = static_cast<int>(model.h_matrix(Vector3::UnitZ()).rows());
  if (pair.first < 0 || pair.second < 0 || pair.first >= n || pair.second >= n) {
    throw Error("spin: pair index out of range");
  }
}

void apply_spin_factor(SpinState& state, Complex factor) {
  if (factor.imag() == 0.0) {
    state.weight *= factor.real();
    return;
  }
  const double m = std::abs(factor);
  state.weight *= m;
  state.phase_dyn *= factor / m;
}

}  // namespace

Vector3 rotate_about_axis(const Vector3& s, int axis, double angle) {
  // cos - 1 = -2 sin^2(angle/2) keeps c^2 + s^2 = 1 to far below one ulp for
  // small angles, so |S| does not drift systematically over many steps.
  const double half = std::sin(0.5 * angle);
  const double cm1 = -2.0 * half * half;
  const double sn = std::sin(angle);
  Vector3 out = s;
  const int i = (axis + 1) % 3;
  const int j = (axis + 2) % 3;
  out[i] = s[i] + (cm1 * s[i] - sn * s[j]);
  out[j] = s[j] + (sn * s[i] + cm1 * s[j]);
  return out;
}

Vector3 rotate_about(const Vector3& s, const Vector3& axis, double angle) {
  const double half = std::sin(0.5 * angle);
  const double cm1 = -2.0 * half * half;
  const double sn = std::sin(angle);
  return s + (cm1 * (s - axis * axis.dot(s)) + axis.cross(s) * sn);
}

namespace {

Vector3 axis_flow(const Vector3& s, const SpinGradient& gradient, int axis, double h) {
  double theta = h * gradient(s)[axis];
  for (int it = 0; it < kFixedPointIterations; ++it) {
    const double next = h * gradient(rotate_about_axis(s, axis, 0.5 * theta))[axis];
    const double change = std::abs(next - theta);
    theta = next;
    if (change <= kFixedPointTol * std::max(1.0, std::abs(theta))) break;
  }
  if (!std::isfinite(theta)) throw NumericalError("spin_step: non-finite rotation angle");
  return rotate_about_axis(s, axis, theta);
}

}  // namespace

Vector3 spin_step(const Vector3& s, const SpinGradient& gradient, double dt) {
  Vector3 out = axis_flow(s, gradient, 0, 0.5 * dt);
  out = axis_flow(out, gradient, 1, 0.5 * dt);
  out = axis_flow(out, gradient, 2, dt);
  out = axis_flow(out, gradient, 1, 0.5 * dt);
  return axis_flow(out, gradient, 0, 0.5 * dt);
}

Vector3 mean_spin_gradient(const SpinBathModel& model, const Vector3& s, Pair pair) {
  Vector3 g = model.classical_gradient(s);
  const ComplexMatrix h = model.h_matrix(s);
  if (h.rows() == 2) {
    const LevelData lv = two_level(model, s);
    const Vector3* grads[2] = {&lv.g0, &lv.g1};
    return g + 0.5 * (*grads[pair.first] + *grads[pair.second]);
  }
  auto [e, v] = detail::eigh(h);
  const auto dh = model.h_gradient(s);
  for (int k = 0; k < 3; ++k) {
    g[k] += 0.5 * (v.col(pair.first).dot(dh[k] * v.col(pair.first)).real() +
                   v.col(pair.second).dot(dh[k] * v.col(pair.second)).real());
  }
  return g;
}

double spin_surface_energy(const SpinBathModel& model, const Vector3& s, Pair pair) {
  const Vector e = detail::eigh(model.h_matrix(s)).first;
  return model.classical_energy(s) + 0.5 * (e[pair.first] + e[pair.second]);
}

void adiabatic_spin_propagate(SpinState& state, const SpinBathModel& model, double dt,
                              SpinFrame& frame) {
  check_pair(model, state.pair);
  const Pair pair = state.pair;
  const auto gradient = [&](const Vector3& s) { return mean_spin_gradient(model, s, pair); };

  const Vector3 s0 = state.s;
  const Vector3 v0 = spin_velocity(s0, gradient(s0));
  const Vector3 s1 = spin_step(s0, gradient, dt);
  SpinFrame next = build_spin_frame(model, s1);
  const Vector3 v1 = spin_velocity(s1, gradient(s1));

  if (!pair.diagonal()) {
    const int a = pair.first;
    const int b = pair.second;
    const double w0 = (frame.energies[a] - frame.energies[b]) / frame.hbar;
    const double w1 = (next.energies[a] - next.energies[b]) / next.hbar;
    state.phase_dyn *= std::exp(-kI * (dt * 0.5 * (w0 + w1)));
    const Vector r0 = frame.geometric_rate(v0);
    const Vector r1 = next.geometric_rate(v1);
    state.phase_geo *= std::exp(-kI * (dt * 0.5 * ((r0[a] - r0[b]) + (r1[a] - r1[b]))));
  }
  state.s = s1;
  frame = std::move(next);
}

void adiabatic_spin_propagate(SpinState& state, const SpinBathModel& model, double dt) {
  SpinFrame frame = build_spin_frame(model, state.s);
  adiabatic_spin_propagate(state, model, dt, frame);
}

std::vector<SpinTransitionTerm> spin_transition_terms(const SpinFrame& frame,
                                                      const SpinBathModel& model,
                                                      const SpinState& state) {
  const int n = frame.levels();
  const Vector3& s = frame.spin;
  const Vector3 v = spin_velocity(s, model.classical_gradient(s));
  // x^T B y with B y = y x S.
  const auto bform = [&](const ComplexVector& x, const ComplexVector& y) -> Complex {
    const Eigen::Vector3cd y3 = y;
    const Eigen::Vector3cd by = y3.cross(s.cast<Complex>());
    return x.transpose() * by;
  };
  Vector3 mean_grad = Vector3::Zero();
  for (int k = 0; k < 3; ++k) {
    mean_grad[k] = 0.5 * (frame.energy_gradients(state.pair.first, k) +
                          frame.energy_gradients(state.pair.second, k));
  }

  std::vector<SpinTransitionTerm> out;
  for (int which = 0; which < 2; ++which) {
    const bool first = which == 0;
    const int old_level = first ? state.pair.first : state.pair.second;
    for (int b = 0; b < n; ++b) {
      if (b == old_level) continue;
      SpinTransitionTerm t;
      t.first_index = first;
      t.target = first ? Pair{b, state.pair.second} : Pair{state.pair.first, b};
      if (frame.near_degenerate(old_level, b)) {
        out.push_back(t);
        continue;
      }
      const ComplexVector d = frame.coupling(old_level, b);
      const Complex rate = v.cast<Complex>().dot(d);
      t.rate = first ? std::conj(rate) : rate;
      t.delta_e = frame.energies[old_level] - frame.energies[b];
      t.axis = d.real();

      Complex higher = 0.0;
      for (int sigma = 0; sigma < n; ++sigma) {
        if (sigma == old_level) continue;
        const double de = frame.energies[old_level] - frame.energies[sigma];
        higher += 0.5 * de * bform(frame.coupling(old_level, sigma), frame.coupling(sigma, b));
      }
      higher -= bform(mean_grad.cast<Complex>(), d);
      t.higher_order = std::abs(higher);
      out.push_back(t);
    }
  }
  return out;
}

bool spin_jump(Vector3& s, const SpinTransitionTerm& term) {
  const double norm = term.axis.norm();
  const double rate = term.rate.real();
  if (norm == 0.0 || rate == 0.0) return false;
  const double time = 0.5 * term.delta_e / rate;
  // S x d = -(d x S): rotation about d_hat by -|d| time.
  s = rotate_about(s, term.axis / norm, -norm * time);
  s.normalize();
  return true;
}

BranchRecord spin_sstp_step(SpinState& state, const SpinBathModel& model, double dt,
                            bool transitions, SpinFrame& frame, RandomStream& rng) {
  adiabatic_spin_propagate(state, model, dt, frame);
  BranchRecord rec;
  if (!transitions) return rec;
  auto terms = spin_transition_terms(frame, model, state);
  if (terms.empty()) return rec;
  const int count = static_cast<int>(terms.size());
  rec.candidate = static_cast<int>(rng.below(terms.size()));
  const double u = rng.uniform();
  rec.attempted = true;
  const SpinTransitionTerm& t = terms[rec.candidate];
  const Complex raw = dt * t.rate;
  auto [p_jump, q_stay] = jump_probabilities(std::abs(raw));
  if (frame.near_degenerate(t.first_index ? state.pair.first : state.pair.second,
                            t.first_index ? t.target.first : t.target.second)) {
    p_jump = 0.0;
    q_stay = 1.0;
  }
  if (u < p_jump) {
    Vector3 s = state.s;
    if (spin_jump(s, t)) {
      rec.jumped = true;
      apply_spin_factor(state, branch_weight(raw, p_jump, q_stay, true, count));
      state.s = s;
      state.pair = t.target;
      frame = build_spin_frame(model, state.s);
      return rec;
    }
    rec.frustrated = true;
  }
  apply_spin_factor(state, branch_weight(raw, p_jump, q_stay, false, count));
  return rec;
}

}  // namespace qclsim
