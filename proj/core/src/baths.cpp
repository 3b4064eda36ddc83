#include "qclsim/baths.hpp"

#include <cmath>

namespace qclsim {

namespace {

void check_force(const SurfacePoint& s, Eigen::Index dim) {
  if (s.force.size() != dim) throw DimensionError("surface force has wrong dimension");
  if (!s.force.allFinite() || !std::isfinite(s.energy)) {
    throw NumericalError("non-finite force on the mean surface");
  }
}

void check_extension(const BathState& state, int links) {
  if (state.eta_q.size() != links || state.eta_p.size() != links) {
    throw DimensionError("thermostat state has wrong number of links");
  }
}

double beta_of(double kt) { return 1.0 / kt; }

}  // namespace

MeanSurface mean_surface(const CanonicalModel& model, Pair pair) {
  if (pair.first < 0 || pair.second < 0 || pair.first >= model.levels() ||
      pair.second >= model.levels()) {
    throw Error("mean_surface: pair index out of range");
  }
  return [&model, pair](const Vector& q) {
    const AdiabaticFrame frame = build_frame(model, q);
    SurfacePoint s;
    s.energy = model.potential(q) +
               0.5 * (frame.energies[pair.first] + frame.energies[pair.second]);
    s.force = -model.potential_gradient(q) +
              0.5 * (frame.forces.row(pair.first) + frame.forces.row(pair.second)).transpose();
    return s;
  };
}

BathState classical_step(BathState state, const MeanSurface& surface, double mass, double dt) {
  const Eigen::Index dim = state.q.size();
  SurfacePoint s = surface(state.q);
  check_force(s, dim);
  state.p += 0.5 * dt * s.force;
  state.q += (dt / mass) * state.p;
  s = surface(state.q);
  check_force(s, dim);
  state.p += 0.5 * dt * s.force;
  return state;
}

void LangevinParams::validate() const {
  if (!(zeta >= 0.0)) throw ConfigError("langevin: zeta must be >= 0");
  if (!(temperature > 0.0)) throw ConfigError("langevin: temperature must be > 0");
  if (!(k_b > 0.0)) throw ConfigError("langevin: k_B must be > 0");
}

void ou_momentum_update(Vector& p, double mass, const LangevinParams& params, double h,
                        RandomStream& rng) {
  if (params.zeta == 0.0) return;
  const double c = std::exp(-params.zeta * std::abs(h) / mass);
  p *= c;
  if (!params.noise) return;
  const double sigma = std::sqrt(mass * params.k_b * params.temperature * (1.0 - c * c));
  for (Eigen::Index i = 0; i < p.size(); ++i) p[i] += sigma * rng.normal();
}

BathState langevin_step(BathState state, const MeanSurface& surface, double mass,
                        const LangevinParams& params, double dt, RandomStream& rng) {
  ou_momentum_update(state.p, mass, params, 0.5 * dt, rng);
  state = classical_step(std::move(state), surface, mass, dt);
  ou_momentum_update(state.p, mass, params, 0.5 * dt, rng);
  return state;
}

double thermostat_force(const NoseExtension& params, const BathState& state) {
  return state.p.squaredNorm() / params.base->mass() - params.n_thermostatted * params.kt();
}

namespace {

void nose_half(BathState& s, const NoseExtension& params, double h) {
  const double m_eta = params.m_eta;
  s.eta_p[0] += 0.5 * h * thermostat_force(params, s);
  s.p *= std::exp(-h * s.eta_p[0] / m_eta);
  s.eta_q[0] += h * s.eta_p[0] / m_eta;
  s.eta_p[0] += 0.5 * h * thermostat_force(params, s);
}

double chain_force1(const NhcExtension& params, const BathState& s) {
  return s.p.squaredNorm() / params.base->mass() - params.n_thermostatted * params.kt();
}

double chain_force2(const NhcExtension& params, const BathState& s) {
  return s.eta_p[0] * s.eta_p[0] / params.m_eta1 - params.kt();
}

void chain_half(BathState& s, const NhcExtension& params, double h) {
  const double m1 = params.m_eta1;
  const double m2 = params.m_eta2;
  auto link1 = [&] {
    const double damp = std::exp(-0.25 * h * s.eta_p[1] / m2);
    s.eta_p[0] *= damp;
    s.eta_p[0] += 0.5 * h * chain_force1(params, s);
    s.eta_p[0] *= damp;
  };
  s.eta_p[1] += 0.5 * h * chain_force2(params, s);
  link1();
  s.p *= std::exp(-h * s.eta_p[0] / m1);
  s.eta_q[0] += h * s.eta_p[0] / m1;
  s.eta_q[1] += h * s.eta_p[1] / m2;
  link1();
  s.eta_p[1] += 0.5 * h * chain_force2(params, s);
}

}  // namespace

BathState nose_hoover_step(BathState state, const MeanSurface& surface,
                           const NoseExtension& params, double dt) {
  check_extension(state, 1);
  nose_half(state, params, 0.5 * dt);
  state = classical_step(std::move(state), surface, params.base->mass(), dt);
  nose_half(state, params, 0.5 * dt);
  return state;
}

BathState nhc_step(BathState state, const MeanSurface& surface, const NhcExtension& params,
                   double dt) {
  check_extension(state, 2);
  chain_half(state, params, 0.5 * dt);
  state = classical_step(std::move(state), surface, params.base->mass(), dt);
  chain_half(state, params, 0.5 * dt);
  return state;
}

double compressibility(const BathState& state, const NoseExtension& params) {
  check_extension(state, 1);
  return -params.n_thermostatted * state.eta_p[0] / params.m_eta;
}

double compressibility(const BathState& state, const NhcExtension& params) {
  check_extension(state, 2);
  return -params.n_thermostatted * state.eta_p[0] / params.m_eta1 -
         state.eta_p[1] / params.m_eta2;
}

double thermostat_free_energy(const NoseExtension& params, const AdiabaticFrame& frame,
                              int alpha, const BathState& state) {
  check_extension(state, 1);
  const auto& base = *params.base;
  return state.p.squaredNorm() / (2.0 * base.mass()) + base.potential(state.q) +
         frame.energies[alpha] + state.eta_p[0] * state.eta_p[0] / (2.0 * params.m_eta);
}

double thermostat_free_energy(const NhcExtension& params, const AdiabaticFrame& frame,
                              int alpha, const BathState& state) {
  check_extension(state, 2);
  const auto& base = *params.base;
  return state.p.squaredNorm() / (2.0 * base.mass()) + base.potential(state.q) +
         frame.energies[alpha] + state.eta_p[0] * state.eta_p[0] / (2.0 * params.m_eta1) +
         state.eta_p[1] * state.eta_p[1] / (2.0 * params.m_eta2);
}

double first_order_bracket(double beta, double e_alpha, double e_alpha_prime) {
  const double de = e_alpha - e_alpha_prime;
  if (de == 0.0) throw NumericalError("first_order_bracket: degenerate levels");
  const double boltz = std::exp(-beta * (e_alpha_prime - e_alpha));
  return (1.0 - boltz) / de + 0.5 * beta * (1.0 + boltz);
}

namespace {

template <typename Extension>
Complex stationary_impl(const Extension& params, const AdiabaticFrame& frame,
                        const BathState& state, int order, Pair pair) {
  params.validate();
  const int n = frame.levels();
  if (pair.first < 0 || pair.second < 0 || pair.first >= n || pair.second >= n) {
    throw Error("stationary_weight: pair index out of range");
  }
  const double beta = beta_of(params.kt());
  const double w0 = std::exp(-beta * thermostat_free_energy(params, frame, pair.first, state));
  if (order == 0) {
    if (!pair.diagonal()) throw Error("stationary_weight: order 0 is defined on diagonal pairs");
    return w0;
  }
  if (order != 1) throw Error("stationary_weight: order must be 0 or 1");
  if (pair.diagonal()) throw Error("stationary_weight: order 1 requires an off-diagonal pair");
  const ComplexVector d = frame.coupling(pair.first, pair.second);
  const Complex pd = (state.p / params.base->mass()).template cast<Complex>().dot(d);
  if (pd == Complex(0.0)) return 0.0;
  const double bracket =
      first_order_bracket(beta, frame.energies[pair.first], frame.energies[pair.second]);
  return -kI * pd * w0 * bracket;
}

}  // namespace

Complex stationary_weight(const NoseExtension& params, const AdiabaticFrame& frame,
                          const BathState& state, int order, Pair pair) {
  return stationary_impl(params, frame, state, order, pair);
}

Complex stationary_weight(const NhcExtension& params, const AdiabaticFrame& frame,
                          const BathState& state, int order, Pair pair) {
  return stationary_impl(params, frame, state, order, pair);
}

}  // namespace qclsim
