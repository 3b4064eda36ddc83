#include "qclsim/sstp.hpp"

#include <algorithm>
#include <cmath>

namespace qclsim {

void phase_step(TrajectoryState& state, const AdiabaticFrame& start, const AdiabaticFrame& end,
                double dt) {
  if (state.pair.diagonal()) return;
  phase_step(state, bohr_frequency(start, state.pair.first, state.pair.second),
             bohr_frequency(end, state.pair.first, state.pair.second), dt);
}

void phase_step(TrajectoryState& state, double omega_start, double omega_end, double dt) {
  if (state.pair.diagonal()) return;
  state.phase *= std::exp(-kI * (dt * 0.5 * (omega_start + omega_end)));
}

std::pair<double, double> jump_probabilities(double magnitude) {
  const double m = std::abs(magnitude);
  return {m / (1.0 + m), 1.0 / (1.0 + m)};
}

std::vector<TransitionCandidate> transition_probabilities(const TrajectoryState& state,
                                                          const AdiabaticFrame& frame,
                                                          double mass, double dt) {
  const int n = frame.levels();
  const Vector velocity = state.x.p / mass;
  std::vector<TransitionCandidate> out;
  out.reserve(2 * (n - 1));
  for (int which = 0; which < 2; ++which) {
    const bool first = which == 0;
    const int old_level = first ? state.pair.first : state.pair.second;
    for (int b = 0; b < n; ++b) {
      if (b == old_level) continue;
      TransitionCandidate c;
      c.first_index = first;
      c.target = first ? Pair{b, state.pair.second} : Pair{state.pair.first, b};
      const ComplexVector d = frame.coupling(old_level, b);
      const Complex directional = velocity.cast<Complex>().dot(d);
      c.raw = dt * (first ? std::conj(directional) : directional);
      c.delta_e = frame.energies[old_level] - frame.energies[b];
      c.direction = d.real();
      if (frame.near_degenerate(old_level, b)) {
        c.p_jump = 0.0;
        c.q_stay = 1.0;
      } else {
        std::tie(c.p_jump, c.q_stay) = jump_probabilities(std::abs(c.raw));
      }
      out.push_back(std::move(c));
    }
  }
  return out;
}

JumpResult momentum_jump(const Vector& p, const Vector& d_hat, double delta_e, double mass) {
  if (p.size() != d_hat.size()) throw DimensionError("momentum_jump: dimension mismatch");
  if (std::abs(d_hat.norm() - 1.0) > 1e-10) {
    throw Error("momentum_jump: direction must be a unit vector");
  }
  const double along = p.dot(d_hat);
  const double disc = along * along + 2.0 * mass * delta_e;
  if (disc < 0.0) return Frustrated{};
  if (delta_e == 0.0) return p;
  const double sign = along < 0.0 ? -1.0 : 1.0;
  return Vector(p - along * d_hat + d_hat * (sign * std::sqrt(disc)));
}

Complex branch_weight(Complex raw, double p_jump, double q_stay, bool jumped,
                      int candidate_count) {
  if (jumped) {
    if (!(p_jump > 0.0)) throw NumericalError("branch_weight: jump taken with P_J = 0");
    return raw * (static_cast<double>(candidate_count) / p_jump);
  }
  if (!(q_stay > 0.0)) throw NumericalError("branch_weight: stay taken with Q_NOJ = 0");
  return 1.0 / q_stay;
}

void apply_branch_factor(TrajectoryState& state, Complex factor) {
  if (factor.imag() == 0.0) {
    state.weight *= factor.real();
    return;
  }
  const double m = std::abs(factor);
  state.weight *= m;
  state.phase *= factor / m;
}

std::string to_string(BathKind kind) {
  switch (kind) {
    case BathKind::hamiltonian: return "hamiltonian";
    case BathKind::langevin: return "langevin";
    case BathKind::nose_hoover: return "nose_hoover";
    case BathKind::nhc: return "nhc";
  }
  return "unknown";
}

std::string to_string(FrustratedPolicy policy) {
  return policy == FrustratedPolicy::reject ? "reject" : "reverse";
}

BathKind parse_bath_kind(const std::string& name) {
  if (name == "hamiltonian") return BathKind::hamiltonian;
  if (name == "langevin") return BathKind::langevin;
  if (name == "nose_hoover") return BathKind::nose_hoover;
  if (name == "nhc") return BathKind::nhc;
  throw ConfigError("unknown bath type '" + name + "'");
}

FrustratedPolicy parse_frustrated_policy(const std::string& name) {
  if (name == "reject") return FrustratedPolicy::reject;
  if (name == "reverse") return FrustratedPolicy::reverse;
  throw ConfigError("unknown frustrated_policy '" + name + "'");
}

SstpPropagator::SstpPropagator(std::shared_ptr<const CanonicalModel> model, SstpOptions options)
    : model_(std::move(model)), options_(options) {
  if (!model_) throw ConfigError("sstp: no model");
  if (!(options_.dt > 0.0)) throw ConfigError("sstp: dt must be > 0");
  switch (options_.bath) {
    case BathKind::hamiltonian: break;
    case BathKind::langevin: options_.langevin.validate(); break;
    case BathKind::nose_hoover:
      nose_ = NoseExtension{model_, options_.m_eta, options_.temperature,
                            options_.n_thermostatted, options_.langevin.k_b};
      nose_->validate();
      break;
    case BathKind::nhc:
      nhc_ = NhcExtension{model_, options_.m_eta, options_.m_eta2, options_.temperature,
                          options_.n_thermostatted, options_.langevin.k_b};
      nhc_->validate();
      break;
  }
}

TrajectoryState SstpPropagator::make_state(const Vector& q, const Vector& p, Pair pair) const {
  if (q.size() != model_->bath_dim() || p.size() != model_->bath_dim()) {
    throw DimensionError("make_state: wrong bath dimension");
  }
  TrajectoryState s;
  s.x.q = q;
  s.x.p = p;
  const int links = options_.bath == BathKind::nose_hoover ? 1
                    : options_.bath == BathKind::nhc       ? 2
                                                           : 0;
  s.x.eta_q = Vector::Zero(links);
  s.x.eta_p = Vector::Zero(links);
  s.pair = pair;
  return s;
}

AdiabaticFrame SstpPropagator::frame_at(const Vector& q, const AdiabaticFrame* reference) const {
  return build_frame(*model_, q, reference);
}

void SstpPropagator::bath_step(TrajectoryState& state, AdiabaticFrame& frame,
                               RandomStream& rng) const {
  const CanonicalModel& model = *model_;
  const Pair pair = state.pair;
  // Reuses the current frame at the start point and keeps the last frame built,
  // which sits at the final configuration.
  AdiabaticFrame last = std::move(frame);
  MeanSurface surface = [&](const Vector& q) {
    if (q != last.config) last = build_frame(model, q, &last);
    SurfacePoint s;
    s.energy = model.potential(q) + 0.5 * (last.energies[pair.first] + last.energies[pair.second]);
    s.force = -model.potential_gradient(q) +
              0.5 * (last.forces.row(pair.first) + last.forces.row(pair.second)).transpose();
    return s;
  };
  const double dt = options_.dt;
  switch (options_.bath) {
    case BathKind::hamiltonian:
      state.x = classical_step(std::move(state.x), surface, model.mass(), dt);
      break;
    case BathKind::langevin:
      state.x = langevin_step(std::move(state.x), surface, model.mass(), options_.langevin, dt, rng);
      break;
    case BathKind::nose_hoover:
      state.x = nose_hoover_step(std::move(state.x), surface, *nose_, dt);
      break;
    case BathKind::nhc:
      state.x = nhc_step(std::move(state.x), surface, *nhc_, dt);
      break;
  }
  if (state.x.q != last.config) last = build_frame(model, state.x.q, &last);
  frame = std::move(last);
}

BranchRecord SstpPropagator::step(TrajectoryState& state, AdiabaticFrame& frame,
                                  RandomStream& rng) const {
  const Pair pair = state.pair;
  const double omega_start = bohr_frequency(frame, pair.first, pair.second);
  bath_step(state, frame, rng);
  phase_step(state, omega_start, bohr_frequency(frame, pair.first, pair.second), options_.dt);
  if (!state.x.p.allFinite() || !state.x.q.allFinite()) {
    throw NumericalError("non-finite bath coordinates");
  }
  if (!options_.transitions) return {};
  return branch(state, frame, rng);
}

BranchRecord SstpPropagator::branch(TrajectoryState& state, const AdiabaticFrame& frame,
                                    RandomStream& rng) const {
  BranchRecord rec;
  auto candidates = transition_probabilities(state, frame, model_->mass(), options_.dt);
  if (candidates.empty()) return rec;
  const int count = static_cast<int>(candidates.size());
  // Both draws are always taken so the stream advances identically per step.
  rec.candidate = static_cast<int>(rng.below(candidates.size()));
  const double u = rng.uniform();
  rec.attempted = true;
  TransitionCandidate& c = candidates[rec.candidate];

  std::optional<Vector> jumped_p;
  if (c.p_jump > 0.0) {
    const double norm = c.direction.norm();
    JumpResult r = Frustrated{};
    if (norm > 0.0) {
      r = momentum_jump(state.x.p, c.direction / norm, 0.5 * c.delta_e, model_->mass());
    }
    if (std::holds_alternative<Frustrated>(r)) {
      rec.frustrated = true;
      if (options_.frustrated == FrustratedPolicy::reject) {
        // A forbidden hop contributes nothing; the candidate behaves as uncoupled.
        c.p_jump = 0.0;
        c.q_stay = 1.0;
      }
    } else {
      jumped_p = std::get<Vector>(std::move(r));
    }
  }

  if (u < c.p_jump) {
    if (rec.frustrated) {
      // reverse policy: bounce along the coupling direction, keep the pair
      const Vector d_hat = c.direction.norm() > 0.0 ? Vector(c.direction.normalized())
                                                    : Vector::Zero(c.direction.size());
      state.x.p -= 2.0 * state.x.p.dot(d_hat) * d_hat;
      apply_branch_factor(state, branch_weight(c.raw, c.p_jump, c.q_stay, false, count));
      return rec;
    }
    rec.jumped = true;
    apply_branch_factor(state, branch_weight(c.raw, c.p_jump, c.q_stay, true, count));
    state.x.p = *jumped_p;
    state.pair = c.target;
  } else {
    apply_branch_factor(state, branch_weight(c.raw, c.p_jump, c.q_stay, false, count));
  }
  return rec;
}

double SstpPropagator::energy(const TrajectoryState& state, const AdiabaticFrame& frame) const {
  double classical = 0.0;
  switch (options_.bath) {
    case BathKind::hamiltonian:
    case BathKind::langevin: classical = classical_energy(*model_, state.x); break;
    case BathKind::nose_hoover: classical = classical_energy(*nose_, state.x); break;
    case BathKind::nhc: classical = classical_energy(*nhc_, state.x); break;
  }
  return surface_energy(classical, frame, state.pair);
}

EnsembleAccumulator::EnsembleAccumulator(std::size_t observables, std::size_t times, bool spin)
    : sums_(observables, std::vector<Complex>(times, Complex(0.0))),
      abs_weight_(times, 0.0),
      drift_(times, 0.0),
      casimir_(spin ? times : 0, 0.0),
      spin_(spin) {}

void EnsembleAccumulator::add(std::size_t obs, std::size_t t, Complex value) {
  sums_[obs][t] += value;
}

void EnsembleAccumulator::add_weight(std::size_t t, double abs_weight) {
  abs_weight_[t] += abs_weight;
}

void EnsembleAccumulator::add_drift(std::size_t t, double energy_drift, double casimir_drift) {
  drift_[t] = std::max(drift_[t], energy_drift);
  if (spin_) casimir_[t] = std::max(casimir_[t], casimir_drift);
}

void EnsembleAccumulator::merge(const EnsembleAccumulator& other) {
  if (other.sums_.size() != sums_.size() || other.abs_weight_.size() != abs_weight_.size()) {
    throw DimensionError("EnsembleAccumulator::merge: shape mismatch");
  }
  for (std::size_t o = 0; o < sums_.size(); ++o) {
    for (std::size_t t = 0; t < sums_[o].size(); ++t) sums_[o][t] += other.sums_[o][t];
  }
  for (std::size_t t = 0; t < abs_weight_.size(); ++t) {
    abs_weight_[t] += other.abs_weight_[t];
    drift_[t] = std::max(drift_[t], other.drift_[t]);
  }
  for (std::size_t t = 0; t < casimir_.size() && t < other.casimir_.size(); ++t) {
    casimir_[t] = std::max(casimir_[t], other.casimir_[t]);
  }
  count_ += other.count_;
}

std::pair<std::size_t, std::size_t> block_range(std::size_t n, int block) {
  const std::size_t b = static_cast<std::size_t>(block);
  const std::size_t k = static_cast<std::size_t>(kStderrBlocks);
  return {n * b / k, n * (b + 1) / k};
}

EnsembleEstimate estimate(const std::vector<EnsembleAccumulator>& blocks,
                          const std::vector<double>& times,
                          const std::vector<std::string>& names) {
  if (blocks.empty()) throw Error("estimate: no blocks");
  EnsembleAccumulator total(blocks.front().observables(), blocks.front().times(),
                            blocks.front().spin_);
  for (const auto& b : blocks) total.merge(b);
  if (total.count() == 0) throw Error("estimate: empty ensemble");
  if (times.size() != total.times() || names.size() != total.observables()) {
    throw DimensionError("estimate: times/names do not match accumulators");
  }

  const double n = static_cast<double>(total.count());
  EnsembleEstimate est;
  est.times = times;
  est.names = names;
  est.mean.assign(names.size(), std::vector<Complex>(times.size()));
  est.std_error.assign(names.size(), std::vector<double>(times.size(), 0.0));
  for (std::size_t o = 0; o < names.size(); ++o) {
    for (std::size_t t = 0; t < times.size(); ++t) {
      est.mean[o][t] = total.sums_[o][t] / n;
      // Standard error from the spread of the non-empty block means.
      std::vector<double> means;
      for (const auto& b : blocks) {
        if (b.count() > 0) means.push_back(b.sums_[o][t].real() / static_cast<double>(b.count()));
      }
      if (means.size() > 1) {
        double avg = 0.0;
        for (double m : means) avg += m;
        avg /= static_cast<double>(means.size());
        double ss = 0.0;
        for (double m : means) ss += (m - avg) * (m - avg);
        const double k = static_cast<double>(means.size());
        est.std_error[o][t] = std::sqrt(ss / (k * (k - 1.0)));
      }
    }
  }
  est.mean_abs_weight.resize(times.size());
  est.energy_drift = total.drift_;
  for (std::size_t t = 0; t < times.size(); ++t) est.mean_abs_weight[t] = total.abs_weight_[t] / n;
  if (total.spin_) est.casimir_drift = total.casimir_;
  return est;
}

}  // namespace qclsim
