#include "qclsim/sampling.hpp"

#include <cmath>

namespace qclsim {

namespace {

Vector maxwell(int dim, double mass, double kt, RandomStream& rng) {
  Vector p(dim);
  const double sigma = std::sqrt(mass * kt);
  for (int i = 0; i < dim; ++i) p[i] = sigma * rng.normal();
  return p;
}

}  // namespace

std::vector<PhasePoint> sample_canonical(const CanonicalModel& model, double temperature,
                                         std::size_t count, RandomStream& rng, double k_b,
                                         MetropolisOptions options) {
  if (!(temperature > 0.0)) throw ConfigError("sample_canonical: temperature must be > 0");
  const double kt = k_b * temperature;
  const int dim = model.bath_dim();
  const double mass = model.mass();
  std::vector<PhasePoint> out;
  out.reserve(count);

  if (const auto freqs = model.harmonic_frequencies()) {
    for (std::size_t n = 0; n < count; ++n) {
      Vector q(dim);
      for (int i = 0; i < dim; ++i) {
        q[i] = std::sqrt(kt / (mass * (*freqs)[i] * (*freqs)[i])) * rng.normal();
      }
      out.push_back({q, maxwell(dim, mass, kt, rng)});
    }
    return out;
  }

  Vector q = Vector::Zero(dim);
  double v = model.potential(q);
  double step = options.initial_step;
  const auto sweep = [&] {
    int accepted = 0;
    for (int i = 0; i < dim; ++i) {
      Vector trial = q;
      trial[i] += step * (2.0 * rng.uniform() - 1.0);
      const double vt = model.potential(trial);
      if (std::isfinite(vt) && (vt <= v || rng.uniform() < std::exp(-(vt - v) / kt))) {
        q = trial;
        v = vt;
        ++accepted;
      }
    }
    if (!(q.cwiseAbs().maxCoeff() < options.runaway_bound)) {
      throw ConfigError("sample_canonical: Metropolis chain ran away; potential is not confining");
    }
    return accepted;
  };

  int window_accepted = 0;
  int window_trials = 0;
  for (int s = 0; s < options.burn_in_sweeps; ++s) {
    window_accepted += sweep();
    window_trials += dim;
    if (window_trials >= 50 * dim) {
      const double rate = static_cast<double>(window_accepted) / window_trials;
      if (rate < 0.3) step *= 0.8;
      if (rate > 0.6) step *= 1.25;
      window_accepted = 0;
      window_trials = 0;
    }
  }
  for (std::size_t n = 0; n < count; ++n) {
    for (int s = 0; s < options.sweeps_between_samples; ++s) sweep();
    out.push_back({q, maxwell(dim, mass, kt, rng)});
  }
  return out;
}

std::vector<PhasePoint> sample_wigner_gaussian(double mass, const Vector& omega, double hbar,
                                               std::size_t count, RandomStream& rng) {
  if (!(omega.size() > 0) || !(omega.minCoeff() > 0.0)) {
    throw ConfigError("sample_wigner_gaussian: frequencies must be > 0");
  }
  const int dim = static_cast<int>(omega.size());
  std::vector<PhasePoint> out;
  out.reserve(count);
  for (std::size_t n = 0; n < count; ++n) {
    Vector q(dim), p(dim);
    for (int i = 0; i < dim; ++i) {
      q[i] = std::sqrt(hbar / (2.0 * mass * omega[i])) * rng.normal();
      p[i] = std::sqrt(0.5 * hbar * mass * omega[i]) * rng.normal();
    }
    out.push_back({q, p});
  }
  return out;
}

std::vector<Vector3> sample_sphere(std::size_t count, RandomStream& rng) {
  std::vector<Vector3> out;
  out.reserve(count);
  while (out.size() < count) {
    Vector3 v(rng.normal(), rng.normal(), rng.normal());
    const double n = v.norm();
    if (n > 1e-12) out.push_back(v / n);
  }
  return out;
}

std::string to_string(PairSampling mode) {
  switch (mode) {
    case PairSampling::stratified: return "stratified";
    case PairSampling::uniform: return "uniform";
    case PairSampling::magnitude: return "magnitude";
  }
  return "unknown";
}

PairSampling parse_pair_sampling(const std::string& name) {
  if (name == "stratified") return PairSampling::stratified;
  if (name == "uniform") return PairSampling::uniform;
  if (name == "magnitude") return PairSampling::magnitude;
  throw ConfigError("unknown pair sampling '" + name + "'");
}

void validate_subsystem(const ComplexMatrix& rho) {
  if (rho.rows() != rho.cols() || rho.rows() == 0) {
    throw ConfigError("initial subsystem matrix must be square");
  }
  if (max_abs(rho) == 0.0) throw ConfigError("initial subsystem matrix is zero");
  if (max_abs(rho - rho.adjoint()) > 1e-12) {
    throw ConfigError("initial subsystem matrix is not Hermitian");
  }
  if (std::abs(rho.trace() - Complex(1.0)) > 1e-10) {
    throw ConfigError("initial subsystem matrix must have unit trace");
  }
}

PairTable adiabatic_elements(const ComplexMatrix& rho, const ComplexMatrix& vectors) {
  if (rho.rows() != vectors.rows()) {
    throw DimensionError("initial subsystem matrix does not match the model levels");
  }
  const ComplexMatrix w = vectors.adjoint() * rho * vectors;
  const double cutoff = 1e-14 * max_abs(w);
  PairTable table;
  for (int a = 0; a < w.rows(); ++a) {
    for (int b = 0; b < w.cols(); ++b) {
      if (std::abs(w(a, b)) > cutoff) {
        table.pairs.push_back({a, b});
        table.values.push_back(w(a, b));
      }
    }
  }
  if (table.pairs.empty()) throw ConfigError("initial subsystem matrix is zero");
  return table;
}

PairChoice choose_pair(const PairTable& table, PairSampling mode, std::size_t trajectory,
                       RandomStream& rng) {
  const std::size_t k = table.pairs.size();
  if (k == 0) throw Error("choose_pair: empty pair table");
  switch (mode) {
    case PairSampling::stratified: {
      const std::size_t i = trajectory % k;
      return {table.pairs[i], table.values[i] * static_cast<double>(k)};
    }
    case PairSampling::uniform: {
      const std::size_t i = rng.below(k);
      return {table.pairs[i], table.values[i] * static_cast<double>(k)};
    }
    case PairSampling::magnitude: {
      double total = 0.0;
      for (const auto& v : table.values) total += std::abs(v);
      double u = rng.uniform() * total;
      std::size_t i = 0;
      for (; i + 1 < k; ++i) {
        u -= std::abs(table.values[i]);
        if (u < 0.0) break;
      }
      const double prob = std::abs(table.values[i]) / total;
      return {table.pairs[i], table.values[i] / prob};
    }
  }
  throw Error("choose_pair: unknown mode");
}

PairChoice initial_subsystem(const AdiabaticFrame& frame, const ComplexMatrix& rho,
                             PairSampling mode, std::size_t trajectory, RandomStream& rng) {
  validate_subsystem(rho);
  return choose_pair(adiabatic_elements(rho, frame.vectors), mode, trajectory, rng);
}

}  // namespace qclsim
