#include "qclsim/run.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

#include "json.hpp"
#include "qclsim/fields.hpp"
#include "qclsim/sampling.hpp"
#include "qclsim/spin.hpp"

namespace qclsim {

namespace {

struct Chunk {
  int block;
  std::size_t begin;
  std::size_t end;
};

std::vector<Chunk> make_chunks(std::size_t n) {
  std::vector<Chunk> chunks;
  for (int b = 0; b < kStderrBlocks; ++b) {
    const auto [lo, hi] = block_range(n, b);
    for (std::size_t s = lo; s < hi; s += kChunkSize) {
      chunks.push_back({b, s, std::min(hi, s + kChunkSize)});
    }
  }
  return chunks;
}

struct Grid {
  std::int64_t every;
  std::vector<double> times;
};

Grid make_grid(const DynamicsConfig& d) {
  Grid g{d.output_every, {}};
  for (std::int64_t k = 0; k <= d.n_steps; k += d.output_every) {
    g.times.push_back(static_cast<double>(k) * d.dt);
  }
  return g;
}

double relative_drift(double e, double e0) {
  return std::abs(e - e0) / std::max(std::abs(e0), 1.0);
}

bool finite(Complex c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); }

// Initial ensemble drawn sequentially from the sampling stream.
struct Initial {
  std::vector<Vector> q;
  std::vector<Vector> p;
  std::vector<Vector3> s;
  std::vector<Pair> pair;
  std::vector<Complex> w0;
};

std::shared_ptr<const CanonicalModel> make_model(const ModelConfig& m) {
  if (m.name == "two_level_quartic") {
    return std::make_shared<TwoLevelQuartic>(
        TwoLevelQuartic::Params{m.omega, m.a, m.b, m.gamma0, m.mass, m.hbar});
  }
  if (m.name == "two_level_harmonic") {
    TwoLevelHarmonic::Params p;
    p.omega = m.omega;
    p.frequencies = Eigen::Map<const Vector>(m.frequencies.data(),
                                             static_cast<Eigen::Index>(m.frequencies.size()));
    p.couplings = Eigen::Map<const Vector>(m.couplings.data(),
                                           static_cast<Eigen::Index>(m.couplings.size()));
    p.mass = m.mass;
    p.hbar = m.hbar;
    return std::make_shared<TwoLevelHarmonic>(p);
  }
  throw ConfigError("model '" + m.name + "' is not a canonical model");
}

SpinBathModel make_spin_model(const ModelConfig& m) {
  return SpinBathModel{m.omega, m.c1, m.c2, m.mu, m.b_field, m.hbar};
}

SstpOptions make_options(const RunConfig& c) {
  SstpOptions o;
  o.dt = c.dynamics.dt;
  o.bath = parse_bath_kind(c.bath.type);
  o.langevin = LangevinParams{c.bath.zeta, c.bath.temperature, c.bath.k_b, c.bath.noise};
  o.m_eta = c.bath.m_eta;
  o.m_eta2 = c.bath.m_eta2;
  o.temperature = c.bath.temperature;
  o.n_thermostatted = c.bath.n_thermostatted;
  o.transitions = c.dynamics.transitions;
  o.frustrated = parse_frustrated_policy(c.dynamics.frustrated_policy);
  return o;
}

Vector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Initial sample_canonical_initial(const RunConfig& c, const CanonicalModel& model) {
  const auto n = static_cast<std::size_t>(c.dynamics.n_traj);
  RandomStream rng(c.seed, kSamplingStream);
  Initial init;
  if (c.initial.bath == "canonical") {
    for (auto& pt : sample_canonical(model, c.initial.temperature, n, rng, c.bath.k_b)) {
      init.q.push_back(std::move(pt.q));
      init.p.push_back(std::move(pt.p));
    }
  } else if (c.initial.bath == "wigner") {
    Vector omega = c.initial.wigner_omega.empty() ? *model.harmonic_frequencies()
                                                  : to_vector(c.initial.wigner_omega);
    for (auto& pt : sample_wigner_gaussian(model.mass(), omega, model.hbar(), n, rng)) {
      init.q.push_back(std::move(pt.q));
      init.p.push_back(std::move(pt.p));
    }
  } else {
    init.q.assign(n, to_vector(c.initial.q));
    init.p.assign(n, to_vector(c.initial.p));
  }
  const ComplexMatrix rho = c.subsystem_matrix();
  validate_subsystem(rho);
  const PairSampling mode = parse_pair_sampling(c.initial.pair_sampling);
  for (std::size_t i = 0; i < n; ++i) {
    const AdiabaticFrame frame = build_frame(model, init.q[i]);
    const PairChoice choice = choose_pair(adiabatic_elements(rho, frame.vectors), mode, i, rng);
    init.pair.push_back(choice.pair);
    init.w0.push_back(choice.w0);
  }
  return init;
}

Initial sample_spin_initial(const RunConfig& c, const SpinBathModel& model) {
  const auto n = static_cast<std::size_t>(c.dynamics.n_traj);
  RandomStream rng(c.seed, kSamplingStream);
  Initial init;
  if (c.initial.bath == "sphere") {
    init.s = sample_sphere(n, rng);
  } else {
    const Vector3 s(c.initial.spin[0], c.initial.spin[1], c.initial.spin[2]);
    init.s.assign(n, s.normalized());
  }
  const ComplexMatrix rho = c.subsystem_matrix();
  validate_subsystem(rho);
  const PairSampling mode = parse_pair_sampling(c.initial.pair_sampling);
  for (std::size_t i = 0; i < n; ++i) {
    const SpinFrame frame = build_spin_frame(model, init.s[i]);
    const PairChoice choice = choose_pair(adiabatic_elements(rho, frame.vectors), mode, i, rng);
    init.pair.push_back(choice.pair);
    init.w0.push_back(choice.w0);
  }
  return init;
}

template <typename Body>
std::vector<EnsembleAccumulator> run_pool(std::size_t n_traj, int threads,
                                          const EnsembleAccumulator& prototype, Body body) {
  const std::vector<Chunk> chunks = make_chunks(n_traj);
  std::vector<std::optional<EnsembleAccumulator>> results(chunks.size());
  std::vector<std::exception_ptr> errors(chunks.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t k = next++; k < chunks.size(); k = next++) {
      try {
        EnsembleAccumulator acc = prototype;
        for (std::size_t i = chunks[k].begin; i < chunks[k].end; ++i) body(i, acc);
        results[k] = std::move(acc);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const int workers = resolve_threads(threads, chunks.size());
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::vector<EnsembleAccumulator> blocks(kStderrBlocks, prototype);
  for (std::size_t k = 0; k < chunks.size(); ++k) blocks[chunks[k].block].merge(*results[k]);
  return blocks;
}

EnsembleEstimate simulate_canonical(const RunConfig& c, int threads) {
  const auto model = make_model(c.model);
  const SstpPropagator prop(model, make_options(c));
  const Initial init = sample_canonical_initial(c, *model);
  const Grid grid = make_grid(c.dynamics);
  std::vector<OperatorField> fields;
  for (const auto& name : c.observables) fields.push_back(canonical_observable(name, model));

  const auto body = [&](std::size_t i, EnsembleAccumulator& acc) {
    RandomStream rng(c.seed, i);
    TrajectoryState st = prop.make_state(init.q[i], init.p[i], init.pair[i]);
    AdiabaticFrame frame = prop.frame_at(st.x.q);
    const double e0 = prop.energy(st, frame);
    Vector x(2 * st.x.q.size());
    const auto record = [&](std::size_t t) {
      if (!std::isfinite(st.weight) || !finite(st.phase) || !st.x.p.allFinite()) {
        throw TrajectoryFailure(i, "non-finite trajectory state");
      }
      x << st.x.q, st.x.p;
      for (std::size_t o = 0; o < fields.size(); ++o) {
        const ComplexMatrix chi = frame.to_adiabatic(fields[o](x));
        acc.add(o, t, st.weight * st.phase * chi(st.pair.second, st.pair.first) * init.w0[i]);
      }
      acc.add_weight(t, std::abs(st.weight));
      acc.add_drift(t, relative_drift(prop.energy(st, frame), e0));
    };
    try {
      record(0);
      for (std::int64_t k = 1; k <= c.dynamics.n_steps; ++k) {
        prop.step(st, frame, rng);
        if (k % grid.every == 0) record(static_cast<std::size_t>(k / grid.every));
      }
    } catch (const TrajectoryFailure&) {
      throw;
    } catch (const NumericalError& e) {
      throw TrajectoryFailure(i, e.what());
    }
    acc.count_trajectory();
  };
  const EnsembleAccumulator prototype(fields.size(), grid.times.size());
  return estimate(run_pool(init.q.size(), threads, prototype, body), grid.times, c.observables);
}

EnsembleEstimate simulate_spin(const RunConfig& c, int threads) {
  const SpinBathModel model = make_spin_model(c.model);
  const Initial init = sample_spin_initial(c, model);
  const Grid grid = make_grid(c.dynamics);
  std::vector<OperatorField> fields;
  for (const auto& name : c.observables) fields.push_back(spin_observable(name, model));

  const auto body = [&](std::size_t i, EnsembleAccumulator& acc) {
    RandomStream rng(c.seed, i);
    SpinState st;
    st.s = init.s[i];
    st.pair = init.pair[i];
    SpinFrame frame = build_spin_frame(model, st.s);
    const double e0 = spin_surface_energy(model, st.s, st.pair);
    const auto record = [&](std::size_t t) {
      const Complex phase = st.phase_dyn * st.phase_geo;
      if (!std::isfinite(st.weight) || !finite(phase) || !st.s.allFinite()) {
        throw TrajectoryFailure(i, "non-finite trajectory state");
      }
      const Vector x = st.s;
      for (std::size_t o = 0; o < fields.size(); ++o) {
        const ComplexMatrix chi = frame.to_adiabatic(fields[o](x));
        acc.add(o, t, st.weight * phase * chi(st.pair.second, st.pair.first) * init.w0[i]);
      }
      acc.add_weight(t, std::abs(st.weight));
      acc.add_drift(t, relative_drift(spin_surface_energy(model, st.s, st.pair), e0),
                    std::abs(st.s.norm() - 1.0));
    };
    try {
      record(0);
      for (std::int64_t k = 1; k <= c.dynamics.n_steps; ++k) {
        spin_sstp_step(st, model, c.dynamics.dt, c.dynamics.transitions, frame, rng);
        if (k % grid.every == 0) record(static_cast<std::size_t>(k / grid.every));
      }
    } catch (const TrajectoryFailure&) {
      throw;
    } catch (const NumericalError& e) {
      throw TrajectoryFailure(i, e.what());
    }
    acc.count_trajectory();
  };
  const EnsembleAccumulator prototype(fields.size(), grid.times.size(), true);
  return estimate(run_pool(init.s.size(), threads, prototype, body), grid.times, c.observables);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

TrajectoryFailure::TrajectoryFailure(std::size_t index, const std::string& what)
    : NumericalError("trajectory " + std::to_string(index) + ": " + what), index_(index) {}

int resolve_threads(int requested, std::size_t tasks) {
  int n = requested;
  if (n <= 0) {
    if (const char* env = std::getenv("QCLSIM_THREADS")) n = std::atoi(env);
  }
  if (n <= 0) n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  return static_cast<int>(std::max<std::size_t>(1, std::min<std::size_t>(n, tasks)));
}

EnsembleEstimate simulate(const RunConfig& config, int threads) {
  validate(config);
  return config.spin() ? simulate_spin(config, threads) : simulate_canonical(config, threads);
}

std::string series_csv(const EnsembleEstimate& est) {
  std::string out = "t";
  for (const auto& name : est.names) out += "," + name + "_re," + name + "_im," + name + "_stderr";
  out += ",mean_abs_weight,energy_drift,casimir_drift\n";
  for (std::size_t t = 0; t < est.times.size(); ++t) {
    out += format_double(est.times[t]);
    for (std::size_t o = 0; o < est.names.size(); ++o) {
      out += "," + format_double(est.mean[o][t].real());
      out += "," + format_double(est.mean[o][t].imag());
      out += "," + format_double(est.std_error[o][t]);
    }
    out += "," + format_double(est.mean_abs_weight[t]);
    out += "," + format_double(est.energy_drift[t]);
    out += "," + format_double(est.casimir_drift.empty() ? 0.0 : est.casimir_drift[t]);
    out += "\n";
  }
  return out;
}

int run(const RunConfig& config, const RunOptions& options) {
  std::ostream& log = options.log ? *options.log : std::cerr;
  const auto start = std::chrono::steady_clock::now();
  EnsembleEstimate est;
  try {
    est = simulate(config, options.threads);
  } catch (const ConfigError& e) {
    log << "qclsim: invalid config: " << e.what() << "\n";
    return 2;
  } catch (const TrajectoryFailure& e) {
    log << "qclsim: numerical failure in trajectory " << e.index() << ": " << e.what() << "\n";
    return 3;
  } catch (const NumericalError& e) {
    log << "qclsim: numerical failure: " << e.what() << "\n";
    return 3;
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(config.output, ec);
  if (ec) {
    log << "qclsim: cannot create output directory '" << config.output << "': " << ec.message()
        << "\n";
    return 1;
  }
  {
    std::ofstream csv(fs::path(config.output) / "series.csv", std::ios::binary);
    csv << series_csv(est);
    if (!csv) {
      log << "qclsim: failed writing series.csv\n";
      return 1;
    }
  }
  nlohmann::json meta;
  meta["config"] = nlohmann::json::parse(to_json(config));
  meta["version"] = "0.1.0";
  meta["eigen_version"] = std::to_string(EIGEN_WORLD_VERSION) + "." +
                          std::to_string(EIGEN_MAJOR_VERSION) + "." +
                          std::to_string(EIGEN_MINOR_VERSION);
  meta["seed"] = config.seed;
  meta["wall_time_s"] = wall;
  meta["threads"] = resolve_threads(options.threads, make_chunks(config.dynamics.n_traj).size());
  meta["stderr_blocks"] = kStderrBlocks;
  std::ofstream(fs::path(config.output) / "meta.json", std::ios::binary) << meta.dump(2) << "\n";
  return 0;
}

int run_file(const std::string& path, const RunOptions& options) {
  RunConfig config;
  try {
    config = load_config(path);
  } catch (const ConfigError& e) {
    (options.log ? *options.log : std::cerr) << "qclsim: invalid config: " << e.what() << "\n";
    return 2;
  }
  return run(config, options);
}

}  // namespace qclsim
