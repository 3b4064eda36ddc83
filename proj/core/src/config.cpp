#include "qclsim/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace qclsim {

using json = nlohmann::json;

namespace {

// Reads keys from one JSON object and remembers them; finish() rejects the rest.
class Reader {
 public:
  Reader(const json& obj, std::string where) : obj_(obj), where_(std::move(where)) {
    if (!obj_.is_object()) throw ConfigError(where_ + ": expected an object");
  }

  template <typename T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    auto it = obj_.find(key);
    if (it == obj_.end()) return;
    try {
      out = it->template get<T>();
    } catch (const json::exception&) {
      throw ConfigError(where_ + "." + key + ": wrong type");
    }
  }

  const json* child(const char* key) {
    seen_.insert(key);
    auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!seen_.count(it.key())) {
        throw ConfigError("unknown key '" + it.key() + "' in " + where_);
      }
    }
  }

 private:
  const json& obj_;
  std::string where_;
  std::set<std::string> seen_;
};

Complex complex_from(const json& v) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  throw ConfigError("initial.subsystem: entries must be numbers or [re, im]");
}

json complex_to(Complex c) {
  if (c.imag() == 0.0) return c.real();
  return json::array({c.real(), c.imag()});
}

void read_model(const json& j, ModelConfig& m) {
  Reader r(j, "model");
  r.get("name", m.name);
  if (m.name == "two_level_quartic") {
    r.get("omega", m.omega);
    r.get("a", m.a);
    r.get("b", m.b);
    r.get("gamma0", m.gamma0);
    r.get("mass", m.mass);
    r.get("hbar", m.hbar);
  } else if (m.name == "two_level_harmonic") {
    r.get("omega", m.omega);
    r.get("frequencies", m.frequencies);
    r.get("couplings", m.couplings);
    r.get("mass", m.mass);
    r.get("hbar", m.hbar);
  } else if (m.name == "spin_bath") {
    r.get("omega", m.omega);
    r.get("c1", m.c1);
    r.get("c2", m.c2);
    r.get("mu", m.mu);
    r.get("b_field", m.b_field);
    r.get("hbar", m.hbar);
  } else {
    throw ConfigError("unknown model '" + m.name + "'");
  }
  r.finish();
}

json write_model(const ModelConfig& m) {
  json j;
  j["name"] = m.name;
  if (m.name == "two_level_quartic") {
    j["omega"] = m.omega;
    j["a"] = m.a;
    j["b"] = m.b;
    j["gamma0"] = m.gamma0;
    j["mass"] = m.mass;
    j["hbar"] = m.hbar;
  } else if (m.name == "two_level_harmonic") {
    j["omega"] = m.omega;
    j["frequencies"] = m.frequencies;
    j["couplings"] = m.couplings;
    j["mass"] = m.mass;
    j["hbar"] = m.hbar;
  } else {
    j["omega"] = m.omega;
    j["c1"] = m.c1;
    j["c2"] = m.c2;
    j["mu"] = m.mu;
    j["b_field"] = m.b_field;
    j["hbar"] = m.hbar;
  }
  return j;
}

void read_bath(const json& j, BathConfig& b) {
  Reader r(j, "bath");
  r.get("type", b.type);
  r.get("zeta", b.zeta);
  r.get("temperature", b.temperature);
  r.get("k_b", b.k_b);
  r.get("m_eta", b.m_eta);
  r.get("m_eta2", b.m_eta2);
  r.get("n_thermostatted", b.n_thermostatted);
  r.get("noise", b.noise);
  r.finish();
}

json write_bath(const BathConfig& b) {
  return {{"type", b.type},       {"zeta", b.zeta},         {"temperature", b.temperature},
          {"k_b", b.k_b},         {"m_eta", b.m_eta},       {"m_eta2", b.m_eta2},
          {"n_thermostatted", b.n_thermostatted}, {"noise", b.noise}};
}

void read_dynamics(const json& j, DynamicsConfig& d) {
  Reader r(j, "dynamics");
  r.get("dt", d.dt);
  r.get("n_steps", d.n_steps);
  r.get("n_traj", d.n_traj);
  if (const json* t = r.child("transitions")) {
    if (t->is_boolean()) {
      d.transitions = t->get<bool>();
    } else if (t->is_string() && (*t == "on" || *t == "off")) {
      d.transitions = *t == "on";
    } else {
      throw ConfigError("dynamics.transitions must be \"on\" or \"off\"");
    }
  }
  r.get("frustrated_policy", d.frustrated_policy);
  r.get("output_every", d.output_every);
  r.finish();
}

json write_dynamics(const DynamicsConfig& d) {
  return {{"dt", d.dt},
          {"n_steps", d.n_steps},
          {"n_traj", d.n_traj},
          {"transitions", d.transitions ? "on" : "off"},
          {"frustrated_policy", d.frustrated_policy},
          {"output_every", d.output_every}};
}

void read_initial(const json& j, InitialConfig& in) {
  Reader r(j, "initial");
  if (const json* s = r.child("subsystem")) {
    if (!s->is_array() || s->empty()) throw ConfigError("initial.subsystem must be a matrix");
    in.subsystem.clear();
    for (const auto& row : *s) {
      if (!row.is_array()) throw ConfigError("initial.subsystem rows must be arrays");
      std::vector<Complex> out;
      for (const auto& v : row) out.push_back(complex_from(v));
      in.subsystem.push_back(std::move(out));
    }
  }
  r.get("bath", in.bath);
  r.get("temperature", in.temperature);
  r.get("q", in.q);
  r.get("p", in.p);
  r.get("spin", in.spin);
  r.get("wigner_omega", in.wigner_omega);
  r.get("pair_sampling", in.pair_sampling);
  r.finish();
}

json write_initial(const InitialConfig& in) {
  json rows = json::array();
  for (const auto& row : in.subsystem) {
    json jr = json::array();
    for (const auto& v : row) jr.push_back(complex_to(v));
    rows.push_back(jr);
  }
  return {{"subsystem", rows},       {"bath", in.bath},
          {"temperature", in.temperature}, {"q", in.q},
          {"p", in.p},               {"spin", in.spin},
          {"wigner_omega", in.wigner_omega}, {"pair_sampling", in.pair_sampling}};
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

}  // namespace

ComplexMatrix RunConfig::subsystem_matrix() const {
  const auto n = static_cast<Eigen::Index>(initial.subsystem.size());
  ComplexMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (static_cast<Eigen::Index>(initial.subsystem[i].size()) != n) {
      throw ConfigError("initial.subsystem must be square");
    }
    for (Eigen::Index k = 0; k < n; ++k) m(i, k) = initial.subsystem[i][k];
  }
  return m;
}

void validate(const RunConfig& c) {
  const auto& m = c.model;
  require(m.mass > 0.0 && m.hbar > 0.0, "model: mass and hbar must be > 0");
  if (m.name == "two_level_quartic") require(m.a > 0.0, "model: quartic coefficient a must be > 0");
  if (m.name == "two_level_harmonic") {
    require(!m.frequencies.empty() && m.frequencies.size() == m.couplings.size(),
            "model: frequencies and couplings must have equal, nonzero length");
    for (double w : m.frequencies) require(w > 0.0, "model: frequencies must be > 0");
  }

  const auto& b = c.bath;
  static const std::set<std::string> baths{"hamiltonian", "langevin", "nose_hoover", "nhc", "spin"};
  require(baths.count(b.type) == 1, "bath: unknown type '" + b.type + "'");
  require((b.type == "spin") == (m.name == "spin_bath"),
          "bath: type 'spin' goes with model 'spin_bath' and only with it");
  require(b.zeta >= 0.0, "bath: zeta must be >= 0");
  require(b.temperature > 0.0 && b.k_b > 0.0, "bath: temperature and k_b must be > 0");
  require(b.m_eta > 0.0 && b.m_eta2 > 0.0, "bath: m_eta and m_eta2 must be > 0");
  require(b.n_thermostatted >= 1, "bath: n_thermostatted must be >= 1");

  const auto& d = c.dynamics;
  require(d.dt > 0.0 && std::isfinite(d.dt), "dynamics: dt must be > 0");
  require(d.n_steps >= 1, "dynamics: n_steps must be >= 1");
  require(d.n_traj >= 1, "dynamics: n_traj must be >= 1");
  require(d.output_every >= 1, "dynamics: output_every must be >= 1");
  require(d.frustrated_policy == "reject" || d.frustrated_policy == "reverse",
          "dynamics: frustrated_policy must be reject or reverse");

  const auto& in = c.initial;
  require(in.pair_sampling == "stratified" || in.pair_sampling == "uniform" ||
              in.pair_sampling == "magnitude",
          "initial: pair_sampling must be stratified, uniform or magnitude");
  require(in.temperature > 0.0, "initial: temperature must be > 0");
  if (c.spin()) {
    require(in.bath == "sphere" || in.bath == "point", "initial: spin runs use sphere or point");
    require(in.spin.size() == 3, "initial: spin must have three components");
    const double norm = std::sqrt(in.spin[0] * in.spin[0] + in.spin[1] * in.spin[1] +
                                  in.spin[2] * in.spin[2]);
    require(norm > 0.0, "initial: spin must be nonzero");
  } else {
    require(in.bath == "canonical" || in.bath == "wigner" || in.bath == "point",
            "initial: bath must be canonical, wigner or point");
    const std::size_t dof = m.name == "two_level_harmonic" ? m.frequencies.size() : 1;
    if (in.bath == "point") {
      require(in.q.size() == dof && in.p.size() == dof,
              "initial: point needs q and p of the bath dimension");
    }
    if (in.bath == "wigner") {
      require(!in.wigner_omega.empty() || m.name == "two_level_harmonic",
              "initial: wigner sampling needs wigner_omega for this model");
      if (!in.wigner_omega.empty()) {
        require(in.wigner_omega.size() == dof, "initial: wigner_omega has wrong length");
      }
    }
  }
  const ComplexMatrix rho = c.subsystem_matrix();
  require(rho.rows() == 2, "initial: subsystem must be 2x2 for the available models");
  require(max_abs(rho - rho.adjoint()) <= 1e-12, "initial: subsystem must be Hermitian");
  require(std::abs(rho.trace() - Complex(1.0)) <= 1e-10, "initial: subsystem must have unit trace");

  require(!c.observables.empty(), "observables: at least one is required");
  static const std::set<std::string> canonical_obs{"identity", "sx", "sy", "sz", "Q", "P", "H"};
  static const std::set<std::string> spin_obs{"identity", "sx", "sy", "sz", "Sx", "Sy", "Sz", "H"};
  for (const auto& o : c.observables) {
    require((c.spin() ? spin_obs : canonical_obs).count(o) == 1,
            "observables: unknown observable '" + o + "'");
  }
  require(!c.output.empty(), "output: path must be nonempty");
}

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig c;
  Reader r(j, "config");
  if (const json* m = r.child("model")) read_model(*m, c.model);
  if (const json* b = r.child("bath")) read_bath(*b, c.bath);
  if (const json* d = r.child("dynamics")) read_dynamics(*d, c.dynamics);
  if (const json* i = r.child("initial")) read_initial(*i, c.initial);
  r.get("observables", c.observables);
  r.get("seed", c.seed);
  r.get("output", c.output);
  r.finish();
  validate(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string to_json(const RunConfig& c, int indent) {
  json j;
  j["model"] = write_model(c.model);
  j["bath"] = write_bath(c.bath);
  j["dynamics"] = write_dynamics(c.dynamics);
  j["initial"] = write_initial(c.initial);
  j["observables"] = c.observables;
  j["seed"] = c.seed;
  j["output"] = c.output;
  return j.dump(indent);
}

}  // namespace qclsim
