#include "qclsim/check.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "qclsim/adiabatic.hpp"
#include "qclsim/baths.hpp"
#include "qclsim/bracket.hpp"
#include "qclsim/fields.hpp"
#include "qclsim/sampling.hpp"
#include "qclsim/spin.hpp"
#include "qclsim/sstp.hpp"

namespace qclsim {

namespace {

constexpr std::uint64_t kCheckSeed = 20240611;

CheckItem below(std::string name, double value, double tol, std::string detail = {}) {
  return {std::move(name), value <= tol, value, tol, std::move(detail)};
}

CheckItem above(std::string name, double value, double tol, std::string detail = {}) {
  return {std::move(name), value > tol, value, tol, std::move(detail)};
}

Vector random_point(const NamedField& f, RandomStream& rng) {
  Vector x(f.field.dimension());
  for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = 2.0 * rng.uniform() - 1.0;
  if (f.kind == StructureKind::spin) x.normalize();
  return x;
}

std::vector<CheckItem> bracket_suite() {
  std::vector<CheckItem> out;
  RandomStream rng(kCheckSeed, 1);
  double anti = 0.0;
  double self = 0.0;
  for (const auto& name : catalog_names()) {
    const NamedField f = catalog_field(name);
    const NamedField h = catalog_hamiltonian(f.kind);
    const StructureMatrix b = structure_for(f.kind);
    const int n = std::max(f.field.levels(), h.field.levels());
    const OperatorField a = lift(f.field, n);
    const OperatorField hh = lift(h.field, n);
    for (int k = 0; k < 5; ++k) {
      const Vector x = random_point(f, rng);
      const auto ab = quasi_lie_bracket(a, hh, b, x, 1.0).value;
      const auto ba = quasi_lie_bracket(hh, a, b, x, 1.0).value;
      anti = std::max(anti, max_abs(ab + ba));
      self = std::max(self, max_abs(quasi_lie_bracket(hh, hh, b, x, 1.0).value));
    }
  }
  out.push_back(below("antisymmetry", anti, 1e-10));
  out.push_back(below("hamiltonian_self_bracket", self, 1e-10));

  const StructureMatrix canon = StructureMatrix::canonical(1);
  Vector x(2);
  x << 1.0, 1.0;
  const auto field = [](const char* name) { return catalog_field(name).field; };
  const double classical = jacobi_residual(field("Q"), field("P"), field("Q2P"), canon, x, 1.0);
  const double quantum = jacobi_residual(field("sx"), field("sy"), field("sz"), canon, x, 1.0);
  const auto triple = mixed_jacobi_triple();
  const double mixed = jacobi_residual(field(triple[0].c_str()), field(triple[1].c_str()),
                                       field(triple[2].c_str()), canon, x, 1.0);
  out.push_back(below("jacobi_classical", classical, kJacobiTolerance));
  out.push_back(below("jacobi_quantum", quantum, kJacobiTolerance));
  out.push_back(above("jacobi_mixed", mixed, 10.0 * kJacobiTolerance));
  return out;
}

std::vector<CheckItem> adiabatic_suite() {
  std::vector<CheckItem> out;
  TwoLevelQuartic::Params params;
  params.gamma0 = 0.7;
  const TwoLevelQuartic model(params);
  double hf = 0.0;
  double coupling = 0.0;
  for (double q0 : {-1.3, -0.4, 0.0, 0.25, 1.1}) {
    Vector q(1);
    q << q0;
    const AdiabaticFrame frame = build_frame(model, q);
    const double h = 1e-5;
    Vector qp = q, qm = q;
    qp[0] += h;
    qm[0] -= h;
    const Vector ep = build_frame(model, qp).energies;
    const Vector em = build_frame(model, qm).energies;
    for (int a = 0; a < 2; ++a) {
      hf = std::max(hf, std::abs(frame.forces(a, 0) + (ep[a] - em[a]) / (2 * h)));
    }
    const ComplexMatrix dh = frame.to_adiabatic(model.h_gradient(q)[0]);
    const Complex lhs = frame.couplings[0](0, 1) * (frame.energies[1] - frame.energies[0]);
    coupling = std::max(coupling, std::abs(lhs - dh(0, 1)));
  }
  out.push_back(below("hellmann_feynman_forces", hf, 1e-6));
  out.push_back(below("offdiagonal_coupling_identity", coupling, 1e-6));

  double worst_overlap = 1.0;
  Vector q(1);
  q << -1.5;
  AdiabaticFrame prev = build_frame(model, q);
  for (int k = 0; k < 300; ++k) {
    q[0] += 0.01;
    AdiabaticFrame next = build_frame(model, q, &prev);
    for (int a = 0; a < 2; ++a) {
      worst_overlap = std::min(worst_overlap, prev.vectors.col(a).dot(next.vectors.col(a)).real());
    }
    prev = std::move(next);
  }
  out.push_back(above("gauge_continuity", worst_overlap, 0.0, "min Re <v(t)|v(t+dt)>"));
  return out;
}

std::vector<CheckItem> jump_suite() {
  std::vector<CheckItem> out;
  RandomStream rng(kCheckSeed, 2);
  double worst = 0.0;
  int misclassified = 0;
  for (int k = 0; k < 20000; ++k) {
    const int dim = 1 + static_cast<int>(rng.below(3));
    const double mass = 0.1 + 10.0 * rng.uniform();
    Vector p(dim), d(dim);
    for (int i = 0; i < dim; ++i) {
      p[i] = 4.0 * rng.normal();
      d[i] = rng.normal();
    }
    d.normalize();
    const double de = 10.0 * (2.0 * rng.uniform() - 1.0);
    const JumpResult r = momentum_jump(p, d, de, mass);
    const double along = p.dot(d);
    const bool frustrated = along * along + 2.0 * mass * de < 0.0;
    if (frustrated != std::holds_alternative<Frustrated>(r)) ++misclassified;
    if (const auto* pn = std::get_if<Vector>(&r)) {
      const double before = p.squaredNorm() / (2 * mass) + de;
      const double after = pn->squaredNorm() / (2 * mass);
      worst = std::max(worst, std::abs(after - before) / std::max(1.0, std::abs(before)));
    }
  }
  out.push_back(below("momentum_jump_energy_conservation", worst, 1e-12));
  out.push_back(below("frustration_classification", misclassified, 0.0));
  return out;
}

std::vector<CheckItem> thermostat_suite() {
  std::vector<CheckItem> out;
  TwoLevelHarmonic::Params params;
  params.couplings = Vector::Constant(1, 0.3);
  const auto model = std::make_shared<TwoLevelHarmonic>(params);
  const MeanSurface surface = mean_surface(*model, Pair{0, 0});
  BathState s0{Vector::Constant(1, 0.7), Vector::Constant(1, -0.4), Vector(), Vector()};

  LangevinParams off{0.0, 1.0, 1.0, true};
  RandomStream rng(kCheckSeed, 3);
  BathState a = s0, b = s0;
  double diff = 0.0;
  for (int k = 0; k < 1000; ++k) {
    a = langevin_step(a, surface, model->mass(), off, 0.01, rng);
    b = classical_step(b, surface, model->mass(), 0.01);
    diff = std::max({diff, (a.q - b.q).cwiseAbs().maxCoeff(), (a.p - b.p).cwiseAbs().maxCoeff()});
  }
  out.push_back(below("langevin_zero_friction_identity", diff, 0.0));

  const NoseExtension nose{model, 1.0, 1.0, 1, 1.0};
  BathState n0 = s0;
  n0.eta_q = Vector::Constant(1, 0.1);
  n0.eta_p = Vector::Constant(1, 0.2);
  BathState n = n0;
  for (int k = 0; k < 100; ++k) n = nose_hoover_step(n, surface, nose, 0.01);
  for (int k = 0; k < 100; ++k) n = nose_hoover_step(n, surface, nose, -0.01);
  const double rev = std::max({(n.q - n0.q).cwiseAbs().maxCoeff(), (n.p - n0.p).cwiseAbs().maxCoeff(),
                               std::abs(n.eta_q[0] - n0.eta_q[0]), std::abs(n.eta_p[0] - n0.eta_p[0])});
  out.push_back(below("nose_hoover_reversibility", rev, 1e-10));

  const NhcExtension chain{model, 1.0, 1.0, 1.0, 1, 1.0};
  BathState c0 = s0;
  c0.eta_q = Vector::Constant(2, 0.1);
  c0.eta_p = Vector::Constant(2, 0.2);
  BathState c = c0;
  for (int k = 0; k < 100; ++k) c = nhc_step(c, surface, chain, 0.01);
  for (int k = 0; k < 100; ++k) c = nhc_step(c, surface, chain, -0.01);
  const double crev = std::max({(c.q - c0.q).cwiseAbs().maxCoeff(), (c.p - c0.p).cwiseAbs().maxCoeff(),
                                (c.eta_q - c0.eta_q).cwiseAbs().maxCoeff(),
                                (c.eta_p - c0.eta_p).cwiseAbs().maxCoeff()});
  out.push_back(below("nhc_reversibility", crev, 1e-10));

  // Running integral of kappa against beta * change of H^T.
  BathState t = n0;
  const double dt = 1e-3;
  const auto free_energy = [&](const BathState& st) {
    return thermostat_free_energy(nose, build_frame(*model, st.q), 0, st);
  };
  const double h0 = free_energy(t);
  double integral = 0.0;
  double kprev = compressibility(t, nose);
  for (int k = 0; k < 1000; ++k) {
    t = nose_hoover_step(t, surface, nose, dt);
    const double knext = compressibility(t, nose);
    integral += 0.5 * dt * (kprev + knext);
    kprev = knext;
  }
  const double beta_dh = (free_energy(t) - h0) / nose.kt();
  out.push_back(below("compressibility_integral", std::abs(integral - beta_dh), 1e-4,
                      "|int kappa dt - beta dH^T|"));
  return out;
}

std::vector<CheckItem> spin_suite() {
  std::vector<CheckItem> out;
  const SpinBathModel model;
  Vector3 s = Vector3(0.3, -0.5, 0.8).normalized();
  const auto grad = [&](const Vector3& v) { return mean_spin_gradient(model, v, Pair{0, 0}); };
  double casimir = 0.0;
  for (int k = 0; k < 10000; ++k) {
    s = spin_step(s, grad, 0.01);
    casimir = std::max(casimir, std::abs(s.squaredNorm() - 1.0));
  }
  out.push_back(below("casimir_conservation", casimir, 1e-12));

  const double b = 1.7;
  const auto zfield = [b](const Vector3&) { return Vector3(0.0, 0.0, b); };
  Vector3 p(1.0, 0.0, 0.0);
  const int steps = 1000;
  const double dt = M_PI / (2.0 * b) / steps;
  for (int k = 0; k < steps; ++k) p = spin_step(p, zfield, dt);
  out.push_back(below("precession", (p - Vector3(0.0, 1.0, 0.0)).cwiseAbs().maxCoeff(), 1e-8));
  return out;
}

std::vector<CheckItem> sampling_suite() {
  std::vector<CheckItem> out;
  RandomStream rng(kCheckSeed, 4);
  const double mass = 2.0, w = 1.5, hbar = 1.0;
  const auto pts = sample_wigner_gaussian(mass, Vector::Constant(1, w), hbar, 100000, rng);
  double vq = 0.0, vp = 0.0;
  for (const auto& pt : pts) {
    vq += pt.q[0] * pt.q[0];
    vp += pt.p[0] * pt.p[0];
  }
  vq /= static_cast<double>(pts.size());
  vp /= static_cast<double>(pts.size());
  out.push_back(below("wigner_position_variance", std::abs(vq / (hbar / (2 * mass * w)) - 1.0), 0.02));
  out.push_back(below("wigner_momentum_variance", std::abs(vp / (0.5 * hbar * mass * w) - 1.0), 0.02));

  TwoLevelHarmonic::Params params;
  params.frequencies = Vector::Constant(1, w);
  params.mass = mass;
  const TwoLevelHarmonic model(params);
  const double temperature = 0.8;
  const auto can = sample_canonical(model, temperature, 100000, rng);
  double cq = 0.0;
  for (const auto& pt : can) cq += pt.q[0] * pt.q[0];
  cq /= static_cast<double>(can.size());
  out.push_back(below("canonical_position_variance",
                      std::abs(cq / (temperature / (mass * w * w)) - 1.0), 0.02));
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

}  // namespace

bool CheckReport::passed() const {
  for (const auto& i : items) {
    if (!i.passed) return false;
  }
  return true;
}

std::string CheckReport::json() const {
  nlohmann::json j;
  j["suite"] = suite;
  j["passed"] = passed();
  j["results"] = nlohmann::json::array();
  for (const auto& i : items) {
    nlohmann::json r{{"name", i.name}, {"passed", i.passed}, {"value", i.value},
                     {"tolerance", i.tolerance}};
    if (!i.detail.empty()) r["detail"] = i.detail;
    j["results"].push_back(r);
  }
  return j.dump(2);
}

std::string CheckReport::summary() const {
  std::ostringstream os;
  int failed = 0;
  for (const auto& i : items) {
    os << (i.passed ? "PASS " : "FAIL ") << i.name << "  value=" << fmt(i.value)
       << " tol=" << fmt(i.tolerance) << "\n";
    if (!i.passed) ++failed;
  }
  os << suite << ": " << items.size() - failed << "/" << items.size() << " passed\n";
  return os.str();
}

std::vector<std::string> check_suites() {
  return {"bracket", "adiabatic", "jump", "thermostat", "spin", "sampling", "all"};
}

CheckReport check(const std::string& suite) {
  CheckReport report{suite, {}};
  const auto add = [&](const std::string& prefix, std::vector<CheckItem> items) {
    for (auto& i : items) {
      if (suite == "all") i.name = prefix + "." + i.name;
      report.items.push_back(std::move(i));
    }
  };
  const bool all = suite == "all";
  bool known = all;
  if (all || suite == "bracket") { add("bracket", bracket_suite()); known = true; }
  if (all || suite == "adiabatic") { add("adiabatic", adiabatic_suite()); known = true; }
  if (all || suite == "jump") { add("jump", jump_suite()); known = true; }
  if (all || suite == "thermostat") { add("thermostat", thermostat_suite()); known = true; }
  if (all || suite == "spin") { add("spin", spin_suite()); known = true; }
  if (all || suite == "sampling") { add("sampling", sampling_suite()); known = true; }
  if (!known) throw ConfigError("unknown check suite '" + suite + "'");
  return report;
}

std::string bracket_tool(const std::vector<std::string>& names, const Vector& point,
                         double hbar) {
  if (names.size() != 3) throw ConfigError("bracket: exactly three fields are required");
  if (!(hbar > 0.0)) throw ConfigError("bracket: hbar must be > 0");
  std::vector<NamedField> fields;
  for (const auto& n : names) {
    try {
      fields.push_back(catalog_field(n));
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
  }
  const StructureKind kind = fields[0].kind;
  for (const auto& f : fields) {
    if (f.kind != kind) throw ConfigError("bracket: fields live on different phase spaces");
  }
  const StructureMatrix b = structure_for(kind);
  if (point.size() != b.dimension()) {
    throw ConfigError("bracket: point must have " + std::to_string(b.dimension()) +
                      " coordinates for these fields");
  }
  const NamedField h = catalog_hamiltonian(kind);
  int n = h.field.levels();
  for (const auto& f : fields) n = std::max(n, f.field.levels());
  std::vector<OperatorField> lifted;
  for (const auto& f : fields) lifted.push_back(lift(f.field, n));
  const OperatorField hl = lift(h.field, n);

  double anti = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int k = i + 1; k < 3; ++k) {
      anti = std::max(anti, max_abs(quasi_lie_bracket(lifted[i], lifted[k], b, point, hbar).value +
                                    quasi_lie_bracket(lifted[k], lifted[i], b, point, hbar).value));
    }
  }
  const double self = max_abs(quasi_lie_bracket(hl, hl, b, point, hbar).value);
  const double jac = jacobi_residual(lifted[0], lifted[1], lifted[2], b, point, hbar);

  nlohmann::json j;
  j["fields"] = names;
  j["structure"] = to_string(kind);
  j["point"] = std::vector<double>(point.data(), point.data() + point.size());
  j["hbar"] = hbar;
  j["antisymmetry_residual"] = anti;
  j["hamiltonian"] = h.name;
  j["self_bracket_residual"] = self;
  j["jacobi_residual"] = jac;
  j["jacobi_tolerance"] = kJacobiTolerance;
  j["jacobi_holds"] = jac <= kJacobiTolerance;
  return j.dump(2);
}

}  // namespace qclsim
