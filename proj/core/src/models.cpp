#include "qclsim/models.hpp"

#include <cmath>
#include <utility>

namespace qclsim {

TwoLevelQuartic::TwoLevelQuartic(Params params) : params_(params) {
  if (!(params_.mass > 0.0)) throw ConfigError("two_level_quartic: mass must be positive");
  if (!(params_.a > 0.0)) throw ConfigError("two_level_quartic: quartic coefficient a must be positive");
  if (!(params_.hbar > 0.0)) throw ConfigError("two_level_quartic: hbar must be positive");
}

ComplexMatrix TwoLevelQuartic::h_matrix(const Vector& q) const {
  if (q.size() != 1) throw DimensionError("two_level_quartic: expected one bath coordinate");
  const double hb = params_.hbar;
  return -hb * params_.omega * pauli_x() - hb * params_.gamma0 * q[0] * pauli_z();
}

std::vector<ComplexMatrix> TwoLevelQuartic::h_gradient(const Vector& q) const {
  if (q.size() != 1) throw DimensionError("two_level_quartic: expected one bath coordinate");
  return {-params_.hbar * params_.gamma0 * pauli_z()};
}

double TwoLevelQuartic::potential(const Vector& q) const {
  const double x2 = q[0] * q[0];
  return 0.25 * params_.a * x2 * x2 - 0.5 * params_.b * x2;
}

Vector TwoLevelQuartic::potential_gradient(const Vector& q) const {
  Vector g(1);
  g[0] = params_.a * q[0] * q[0] * q[0] - params_.b * q[0];
  return g;
}

TwoLevelHarmonic::TwoLevelHarmonic(Params params) : params_(std::move(params)) {
  if (!(params_.mass > 0.0)) throw ConfigError("two_level_harmonic: mass must be positive");
  if (params_.frequencies.size() == 0) throw ConfigError("two_level_harmonic: no bath modes");
  if (params_.couplings.size() != params_.frequencies.size()) {
    throw ConfigError("two_level_harmonic: couplings and frequencies differ in length");
  }
  if ((params_.frequencies.array() <= 0.0).any()) {
    throw ConfigError("two_level_harmonic: frequencies must be positive");
  }
}

ComplexMatrix TwoLevelHarmonic::h_matrix(const Vector& q) const {
  if (q.size() != bath_dim()) throw DimensionError("two_level_harmonic: wrong bath dimension");
  const double hb = params_.hbar;
  return -hb * params_.omega * pauli_x() - hb * params_.couplings.dot(q) * pauli_z();
}

std::vector<ComplexMatrix> TwoLevelHarmonic::h_gradient(const Vector& q) const {
  if (q.size() != bath_dim()) throw DimensionError("two_level_harmonic: wrong bath dimension");
  std::vector<ComplexMatrix> g;
  g.reserve(q.size());
  for (Eigen::Index j = 0; j < q.size(); ++j) {
    g.push_back(-params_.hbar * params_.couplings[j] * pauli_z());
  }
  return g;
}

double TwoLevelHarmonic::potential(const Vector& q) const {
  return 0.5 * params_.mass * (params_.frequencies.array().square() * q.array().square()).sum();
}

Vector TwoLevelHarmonic::potential_gradient(const Vector& q) const {
  return params_.mass * (params_.frequencies.array().square() * q.array()).matrix();
}

CustomModel::CustomModel(Spec spec) : spec_(std::move(spec)) {
  if (!spec_.h) throw ConfigError("custom model: h(Q) is required");
}

std::vector<ComplexMatrix> CustomModel::h_gradient(const Vector& q) const {
  if (spec_.h_gradient) return spec_.h_gradient(q);
  OperatorField field(spec_.bath_dim, spec_.levels, spec_.h);
  return finite_difference_gradient(field, q, 5);
}

double CustomModel::potential(const Vector& q) const {
  return spec_.potential ? spec_.potential(q) : 0.0;
}

Vector CustomModel::potential_gradient(const Vector& q) const {
  return spec_.potential_gradient ? spec_.potential_gradient(q) : Vector::Zero(q.size());
}

ComplexMatrix SpinBathModel::h_matrix(const Vector3& s) const {
  return -omega * pauli_x() - c1 * b_field * pauli_z() -
         mu * (s[0] * pauli_x() + s[1] * pauli_y() + s[2] * pauli_z());
}

std::vector<ComplexMatrix> SpinBathModel::h_gradient(const Vector3&) const {
  return {-mu * pauli_x(), -mu * pauli_y(), -mu * pauli_z()};
}

double SpinBathModel::classical_energy(const Vector3& s) const {
  return -c2 * b_field * s[2] + 0.5 * s[2] * s[2];
}

Vector3 SpinBathModel::classical_gradient(const Vector3& s) const {
  return {0.0, 0.0, -c2 * b_field + s[2]};
}

void NoseExtension::validate() const {
  if (!base) throw ConfigError("nose: missing base model");
  if (!(m_eta > 0.0)) throw ConfigError("nose: M_eta must be positive");
  if (!(temperature > 0.0)) throw ConfigError("nose: temperature must be positive");
  if (n_thermostatted < 1) throw ConfigError("nose: N must be at least 1");
}

void NhcExtension::validate() const {
  if (!base) throw ConfigError("nhc: missing base model");
  if (!(m_eta1 > 0.0) || !(m_eta2 > 0.0)) throw ConfigError("nhc: inertial parameters must be positive");
  if (!(temperature > 0.0)) throw ConfigError("nhc: temperature must be positive");
  if (n_thermostatted < 1) throw ConfigError("nhc: N must be at least 1");
}

double classical_energy(const CanonicalModel& model, const BathState& state) {
  if (state.q.size() != model.bath_dim() || state.p.size() != model.bath_dim()) {
    throw DimensionError("classical_energy: state does not match model bath dimension");
  }
  return 0.5 * state.p.squaredNorm() / model.mass() + model.potential(state.q);
}

double classical_energy(const NoseExtension& model, const BathState& state) {
  if (state.eta_q.size() != 1 || state.eta_p.size() != 1) {
    throw DimensionError("classical_energy: Nose state needs one thermostat pair");
  }
  return classical_energy(*model.base, state) +
         0.5 * state.eta_p[0] * state.eta_p[0] / model.m_eta +
         model.n_thermostatted * model.kt() * state.eta_q[0];
}

double classical_energy(const NhcExtension& model, const BathState& state) {
  if (state.eta_q.size() != 2 || state.eta_p.size() != 2) {
    throw DimensionError("classical_energy: chain state needs two thermostat pairs");
  }
  return classical_energy(*model.base, state) +
         0.5 * state.eta_p[0] * state.eta_p[0] / model.m_eta1 +
         0.5 * state.eta_p[1] * state.eta_p[1] / model.m_eta2 +
         model.n_thermostatted * model.kt() * state.eta_q[0] + model.kt() * state.eta_q[1];
}

namespace {

// Layout X = (Q[0..d), extra_q..., P[0..d), extra_p...).
struct Layout {
  int dof;
  int extra;
  int half() const { return dof + extra; }
  int dim() const { return 2 * half(); }
  int p(int i) const { return half() + i; }
};

}  // namespace

OperatorField hamiltonian_field(std::shared_ptr<const CanonicalModel> model) {
  const int d = model->bath_dim();
  const int n = model->levels();
  const Layout lay{d, 0};
  auto eval = [model, lay, n](const Vector& x) {
    const Vector q = x.head(lay.dof);
    const Vector p = x.segment(lay.p(0), lay.dof);
    const double classical = 0.5 * p.squaredNorm() / model->mass() + model->potential(q);
    return ComplexMatrix(model->h_matrix(q) + classical * ComplexMatrix::Identity(n, n));
  };
  auto grad = [model, lay, n](const Vector& x) {
    const Vector q = x.head(lay.dof);
    std::vector<ComplexMatrix> g(lay.dim(), ComplexMatrix::Zero(n, n));
    const auto dh = model->h_gradient(q);
    const Vector dv = model->potential_gradient(q);
    for (int i = 0; i < lay.dof; ++i) {
      g[i] = dh[i] + dv[i] * ComplexMatrix::Identity(n, n);
      g[lay.p(i)] = (x[lay.p(i)] / model->mass()) * ComplexMatrix::Identity(n, n);
    }
    return g;
  };
  return {lay.dim(), n, eval, grad};
}

OperatorField hamiltonian_field(const SpinBathModel& model) {
  auto eval = [model](const Vector& x) {
    const Vector3 s = x.head<3>();
    return ComplexMatrix(model.h_matrix(s) + model.classical_energy(s) * identity2());
  };
  auto grad = [model](const Vector& x) {
    const Vector3 s = x.head<3>();
    auto g = model.h_gradient(s);
    const Vector3 dc = model.classical_gradient(s);
    for (int a = 0; a < 3; ++a) g[a] += dc[a] * identity2();
    return g;
  };
  return {3, 2, eval, grad};
}

OperatorField hamiltonian_field(const NoseExtension& model) {
  model.validate();
  const auto base = model.base;
  const int d = base->bath_dim();
  const int n = base->levels();
  const Layout lay{d, 1};
  auto eval = [model, base, lay, n](const Vector& x) {
    const Vector q = x.head(lay.dof);
    const Vector p = x.segment(lay.p(0), lay.dof);
    const double q_eta = x[lay.dof];
    const double p_eta = x[lay.p(lay.dof)];
    const double classical = 0.5 * p.squaredNorm() / base->mass() + base->potential(q) +
                             0.5 * p_eta * p_eta / model.m_eta +
                             model.n_thermostatted * model.kt() * q_eta;
    return ComplexMatrix(base->h_matrix(q) + classical * ComplexMatrix::Identity(n, n));
  };
  auto grad = [model, base, lay, n](const Vector& x) {
    const Vector q = x.head(lay.dof);
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    std::vector<ComplexMatrix> g(lay.dim(), ComplexMatrix::Zero(n, n));
    const auto dh = base->h_gradient(q);
    const Vector dv = base->potential_gradient(q);
    for (int i = 0; i < lay.dof; ++i) {
      g[i] = dh[i] + dv[i] * id;
      g[lay.p(i)] = (x[lay.p(i)] / base->mass()) * id;
    }
    g[lay.dof] = (model.n_thermostatted * model.kt()) * id;
    g[lay.p(lay.dof)] = (x[lay.p(lay.dof)] / model.m_eta) * id;
    return g;
  };
  return {lay.dim(), n, eval, grad};
}

OperatorField hamiltonian_field(const NhcExtension& model) {
  model.validate();
  const auto base = model.base;
  const int d = base->bath_dim();
  const int n = base->levels();
  const Layout lay{d, 2};
  auto eval = [model, base, lay, n](const Vector& x) {
    const Vector q = x.head(lay.dof);
    const Vector p = x.segment(lay.p(0), lay.dof);
    const double q1 = x[lay.dof];
    const double q2 = x[lay.dof + 1];
    const double p1 = x[lay.p(lay.dof)];
    const double p2 = x[lay.p(lay.dof + 1)];
    const double classical = 0.5 * p.squaredNorm() / base->mass() + base->potential(q) +
                             0.5 * p1 * p1 / model.m_eta1 + 0.5 * p2 * p2 / model.m_eta2 +
                             model.n_thermostatted * model.kt() * q1 + model.kt() * q2;
    return ComplexMatrix(base->h_matrix(q) + classical * ComplexMatrix::Identity(n, n));
  };
  auto grad = [model, base, lay, n](const Vector& x) {
    const Vector q = x.head(lay.dof);
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    std::vector<ComplexMatrix> g(lay.dim(), ComplexMatrix::Zero(n, n));
    const auto dh = base->h_gradient(q);
    const Vector dv = base->potential_gradient(q);
    for (int i = 0; i < lay.dof; ++i) {
      g[i] = dh[i] + dv[i] * id;
      g[lay.p(i)] = (x[lay.p(i)] / base->mass()) * id;
    }
    g[lay.dof] = (model.n_thermostatted * model.kt()) * id;
    g[lay.dof + 1] = model.kt() * id;
    g[lay.p(lay.dof)] = (x[lay.p(lay.dof)] / model.m_eta1) * id;
    g[lay.p(lay.dof + 1)] = (x[lay.p(lay.dof + 1)] / model.m_eta2) * id;
    return g;
  };
  return {lay.dim(), n, eval, grad};
}

}  // namespace qclsim
