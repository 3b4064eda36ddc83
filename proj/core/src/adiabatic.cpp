#include "qclsim/adiabatic.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>

namespace qclsim {

namespace detail {

std::pair<Vector, ComplexMatrix> eigh(const ComplexMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  if (solver.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

std::vector<Eigen::Index> gauge_components(const ComplexMatrix& vectors) {
  std::vector<Eigen::Index> idx(vectors.cols());
  for (Eigen::Index a = 0; a < vectors.cols(); ++a) {
    vectors.col(a).cwiseAbs().maxCoeff(&idx[a]);
  }
  return idx;
}

void fix_gauge(ComplexMatrix& vectors, const std::vector<Eigen::Index>& components) {
  for (Eigen::Index a = 0; a < vectors.cols(); ++a) {
    const Complex c = vectors(components[a], a);
    const double m = std::abs(c);
    if (m > 0.0) vectors.col(a) *= std::conj(c) / m;
  }
}

void align_gauge(ComplexMatrix& vectors, const ComplexMatrix& reference) {
  for (Eigen::Index a = 0; a < vectors.cols(); ++a) {
    const Complex ov = reference.col(a).dot(vectors.col(a));
    const double m = std::abs(ov);
    if (m > 0.0) vectors.col(a) *= std::conj(ov) / m;
  }
}

}  // namespace detail

namespace {

void check_hermitian(const ComplexMatrix& h) {
  const double scale = std::max(1.0, max_abs(h));
  if (max_abs(h - h.adjoint()) > 1e-12 * scale) {
    throw NumericalError("adiabatic Hamiltonian is not Hermitian");
  }
  if (!all_finite(h)) throw NumericalError("adiabatic Hamiltonian has non-finite entries");
}

bool is_degenerate(const Vector& e, int a, int b) {
  const double scale = e.cwiseAbs().maxCoeff();
  return std::abs(e[a] - e[b]) <= kDegeneracyRelTol * scale;
}

bool any_degenerate(const Vector& e) {
  for (int a = 0; a + 1 < e.size(); ++a) {
    if (is_degenerate(e, a, a + 1)) return true;
  }
  return false;
}

bool real_symmetric_two_level(const ComplexMatrix& h) {
  return h.rows() == 2 && h.imag().cwiseAbs().maxCoeff() == 0.0;
}

// Eigenvectors of a Hermitian matrix with their gauge matched to `center`.
ComplexMatrix aligned_vectors(const ComplexMatrix& h, const ComplexMatrix& center) {
  auto [e, v] = detail::eigh(h);
  detail::align_gauge(v, center);
  return v;
}

}  // namespace

ComplexVector AdiabaticFrame::coupling(int alpha, int beta) const {
  if (alpha < 0 || beta < 0 || alpha >= levels() || beta >= levels()) {
    throw Error("coupling: level index out of range");
  }
  ComplexVector d(bath_dim());
  for (int i = 0; i < bath_dim(); ++i) d[i] = couplings[i](alpha, beta);
  return d;
}

bool AdiabaticFrame::near_degenerate(int alpha, int beta) const {
  return alpha != beta && is_degenerate(energies, alpha, beta);
}

ComplexMatrix AdiabaticFrame::to_adiabatic(const ComplexMatrix& op) const {
  return vectors.adjoint() * op * vectors;
}

AdiabaticFrame build_frame(const CanonicalModel& model, const Vector& q,
                           const AdiabaticFrame* reference) {
  if (q.size() != model.bath_dim()) throw DimensionError("build_frame: wrong bath dimension");
  const ComplexMatrix h = model.h_matrix(q);
  check_hermitian(h);
  const auto dh = model.h_gradient(q);
  const int n = static_cast<int>(h.rows());
  const int dim = model.bath_dim();

  AdiabaticFrame frame;
  frame.config = q;
  frame.hbar = model.hbar();
  frame.couplings.assign(dim, ComplexMatrix::Zero(n, n));

  if (real_symmetric_two_level(h)) {
    const double mean = 0.5 * (h(0, 0).real() + h(1, 1).real());
    const double a = 0.5 * (h(0, 0).real() - h(1, 1).real());
    const double c = h(0, 1).real();
    const double r = std::hypot(a, c);
    const double psi = std::atan2(c, a);
    const double sh = std::sin(0.5 * psi);
    const double ch = std::cos(0.5 * psi);
    ComplexMatrix bare(2, 2);
    bare << -sh, ch, ch, sh;
    frame.energies = Vector(2);
    frame.energies << mean - r, mean + r;
    frame.vectors = bare;
    if (reference) {
      detail::align_gauge(frame.vectors, reference->vectors);
    } else {
      detail::fix_gauge(frame.vectors, detail::gauge_components(frame.vectors));
    }
    // Phases g_alpha picked up by the gauge fix; d01 = conj(g0) g1 psi'/2.
    const Complex g0 = bare.col(0).dot(frame.vectors.col(0));
    const Complex g1 = bare.col(1).dot(frame.vectors.col(1));
    if (r > 0.0) {
      for (int i = 0; i < dim; ++i) {
        const double da = 0.5 * (dh[i](0, 0).real() - dh[i](1, 1).real());
        const double dc = dh[i](0, 1).real();
        const double dpsi = (a * dc - c * da) / (r * r);
        const Complex d01 = std::conj(g0) * g1 * (0.5 * dpsi);
        frame.couplings[i](0, 1) = d01;
        frame.couplings[i](1, 0) = -std::conj(d01);
      }
    }
  } else {
    auto [e, v] = detail::eigh(h);
    frame.energies = e;
    frame.vectors = v;
    if (reference) {
      detail::align_gauge(frame.vectors, reference->vectors);
    } else {
      detail::fix_gauge(frame.vectors, detail::gauge_components(frame.vectors));
    }
    Vector probe = q;
    for (int i = 0; i < dim; ++i) {
      const double step = std::cbrt(std::numeric_limits<double>::epsilon()) *
                          std::max(1.0, std::abs(q[i]));
      probe[i] = q[i] + step;
      const ComplexMatrix plus = aligned_vectors(model.h_matrix(probe), frame.vectors);
      probe[i] = q[i] - step;
      const ComplexMatrix minus = aligned_vectors(model.h_matrix(probe), frame.vectors);
      probe[i] = q[i];
      frame.couplings[i] = frame.vectors.adjoint() * (plus - minus) / (2.0 * step);
    }
  }

  frame.forces = Matrix(n, dim);
  for (int alpha = 0; alpha < n; ++alpha) {
    for (int i = 0; i < dim; ++i) {
      frame.forces(alpha, i) =
          -frame.vectors.col(alpha).dot(dh[i] * frame.vectors.col(alpha)).real();
    }
  }
  frame.degenerate = any_degenerate(frame.energies);
  return frame;
}

double bohr_frequency(const AdiabaticFrame& frame, int alpha, int alpha_prime) {
  if (alpha < 0 || alpha_prime < 0 || alpha >= frame.levels() || alpha_prime >= frame.levels()) {
    throw Error("bohr_frequency: level index out of range");
  }
  return (frame.energies[alpha] - frame.energies[alpha_prime]) / frame.hbar;
}

Vector shift_vector(const AdiabaticFrame& frame, int alpha, int beta, const Vector& p,
                    double mass) {
  const ComplexVector d = frame.coupling(alpha, beta);
  if (p.size() != d.size()) throw DimensionError("shift_vector: momentum has wrong dimension");
  const double de = frame.energies[alpha] - frame.energies[beta];
  if (de == 0.0) return Vector::Zero(d.size());
  const Complex directional = (p / mass).cast<Complex>().dot(d);
  const double scale = (p / mass).norm() * d.norm();
  if (std::abs(directional) <= 1e-14 * scale || scale == 0.0) {
    throw NumericalError("shift_vector: no transition direction (P/M . d vanishes)");
  }
  return (de * d / directional).real();
}

double surface_energy(double classical_energy, const AdiabaticFrame& frame, Pair pair) {
  if (pair.first < 0 || pair.second < 0 || pair.first >= frame.levels() ||
      pair.second >= frame.levels()) {
    throw Error("surface_energy: pair index out of range");
  }
  return classical_energy + 0.5 * (frame.energies[pair.first] + frame.energies[pair.second]);
}

double surface_energy(const CanonicalModel& model, const AdiabaticFrame& frame, Pair pair,
                      const BathState& state) {
  return surface_energy(classical_energy(model, state), frame, pair);
}

ComplexVector SpinFrame::coupling(int alpha, int beta) const {
  if (alpha < 0 || beta < 0 || alpha >= levels() || beta >= levels()) {
    throw Error("coupling: level index out of range");
  }
  ComplexVector d(3);
  for (int a = 0; a < 3; ++a) d[a] = couplings[a](alpha, beta);
  return d;
}

bool SpinFrame::near_degenerate(int alpha, int beta) const {
  return alpha != beta && is_degenerate(energies, alpha, beta);
}

ComplexMatrix SpinFrame::to_adiabatic(const ComplexMatrix& op) const {
  return vectors.adjoint() * op * vectors;
}

Vector SpinFrame::geometric_rate(const Vector3& s_dot) const {
  return connection * s_dot;
}

SpinFrame build_spin_frame(const SpinBathModel& model, const Vector3& s) {
  if (std::abs(s.norm() - 1.0) > 1e-8) {
    throw Error("build_spin_frame: spin must lie on the unit sphere");
  }
  const ComplexMatrix h = model.h_matrix(s);
  check_hermitian(h);
  auto [e, v] = detail::eigh(h);
  const auto gauge = detail::gauge_components(v);
  detail::fix_gauge(v, gauge);

  SpinFrame frame;
  frame.spin = s;
  frame.hbar = model.hbar;
  frame.energies = e;
  frame.vectors = v;
  const int n = static_cast<int>(e.size());
  const auto dh = model.h_gradient(s);

  frame.energy_gradients = Matrix(n, 3);
  for (int alpha = 0; alpha < n; ++alpha) {
    for (int a = 0; a < 3; ++a) {
      frame.energy_gradients(alpha, a) = v.col(alpha).dot(dh[a] * v.col(alpha)).real();
    }
  }

  const double step = std::cbrt(std::numeric_limits<double>::epsilon());
  frame.couplings.assign(3, ComplexMatrix::Zero(n, n));
  for (int a = 0; a < 3; ++a) {
    Vector3 probe = s;
    probe[a] = s[a] + step;
    auto plus = detail::eigh(model.h_matrix(probe)).second;
    probe[a] = s[a] - step;
    auto minus = detail::eigh(model.h_matrix(probe)).second;
    detail::fix_gauge(plus, gauge);
    detail::fix_gauge(minus, gauge);
    frame.couplings[a] = v.adjoint() * (plus - minus) / (2.0 * step);
  }

  frame.connection = Matrix(n, 3);
  for (int alpha = 0; alpha < n; ++alpha) {
    for (int a = 0; a < 3; ++a) {
      frame.connection(alpha, a) = (-kI * frame.couplings[a](alpha, alpha)).real();
    }
  }
  frame.degenerate = any_degenerate(e);
  return frame;
}

}  // namespace qclsim
