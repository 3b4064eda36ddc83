#include "doctest.h"

#include <cmath>

#include "qclsim/adiabatic.hpp"

using namespace qclsim;

namespace {

Vector vec1(double v) { return Vector::Constant(1, v); }

TwoLevelQuartic quartic(double omega, double gamma0) {
  TwoLevelQuartic::Params p;
  p.omega = omega;
  p.gamma0 = gamma0;
  return TwoLevelQuartic(p);
}

// Coupling <0|d/dQ 1> from finite differences of real eigenvectors with a fixed sign convention.
double fd_coupling(const CanonicalModel& model, double q, double h = 1e-5) {
  const auto vecs = [&](double x) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(model.h_matrix(vec1(x)).real());
    Eigen::Matrix2d v = es.eigenvectors();
    for (int c = 0; c < 2; ++c) {
      if (v(0, c) < 0) v.col(c) *= -1.0;
    }
    return v;
  };
  const Eigen::Matrix2d v0 = vecs(q);
  const Eigen::Matrix2d dv = (vecs(q + h) - vecs(q - h)) / (2 * h);
  return v0.col(0).dot(dv.col(1));
}

}  // namespace

TEST_CASE("quartic frame at Q = 0") {
  const auto model = quartic(1.0, 0.6);
  const AdiabaticFrame f = build_frame(model, vec1(0.0));
  CHECK(f.energies[0] == doctest::Approx(-1.0));
  CHECK(f.energies[1] == doctest::Approx(1.0));
  CHECK(std::abs(f.couplings[0](0, 1)) == doctest::Approx(0.6 / 2.0));
  CHECK(f.forces(0, 0) == doctest::Approx(0.0));
  CHECK(f.forces(1, 0) == doctest::Approx(0.0));
  CHECK_FALSE(f.degenerate);
}

TEST_CASE("coupling magnitude matches eigenvector finite differences") {
  for (double omega : {0.5, 1.0, 2.0}) {
    const auto model = quartic(omega, 1.3);
    for (double q : {-1.0, -0.2, 0.4, 1.5}) {
      const AdiabaticFrame f = build_frame(model, vec1(q));
      CHECK(std::abs(f.couplings[0](0, 1)) ==
            doctest::Approx(std::abs(fd_coupling(model, q))).epsilon(1e-6));
      CHECK(std::abs(f.couplings[0](0, 1) + std::conj(f.couplings[0](1, 0))) < 1e-12);
    }
  }
}

TEST_CASE("no coupling without gamma0") {
  const auto model = quartic(1.0, 0.0);
  for (double q : {-2.0, 0.0, 3.0}) {
    const AdiabaticFrame f = build_frame(model, vec1(q));
    CHECK(max_abs(f.couplings[0]) == 0.0);
  }
}

TEST_CASE("bohr frequencies") {
  const auto model = quartic(1.0, 1.0);
  const AdiabaticFrame f = build_frame(model, vec1(0.0));
  CHECK(bohr_frequency(f, 0, 0) == 0.0);
  CHECK(bohr_frequency(f, 0, 1) == doctest::Approx(-2.0));
  CHECK(bohr_frequency(f, 1, 0) == -bohr_frequency(f, 0, 1));
  CHECK_THROWS(bohr_frequency(f, 0, 2));
}

TEST_CASE("hellmann-feynman forces and off-diagonal identity") {
  const auto model = quartic(0.8, 1.7);
  for (double q : {-0.9, 0.1, 1.2}) {
    const AdiabaticFrame f = build_frame(model, vec1(q));
    const double h = 1e-5;
    const Vector ep = build_frame(model, vec1(q + h)).energies;
    const Vector em = build_frame(model, vec1(q - h)).energies;
    for (int a = 0; a < 2; ++a) CHECK(f.forces(a, 0) == doctest::Approx(-(ep[a] - em[a]) / (2 * h)));
    const ComplexMatrix dh = f.to_adiabatic(model.h_gradient(vec1(q))[0]);
    CHECK(std::abs(f.couplings[0](0, 1) * (f.energies[1] - f.energies[0]) - dh(0, 1)) < 1e-10);
  }
}

TEST_CASE("generic eigensolver path agrees with the analytic one") {
  const auto model = quartic(1.0, 0.9);
  CustomModel::Spec spec;
  spec.h = [&](const Vector& q) {
    // complex phase on the off-diagonal forces the general path
    ComplexMatrix m = model.h_matrix(q);
    m(0, 1) *= Complex(0.0, 1.0);
    m(1, 0) *= Complex(0.0, -1.0);
    return m;
  };
  const CustomModel general(spec);
  for (double q : {-0.5, 0.7}) {
    const AdiabaticFrame a = build_frame(model, vec1(q));
    const AdiabaticFrame b = build_frame(general, vec1(q));
    CHECK((a.energies - b.energies).norm() < 1e-12);
    CHECK(std::abs(a.couplings[0](0, 1)) == doctest::Approx(std::abs(b.couplings[0](0, 1))).epsilon(1e-6));
    CHECK((a.forces - b.forces).norm() < 1e-6);
  }
}

TEST_CASE("three-level frame couplings satisfy the off-diagonal identity") {
  CustomModel::Spec spec;
  spec.levels = 3;
  spec.h = [](const Vector& q) {
    ComplexMatrix m(3, 3);
    m << -1.0, 0.3 * q[0], 0.1, 0.3 * q[0], 0.2, 0.4 * q[0] * q[0], 0.1, 0.4 * q[0] * q[0], 1.5;
    return m;
  };
  const CustomModel model(spec);
  const AdiabaticFrame f = build_frame(model, vec1(0.8));
  const ComplexMatrix dh = f.to_adiabatic(model.h_gradient(vec1(0.8))[0]);
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      if (a == b) continue;
      CHECK(std::abs(f.couplings[0](a, b) * (f.energies[b] - f.energies[a]) - dh(a, b)) < 1e-6);
    }
  }
}

TEST_CASE("gauge stays continuous along a path") {
  const auto model = quartic(1.0, 2.0);
  AdiabaticFrame prev = build_frame(model, vec1(-2.0));
  for (int k = 0; k < 400; ++k) {
    const AdiabaticFrame next = build_frame(model, vec1(-2.0 + 0.01 * (k + 1)), &prev);
    for (int a = 0; a < 2; ++a) CHECK(prev.vectors.col(a).dot(next.vectors.col(a)).real() > 0.0);
    prev = next;
  }
}

TEST_CASE("degenerate levels are flagged") {
  CustomModel::Spec spec;
  spec.h = [](const Vector& q) { return ComplexMatrix(q[0] * pauli_z()); };
  const CustomModel model(spec);
  CHECK(build_frame(model, vec1(0.0)).degenerate);
  CHECK_FALSE(build_frame(model, vec1(0.5)).degenerate);
  CHECK(build_frame(model, vec1(0.0)).near_degenerate(0, 1));
}

TEST_CASE("shift vector") {
  AdiabaticFrame f;
  f.energies = Eigen::Vector2d(3.0, 0.0);
  f.vectors = ComplexMatrix::Identity(2, 2);
  f.forces = Matrix::Zero(2, 1);
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 1) = 0.5;
  d(1, 0) = -0.5;
  f.couplings = {d};
  f.config = vec1(0.0);
  CHECK(shift_vector(f, 0, 1, vec1(2.0), 1.0)[0] == doctest::Approx(1.5));

  f.energies = Eigen::Vector2d(1.0, 1.0);
  CHECK(shift_vector(f, 0, 1, vec1(2.0), 1.0).norm() == 0.0);

  AdiabaticFrame g = f;
  g.energies = Eigen::Vector2d(1.0, 0.0);
  ComplexMatrix dx = ComplexMatrix::Zero(2, 2), dy = ComplexMatrix::Zero(2, 2);
  dx(0, 1) = 1.0;
  dx(1, 0) = -1.0;
  g.couplings = {dx, dy};
  g.forces = Matrix::Zero(2, 2);
  CHECK_THROWS_AS(shift_vector(g, 0, 1, Eigen::Vector2d(0.0, 3.0), 1.0), NumericalError);
}

TEST_CASE("spin frame") {
  SpinBathModel m;
  m.mu = 0.0;
  const SpinFrame decoupled = build_spin_frame(m, Vector3(0.0, 0.6, 0.8));
  for (int a = 0; a < 3; ++a) CHECK(max_abs(decoupled.couplings[a]) < 1e-12);

  m.mu = 0.5;
  m.c1 = 0.2;
  for (const Vector3& s : {Vector3(0.0, 0.0, 1.0), Vector3(0.6, 0.0, 0.8), Vector3(0.36, -0.48, 0.8),
                           Vector3(-1.0, 0.0, 0.0)}) {
    const SpinFrame f = build_spin_frame(m, s);
    CHECK(f.connection.allFinite());
    for (int a = 0; a < 3; ++a) {
      // phi = -i d_aa is real because d_aa is purely imaginary
      CHECK(std::abs(f.couplings[a](0, 0).real()) < 1e-8);
      CHECK(std::abs(f.couplings[a](1, 1).real()) < 1e-8);
    }
  }
  CHECK_THROWS(build_spin_frame(m, Vector3(0.0, 0.0, 2.0)));
}

TEST_CASE("spin frame aligned with S: coupling against spinor finite differences") {
  SpinBathModel m;
  m.omega = 0.0;
  m.c1 = 0.0;
  m.mu = 0.7;
  const Vector3 s(1.0, 0.0, 0.0);
  const SpinFrame f = build_spin_frame(m, s);
  // eigenvectors of -mu S.sigma: ground state spinor points along S
  const double h = 1e-5;
  for (int a = 0; a < 3; ++a) {
    Vector3 sp = s, sm = s;
    sp[a] += h;
    sm[a] -= h;
    const ComplexMatrix vp = build_spin_frame(m, sp.normalized()).vectors;
    const ComplexMatrix vm = build_spin_frame(m, sm.normalized()).vectors;
    // phase-invariant check: |<0|d 1>| from the projector derivative
    const ComplexMatrix pp = vp.col(1) * vp.col(1).adjoint();
    const ComplexMatrix pm = vm.col(1) * vm.col(1).adjoint();
    const ComplexMatrix dproj = (pp - pm) / (2 * h);
    const double fd = std::abs((f.vectors.col(0).adjoint() * dproj * f.vectors.col(1))(0, 0));
    CHECK(std::abs(f.couplings[a](0, 1)) == doctest::Approx(fd).epsilon(1e-4));
  }
  CHECK(std::abs(f.couplings[1](0, 1)) == doctest::Approx(0.5).epsilon(1e-6));
}
