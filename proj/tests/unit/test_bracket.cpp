#include "doctest.h"

#include <cmath>

#include "qclsim/bracket.hpp"
#include "qclsim/fields.hpp"
#include "qclsim/models.hpp"

using namespace qclsim;

namespace {

ComplexMatrix scalar(double v) { return ComplexMatrix::Constant(1, 1, Complex(v)); }

Vector point(std::initializer_list<double> v) {
  Vector x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double e : v) x[i++] = e;
  return x;
}

}  // namespace

TEST_CASE("poisson bracket of Q and P is one") {
  const auto canon = StructureMatrix::canonical(1);
  const auto q = OperatorField::linear(2, 0, scalar(1.0));
  const auto p = OperatorField::linear(2, 1, scalar(1.0));
  for (const Vector& x : {point({0.0, 0.0}), point({-2.5, 3.1}), point({7.0, -1.0})}) {
    CHECK(poisson_bracket(q, p, canon, x).value(0, 0).real() == doctest::Approx(1.0));
  }
}

TEST_CASE("poisson bracket of a field with itself vanishes") {
  const auto h = catalog_field("H_quartic").field;
  const auto r = poisson_bracket(h, h, StructureMatrix::canonical(1), point({0.3, -0.8}));
  CHECK(max_abs(r.value) < 1e-10);
}

TEST_CASE("spin bracket {Sx, Sy} = Sz at the north pole") {
  const auto sx = OperatorField::linear(3, 0, scalar(1.0));
  const auto sy = OperatorField::linear(3, 1, scalar(1.0));
  const auto r = poisson_bracket(sx, sy, StructureMatrix::spin(), point({0.0, 0.0, 1.0}));
  CHECK(r.value(0, 0).real() == doctest::Approx(1.0));
  // and cyclically at a generic point
  const auto sz = OperatorField::linear(3, 2, scalar(1.0));
  const Vector s = point({0.36, 0.48, 0.8});
  CHECK(poisson_bracket(sy, sz, StructureMatrix::spin(), s).value(0, 0).real() ==
        doctest::Approx(0.36));
}

TEST_CASE("quasi-Lie bracket of scalars is minus the Poisson bracket") {
  // a = P^2/2, b = Q: {a, b} = -P, so [a, b] = P
  const OperatorField a(2, 1, [](const Vector& x) { return scalar(0.5 * x[1] * x[1]); });
  const auto b = OperatorField::linear(2, 0, scalar(1.0));
  const auto r = quasi_lie_bracket(a, b, StructureMatrix::canonical(1), point({0.4, 1.7}), 1.0);
  CHECK(r.value(0, 0).real() == doctest::Approx(1.7).epsilon(1e-8));
}

TEST_CASE("quasi-Lie bracket of constant matrices is the scaled commutator") {
  const auto canon = StructureMatrix::canonical(1);
  for (double hbar : {1.0, 0.5, 2.0}) {
    const auto r = quasi_lie_bracket(OperatorField::constant(2, pauli_x()),
                                     OperatorField::constant(2, pauli_z()), canon,
                                     point({0.1, 0.2}), hbar);
    CHECK(max_abs(r.value - (2.0 / hbar) * pauli_y()) < 1e-14);
  }
}

TEST_CASE("energy self-bracket vanishes for every catalog Hamiltonian") {
  for (StructureKind kind : {StructureKind::canonical, StructureKind::spin, StructureKind::nose,
                             StructureKind::nhc}) {
    const auto h = catalog_hamiltonian(kind);
    const auto b = structure_for(kind);
    Vector x = Vector::Constant(h.field.dimension(), 0.3);
    if (kind == StructureKind::spin) x.normalize();
    CHECK(max_abs(quasi_lie_bracket(h.field, h.field, b, x, 1.0).value) < 1e-10);
  }
}

TEST_CASE("quasi-Lie bracket is antisymmetric") {
  const auto canon = StructureMatrix::canonical(1);
  const auto a = catalog_field("QPsz").field;
  const auto b = catalog_field("H_quartic").field;
  const Vector x = point({-0.7, 0.9});
  const auto ab = quasi_lie_bracket(a, b, canon, x, 1.0).value;
  const auto ba = quasi_lie_bracket(b, a, canon, x, 1.0).value;
  CHECK(max_abs(ab + ba) < 1e-12);
}

TEST_CASE("jacobi holds for classical and quantum triples") {
  const auto canon = StructureMatrix::canonical(1);
  const Vector x = point({1.0, 1.0});
  const auto f = [](const char* n) { return catalog_field(n).field; };
  CHECK(jacobi_residual(f("Q"), f("P"), f("Q2P"), canon, x, 1.0) <= kJacobiTolerance);
  CHECK(jacobi_residual(f("sx"), f("sy"), f("sz"), canon, x, 1.0) == 0.0);
}

TEST_CASE("jacobi fails for the mixed triple") {
  // Symbolic evaluation of the three nested brackets gives exactly 1 at (1, 1).
  const auto canon = StructureMatrix::canonical(1);
  const auto t = mixed_jacobi_triple();
  const double r = jacobi_residual(catalog_field(t[0]).field, catalog_field(t[1]).field,
                                   catalog_field(t[2]).field, canon, point({1.0, 1.0}), 1.0);
  CHECK(r == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("Qsz, Psx, sy has a vanishing Jacobi sum") {
  // Recorded as the regression baseline: every pair of these brackets is linear
  // in the phase space gradient, so the cyclic sum cancels.
  const auto f = [](const char* n) { return catalog_field(n).field; };
  const double r = jacobi_residual(f("Qsz"), f("Psx"), f("sy"), StructureMatrix::canonical(1),
                                   point({1.0, 1.0}), 1.0);
  CHECK(r < kJacobiTolerance);
}

TEST_CASE("finite differences match analytic gradients") {
  const auto h = catalog_field("H_quartic").field;
  const Vector x = point({0.6, -0.2});
  const auto exact = h.gradient(x);
  const auto fd = finite_difference_gradient(h, x, 5);
  REQUIRE(exact.size() == fd.size());
  for (std::size_t i = 0; i < exact.size(); ++i) CHECK(max_abs(exact[i] - fd[i]) < 1e-8);
}

TEST_CASE("structure matrices are antisymmetric") {
  CHECK(antisymmetry_defect(StructureMatrix::canonical(3), Vector::Zero(6)) == 0.0);
  CHECK(antisymmetry_defect(StructureMatrix::spin(), point({0.1, 0.2, 0.97})) == 0.0);
  CHECK(antisymmetry_defect(StructureMatrix::nose(2), Vector::Constant(6, 0.4)) == 0.0);
  CHECK(antisymmetry_defect(StructureMatrix::nhc(1), Vector::Constant(6, -0.4)) == 0.0);
}

TEST_CASE("nose bracket reproduces the thermostatted equations of motion") {
  // dP/dt = {P, H^N} with the Nose structure: -V'(Q) - P P_eta / M_eta.
  TwoLevelQuartic::Params params;
  params.gamma0 = 0.0;
  params.omega = 0.0;
  const auto model = std::make_shared<TwoLevelQuartic>(params);
  const NoseExtension ext{model, 2.0, 1.5, 1, 1.0};
  const auto h = hamiltonian_field(ext);
  // X = (Q, Q_eta, P, P_eta)
  const Vector x = point({0.7, 0.2, 1.3, 0.4});
  const auto p_field = OperatorField::linear(4, 2, ComplexMatrix::Identity(2, 2));
  const auto dp = poisson_bracket(p_field, h, StructureMatrix::nose(1), x).value;
  const double q = 0.7;
  const double expected = -(q * q * q - q) - 1.3 * 0.4 / 2.0;
  CHECK(dp(0, 0).real() == doctest::Approx(expected).epsilon(1e-7));
}

TEST_CASE("fields outside their domain are reported") {
  const OperatorField sqrt_q(
      2, 1, [](const Vector& x) { return scalar(std::sqrt(x[0])); }, nullptr,
      [](const Vector& x) { return x[0] > 0.0; });
  CHECK_FALSE(sqrt_q.in_domain(point({-1.0, 0.0})));
  CHECK_THROWS_AS(sqrt_q.gradient(point({1e-12, 0.0})), DomainError);
}

TEST_CASE("mismatched dimensions are rejected") {
  const auto a = OperatorField::linear(2, 0, scalar(1.0));
  const auto b = OperatorField::linear(4, 0, scalar(1.0));
  CHECK_THROWS_AS(poisson_bracket(a, b, StructureMatrix::canonical(1), point({0.0, 0.0})),
                  DimensionError);
  CHECK_THROWS_AS(catalog_field("nope"), Error);
}
