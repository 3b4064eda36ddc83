#include "doctest.h"

#include <cmath>
#include <numbers>

#include "qclsim/spin.hpp"

using namespace qclsim;

namespace {

constexpr double kPi = std::numbers::pi;

SpinGradient constant_gradient(const Vector3& g) {
  return [g](const Vector3&) { return g; };
}

}  // namespace

TEST_CASE("rotations") {
  const Vector3 x = Vector3::UnitX();
  CHECK((rotate_about_axis(x, 2, kPi / 2) - Vector3::UnitY()).norm() < 1e-15);
  CHECK((rotate_about(x, Vector3::UnitZ(), kPi / 2) - Vector3::UnitY()).norm() < 1e-15);
  const Vector3 axis = Vector3(1.0, 1.0, 1.0).normalized();
  CHECK((rotate_about(x, axis, 2 * kPi / 3) - Vector3::UnitY()).norm() < 1e-15);
  CHECK((spin_velocity(x, Vector3(0, 0, 2)) - Vector3(0, 2, 0)).norm() == 0.0);
}

TEST_CASE("precession about z") {
  for (double b : {0.5, 1.0, 3.0}) {
    const double t = kPi / (2 * b);
    const int n = 1000;
    Vector3 s = Vector3::UnitX();
    for (int k = 0; k < n; ++k) s = spin_step(s, constant_gradient(Vector3(0, 0, b)), t / n);
    CHECK((s - Vector3::UnitY()).norm() < 1e-12);
  }
}

TEST_CASE("zero gradient leaves the spin alone") {
  const Vector3 s(0.36, 0.48, 0.8);
  CHECK((spin_step(s, constant_gradient(Vector3::Zero()), 0.1) - s).norm() == 0.0);
}

TEST_CASE("spin step keeps |S| and is reversible") {
  SpinBathModel m;
  m.c1 = 0.3;
  const auto grad = [&](const Vector3& s) { return mean_spin_gradient(m, s, Pair{0, 1}); };
  Vector3 s = Vector3(0.3, -0.2, 0.9).normalized();
  const Vector3 s0 = s;
  for (int k = 0; k < 100000; ++k) s = spin_step(s, grad, 0.01);
  CHECK(std::abs(s.norm() - 1.0) < 1e-12);
  for (int k = 0; k < 100000; ++k) s = spin_step(s, grad, -0.01);
  CHECK((s - s0).norm() < 1e-8);
}

TEST_CASE("mean spin gradient matches finite differences of the surface energy") {
  SpinBathModel m;
  m.c1 = 0.4;
  m.omega = 0.7;
  const Vector3 s = Vector3(0.2, 0.5, -0.6).normalized();
  for (Pair pair : {Pair{0, 0}, Pair{0, 1}, Pair{1, 1}}) {
    const Vector3 g = mean_spin_gradient(m, s, pair);
    const double h = 1e-6;
    for (int a = 0; a < 3; ++a) {
      Vector3 sp = s, sm = s;
      sp[a] += h;
      sm[a] -= h;
      CHECK(g[a] == doctest::Approx((spin_surface_energy(m, sp, pair) -
                                     spin_surface_energy(m, sm, pair)) / (2 * h)).epsilon(1e-6));
    }
  }
}

TEST_CASE("diagonal pairs carry no phase") {
  SpinBathModel m;
  SpinState st;
  st.s = Vector3(0.6, 0.0, 0.8);
  st.pair = Pair{1, 1};
  for (int k = 0; k < 100; ++k) adiabatic_spin_propagate(st, m, 0.01);
  CHECK(st.phase_dyn == Complex(1.0));
  CHECK(st.phase_geo == Complex(1.0));
}

TEST_CASE("no spin transitions without coupling to S") {
  SpinBathModel m;
  m.mu = 0.0;
  SpinState st;
  st.s = Vector3(0.6, 0.0, 0.8);
  const SpinFrame f = build_spin_frame(m, st.s);
  for (const auto& t : spin_transition_terms(f, m, st)) {
    CHECK(t.rate == Complex(0.0));
    CHECK(t.axis.norm() == 0.0);
  }
}

TEST_CASE("closed loop geometric phase equals the solid angle") {
  // Omega = 0, c1 b = 0: the levels follow S and the mean surface of (0, 1) is
  // -c2 b Sz + Sz^2/2, so S circles the z axis at fixed Sz.
  SpinBathModel m;
  m.omega = 0.0;
  m.c1 = 0.0;
  m.mu = 0.5;
  m.c2 = 1.0;
  m.b_field = 1.0;
  for (double sz : {0.6, -0.3}) {
    SpinState st;
    st.s = Vector3(std::sqrt(1 - sz * sz), 0.0, sz);
    st.pair = Pair{0, 1};
    const double rate = sz - m.c2 * m.b_field;
    const double period = 2 * kPi / std::abs(rate);
    const int n = 20000;
    SpinFrame f = build_spin_frame(m, st.s);
    for (int k = 0; k < n; ++k) adiabatic_spin_propagate(st, m, period / n, f);
    const double solid = 2 * kPi * (1 - sz);
    const Complex expected = std::exp(-kI * (rate > 0 ? solid : -solid));
    CHECK(std::abs(st.phase_geo - expected) < 1e-4);
  }
}

TEST_CASE("spin jump rotates along the coupling flow") {
  SpinTransitionTerm t;
  t.axis = Vector3(0.0, 0.0, 2.0);
  t.rate = 1.0;
  t.delta_e = kPi / 2;  // time pi/4, angle -2 pi/4
  Vector3 s = Vector3::UnitX();
  CHECK(spin_jump(s, t));
  CHECK((s - Vector3(0.0, -1.0, 0.0)).norm() < 1e-14);
  t.rate = 0.0;
  CHECK_FALSE(spin_jump(s, t));
}

TEST_CASE("spin sstp step keeps the spin normalised") {
  SpinBathModel m;
  m.c1 = 0.2;
  SpinState st;
  st.s = Vector3(0.0, 0.6, 0.8);
  SpinFrame f = build_spin_frame(m, st.s);
  RandomStream rng(9, 0);
  for (int k = 0; k < 2000; ++k) spin_sstp_step(st, m, 0.01, true, f, rng);
  CHECK(std::abs(st.s.norm() - 1.0) < 1e-12);
  CHECK(std::isfinite(st.weight));
  CHECK(std::abs(std::abs(st.phase_dyn) - 1.0) < 1e-10);
}
