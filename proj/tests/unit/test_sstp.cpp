#include "doctest.h"

#include <cmath>
#include <numbers>

#include "qclsim/sstp.hpp"

using namespace qclsim;

namespace {

Vector vec1(double v) { return Vector::Constant(1, v); }

std::shared_ptr<TwoLevelQuartic> quartic(double gamma0 = 1.0) {
  TwoLevelQuartic::Params p;
  p.gamma0 = gamma0;
  return std::make_shared<TwoLevelQuartic>(p);
}

AdiabaticFrame two_level_frame(double e0, double e1, Complex d01) {
  AdiabaticFrame f;
  f.energies = Eigen::Vector2d(e0, e1);
  f.vectors = ComplexMatrix::Identity(2, 2);
  f.forces = Matrix::Zero(2, 1);
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 1) = d01;
  d(1, 0) = -std::conj(d01);
  f.couplings = {d};
  f.config = vec1(0.0);
  return f;
}

}  // namespace

TEST_CASE("phase step") {
  const AdiabaticFrame f = two_level_frame(-1.0, 1.0, 0.0);
  TrajectoryState s;
  s.pair = Pair{1, 1};
  phase_step(s, f, f, 0.3);
  CHECK(s.phase == Complex(1.0, 0.0));

  // omega_10 = 2 over dt = pi/2
  s.pair = Pair{1, 0};
  phase_step(s, f, f, std::numbers::pi / 2);
  CHECK(std::abs(s.phase - Complex(-1.0, 0.0)) < 1e-15);

  // omega_01 = -2 at Q = 0, t = pi in small steps returns to 1
  const AdiabaticFrame q0 = build_frame(*quartic(), vec1(0.0));
  TrajectoryState t;
  t.pair = Pair{0, 1};
  for (int k = 0; k < 1000; ++k) phase_step(t, q0, q0, std::numbers::pi / 1000);
  CHECK(std::abs(t.phase - Complex(1.0, 0.0)) < 1e-12);
  CHECK(std::abs(std::abs(t.phase) - 1.0) < 1e-13);
}

TEST_CASE("jump probabilities") {
  auto [pj0, q0] = jump_probabilities(0.0);
  CHECK(pj0 == 0.0);
  CHECK(q0 == 1.0);
  auto [pj1, q1] = jump_probabilities(1.0);
  CHECK(pj1 == 0.5);
  CHECK(q1 == 0.5);
  auto [pj3, q3] = jump_probabilities(-3.0);
  CHECK(pj3 == 0.75);
  CHECK(q3 == 0.25);
}

TEST_CASE("transition candidates carry signed raw factors") {
  const AdiabaticFrame f = two_level_frame(-1.0, 1.0, Complex(-1.5, 0.0));
  TrajectoryState s;
  s.x = BathState{vec1(0.0), vec1(2.0), {}, {}};
  s.pair = Pair{0, 0};
  const auto c = transition_probabilities(s, f, 1.0, 1.0);
  REQUIRE(c.size() == 2);
  CHECK(c[0].first_index);
  CHECK(c[0].target == Pair{1, 0});
  CHECK(c[0].raw == Complex(-3.0, 0.0));
  CHECK(c[0].p_jump == 0.75);
  CHECK(c[0].delta_e == -2.0);
  CHECK_FALSE(c[1].first_index);
  CHECK(c[1].target == Pair{0, 1});
  CHECK(c[1].raw == Complex(-3.0, 0.0));

  // complex coupling: first-index flips use the conjugate
  const AdiabaticFrame g = two_level_frame(-1.0, 1.0, Complex(0.0, 0.5));
  const auto cc = transition_probabilities(s, g, 1.0, 1.0);
  CHECK(cc[0].raw == Complex(0.0, -1.0));
  CHECK(cc[1].raw == Complex(0.0, 1.0));

  // three levels: 2(n-1) flips
  AdiabaticFrame h;
  h.energies = Eigen::Vector3d(0.0, 1.0, 2.0);
  h.couplings = {ComplexMatrix::Zero(3, 3)};
  s.pair = Pair{0, 2};
  CHECK(transition_probabilities(s, h, 1.0, 0.1).size() == 4);
}

TEST_CASE("degenerate pairs never jump") {
  const AdiabaticFrame f = two_level_frame(0.5, 0.5, Complex(1.0, 0.0));
  TrajectoryState s;
  s.x = BathState{vec1(0.0), vec1(1.0), {}, {}};
  for (const auto& c : transition_probabilities(s, f, 1.0, 0.1)) CHECK(c.p_jump == 0.0);
}

TEST_CASE("momentum jump") {
  CHECK(std::get<Vector>(momentum_jump(vec1(2.0), vec1(1.0), 0.0, 1.0))[0] == 2.0);
  CHECK(std::get<Vector>(momentum_jump(vec1(2.0), vec1(1.0), 1.5, 1.0))[0] ==
        doctest::Approx(std::sqrt(7.0)));
  CHECK(std::get<Vector>(momentum_jump(vec1(-2.0), vec1(1.0), 1.5, 1.0))[0] ==
        doctest::Approx(-std::sqrt(7.0)));
  CHECK(std::holds_alternative<Frustrated>(momentum_jump(vec1(1.0), vec1(1.0), -1.0, 1.0)));
  CHECK_THROWS(momentum_jump(vec1(1.0), vec1(2.0), 0.1, 1.0));

  // perpendicular part untouched, energy conserved
  const Vector p = Eigen::Vector2d(1.0, 3.0);
  const Vector d = Eigen::Vector2d(0.6, 0.8);
  const Vector pn = std::get<Vector>(momentum_jump(p, d, -0.7, 2.0));
  const Vector perp = Eigen::Vector2d(-0.8, 0.6);
  CHECK(pn.dot(perp) == doctest::Approx(p.dot(perp)));
  CHECK(pn.squaredNorm() / 4.0 == doctest::Approx(p.squaredNorm() / 4.0 - 0.7));
}

TEST_CASE("branch weights") {
  CHECK(branch_weight(1.0, 0.5, 0.5, true, 1) == Complex(2.0));
  CHECK(branch_weight(1.0, 0.5, 0.5, false, 1) == Complex(2.0));
  CHECK(branch_weight(-3.0, 0.75, 0.25, true, 2) == Complex(-8.0));
  CHECK_THROWS_AS(branch_weight(1.0, 0.0, 1.0, true, 1), NumericalError);

  TrajectoryState s;
  apply_branch_factor(s, Complex(-2.0, 0.0));
  CHECK(s.weight == -2.0);
  CHECK(s.phase == Complex(1.0));
  apply_branch_factor(s, Complex(0.0, 3.0));
  CHECK(s.weight == -6.0);
  CHECK(std::abs(s.phase - Complex(0.0, 1.0)) < 1e-15);
}

TEST_CASE("uncoupled propagation keeps unit weight") {
  SstpOptions opt;
  opt.dt = 0.01;
  const SstpPropagator prop(quartic(0.0), opt);
  TrajectoryState s = prop.make_state(vec1(0.4), vec1(1.0), Pair{0, 1});
  AdiabaticFrame f = prop.frame_at(s.x.q);
  RandomStream rng(1, 0);
  for (int k = 0; k < 500; ++k) {
    const BranchRecord r = prop.step(s, f, rng);
    CHECK_FALSE(r.jumped);
  }
  CHECK(s.weight == 1.0);
  CHECK(s.pair == Pair{0, 1});
  CHECK(std::abs(std::abs(s.phase) - 1.0) < 1e-12);
}

TEST_CASE("adiabatic energy conservation") {
  SstpOptions opt;
  opt.dt = 1e-3;
  opt.transitions = false;
  const SstpPropagator prop(quartic(1.0), opt);
  for (Pair pair : {Pair{0, 0}, Pair{0, 1}, Pair{1, 1}}) {
    TrajectoryState s = prop.make_state(vec1(-0.8), vec1(0.6), pair);
    AdiabaticFrame f = prop.frame_at(s.x.q);
    RandomStream rng(2, 0);
    const double e0 = prop.energy(s, f);
    double worst = 0.0;
    for (int k = 0; k < 10000; ++k) {
      prop.step(s, f, rng);
      worst = std::max(worst, std::abs(prop.energy(s, f) - e0));
    }
    CHECK(worst / std::max(std::abs(e0), 1.0) < 1e-6);
  }
}

TEST_CASE("jumps conserve the mean-surface energy") {
  SstpOptions opt;
  opt.dt = 0.05;
  const SstpPropagator prop(quartic(2.0), opt);
  RandomStream rng(4, 0);
  int jumps = 0;
  for (int traj = 0; traj < 50; ++traj) {
    TrajectoryState s = prop.make_state(vec1(0.1), vec1(3.0), Pair{0, 0});
    AdiabaticFrame f = prop.frame_at(s.x.q);
    for (int k = 0; k < 40; ++k) {
      AdiabaticFrame before_frame = f;
      TrajectoryState before = s;
      prop.bath_step(before, before_frame, rng);  // scratch copy for the pre-branch energy
      const BranchRecord r = prop.step(s, f, rng);
      if (r.jumped) {
        ++jumps;
        // flow then jump: energy after equals energy of the flowed state before the jump
        CHECK(prop.energy(s, f) == doctest::Approx(prop.energy(before, before_frame)).epsilon(1e-10));
      }
    }
  }
  CHECK(jumps > 0);
}

TEST_CASE("forced jump with unit raw factor doubles the weight") {
  // P_J = 1/2 when |raw| = 1; single candidate count for the arithmetic
  TrajectoryState s;
  apply_branch_factor(s, branch_weight(1.0, 0.5, 0.5, true, 1));
  CHECK(s.weight == 2.0);
}

TEST_CASE("block ranges cover all trajectories once") {
  for (std::size_t n : {1u, 9u, 10u, 37u, 1000u}) {
    std::size_t next = 0;
    for (int b = 0; b < kStderrBlocks; ++b) {
      const auto [lo, hi] = block_range(n, b);
      CHECK(lo == next);
      next = hi;
    }
    CHECK(next == n);
  }
}

TEST_CASE("ensemble estimate") {
  const std::vector<double> times{0.0, 1.0};
  std::vector<EnsembleAccumulator> blocks;
  for (int b = 0; b < kStderrBlocks; ++b) {
    EnsembleAccumulator acc(1, 2);
    for (int i = 0; i < 3; ++i) {
      acc.add(0, 0, 1.0);
      acc.add(0, 1, Complex(b % 2 == 0 ? 0.5 : 1.5, 0.25));
      acc.add_weight(0, 1.0);
      acc.add_weight(1, 2.0);
      acc.add_drift(1, 1e-9 * b);
      acc.count_trajectory();
    }
    blocks.push_back(acc);
  }
  const EnsembleEstimate e = estimate(blocks, times, {"identity"});
  CHECK(e.mean[0][0] == Complex(1.0));
  CHECK(e.std_error[0][0] == 0.0);
  CHECK(e.mean[0][1].real() == doctest::Approx(1.0));
  CHECK(e.mean[0][1].imag() == doctest::Approx(0.25));
  // block means alternate 0.5 / 1.5: sd of the mean = sqrt(0.25 * 10 / 9 / 10)
  CHECK(e.std_error[0][1] == doctest::Approx(std::sqrt(0.25 / 9.0)));
  CHECK(e.mean_abs_weight[1] == doctest::Approx(2.0));
  CHECK(e.energy_drift[1] == doctest::Approx(9e-9));
  CHECK(e.casimir_drift.empty());

  std::vector<EnsembleAccumulator> empty(kStderrBlocks, EnsembleAccumulator(1, 2));
  CHECK_THROWS(estimate(empty, times, {"identity"}));
}

TEST_CASE("parsing of bath kinds and policies") {
  for (BathKind k : {BathKind::hamiltonian, BathKind::langevin, BathKind::nose_hoover, BathKind::nhc}) {
    CHECK(parse_bath_kind(to_string(k)) == k);
  }
  CHECK(parse_frustrated_policy("reverse") == FrustratedPolicy::reverse);
  CHECK_THROWS_AS(parse_bath_kind("nose"), ConfigError);
  CHECK_THROWS_AS(SstpPropagator(quartic(), SstpOptions{.dt = 0.0}), ConfigError);
}
