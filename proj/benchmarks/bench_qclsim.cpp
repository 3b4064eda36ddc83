#include <benchmark/benchmark.h>

#include "qclsim/fields.hpp"
#include "qclsim/run.hpp"
#include "qclsim/spin.hpp"
#include "qclsim/sstp.hpp"

using namespace qclsim;

namespace {

Vector vec1(double v) { return Vector::Constant(1, v); }

void BM_QuasiLieBracket(benchmark::State& state) {
  const auto a = catalog_field("QPsz").field;
  const auto h = catalog_field("H_quartic").field;
  const auto b = StructureMatrix::canonical(1);
  Vector x(2);
  x << 0.3, -0.4;
  for (auto _ : state) benchmark::DoNotOptimize(quasi_lie_bracket(a, h, b, x, 1.0));
}
BENCHMARK(BM_QuasiLieBracket);

void BM_JacobiResidual(benchmark::State& state) {
  const auto t = mixed_jacobi_triple();
  const auto b = StructureMatrix::canonical(1);
  const auto f0 = catalog_field(t[0]).field, f1 = catalog_field(t[1]).field, f2 = catalog_field(t[2]).field;
  Vector x(2);
  x << 1.0, 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(jacobi_residual(f0, f1, f2, b, x, 1.0));
}
BENCHMARK(BM_JacobiResidual);

void BM_BuildFrame(benchmark::State& state) {
  const TwoLevelQuartic model(TwoLevelQuartic::Params{});
  const Vector q = vec1(0.37);
  for (auto _ : state) benchmark::DoNotOptimize(build_frame(model, q));
}
BENCHMARK(BM_BuildFrame);

void BM_SstpStep(benchmark::State& state) {
  SstpOptions opt;
  opt.dt = 0.01;
  opt.bath = static_cast<BathKind>(state.range(0));
  const SstpPropagator prop(std::make_shared<TwoLevelQuartic>(TwoLevelQuartic::Params{}), opt);
  TrajectoryState s = prop.make_state(vec1(0.2), vec1(0.9), Pair{0, 1});
  AdiabaticFrame f = prop.frame_at(s.x.q);
  RandomStream rng(1, 0);
  for (auto _ : state) {
    prop.step(s, f, rng);
    if (std::abs(s.weight) > 1e6) s.weight = 1.0;
  }
  state.SetLabel(to_string(opt.bath));
}
BENCHMARK(BM_SstpStep)->DenseRange(0, 3);

void BM_SpinStep(benchmark::State& state) {
  SpinBathModel m;
  m.c1 = 0.3;
  SpinState s;
  s.s = Vector3(0.6, 0.0, 0.8);
  SpinFrame f = build_spin_frame(m, s.s);
  RandomStream rng(2, 0);
  for (auto _ : state) {
    spin_sstp_step(s, m, 0.01, true, f, rng);
    if (std::abs(s.weight) > 1e6) s.weight = 1.0;
  }
}
BENCHMARK(BM_SpinStep);

void BM_Ensemble(benchmark::State& state) {
  RunConfig c;
  c.dynamics.n_traj = state.range(0);
  c.dynamics.n_steps = 200;
  c.dynamics.dt = 0.01;
  c.dynamics.output_every = 20;
  c.observables = {"identity", "sz"};
  for (auto _ : state) benchmark::DoNotOptimize(simulate(c, 1));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 200);
}
BENCHMARK(BM_Ensemble)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
