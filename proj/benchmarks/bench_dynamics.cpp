#include <benchmark/benchmark.h>

#include "tadpole/dynamics.hpp"

namespace {

void BM_LeapfrogStep(benchmark::State& state) {
  const tadpole::GraphParams g{1.0, 1.0, 1.0, 2.0 / M_PI};
  const tadpole::Discretization d(g, 1.0 / static_cast<double>(state.range(0)));
  const tadpole::Dynamics ctx(g, d, 2.0 * M_PI);
  Eigen::VectorXd u = tadpole::state_vector(tadpole::center_state(g), d);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(u.size());
  Eigen::VectorXd a = ctx.acceleration(u);
  const double dt = 0.5 * ctx.max_dt();
  for (auto _ : state) {
    ctx.kdk(u, v, a, dt);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * u.size());
}
BENCHMARK(BM_LeapfrogStep)->RangeMultiplier(4)->Range(64, 4096);

void BM_Energy(benchmark::State& state) {
  const tadpole::GraphParams g{1.0, 1.0, 1.0, 2.0 / M_PI};
  const tadpole::Discretization d(g, 1e-3);
  const tadpole::Dynamics ctx(g, d, 2.0 * M_PI);
  const Eigen::VectorXd u = tadpole::state_vector(tadpole::center_state(g), d);
  const Eigen::VectorXd v = Eigen::VectorXd::Zero(u.size());
  for (auto _ : state) benchmark::DoNotOptimize(ctx.energy(u, v));
}
BENCHMARK(BM_Energy);

}  // namespace
