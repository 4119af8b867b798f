#include <benchmark/benchmark.h>

#include "tadpole/eigensolver.hpp"
#include "tadpole/spectral.hpp"

namespace {

const tadpole::GraphParams kDegenerate{1.0, 1.0, 1.0, 2.0 / M_PI};

void BM_AssembleLinearized(benchmark::State& state) {
  const auto s = tadpole::center_state(kDegenerate);
  const tadpole::Discretization d(kDegenerate, 1.0 / static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(tadpole::assemble_linearized(s, d));
  state.SetComplexityN(d.unknowns());
}
BENCHMARK(BM_AssembleLinearized)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

void BM_Inertia(benchmark::State& state) {
  const auto s = tadpole::center_state(kDegenerate);
  const tadpole::Discretization d(kDegenerate, 1.0 / static_cast<double>(state.range(0)));
  const auto op = tadpole::assemble_linearized(s, d);
  for (auto _ : state) benchmark::DoNotOptimize(tadpole::count_below(op.problem, 0.0));
  state.SetComplexityN(d.unknowns());
}
BENCHMARK(BM_Inertia)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

void BM_DirectSpectrum(benchmark::State& state) {
  const auto s = tadpole::center_state(kDegenerate);
  const tadpole::Discretization d(kDegenerate, 1.0 / static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(tadpole::direct_spectrum(s, d, 3));
}
BENCHMARK(BM_DirectSpectrum)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

}  // namespace
