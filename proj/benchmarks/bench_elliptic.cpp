#include <benchmark/benchmark.h>

#include <cmath>

#include "tadpole/elliptic.hpp"
#include "tadpole/existence.hpp"

namespace {

void BM_CompleteK(benchmark::State& state) {
  const tadpole::EllipticModulus k(0.9);
  for (auto _ : state) benchmark::DoNotOptimize(tadpole::complete_K(k));
}
BENCHMARK(BM_CompleteK);

// near k = 1 the Landen chain gets long; the hyperbolic branch takes over at k' < 1e-7
void BM_JacobiTriple(benchmark::State& state) {
  const double kc = 1.0 / static_cast<double>(state.range(0));
  const tadpole::EllipticModulus k(std::sqrt(1.0 - kc * kc));
  double u = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(tadpole::jacobi_sn_cn_dn(u, k));
    u += 1e-3;
  }
}
BENCHMARK(BM_JacobiTriple)->Arg(2)->Arg(1000)->Arg(100000000);

void BM_SolveGluing(benchmark::State& state) {
  const tadpole::GraphParams g{1.5, 1.0, 0.5, 0.856941};
  for (auto _ : state) benchmark::DoNotOptimize(tadpole::solve_gluing(g, tadpole::Branch::AbovePi));
}
BENCHMARK(BM_SolveGluing)->Unit(benchmark::kMillisecond);

}  // namespace
