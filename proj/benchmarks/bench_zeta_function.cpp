#include <benchmark/benchmark.h>

#include "zeta_opt/zeta_function.hpp"

namespace {

void BM_Zeta(benchmark::State& state) {
  const double s = static_cast<double>(state.range(0)) / 100.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(zeta_opt::special::zeta(s));
  }
}
// s = 1.01, 1.1, 1.5, 2.0, 4.0
BENCHMARK(BM_Zeta)->Arg(101)->Arg(110)->Arg(150)->Arg(200)->Arg(400);

void BM_ZetaLooseTolerance(benchmark::State& state) {
  const zeta_opt::special::ZetaEvalConfig cfg{.target_rel_error = 1e-8};
  for (auto _ : state) {
    benchmark::DoNotOptimize(zeta_opt::special::zeta(1.5, cfg));
  }
}
BENCHMARK(BM_ZetaLooseTolerance);

}  // namespace
