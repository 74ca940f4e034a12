#include <benchmark/benchmark.h>

#include "csls/lyapsolve.hpp"
#include "csls/matrix.hpp"
#include "csls/random.hpp"
#include "csls/specfun.hpp"
#include "csls/system.hpp"

namespace {

csls::SymMatrix random_sym(int n, csls::Rng& rng) {
  csls::SymMatrix s(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) s(i, j) = rng.normal();
  return s;
}

void BM_EigSym(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  csls::Rng rng(7);
  const csls::SymMatrix s = random_sym(n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(csls::eig_sym(s));
}
BENCHMARK(BM_EigSym)->Arg(2)->Arg(4)->Arg(8);

void BM_ProjectPsdBox(benchmark::State& state) {
  csls::Rng rng(11);
  const csls::SymMatrix s = random_sym(2, rng);
  for (auto _ : state) benchmark::DoNotOptimize(csls::project_psd_box(s, 1.0, 1e6));
}
BENCHMARK(BM_ProjectPsdBox);

void BM_RegIncBeta(benchmark::State& state) {
  double x = 0.0;
  for (auto _ : state) {
    x += 0.001;
    if (x >= 1.0) x = 0.001;
    benchmark::DoNotOptimize(csls::reg_inc_beta(x, 2.5, 0.5));
  }
}
BENCHMARK(BM_RegIncBeta);

void BM_CapGeometry(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(csls::cap_geometry(4.386e-3, 2));
}
BENCHMARK(BM_CapGeometry);

void BM_DrawObservations(benchmark::State& state) {
  const csls::Csls sys = csls::controller_failure_system();
  const auto count = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(csls::draw_observations(sys, count, 1));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DrawObservations)->Arg(1000)->Arg(50000);

void BM_SolveSampled(benchmark::State& state) {
  const csls::Csls sys = csls::controller_failure_system();
  const auto draw = csls::draw_observations(sys, static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(csls::solve_sampled(draw.samples, csls::SolverConfig{}));
}
BENCHMARK(BM_SolveSampled)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_CycleBound(benchmark::State& state) {
  const csls::Csls sys = csls::controller_failure_system();
  for (auto _ : state) benchmark::DoNotOptimize(csls::cjsr_lower_bruteforce(sys, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_CycleBound)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
