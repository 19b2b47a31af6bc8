#include <benchmark/benchmark.h>
#include <omp.h>

#include "hetsat/analytics_maxsinr.hpp"
#include "hetsat/analytics_nearest.hpp"
#include "hetsat/montecarlo.hpp"

using namespace hetsat;

namespace {

// Arg: worker count, 1 for the serial reference.
void BM_MonteCarlo(benchmark::State& state) {
  const Scenario sc = table2_scenario(3);
  McConfig cfg;
  cfg.trials = 20000;
  cfg.threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(estimate(cfg, sc).max_sinr.cp.mean);
  state.SetItemsProcessed(state.iterations() * cfg.trials);
}
BENCHMARK(BM_MonteCarlo)->Arg(1)->Arg(omp_get_max_threads())->Unit(benchmark::kMillisecond)->UseRealTime();

// Arg: 0 serial outer panels, 1 OpenMP.
void BM_Inversion(benchmark::State& state) {
  const Scenario sc = table2_scenario(3, 0.0);
  const MaxSinrKernels k(sc, ServingRegion::side);
  const bool parallel = state.range(0) != 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fourier_inversion_cp(k.transform(), sc.max_delta_th(), sc.numerics, parallel).value);
  }
}
BENCHMARK(BM_Inversion)->Arg(0)->Arg(1)->Unit(benchmark::kSecond)->Iterations(1)->UseRealTime();

void BM_NearestCoverage(benchmark::State& state) {
  const Scenario sc = table2_scenario(3);
  for (auto _ : state) benchmark::DoNotOptimize(coverage_prob_nearest(sc).total);
}
BENCHMARK(BM_NearestCoverage)->Unit(benchmark::kMillisecond);

void BM_Handover(benchmark::State& state) {
  const Scenario sc = table2_scenario(3, -10.0);
  for (auto _ : state) benchmark::DoNotOptimize(nhp_nearest(sc).total);
}
BENCHMARK(BM_Handover)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
