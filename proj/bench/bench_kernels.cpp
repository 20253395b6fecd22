// Serial reference vs OpenMP kernel for the two Monte Carlo hot loops.
#include <benchmark/benchmark.h>

#include "riscomp/energy.hpp"
#include "riscomp/montecarlo.hpp"

namespace {

using namespace riscomp;

void BM_StarTrialsSerial(benchmark::State& st) {
  const NetworkScenario s;
  for (auto _ : st) benchmark::DoNotOptimize(run_trials_serial(s, st.range(0), 1));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_StarTrialsParallel(benchmark::State& st) {
  const NetworkScenario s;
  for (auto _ : st) benchmark::DoNotOptimize(run_trials(s, st.range(0), 1));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_MultiCellSerial(benchmark::State& st) {
  const MultiCellScenario s;
  const auto schemes = default_schemes();
  for (auto _ : st) benchmark::DoNotOptimize(evaluate_point_serial(s, schemes, st.range(0), 1));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_MultiCellParallel(benchmark::State& st) {
  const MultiCellScenario s;
  const auto schemes = default_schemes();
  for (auto _ : st) benchmark::DoNotOptimize(evaluate_point(s, schemes, st.range(0), 1));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

}  // namespace

BENCHMARK(BM_StarTrialsSerial)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_StarTrialsParallel)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MultiCellSerial)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MultiCellParallel)->Arg(2000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
