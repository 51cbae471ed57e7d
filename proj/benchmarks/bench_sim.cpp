#include <benchmark/benchmark.h>

#include "spde_lrt/montecarlo.hpp"

namespace {

using namespace spde_lrt;

void BM_PhiloxWords(benchmark::State& state) {
  CounterStream s(42, 7);
  for (auto _ : state) benchmark::DoNotOptimize(s.next_u64());
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_PhiloxWords);

void BM_ZigguratNormal(benchmark::State& state) {
  NormalStream s(42, 7);
  for (auto _ : state) benchmark::DoNotOptimize(s.next_normal());
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_ZigguratNormal);

// Items are Euler steps (modes x time steps).
void BM_SimulateTrial(benchmark::State& state) {
  const auto n_modes = static_cast<std::size_t>(state.range(0));
  const ModelParams model = reference_model(n_modes);
  const TimeGrid grid = TimeGrid::make(100.0, state.range(1));
  std::uint64_t trial = 0;
  for (auto _ : state) {
    NormalStream s(1, trial++);
    benchmark::DoNotOptimize(simulate_trial(model, grid, 0.1, s));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(1));
}
BENCHMARK(BM_SimulateTrial)->Args({3, 5000})->Args({40, 20000});

void BM_EstimateError(benchmark::State& state) {
  ExperimentSpec spec;
  spec.grid = TimeGrid::make(100.0, 1000);
  spec.m = 256;
  spec.workers = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(estimate_error(spec).p_hat);
  state.SetItemsProcessed(state.iterations() * spec.m * 3 * 1000);
}
BENCHMARK(BM_EstimateError)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
