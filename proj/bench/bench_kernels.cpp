// Serial reference against the OpenMP kernel on a wandering-averaged
// spectrum. SIM_THREADS caps the parallel team as in the CLI.
#include <benchmark/benchmark.h>

#include "chiralwg/ensemble.hpp"

namespace {

using namespace chiralwg;

void run_spectrum(benchmark::State& state, kernels::Execution exec) {
  kernels::apply_thread_cap_from_env();
  DriveConfig drive;
  drive.laser_detuning_grid = linear_grid(-200, 200, static_cast<int>(state.range(0)));
  const EmitterConfig emitter;
  const EnsembleConfig ensemble;
  for (auto _ : state) {
    auto set = simulate_spectrum(emitter, ensemble, drive, std::nullopt, exec);
    benchmark::DoNotOptimize(set.delta_t.values().data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
  state.counters["threads"] = exec == kernels::Execution::Parallel ? kernels::max_threads() : 1;
}

void BM_SpectrumSerial(benchmark::State& s) { run_spectrum(s, kernels::Execution::Serial); }
void BM_SpectrumParallel(benchmark::State& s) { run_spectrum(s, kernels::Execution::Parallel); }

void run_saturation(benchmark::State& state, kernels::Execution exec) {
  kernels::apply_thread_cap_from_env();
  const auto powers = log_grid(1e-13, 1e-6, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto curve = simulate_saturation(EmitterConfig{}, EnsembleConfig{}, Direction::LtoR, powers, exec);
    benchmark::DoNotOptimize(curve.data());
  }
}

void BM_SaturationSerial(benchmark::State& s) { run_saturation(s, kernels::Execution::Serial); }
void BM_SaturationParallel(benchmark::State& s) { run_saturation(s, kernels::Execution::Parallel); }

}  // namespace

BENCHMARK(BM_SpectrumSerial)->Arg(101)->Arg(801)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SpectrumParallel)->Arg(101)->Arg(801)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SaturationSerial)->Arg(61)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SaturationParallel)->Arg(61)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
