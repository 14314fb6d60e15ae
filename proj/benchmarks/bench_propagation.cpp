#include <numbers>

#include <benchmark/benchmark.h>

#include "molgate/adiabatic.hpp"
#include "molgate/experiments.hpp"
#include "molgate/gate_sequence.hpp"

using namespace molgate;

namespace {

void BM_InternalGate(benchmark::State& state) {
  const auto pulses = PulseSequence::calibrated(0.234, 1.0, std::numbers::pi);
  const auto model = GateModel::from_ratio(pulses, 4.0, std::numbers::pi);
  PropagationOptions opts;
  opts.steps_per_segment = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(gate_propagator(model, opts));
  state.SetItemsProcessed(state.iterations() * 2 * state.range(0));
}
BENCHMARK(BM_InternalGate)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

// One composite gate on the four computational inputs times a vacuum.
void BM_CompositeVacuum(benchmark::State& state) {
  RunConfig c = RunConfig::defaults();
  c.n_max = static_cast<int>(state.range(0));
  c.threads = 1;
  const std::vector<MotionalState> in{MotionalState::vacuum(c.n_max)};
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_composite(c, 4.0, 0.1, in));
}
BENCHMARK(BM_CompositeVacuum)->Arg(20)->Arg(40)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_DressedEigensystem(benchmark::State& state) {
  double j = 3.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(dressed_eigensystem(j, Complex(2.0, 1.0)));
    j += 1e-9;
  }
}
BENCHMARK(BM_DressedEigensystem);

void BM_AdiabaticPhase(benchmark::State& state) {
  const auto pulses = PulseSequence::calibrated(0.234, 1.0, std::numbers::pi);
  const auto model = GateModel::from_ratio(pulses, 4.0, std::numbers::pi);
  for (auto _ : state) benchmark::DoNotOptimize(adiabatic_phase(model));
}
BENCHMARK(BM_AdiabaticPhase)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
