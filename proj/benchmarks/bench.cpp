#include <benchmark/benchmark.h>

#include "lwtune/lambert_w.hpp"
#include "lwtune/metrics.hpp"
#include "lwtune/model.hpp"
#include "lwtune/simulator.hpp"
#include "lwtune/tuner.hpp"

namespace {

using namespace lwtune;

void bm_lambert_w_principal(benchmark::State& state) {
  // Sweep the argument so the timing covers both the series region near the
  // branch point and the Halley region.
  double z = -0.9;
  for (auto _ : state) {
    benchmark::DoNotOptimize(lambert_w(WBranch::principal, z));
    z = z >= -1e-3 ? -0.9 : z * 0.95;
  }
}
BENCHMARK(bm_lambert_w_principal);

void bm_lambert_w_minus_one(benchmark::State& state) {
  double z = -inv_e * 0.999;
  for (auto _ : state) {
    benchmark::DoNotOptimize(lambert_w(WBranch::minus_one, z));
    z = z >= -1e-3 ? -inv_e * 0.999 : z * 0.95;
  }
}
BENCHMARK(bm_lambert_w_minus_one);

void bm_closed_loop_poles(benchmark::State& state) {
  const FotdPlant plant(1.0, 1.0, 1.0);
  double gamma = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(closed_loop_poles(plant, gamma));
    gamma = gamma >= 2.0 ? 0.1 : gamma + 0.1;
  }
}
BENCHMARK(bm_closed_loop_poles);

void bm_simulate_reduced(benchmark::State& state) {
  const double gamma = static_cast<double>(state.range(0)) / 100.0;
  const SimConfig cfg{0.002, 40.0, LoopForm::reduced};
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_reduced(gamma * inv_e, 1.0, cfg));
  }
}
BENCHMARK(bm_simulate_reduced)->Arg(100)->Arg(188);

void bm_simulate_general(benchmark::State& state) {
  const FotdPlant plant(1.0, 1.0, 1.0);
  const PiGains gains = gains_from_gamma(plant, 1.8837);
  const SimConfig cfg{0.002, 40.0, LoopForm::general};
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_general(plant, gains, cfg));
  }
}
BENCHMARK(bm_simulate_general);

void bm_compute_metrics(benchmark::State& state) {
  const StepResponse r = simulate_reduced(
      1.8837 * inv_e, 1.0, SimConfig{0.002, 40.0, LoopForm::reduced});
  for (auto _ : state) {
    benchmark::DoNotOptimize(compute_metrics(r));
  }
}
BENCHMARK(bm_compute_metrics);

void bm_tune_target_overshoot(benchmark::State& state) {
  const FotdPlant plant(1.0, 1.0, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tune_target_overshoot(plant, 20.0));
  }
}
BENCHMARK(bm_tune_target_overshoot)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
