// SPDX-License-Identifier: Apache-2.0
//
// Serial reference loops against the OpenMP ones on the same scenarios.
// Set OMP_NUM_THREADS to control the parallel side.

#include <benchmark/benchmark.h>

#include <numbers>

#include "sqzf/scenario.hpp"

namespace {

sqzf::ScenarioConfig rotation_config(int points) {
  sqzf::FilterDomain d;
  d.half_points = 4096;
  sqzf::LoStrategy lo;
  lo.anchors_hz = {3e5, 1.2e6};
  return {sqzf::InputNoiseSpec::constant_db(-2.0, 8.0, std::numbers::pi / 2),
          sqzf::FilterResponse::from_lineshape({0.1676, 0.04, 0.08, 0.7e6, 0.0}, sqzf::PhaseModel::MinimumPhase, d),
          sqzf::FrequencyGrid::linspace(1e5, 2e6, points), lo, {}, ""};
}

template <auto Fn>
void BM_predict(benchmark::State& state) {
  const auto cfg = rotation_config(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Fn(cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Fn>
void BM_phase_scan(benchmark::State& state) {
  const auto cfg = rotation_config(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Fn(cfg, 256));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 256);
}

template <auto Fn>
void BM_angle_tracking(benchmark::State& state) {
  const auto cfg = rotation_config(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Fn(cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_predict<&sqzf::serial::predict_spectrum>)->Name("predict/serial")->Range(64, 16384);
BENCHMARK(BM_predict<&sqzf::predict_spectrum>)->Name("predict/openmp")->Range(64, 16384)->UseRealTime();
BENCHMARK(BM_phase_scan<&sqzf::serial::phase_scan>)->Name("phase_scan/serial")->Range(64, 4096);
BENCHMARK(BM_phase_scan<&sqzf::phase_scan>)->Name("phase_scan/openmp")->Range(64, 4096)->UseRealTime();
BENCHMARK(BM_angle_tracking<&sqzf::serial::angle_tracking>)->Name("angle_tracking/serial")->Range(64, 16384);
BENCHMARK(BM_angle_tracking<&sqzf::angle_tracking>)->Name("angle_tracking/openmp")->Range(64, 16384)->UseRealTime();
BENCHMARK_MAIN();
