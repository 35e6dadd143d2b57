// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The oofsk Authors

#include <benchmark/benchmark.h>

#include <cmath>

#include "oofsk/analytic.hpp"
#include "oofsk/detector.hpp"
#include "oofsk/montecarlo.hpp"
#include "oofsk/specfun.hpp"

namespace {

using oofsk::ChannelKnowledge;
using oofsk::SystemConfig;

void BM_LogBessel(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  double x = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(oofsk::specfun::log_bessel_i(order, x));
    x = x < 1e4 ? x * 1.37 : 0.1;
  }
}
BENCHMARK(BM_LogBessel)->Arg(0)->Arg(3)->Arg(15);

void BM_ThresholdUnknown(benchmark::State& state) {
  SystemConfig c{8, 0.2, static_cast<int>(state.range(0)), 10.0, 1.0, 0.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(oofsk::detector::threshold_unknown(c));
    c.snr = c.snr < 100.0 ? c.snr * 1.01 : 10.0;
  }
}
BENCHMARK(BM_ThresholdUnknown)->Arg(1)->Arg(2)->Arg(8);

void BM_PeUnknown(benchmark::State& state) {
  const auto method = state.range(1) == 0 ? oofsk::analytic::Method::DirectIntegral
                                          : oofsk::analytic::Method::Hypergeometric;
  const SystemConfig c{static_cast<int>(state.range(0)), 0.5, 2, 10.0, 1.0, 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(oofsk::analytic::pe_unknown(c, method));
}
BENCHMARK(BM_PeUnknown)->Args({8, 0})->Args({8, 1})->Args({32, 0})->Args({32, 1})
    ->Unit(benchmark::kMicrosecond);

void BM_PeKnownAverage(benchmark::State& state) {
  const SystemConfig c{8, 0.5, 2, 10.0, 1.0, 0.0, ChannelKnowledge::MagnitudeKnown};
  for (auto _ : state) benchmark::DoNotOptimize(oofsk::analytic::pe_known_average(c));
}
BENCHMARK(BM_PeKnownAverage)->Unit(benchmark::kMillisecond);

void BM_SimulationTrials(benchmark::State& state) {
  oofsk::montecarlo::SimPlan plan;
  plan.config = {8, 0.5, static_cast<int>(state.range(0)), 4.0, 1.0, 0.0,
                 state.range(1) ? ChannelKnowledge::MagnitudeKnown : ChannelKnowledge::DistributionOnly};
  const oofsk::montecarlo::Simulator sim(plan);
  std::uint64_t first = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sim.run_range(first, 1024));
    first += 1024;
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * 1024);
}
BENCHMARK(BM_SimulationTrials)->Args({2, 0})->Args({8, 0})->Args({2, 1})->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
