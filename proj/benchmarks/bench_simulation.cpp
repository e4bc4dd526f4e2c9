// SPDX-License-Identifier: Apache-2.0
//
// bcsim: link-level simulator for multiuser MIMO broadcast beamforming
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include <benchmark/benchmark.h>

#include "bcsim/channel.hpp"
#include "bcsim/experiments.hpp"
#include "bcsim/precoding.hpp"
#include "bcsim/rng.hpp"
#include "bcsim/selection.hpp"

namespace {

void BM_DrawChannels(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  bcsim::RngStream rng(7, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bcsim::draw_channels(rng, k, 4, 0.1));
  }
}
BENCHMARK(BM_DrawChannels)->Arg(4)->Arg(20)->Arg(100);

void BM_SusSelect(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  bcsim::RngStream rng(7, 2);
  const bcsim::ComplexMatrix h = bcsim::std_complex_gaussian(rng, k, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        bcsim::sus_select(h, {.beta = 0.4, .m_target = 4}));
  }
}
BENCHMARK(BM_SusSelect)->Arg(4)->Arg(20)->Arg(100);

void BM_FullTrial(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const bcsim::PointConfig pt{.m_tx = 4,
                              .k_users = k,
                              .snr_db = 15.0,
                              .err_power = 0.1,
                              .beta = 0.45};
  std::uint64_t trial = 0;
  for (auto _ : state) {
    bcsim::RngStream stream(7, trial++);
    benchmark::DoNotOptimize(
        bcsim::run_trial(stream, pt, bcsim::PrecoderKind::rrzf()));
  }
}
BENCHMARK(BM_FullTrial)->Arg(4)->Arg(20)->Arg(100);

void BM_MonteCarlo(benchmark::State& state) {
  const bcsim::PointConfig pt{.m_tx = 4,
                              .k_users = 20,
                              .snr_db = 15.0,
                              .err_power = 0.1,
                              .beta = 0.45};
  const int trials = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        bcsim::monte_carlo(pt, bcsim::PrecoderKind::rrzf(), trials, 1, 1));
  }
  state.SetItemsProcessed(state.iterations() * trials);
}
BENCHMARK(BM_MonteCarlo)->Arg(100)->Arg(1000);

}  // namespace
