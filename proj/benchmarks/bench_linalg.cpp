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
#include "bcsim/complex_matrix.hpp"
#include "bcsim/rng.hpp"

namespace {

bcsim::ComplexMatrix random_square(int n) {
  bcsim::RngStream rng(7, static_cast<std::uint64_t>(n));
  return bcsim::std_complex_gaussian(rng, n, n);
}

void BM_Matmul(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const bcsim::ComplexMatrix a = random_square(n);
  const bcsim::ComplexMatrix b = random_square(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bcsim::matmul(a, b));
  }
}
BENCHMARK(BM_Matmul)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

void BM_Inverse(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  // A Gram matrix plus loading is the shape the precoder actually inverts.
  const bcsim::ComplexMatrix h = random_square(n);
  bcsim::ComplexMatrix gram = bcsim::matmul(h, bcsim::conj_transpose(h));
  for (int i = 0; i < n; ++i) gram(i, i) += 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(bcsim::inverse(gram));
  }
}
BENCHMARK(BM_Inverse)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

void BM_HermitianEigenvalues(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const bcsim::ComplexMatrix h = random_square(n);
  const bcsim::ComplexMatrix gram =
      bcsim::matmul(h, bcsim::conj_transpose(h));
  for (auto _ : state) {
    benchmark::DoNotOptimize(bcsim::hermitian_eigenvalues(gram));
  }
}
BENCHMARK(BM_HermitianEigenvalues)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

}  // namespace
