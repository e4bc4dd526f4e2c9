// SPDX-License-Identifier: Apache-2.0
//
// bcsim: link-level simulator for multiuser MIMO broadcast beamforming
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include <benchmark/benchmark.h>

BENCHMARK_MAIN();
