// SPDX-License-Identifier: Apache-2.0
//
// bcsim: link-level simulator for multiuser MIMO broadcast beamforming
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef BCSIM_VERIFY_HPP
#define BCSIM_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace bcsim {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;  // one-line diagnostics, filled on failure too
};

/// Fast self-checks of the library's mathematical invariants: linear
/// algebra residuals, RNG statistics, selection properties, precoder
/// normalization, loading-order of the closed-form SNR, and agreement of
/// the pair-sum derivative identity with finite differences. Runs in a
/// few seconds; deterministic for a fixed seed.
std::vector<CheckResult> run_verification(std::uint64_t seed);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace bcsim

#endif  // BCSIM_VERIFY_HPP
