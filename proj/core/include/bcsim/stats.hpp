// SPDX-License-Identifier: Apache-2.0
//
// bcsim: link-level simulator for multiuser MIMO broadcast beamforming
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef BCSIM_STATS_HPP
#define BCSIM_STATS_HPP

#include <span>

namespace bcsim {

/// Recursive pairwise summation. Used instead of a running sum so that
/// aggregate statistics depend only on element order, never on how trials
/// were partitioned across threads, and so rounding error stays
/// O(log n) * eps.
double pairwise_sum(std::span<const double> xs);

struct MeanStdError {
  double mean = 0.0;
  /// Standard error of the mean; 0 for fewer than two samples.
  double std_error = 0.0;
};

MeanStdError mean_and_std_error(std::span<const double> xs);

}  // namespace bcsim

#endif  // BCSIM_STATS_HPP
