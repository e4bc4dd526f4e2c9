// SPDX-License-Identifier: Apache-2.0
//
// bcsim: link-level simulator for multiuser MIMO broadcast beamforming
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef BCSIM_SELECTION_HPP
#define BCSIM_SELECTION_HPP

#include <span>
#include <vector>

#include "bcsim/complex_matrix.hpp"

namespace bcsim {

struct SelectionParams {
  /// Semiorthogonality threshold in [0, 1]. A candidate survives a round
  /// only if its correlation with the newly selected user is strictly
  /// below beta.
  double beta = 1.0;
  /// Number of users to pick, normally the transmit antenna count.
  int m_target = 1;
};

struct SelectionResult {
  /// Row indices into the estimated channel, in the order picked.
  std::vector<int> order;
  /// True when the candidate pool emptied before m_target users were found.
  bool pool_exhausted = false;
};

/// Normalized inner-product magnitude |a^H b| / (||a|| ||b||), in [0, 1]
/// up to roundoff. Throws std::invalid_argument on mismatched lengths or a
/// zero-norm argument.
double correlation(std::span<const Complex> a, std::span<const Complex> b);

/// Greedy semiorthogonal user selection on the estimated channel:
/// each round picks the candidate with the largest row norm, then drops
/// every remaining candidate whose correlation with that pick is not
/// strictly below beta. Norm ties break toward the lower row index, and
/// zero-norm rows are silently excluded up front. Selection stops after
/// m_target picks or when the pool empties, whichever comes first.
/// Requires beta in [0, 1] and 1 <= m_target; throws std::invalid_argument
/// otherwise.
SelectionResult sus_select(const ComplexMatrix& h_est,
                           const SelectionParams& params);

}  // namespace bcsim

#endif  // BCSIM_SELECTION_HPP
