// SPDX-License-Identifier: Apache-2.0
//
// bcsim: link-level simulator for multiuser MIMO broadcast beamforming
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "bcsim/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace bcsim {

ComplexMatrix std_complex_gaussian(RngStream& rng, int rows, int cols) {
  ComplexMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      m(i, j) = rng.next_std_complex_gaussian();
    }
  }
  return m;
}

ChannelRealization draw_channels(RngStream& rng, int k_users, int m_tx,
                                 double err_power) {
  if (m_tx < 1 || k_users < m_tx) {
    throw std::invalid_argument("draw_channels: require k_users >= m_tx >= 1");
  }
  if (!(err_power >= 0.0 && err_power <= 1.0)) {
    throw std::invalid_argument("draw_channels: err_power outside [0, 1]");
  }

  const ComplexMatrix g = std_complex_gaussian(rng, k_users, m_tx);
  const ComplexMatrix omega = std_complex_gaussian(rng, k_users, m_tx);

  ChannelRealization chan;
  chan.err_power = err_power;
  chan.h_est = scale(g, std::sqrt(1.0 - err_power));
  if (err_power == 0.0) {
    chan.h_true = chan.h_est;
  } else {
    chan.h_true = add(chan.h_est, scale(omega, std::sqrt(err_power)));
  }
  return chan;
}

}  // namespace bcsim
