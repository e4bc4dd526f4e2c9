// SPDX-License-Identifier: Apache-2.0
//
// bcsim: link-level simulator for multiuser MIMO broadcast beamforming
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef BCSIM_CHANNEL_HPP
#define BCSIM_CHANNEL_HPP

#include "bcsim/complex_matrix.hpp"
#include "bcsim/rng.hpp"

namespace bcsim {

/// One Rayleigh block-fading realization for K single-antenna users and an
/// M-antenna transmitter. Row k of each matrix is user k's channel.
///
/// The transmitter only sees h_est. The estimate and the true channel are
/// coupled as h_true = h_est + e * omega with omega iid CN(0,1) and
/// h_est = sqrt(1 - e^2) * g, g iid CN(0,1), so every row of h_true is
/// itself CN(0, I) and err_power = e^2 is the fraction of channel energy
/// the transmitter cannot see.
struct ChannelRealization {
  ComplexMatrix h_true;
  ComplexMatrix h_est;
  double err_power = 0.0;
};

/// Fills a rows x cols matrix with iid CN(0,1) entries, row-major draw
/// order (one stream position per entry, two uniforms each).
ComplexMatrix std_complex_gaussian(RngStream& rng, int rows, int cols);

/// Draws a coupled (true, estimated) channel pair as described on
/// ChannelRealization. Requires k_users >= m_tx >= 1 and err_power in
/// [0, 1]; throws std::invalid_argument otherwise. err_power = 0 gives
/// h_true identical to h_est; err_power = 1 gives an all-zero estimate.
/// Exactly 2*K*M Gaussian draws are consumed regardless of err_power.
ChannelRealization draw_channels(RngStream& rng, int k_users, int m_tx,
                                 double err_power);

}  // namespace bcsim

#endif  // BCSIM_CHANNEL_HPP
