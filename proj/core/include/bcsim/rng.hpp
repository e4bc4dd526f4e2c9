// SPDX-License-Identifier: Apache-2.0
//
// bcsim: link-level simulator for multiuser MIMO broadcast beamforming
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef BCSIM_RNG_HPP
#define BCSIM_RNG_HPP

#include <complex>
#include <cstdint>

namespace bcsim {

/// Deterministic counter-based random stream. The sequence is a pure
/// function of (seed, stream_id): reconstructing a stream with the same
/// pair replays the identical values, independent of any other stream.
/// Streams are cheap value types; Monte-Carlo drivers hand one stream per
/// trial to worker threads, which keeps results independent of the thread
/// count and of scheduling order.
///
/// Generator: SplitMix64. Distinct stream ids start at effectively random
/// offsets of the period-2^64 orbit, so window overlap between streams of
/// practical length is vanishingly unlikely.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  std::uint64_t next_u64() noexcept;

  /// Uniform double in [0, 1), 53-bit resolution.
  double next_unit() noexcept;

  /// Uniform double in (0, 1]; safe as a logarithm argument.
  double next_unit_positive() noexcept;

  /// Circularly-symmetric standard complex Gaussian CN(0,1): real and
  /// imaginary parts are independent N(0, 1/2). Box-Muller in polar form,
  /// two uniforms per sample.
  std::complex<double> next_std_complex_gaussian() noexcept;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t state_;
};

}  // namespace bcsim

#endif  // BCSIM_RNG_HPP
