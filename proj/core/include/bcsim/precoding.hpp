// SPDX-License-Identifier: Apache-2.0
//
// bcsim: link-level simulator for multiuser MIMO broadcast beamforming
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef BCSIM_PRECODING_HPP
#define BCSIM_PRECODING_HPP

#include <optional>
#include <string_view>

#include "bcsim/complex_matrix.hpp"

namespace bcsim {

/// Linear transmit beamforming family, parameterized by the diagonal
/// loading of the channel Gram matrix.
struct PrecoderKind {
  enum class Variant {
    kZf,           // plain channel inversion, no loading
    kRzf,          // loading matched to the noise level only
    kRrzf,         // loading matched to noise plus CSI error power
    kMf,           // matched filter, the infinite-loading limit
    kCustomAlpha,  // caller-chosen fixed loading
  };

  Variant variant = Variant::kZf;
  /// Loading value for kCustomAlpha; ignored otherwise.
  double alpha = 0.0;

  static PrecoderKind zf() { return {Variant::kZf, 0.0}; }
  static PrecoderKind rzf() { return {Variant::kRzf, 0.0}; }
  static PrecoderKind rrzf() { return {Variant::kRrzf, 0.0}; }
  static PrecoderKind mf() { return {Variant::kMf, 0.0}; }
  static PrecoderKind custom(double alpha);

  std::string_view name() const;

  bool operator==(const PrecoderKind&) const = default;
};

/// Inverse of PrecoderKind::name() for the named families (ZF, RZF, RRZF,
/// MF, case-insensitive); nullopt for anything else.
std::optional<PrecoderKind> precoder_kind_from_name(std::string_view name);

/// Diagonal-loading value for a precoder family at the given operating
/// point: 0 for ZF, m_tx * sigma2 / p for RZF, m_tx * (sigma2 / p +
/// err_power) for RRZF, +infinity as the matched-filter marker, and the
/// stored value for kCustomAlpha. The antenna count m_tx enters the
/// loading even when fewer than m_tx users end up selected. Requires
/// p > 0, sigma2 >= 0, err_power in [0, 1], m_tx >= 1, and for
/// kCustomAlpha a finite alpha >= 0; throws std::invalid_argument
/// otherwise.
double regularization_factor(const PrecoderKind& kind, int m_tx, double p,
                             double sigma2, double err_power);

/// Beamformer ready for transmission: x = rho * w * s for unit-power
/// symbols s, so column j of w serves selected user j.
struct Precoder {
  ComplexMatrix w;          // m_tx x n_selected, unnormalized directions
  double rho = 0.0;         // power normalization sqrt(p / tr(w^H w))
  double alpha_used = 0.0;  // +infinity for the matched-filter branch
};

/// Builds the loaded channel-inversion beamformer from the selected rows
/// of the estimated channel (n x m, n <= m): for finite alpha,
/// w = h^H (h h^H + alpha I)^-1; for alpha = +infinity the matched filter
/// w = h^H. rho scales the result to transmit power p exactly:
/// rho^2 * tr(w^H w) = p within 1e-10 relative.
///
/// Requires p > 0 and alpha >= 0 (or +infinity); throws
/// std::invalid_argument otherwise. At alpha = 0 a rank-deficient Gram
/// matrix surfaces as SingularMatrixError so Monte-Carlo callers can
/// redraw the trial.
Precoder build_precoder(const ComplexMatrix& h_est_sel, double alpha,
                        double p);

}  // namespace bcsim

#endif  // BCSIM_PRECODING_HPP
