// SPDX-License-Identifier: Apache-2.0
//
// bcsim: link-level simulator for multiuser MIMO broadcast beamforming
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "bcsim/precoding.hpp"

#include <cctype>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>

namespace bcsim {

PrecoderKind PrecoderKind::custom(double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument(
        "PrecoderKind::custom: alpha must be finite and nonnegative");
  }
  return {Variant::kCustomAlpha, alpha};
}

std::string_view PrecoderKind::name() const {
  switch (variant) {
    case Variant::kZf:
      return "ZF";
    case Variant::kRzf:
      return "RZF";
    case Variant::kRrzf:
      return "RRZF";
    case Variant::kMf:
      return "MF";
    case Variant::kCustomAlpha:
      return "CUSTOM";
  }
  return "UNKNOWN";
}

std::optional<PrecoderKind> precoder_kind_from_name(std::string_view name) {
  auto equals_ci = [](std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (std::toupper(static_cast<unsigned char>(a[i])) !=
          std::toupper(static_cast<unsigned char>(b[i]))) {
        return false;
      }
    }
    return true;
  };
  if (equals_ci(name, "ZF")) return PrecoderKind::zf();
  if (equals_ci(name, "RZF")) return PrecoderKind::rzf();
  if (equals_ci(name, "RRZF")) return PrecoderKind::rrzf();
  if (equals_ci(name, "MF")) return PrecoderKind::mf();
  return std::nullopt;
}

double regularization_factor(const PrecoderKind& kind, int m_tx, double p,
                             double sigma2, double err_power) {
  if (m_tx < 1) {
    throw std::invalid_argument("regularization_factor: m_tx must be >= 1");
  }
  if (!(p > 0.0)) {
    throw std::invalid_argument(
        "regularization_factor: transmit power must be positive");
  }
  if (!(sigma2 >= 0.0)) {
    throw std::invalid_argument(
        "regularization_factor: noise power must be nonnegative");
  }
  if (!(err_power >= 0.0 && err_power <= 1.0)) {
    throw std::invalid_argument(
        "regularization_factor: err_power outside [0, 1]");
  }
  switch (kind.variant) {
    case PrecoderKind::Variant::kZf:
      return 0.0;
    case PrecoderKind::Variant::kRzf:
      return static_cast<double>(m_tx) * sigma2 / p;
    case PrecoderKind::Variant::kRrzf:
      return static_cast<double>(m_tx) * (sigma2 / p + err_power);
    case PrecoderKind::Variant::kMf:
      return std::numeric_limits<double>::infinity();
    case PrecoderKind::Variant::kCustomAlpha:
      if (!(kind.alpha >= 0.0) || !std::isfinite(kind.alpha)) {
        throw std::invalid_argument(
            "regularization_factor: custom alpha must be finite and "
            "nonnegative");
      }
      return kind.alpha;
  }
  throw std::invalid_argument("regularization_factor: unknown kind");
}

Precoder build_precoder(const ComplexMatrix& h_est_sel, double alpha,
                        double p) {
  if (h_est_sel.empty()) {
    throw std::invalid_argument("build_precoder: empty channel");
  }
  if (h_est_sel.rows() > h_est_sel.cols()) {
    throw std::invalid_argument(
        "build_precoder: more selected users than antennas");
  }
  if (!(p > 0.0)) {
    throw std::invalid_argument("build_precoder: power must be positive");
  }
  if (std::isnan(alpha) || alpha < 0.0) {
    throw std::invalid_argument("build_precoder: alpha must be >= 0");
  }

  const ComplexMatrix h_herm = conj_transpose(h_est_sel);

  Precoder out;
  out.alpha_used = alpha;
  if (std::isinf(alpha)) {
    out.w = h_herm;
  } else {
    ComplexMatrix gram = matmul(h_est_sel, h_herm);
    for (int i = 0; i < gram.rows(); ++i) gram(i, i) += alpha;
    out.w = matmul(h_herm, inverse(gram));
  }

  const double energy = trace_real(matmul(conj_transpose(out.w), out.w));
  if (!(energy > 0.0) || !std::isfinite(energy)) {
    throw SingularMatrixError("build_precoder: degenerate beamformer energy");
  }
  out.rho = std::sqrt(p / energy);
  return out;
}

}  // namespace bcsim
