// SPDX-License-Identifier: Apache-2.0
//
// bcsim: link-level simulator for multiuser MIMO broadcast beamforming
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "bcsim/metrics.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

namespace bcsim {

namespace {

void validate_profile(const EigenProfile& prof, double alpha,
                      bool positive_lambdas, const char* op) {
  if (prof.lambdas.empty()) {
    throw std::invalid_argument(std::string(op) + ": empty spectrum");
  }
  if (prof.m < 1 || static_cast<int>(prof.lambdas.size()) > prof.m) {
    throw std::invalid_argument(std::string(op) +
                                ": spectrum larger than antenna count");
  }
  if (!(prof.p > 0.0)) {
    throw std::invalid_argument(std::string(op) + ": power must be positive");
  }
  if (!(prof.sigma2 >= 0.0)) {
    throw std::invalid_argument(std::string(op) +
                                ": noise power must be nonnegative");
  }
  if (!(prof.err_power >= 0.0 && prof.err_power <= 1.0)) {
    throw std::invalid_argument(std::string(op) +
                                ": err_power outside [0, 1]");
  }
  if (std::isnan(alpha) || alpha < 0.0) {
    throw std::invalid_argument(std::string(op) + ": alpha must be >= 0");
  }
  const bool need_positive = positive_lambdas || alpha == 0.0;
  for (const double lam : prof.lambdas) {
    if (!std::isfinite(lam) || lam < 0.0 || (need_positive && lam == 0.0)) {
      throw std::invalid_argument(std::string(op) +
                                  ": eigenvalues must be positive");
    }
  }
}

}  // namespace

SinrReport physical_sinr(const ComplexMatrix& h_true_sel, const Precoder& pre,
                         double sigma2) {
  if (h_true_sel.empty() || pre.w.empty()) {
    throw std::invalid_argument("physical_sinr: empty input");
  }
  if (h_true_sel.cols() != pre.w.rows() ||
      h_true_sel.rows() != pre.w.cols()) {
    throw std::invalid_argument("physical_sinr: dimension mismatch");
  }
  if (!(sigma2 >= 0.0)) {
    throw std::invalid_argument("physical_sinr: sigma2 must be nonnegative");
  }

  const ComplexMatrix gains = matmul(h_true_sel, pre.w);
  const double rho2 = pre.rho * pre.rho;
  const int n = gains.rows();

  SinrReport report;
  report.per_user_sinr.resize(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    double interference = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j != k) interference += std::norm(gains(k, j));
    }
    const double denom = rho2 * interference + sigma2;
    if (!(denom > 0.0)) {
      throw std::domain_error("physical_sinr: zero noise and interference");
    }
    report.per_user_sinr[static_cast<std::size_t>(k)] =
        rho2 * std::norm(gains(k, k)) / denom;
  }
  report.sum_rate = sum_rate(report.per_user_sinr);
  return report;
}

double model_average_sinr(const EigenProfile& prof, double alpha) {
  validate_profile(prof, alpha, false, "model_average_sinr");

  const double m = static_cast<double>(prof.m);
  const double noise_ratio = prof.err_power + prof.sigma2 / prof.p;

  double s1 = 0.0;  // sum lam / (lam + alpha)
  double s2 = 0.0;  // sum lam^2 / (lam + alpha)^2
  double t = 0.0;   // sum lam / (lam + alpha)^2
  if (std::isinf(alpha)) {
    // Limit of alpha^2 * {s1^2 + s2, ...}: the loading dominates every
    // eigenvalue and the ratios collapse onto plain spectral sums.
    for (const double lam : prof.lambdas) {
      s1 += lam;
      s2 += lam * lam;
      t += lam;
    }
  } else {
    for (const double lam : prof.lambdas) {
      const double r = lam / (lam + alpha);
      s1 += r;
      s2 += r * r;
      t += r / (lam + alpha);
    }
  }

  const double numerator = s1 * s1 + s2;
  const double denominator =
      noise_ratio * m * (m + 1.0) * t + m * s2 - s1 * s1;
  if (!(denominator > 0.0)) {
    throw std::domain_error(
        "model_average_sinr: nonpositive interference-plus-noise "
        "denominator");
  }
  return numerator / denominator;
}

double orthogonal_avg_snr(const EigenProfile& prof, double alpha) {
  validate_profile(prof, alpha, true, "orthogonal_avg_snr");

  double num = 0.0;
  double den = 0.0;
  if (std::isinf(alpha)) {
    for (const double lam : prof.lambdas) {
      num += lam * lam;
      den += lam;
    }
  } else {
    for (const double lam : prof.lambdas) {
      const double shifted = lam + alpha;
      num += (lam * lam) / (shifted * shifted);
      den += lam / (shifted * shifted);
    }
  }
  const double m = static_cast<double>(prof.m);
  const double gain = prof.p / (m * (prof.err_power * prof.p + prof.sigma2));
  if (!std::isfinite(gain)) {
    throw std::domain_error(
        "orthogonal_avg_snr: zero effective noise power");
  }
  return gain * num / den;
}

double monotonicity_term(std::span<const double> lambdas, double alpha) {
  if (lambdas.empty()) {
    throw std::invalid_argument("monotonicity_term: empty spectrum");
  }
  if (!std::isfinite(alpha) || alpha < 0.0) {
    throw std::invalid_argument(
        "monotonicity_term: alpha must be finite and nonnegative");
  }
  for (const double lam : lambdas) {
    if (!std::isfinite(lam) || lam < 0.0 || lam + alpha <= 0.0) {
      throw std::invalid_argument(
          "monotonicity_term: eigenvalues must satisfy lam + alpha > 0");
    }
  }
  double total = 0.0;
  for (std::size_t i = 1; i < lambdas.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const double li = lambdas[i];
      const double lj = lambdas[j];
      const double diff = li - lj;
      const double di = (li + alpha) * (li + alpha) * (li + alpha);
      const double dj = (lj + alpha) * (lj + alpha) * (lj + alpha);
      total += li * lj * diff * diff / (di * dj);
    }
  }
  return total;
}

double sum_rate(std::span<const double> sinrs) {
  double total = 0.0;
  for (const double s : sinrs) {
    if (!std::isfinite(s) || s < 0.0) {
      throw std::invalid_argument("sum_rate: SINR must be finite and >= 0");
    }
    total += std::log2(1.0 + s);
  }
  return total;
}

}  // namespace bcsim
