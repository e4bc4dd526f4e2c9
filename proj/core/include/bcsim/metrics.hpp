// SPDX-License-Identifier: Apache-2.0
//
// bcsim: link-level simulator for multiuser MIMO broadcast beamforming
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef BCSIM_METRICS_HPP
#define BCSIM_METRICS_HPP

#include <span>
#include <vector>

#include "bcsim/complex_matrix.hpp"
#include "bcsim/precoding.hpp"

namespace bcsim {

struct SinrReport {
  std::vector<double> per_user_sinr;
  double sum_rate = 0.0;
};

/// Post-beamforming SINR each selected user actually experiences: signal
/// and interference powers come from the true channel rows while the
/// beamformer was built from estimates. For user k with effective gains
/// e_kj = (h_true_sel * w)(k, j),
///   sinr_k = rho^2 |e_kk|^2 / (rho^2 * sum_{j != k} |e_kj|^2 + sigma2).
/// Requires matching dimensions and sigma2 >= 0 (sigma2 > 0 whenever some
/// user could see zero interference).
SinrReport physical_sinr(const ComplexMatrix& h_true_sel, const Precoder& pre,
                         double sigma2);

/// Operating point plus the spectrum of the selected users' estimated-
/// channel Gram matrix, which is all the closed-form predictions below
/// need. lambdas holds at most m values, ascending or not.
struct EigenProfile {
  std::vector<double> lambdas;
  int m = 1;             // transmit antennas
  double p = 1.0;        // transmit power
  double sigma2 = 0.0;   // receiver noise power
  double err_power = 0.0;  // CSI error fraction e^2
};

/// Expected per-user SINR predicted from the Gram spectrum when the CSI
/// error is lumped with thermal noise (total effective noise power
/// err_power * p + sigma2). With s1 = sum lam/(lam+alpha),
/// s2 = sum lam^2/(lam+alpha)^2 and t = sum lam/(lam+alpha)^2:
///
///   (s1^2 + s2) / [ (e2 + sigma2/p) m (m+1) t + m s2 - s1^2 ]
///
/// alpha = +infinity evaluates the matched-filter limit
/// (l1^2 + l2) / [ (e2 + sigma2/p) m (m+1) l1 + m l2 - l1^2 ] with
/// l1 = sum lam, l2 = sum lam^2. For m = 1 the value reduces to
/// lam p / (e2 p + sigma2) for every alpha.
///
/// Requires a nonempty spectrum with lambdas.size() <= m, every lam >= 0
/// (strictly positive when alpha = 0), and alpha >= 0. A nonpositive
/// denominator is reported as std::domain_error rather than clamped.
double model_average_sinr(const EigenProfile& prof, double alpha);

/// Expected per-user SNR when the selected rows are mutually orthogonal,
/// so interference vanishes and only the beamforming gain is left:
///
///   p / (m (e2 p + sigma2)) * [sum lam^2/(lam+alpha)^2] /
///                             [sum lam/(lam+alpha)^2]
///
/// alpha = +infinity gives the matched-filter limit with the bracket
/// replaced by sum lam^2 / sum lam. Strictly increasing in alpha unless
/// all lambdas coincide, in which case it is constant at
/// p lam / (m (e2 p + sigma2)). Requires every lam > 0.
double orthogonal_avg_snr(const EigenProfile& prof, double alpha);

/// Pair sum  sum_{i > j} lam_i lam_j (lam_i - lam_j)^2 /
/// ((lam_i + alpha)^3 (lam_j + alpha)^3). Equals half the alpha-derivative
/// of the bracket in orthogonal_avg_snr times [sum lam/(lam+alpha)^2]^2,
/// hence nonnegative, and zero exactly when the lambdas are all equal.
/// Requires finite alpha >= 0 and every lam + alpha > 0.
double monotonicity_term(std::span<const double> lambdas, double alpha);

/// Achievable sum rate sum_k log2(1 + sinr_k) in bits per channel use.
/// Requires every entry to be finite and nonnegative.
double sum_rate(std::span<const double> sinrs);

}  // namespace bcsim

#endif  // BCSIM_METRICS_HPP
