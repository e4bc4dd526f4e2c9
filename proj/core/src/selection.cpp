// SPDX-License-Identifier: Apache-2.0
//
// bcsim: link-level simulator for multiuser MIMO broadcast beamforming
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "bcsim/selection.hpp"

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>

namespace bcsim {

namespace {

double norm_sq(std::span<const Complex> a) {
  double s = 0.0;
  for (const Complex& v : a) s += std::norm(v);
  return s;
}

}  // namespace

double correlation(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("correlation: length mismatch");
  }
  Complex dot{};
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += std::conj(a[i]) * b[i];
  }
  const double na = std::sqrt(norm_sq(a));
  const double nb = std::sqrt(norm_sq(b));
  if (na == 0.0 || nb == 0.0) {
    throw std::invalid_argument("correlation: zero-norm vector");
  }
  return std::abs(dot) / (na * nb);
}

SelectionResult sus_select(const ComplexMatrix& h_est,
                           const SelectionParams& params) {
  if (!(params.beta >= 0.0 && params.beta <= 1.0)) {
    throw std::invalid_argument("sus_select: beta outside [0, 1]");
  }
  if (params.m_target < 1) {
    throw std::invalid_argument("sus_select: m_target must be positive");
  }
  if (h_est.empty()) {
    throw std::invalid_argument("sus_select: empty channel");
  }

  const int k = h_est.rows();
  std::vector<int> pool;
  std::vector<double> norms(static_cast<std::size_t>(k));
  pool.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    norms[static_cast<std::size_t>(i)] = norm_sq(h_est.row(i));
    if (norms[static_cast<std::size_t>(i)] > 0.0) pool.push_back(i);
  }

  SelectionResult result;
  result.order.reserve(static_cast<std::size_t>(params.m_target));

  while (static_cast<int>(result.order.size()) < params.m_target &&
         !pool.empty()) {
    std::size_t best_pos = 0;
    for (std::size_t i = 1; i < pool.size(); ++i) {
      if (norms[static_cast<std::size_t>(pool[i])] >
          norms[static_cast<std::size_t>(pool[best_pos])]) {
        best_pos = i;
      }
    }
    const int picked = pool[best_pos];
    result.order.push_back(picked);

    std::vector<int> survivors;
    survivors.reserve(pool.size());
    for (const int cand : pool) {
      if (cand == picked) continue;
      if (correlation(h_est.row(picked), h_est.row(cand)) < params.beta) {
        survivors.push_back(cand);
      }
    }
    pool = std::move(survivors);
  }

  result.pool_exhausted =
      static_cast<int>(result.order.size()) < params.m_target;
  return result;
}

}  // namespace bcsim
