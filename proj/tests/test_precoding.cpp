// SPDX-License-Identifier: Apache-2.0
//
// bcsim: link-level simulator for multiuser MIMO broadcast beamforming
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include <doctest.h>

#include "bcsim/channel.hpp"
#include "bcsim/complex_matrix.hpp"
#include "bcsim/precoding.hpp"
#include "bcsim/rng.hpp"

namespace {

using bcsim::Complex;
using bcsim::ComplexMatrix;
using bcsim::Precoder;
using bcsim::PrecoderKind;

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

TEST_SUITE_BEGIN("precoding");

TEST_CASE("robust loading at 15 dB with ten percent error power") {
  // 4 * (10^-1.5 + 0.1), frozen from a hand evaluation.
  const double alpha = bcsim::regularization_factor(
      PrecoderKind::rrzf(), 4, 1.0, std::pow(10.0, -1.5), 0.1);
  CHECK(alpha == doctest::Approx(0.5264911064).epsilon(1e-9));
}

TEST_CASE("regularized and robust loadings coincide without CSI error") {
  for (const int m : {1, 2, 4, 8}) {
    for (const double p : {0.5, 1.0, 4.0}) {
      for (const double sigma2 : {0.001, 0.0316227766, 1.0}) {
        const double rzf = bcsim::regularization_factor(
            PrecoderKind::rzf(), m, p, sigma2, 0.0);
        const double rrzf = bcsim::regularization_factor(
            PrecoderKind::rrzf(), m, p, sigma2, 0.0);
        CHECK(rzf == rrzf);
        CHECK(rzf == doctest::Approx(m * sigma2 / p).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("zero-forcing never loads and matched filter always saturates") {
  CHECK(bcsim::regularization_factor(PrecoderKind::zf(), 4, 1.0, 0.1, 0.1) ==
        0.0);
  CHECK(std::isinf(bcsim::regularization_factor(PrecoderKind::mf(), 4, 1.0,
                                                0.1, 0.1)));
  CHECK(bcsim::regularization_factor(PrecoderKind::custom(0.7), 4, 1.0, 0.1,
                                     0.1) == 0.7);
}

TEST_CASE("regularization rejects nonpositive power") {
  CHECK_THROWS_AS((void)bcsim::regularization_factor(PrecoderKind::rzf(), 4,
                                                     0.0, 0.1, 0.1),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)bcsim::regularization_factor(PrecoderKind::rzf(), 4,
                                                     -1.0, 0.1, 0.1),
                  std::invalid_argument);
}

TEST_CASE("scheme names parse case-insensitively") {
  REQUIRE(bcsim::precoder_kind_from_name("zf").has_value());
  CHECK(*bcsim::precoder_kind_from_name("zf") == PrecoderKind::zf());
  CHECK(*bcsim::precoder_kind_from_name("RrZf") == PrecoderKind::rrzf());
  CHECK(*bcsim::precoder_kind_from_name("MF") == PrecoderKind::mf());
  CHECK_FALSE(bcsim::precoder_kind_from_name("dpc").has_value());
}

TEST_CASE("identity channel with no loading returns identity beams") {
  for (const int m : {1, 2, 3, 5}) {
    const Precoder pre =
        bcsim::build_precoder(ComplexMatrix::identity(m), 0.0, 1.0);
    CHECK(pre.w == ComplexMatrix::identity(m));
    CHECK(pre.rho == doctest::Approx(1.0 / std::sqrt(m)).epsilon(1e-14));
    CHECK(pre.alpha_used == 0.0);
  }
}

TEST_CASE("identity channel with unit loading halves the beams") {
  const Precoder pre =
      bcsim::build_precoder(ComplexMatrix::identity(2), 1.0, 1.0);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const Complex expected =
          i == j ? Complex{0.5, 0.0} : Complex{0.0, 0.0};
      CHECK(std::abs(pre.w(i, j) - expected) < 1e-15);
    }
  }
  CHECK(pre.rho == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("unregularized beams invert the channel") {
  bcsim::RngStream rng(51, 0);
  int tested = 0;
  while (tested < 50) {
    const int m = 2 + static_cast<int>(rng.next_u64() % 5);
    const int n = 1 + static_cast<int>(rng.next_u64() % m);
    const ComplexMatrix h = bcsim::std_complex_gaussian(rng, n, m);
    const Precoder pre = bcsim::build_precoder(h, 0.0, 1.0);
    // Keep the probe on numerically sane draws; singularity handling has
    // its own test.
    if (bcsim::frobenius_norm(pre.w) > 1e3) continue;
    ++tested;
    const double residual = bcsim::frobenius_norm(bcsim::subtract(
        bcsim::matmul(h, pre.w), ComplexMatrix::identity(n)));
    CHECK(residual < 1e-9);
  }
}

TEST_CASE("power normalization holds for every loading") {
  bcsim::RngStream rng(52, 0);
  for (int rep = 0; rep < 50; ++rep) {
    const int m = 2 + static_cast<int>(rng.next_u64() % 5);
    const int n = 1 + static_cast<int>(rng.next_u64() % m);
    const ComplexMatrix h = bcsim::std_complex_gaussian(rng, n, m);
    const double p = 0.25 + 4.0 * rng.next_unit();
    for (const double alpha : {0.0, 1e-3, 0.5264911064, 10.0, kInf}) {
      const Precoder pre = bcsim::build_precoder(h, alpha, p);
      const double energy = bcsim::trace_real(
          bcsim::matmul(bcsim::conj_transpose(pre.w), pre.w));
      CHECK(pre.rho * pre.rho * energy ==
            doctest::Approx(p).epsilon(1e-10));
    }
  }
}

TEST_CASE("vanishing loading recovers the unregularized beams") {
  bcsim::RngStream rng(53, 0);
  int tested = 0;
  while (tested < 30) {
    const int m = 2 + static_cast<int>(rng.next_u64() % 4);
    const ComplexMatrix h = bcsim::std_complex_gaussian(rng, m, m);
    const std::vector<double> eigs = bcsim::hermitian_eigenvalues(
        bcsim::matmul(h, bcsim::conj_transpose(h)));
    if (eigs.front() < 0.5) continue;  // continuity needs conditioning
    ++tested;
    const Precoder zf = bcsim::build_precoder(h, 0.0, 1.0);
    const Precoder near_zf = bcsim::build_precoder(h, 1e-8, 1.0);
    CHECK(bcsim::frobenius_norm(bcsim::subtract(near_zf.w, zf.w)) < 1e-6);
  }
}

TEST_CASE("huge loading converges to the matched filter direction") {
  bcsim::RngStream rng(54, 0);
  for (int rep = 0; rep < 50; ++rep) {
    const int m = 2 + static_cast<int>(rng.next_u64() % 5);
    const int n = 1 + static_cast<int>(rng.next_u64() % m);
    const ComplexMatrix h = bcsim::std_complex_gaussian(rng, n, m);
    const Precoder big = bcsim::build_precoder(h, 1e8, 1.0);
    const Precoder mf = bcsim::build_precoder(h, kInf, 1.0);
    CHECK(mf.w == bcsim::conj_transpose(h));
    const ComplexMatrix big_scaled = bcsim::scale(big.w, big.rho);
    const ComplexMatrix mf_scaled = bcsim::scale(mf.w, mf.rho);
    const double rel =
        bcsim::frobenius_norm(bcsim::subtract(big_scaled, mf_scaled)) /
        bcsim::frobenius_norm(mf_scaled);
    CHECK(rel < 1e-4);
  }
}

TEST_CASE("scaling the power budget rescales rho and not the beams") {
  bcsim::RngStream rng(55, 0);
  const ComplexMatrix h = bcsim::std_complex_gaussian(rng, 3, 4);
  const Precoder base = bcsim::build_precoder(h, 0.05, 1.0);
  const Precoder scaled = bcsim::build_precoder(h, 0.05, 4.0);
  CHECK(scaled.w == base.w);
  CHECK(scaled.rho == doctest::Approx(2.0 * base.rho).epsilon(1e-12));
}

TEST_CASE("a singular unregularized system is reported") {
  // Two identical rows make the Gram exactly rank deficient.
  const ComplexMatrix h = ComplexMatrix::from_rows(
      {{Complex{1.0, 0.5}, Complex{-2.0, 1.0}, Complex{0.0, 3.0}},
       {Complex{1.0, 0.5}, Complex{-2.0, 1.0}, Complex{0.0, 3.0}}});
  CHECK_THROWS_AS((void)bcsim::build_precoder(h, 0.0, 1.0),
                  bcsim::SingularMatrixError);
  // Any positive loading repairs it.
  CHECK_NOTHROW((void)bcsim::build_precoder(h, 0.1, 1.0));
}

TEST_CASE("build_precoder validates shapes and parameters") {
  bcsim::RngStream rng(56, 0);
  const ComplexMatrix wide = bcsim::std_complex_gaussian(rng, 3, 2);
  CHECK_THROWS_AS((void)bcsim::build_precoder(wide, 0.0, 1.0),
                  std::invalid_argument);
  const ComplexMatrix ok = bcsim::std_complex_gaussian(rng, 2, 3);
  CHECK_THROWS_AS((void)bcsim::build_precoder(ok, -1.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)bcsim::build_precoder(ok, 0.0, 0.0),
                  std::invalid_argument);
}

TEST_SUITE_END();
