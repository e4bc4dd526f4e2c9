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
#include "bcsim/metrics.hpp"
#include "bcsim/precoding.hpp"
#include "bcsim/rng.hpp"

namespace {

using bcsim::Complex;
using bcsim::ComplexMatrix;
using bcsim::EigenProfile;
using bcsim::Precoder;
using bcsim::SinrReport;

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> random_lambdas(bcsim::RngStream& rng, int count) {
  std::vector<double> lams(static_cast<std::size_t>(count));
  for (double& l : lams) l = 0.05 - std::log(rng.next_unit_positive());
  return lams;
}

}  // namespace

TEST_SUITE_BEGIN("metrics");

TEST_CASE("identity channel under zero-forcing gives the hand-solved rates") {
  const ComplexMatrix eye = ComplexMatrix::identity(2);
  const Precoder pre = bcsim::build_precoder(eye, 0.0, 1.0);
  const SinrReport rep = bcsim::physical_sinr(eye, pre, 0.1);
  REQUIRE(rep.per_user_sinr.size() == 2);
  // rho^2 = 1/2, all interference vanishes: SINR = 0.5 / 0.1 = 5.
  CHECK(rep.per_user_sinr[0] == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(rep.per_user_sinr[1] == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(rep.sum_rate ==
        doctest::Approx(2.0 * std::log2(6.0)).epsilon(1e-12));
}

TEST_CASE("single matched-filter user sees plain beamforming gain") {
  bcsim::RngStream rng(61, 0);
  const ComplexMatrix h = bcsim::std_complex_gaussian(rng, 1, 4);
  const double sigma2 = 0.05;
  const Precoder pre = bcsim::build_precoder(h, kInf, 1.0);
  const SinrReport rep = bcsim::physical_sinr(h, pre, sigma2);
  REQUIRE(rep.per_user_sinr.size() == 1);
  const double norm_sq = bcsim::frobenius_norm(h) * bcsim::frobenius_norm(h);
  CHECK(rep.per_user_sinr[0] ==
        doctest::Approx(norm_sq / sigma2).epsilon(1e-12));
}

TEST_CASE("perfect-CSI zero forcing leaves no interference") {
  bcsim::RngStream rng(62, 0);
  int tested = 0;
  while (tested < 30) {
    const int m = 2 + static_cast<int>(rng.next_u64() % 4);
    const ComplexMatrix h = bcsim::std_complex_gaussian(rng, m, m);
    const Precoder pre = bcsim::build_precoder(h, 0.0, 1.0);
    if (bcsim::frobenius_norm(pre.w) > 1e3) continue;
    ++tested;
    const double sigma2 = 0.1;
    const SinrReport rep = bcsim::physical_sinr(h, pre, sigma2);
    const double expected = pre.rho * pre.rho / sigma2;
    for (const double s : rep.per_user_sinr) {
      CHECK(s == doctest::Approx(expected).epsilon(1e-8));
    }
  }
}

TEST_CASE("the sum rate field matches its defining formula") {
  bcsim::RngStream rng(63, 0);
  const ComplexMatrix h = bcsim::std_complex_gaussian(rng, 3, 4);
  const Precoder pre = bcsim::build_precoder(h, 0.2, 1.0);
  const SinrReport rep = bcsim::physical_sinr(h, pre, 0.1);
  double expected = 0.0;
  for (const double s : rep.per_user_sinr) expected += std::log2(1.0 + s);
  CHECK(rep.sum_rate == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("noise-free zero-interference input is rejected") {
  const ComplexMatrix eye = ComplexMatrix::identity(2);
  const Precoder pre = bcsim::build_precoder(eye, 0.0, 1.0);
  // Data-dependent failure (a user with no noise and no interference has
  // no finite SINR), so it surfaces as domain_error, not invalid_argument.
  CHECK_THROWS_AS((void)bcsim::physical_sinr(eye, pre, 0.0),
                  std::domain_error);
}

TEST_CASE("single-antenna prediction is loading-independent") {
  bcsim::RngStream rng(64, 0);
  for (int rep = 0; rep < 100; ++rep) {
    const double lam = 0.05 - std::log(rng.next_unit_positive());
    const double p = 0.25 + 4.0 * rng.next_unit();
    const double sigma2 = std::pow(10.0, -3.0 + 2.5 * rng.next_unit());
    const double e2 = 0.3 * rng.next_unit();
    const EigenProfile prof{{lam}, 1, p, sigma2, e2};
    const double expected = lam * p / (e2 * p + sigma2);
    for (const double alpha : {0.0, 1e-3, 0.7, 42.0, kInf}) {
      CHECK(bcsim::model_average_sinr(prof, alpha) ==
            doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("hand-evaluated prediction for a two-eigenvalue profile") {
  // lambdas {1, 3}, m = 2, p = 1, sigma2 = 0.1, e2 = 0.1, alpha = 0.5:
  //   g1 = 1/1.5 = 2/3, g2 = 3/3.5 = 6/7
  //   s1 = 2/3 + 6/7 = 32/21, s2 = 4/9 + 36/49 = 520/441
  //   t = (2/3)/1.5 + (6/7)/3.5 = 4/9 + 12/49 = 304/441
  //   value = (s1^2 + s2) / (0.2*6*t + 2*s2 - s1^2)
  const double s1 = 32.0 / 21.0;
  const double s2 = 520.0 / 441.0;
  const double t = 304.0 / 441.0;
  const double expected =
      (s1 * s1 + s2) / (0.2 * 6.0 * t + 2.0 * s2 - s1 * s1);
  const EigenProfile prof{{1.0, 3.0}, 2, 1.0, 0.1, 0.1};
  CHECK(bcsim::model_average_sinr(prof, 0.5) ==
        doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("large loading approaches the closed-form limit") {
  bcsim::RngStream rng(65, 0);
  for (int rep = 0; rep < 100; ++rep) {
    const int m = 1 + static_cast<int>(rng.next_u64() % 6);
    const EigenProfile prof{random_lambdas(rng, m), m, 1.0,
                            std::pow(10.0, -1.5), 0.1};
    const double finite = bcsim::model_average_sinr(prof, 1e9);
    const double limit = bcsim::model_average_sinr(prof, kInf);
    CHECK(finite == doctest::Approx(limit).epsilon(1e-6));
  }
}

TEST_CASE("degenerate noise-free equal-eigenvalue profile is a domain error") {
  // With no noise and no CSI error the denominator collapses to
  // m*s2 - s1^2 = 0 when every eigenvalue is equal.
  const EigenProfile prof{{1.0, 1.0}, 2, 1.0, 0.0, 0.0};
  CHECK_THROWS_AS((void)bcsim::model_average_sinr(prof, 0.0),
                  std::domain_error);
}

TEST_CASE("prediction validates its inputs") {
  const EigenProfile ok{{1.0, 2.0}, 2, 1.0, 0.1, 0.1};
  CHECK_THROWS_AS((void)bcsim::model_average_sinr(ok, -0.5),
                  std::invalid_argument);
  const EigenProfile zero_lam{{0.0, 2.0}, 2, 1.0, 0.1, 0.1};
  CHECK_THROWS_AS((void)bcsim::model_average_sinr(zero_lam, 0.0),
                  std::invalid_argument);
  CHECK_NOTHROW((void)bcsim::model_average_sinr(zero_lam, 0.5));
  const EigenProfile too_many{{1.0, 2.0, 3.0}, 2, 1.0, 0.1, 0.1};
  CHECK_THROWS_AS((void)bcsim::model_average_sinr(too_many, 0.5),
                  std::invalid_argument);
}

TEST_CASE("equal eigenvalues collapse the orthogonal prediction") {
  const double lam0 = 1.7;
  const EigenProfile prof{{lam0, lam0, lam0}, 3, 2.0, 0.05, 0.1};
  const double expected =
      2.0 * lam0 / (3.0 * (0.1 * 2.0 + 0.05));
  for (const double alpha : {0.0, 0.3, 5.0, kInf}) {
    CHECK(bcsim::orthogonal_avg_snr(prof, alpha) ==
          doctest::Approx(expected).epsilon(1e-12));
  }
  // All equal also zeroes the pair-sum driving the slope.
  CHECK(bcsim::monotonicity_term(prof.lambdas, 0.3) == 0.0);
}

TEST_CASE("zero loading reduces to the harmonic-mean form") {
  bcsim::RngStream rng(66, 0);
  for (int rep = 0; rep < 50; ++rep) {
    const int m = 2 + static_cast<int>(rng.next_u64() % 5);
    const std::vector<double> lams = random_lambdas(rng, m);
    const double p = 1.0;
    const double sigma2 = std::pow(10.0, -1.5);
    const double e2 = 0.1;
    const EigenProfile prof{lams, m, p, sigma2, e2};
    double inv_sum = 0.0;
    for (const double l : lams) inv_sum += 1.0 / l;
    const double expected =
        p / (m * (e2 * p + sigma2)) * static_cast<double>(m) / inv_sum;
    CHECK(bcsim::orthogonal_avg_snr(prof, 0.0) ==
          doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("loading order strictly improves the orthogonal prediction") {
  bcsim::RngStream rng(67, 0);
  const double p = 1.0;
  const double sigma2 = std::pow(10.0, -1.5);
  const double e2 = 0.1;
  for (int rep = 0; rep < 200; ++rep) {
    const int m = 2 + static_cast<int>(rng.next_u64() % 5);
    const EigenProfile prof{random_lambdas(rng, m), m, p, sigma2, e2};
    const double v0 = bcsim::orthogonal_avg_snr(prof, 0.0);
    const double v1 = bcsim::orthogonal_avg_snr(prof, m * sigma2 / p);
    const double v2 =
        bcsim::orthogonal_avg_snr(prof, m * (sigma2 / p + e2));
    const double v3 = bcsim::orthogonal_avg_snr(prof, kInf);
    CHECK(v0 < v1);
    CHECK(v1 < v2);
    CHECK(v2 < v3);
  }
}

TEST_CASE("infinite loading matches the power-weighted mean form") {
  const EigenProfile prof{{1.0, 2.0, 4.0}, 3, 1.0, 0.1, 0.0};
  const double expected =
      1.0 / (3.0 * 0.1) * (1.0 + 4.0 + 16.0) / (1.0 + 2.0 + 4.0);
  CHECK(bcsim::orthogonal_avg_snr(prof, kInf) ==
        doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("orthogonal prediction requires strictly positive eigenvalues") {
  const EigenProfile prof{{0.0, 1.0}, 2, 1.0, 0.1, 0.1};
  CHECK_THROWS_AS((void)bcsim::orthogonal_avg_snr(prof, 0.5),
                  std::invalid_argument);
}

TEST_CASE("hand-evaluated pair term for two eigenvalues") {
  // {1, 2} at alpha = 0: 1*2*(1)^2 / (1^3 * 2^3) = 0.25.
  const std::vector<double> lams{1.0, 2.0};
  CHECK(bcsim::monotonicity_term(lams, 0.0) ==
        doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("pair term equals the scaled slope of the orthogonal ratio") {
  bcsim::RngStream rng(68, 0);
  for (int rep = 0; rep < 100; ++rep) {
    const int m = 2 + static_cast<int>(rng.next_u64() % 5);
    // Keep eigenvalues separated so the finite difference is accurate.
    std::vector<double> lams;
    while (true) {
      lams = random_lambdas(rng, m);
      std::vector<double> sorted = lams;
      std::sort(sorted.begin(), sorted.end());
      bool ok = true;
      for (std::size_t i = 1; i < sorted.size(); ++i) {
        if (sorted[i] - sorted[i - 1] < 0.02) ok = false;
      }
      if (ok) break;
    }
    const double alpha = std::pow(10.0, -2.0 + 2.3 * rng.next_unit());

    const auto ratio = [&](long double a) {
      long double num = 0.0L;
      long double den = 0.0L;
      for (const double lam : lams) {
        const long double shifted = static_cast<long double>(lam) + a;
        num += static_cast<long double>(lam) * lam / (shifted * shifted);
        den += static_cast<long double>(lam) / (shifted * shifted);
      }
      return num / den;
    };
    const long double h = 1e-6L;
    const long double fd = (ratio(static_cast<long double>(alpha) + h) -
                            ratio(static_cast<long double>(alpha) - h)) /
                           (2.0L * h);
    long double t = 0.0L;
    for (const double lam : lams) {
      const long double shifted = static_cast<long double>(lam) + alpha;
      t += static_cast<long double>(lam) / (shifted * shifted);
    }
    const double expected = static_cast<double>(0.5L * fd * t * t);
    const double actual = bcsim::monotonicity_term(lams, alpha);
    CHECK(actual > 0.0);
    CHECK(actual == doctest::Approx(expected).epsilon(1e-6));
  }
}

TEST_CASE("sum rate basics") {
  CHECK(bcsim::sum_rate(std::vector<double>{0.0, 0.0}) == 0.0);
  CHECK(bcsim::sum_rate(std::vector<double>{1.0}) ==
        doctest::Approx(1.0).epsilon(1e-15));
  CHECK(bcsim::sum_rate(std::vector<double>{3.0, 3.0}) ==
        doctest::Approx(4.0).epsilon(1e-15));
}

TEST_CASE("orthogonal channels tie the simulator to the prediction") {
  // Rows are scaled orthonormal vectors (random per-trial phases and a
  // fixed spectrum), so the per-user physical SINR under perfect CSI must
  // reproduce the orthogonal prediction trial after trial.
  bcsim::RngStream rng(69, 0);
  const int m = 3;
  const std::vector<double> scales{0.8, 1.3, 2.1};
  std::vector<double> lams;
  for (const double s : scales) lams.push_back(s * s);
  const double sigma2 = 0.05;
  const double alpha = 0.3;
  const EigenProfile prof{lams, m, 1.0, sigma2, 0.0};
  const double predicted = bcsim::orthogonal_avg_snr(prof, alpha);

  double mean_of_means = 0.0;
  const int trials = 200;
  for (int trial = 0; trial < trials; ++trial) {
    ComplexMatrix h(m, m);
    for (int i = 0; i < m; ++i) {
      const double phase =
          2.0 * 3.14159265358979323846 * rng.next_unit();
      h(i, i) = scales[static_cast<std::size_t>(i)] *
                Complex{std::cos(phase), std::sin(phase)};
    }
    const Precoder pre = bcsim::build_precoder(h, alpha, 1.0);
    const SinrReport rep = bcsim::physical_sinr(h, pre, sigma2);
    double mean = 0.0;
    for (const double s : rep.per_user_sinr) mean += s;
    mean_of_means += mean / m;
  }
  mean_of_means /= trials;
  CHECK(mean_of_means == doctest::Approx(predicted).epsilon(1e-10));
}

TEST_SUITE_END();
