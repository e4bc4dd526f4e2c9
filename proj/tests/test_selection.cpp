// SPDX-License-Identifier: Apache-2.0
//
// bcsim: link-level simulator for multiuser MIMO broadcast beamforming
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <doctest.h>

#include "bcsim/channel.hpp"
#include "bcsim/complex_matrix.hpp"
#include "bcsim/rng.hpp"
#include "bcsim/selection.hpp"

namespace {

using bcsim::Complex;
using bcsim::ComplexMatrix;
using bcsim::SelectionParams;
using bcsim::SelectionResult;

double row_norm_sq(const ComplexMatrix& h, int row) {
  double ns = 0.0;
  for (const Complex& v : h.row(row)) ns += std::norm(v);
  return ns;
}

}  // namespace

TEST_SUITE_BEGIN("selection");

TEST_CASE("correlation of a vector with itself is one") {
  const std::vector<Complex> a{{1.0, 2.0}, {-0.5, 0.25}, {3.0, -1.0}};
  CHECK(bcsim::correlation(a, a) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("orthogonal basis vectors have zero correlation") {
  const std::vector<Complex> e1{{1.0, 0.0}, {0.0, 0.0}};
  const std::vector<Complex> e2{{0.0, 0.0}, {1.0, 0.0}};
  CHECK(bcsim::correlation(e1, e2) == doctest::Approx(0.0));
}

TEST_CASE("hand-computed correlation of (1,0) against (1,1)") {
  const std::vector<Complex> a{{1.0, 0.0}, {0.0, 0.0}};
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const std::vector<Complex> b{{inv_sqrt2, 0.0}, {inv_sqrt2, 0.0}};
  CHECK(bcsim::correlation(a, b) ==
        doctest::Approx(inv_sqrt2).epsilon(1e-12));
}

TEST_CASE("correlation rejects zero vectors and length mismatches") {
  const std::vector<Complex> a{{1.0, 0.0}, {0.0, 0.0}};
  const std::vector<Complex> zero{{0.0, 0.0}, {0.0, 0.0}};
  const std::vector<Complex> shorter{{1.0, 0.0}};
  CHECK_THROWS_AS((void)bcsim::correlation(a, zero), std::invalid_argument);
  CHECK_THROWS_AS((void)bcsim::correlation(zero, a), std::invalid_argument);
  CHECK_THROWS_AS((void)bcsim::correlation(a, shorter),
                  std::invalid_argument);
}

TEST_CASE("a vacuous threshold selects everyone in norm order") {
  bcsim::RngStream rng(31, 0);
  for (int rep = 0; rep < 20; ++rep) {
    const int m = 2 + static_cast<int>(rng.next_u64() % 4);
    const ComplexMatrix h = bcsim::std_complex_gaussian(rng, m, m);
    const SelectionResult sel = bcsim::sus_select(h, {1.0, m});
    REQUIRE(static_cast<int>(sel.order.size()) == m);
    CHECK_FALSE(sel.pool_exhausted);
    for (std::size_t i = 1; i < sel.order.size(); ++i) {
      CHECK(row_norm_sq(h, sel.order[i - 1]) >=
            row_norm_sq(h, sel.order[i]));
    }
  }
}

TEST_CASE("scaled orthonormal rows pick the two largest norms") {
  const ComplexMatrix h = ComplexMatrix::from_rows(
      {{Complex{3.0, 0.0}, Complex{0.0, 0.0}, Complex{0.0, 0.0}},
       {Complex{0.0, 0.0}, Complex{2.0, 0.0}, Complex{0.0, 0.0}},
       {Complex{0.0, 0.0}, Complex{0.0, 0.0}, Complex{1.0, 0.0}}});
  const SelectionResult sel = bcsim::sus_select(h, {0.5, 2});
  CHECK(sel.order == std::vector<int>{0, 1});
  CHECK_FALSE(sel.pool_exhausted);
}

TEST_CASE("the correlation test is strictly below the threshold") {
  const ComplexMatrix h = ComplexMatrix::from_rows(
      {{Complex{2.0, 0.0}, Complex{0.0, 0.0}},
       {Complex{1.0, 0.0}, Complex{1.0, 0.0}},
       {Complex{0.0, 0.0}, Complex{1.0, 0.0}}});

  // An arbitrarily small positive threshold admits the exactly
  // orthogonal user and nothing else.
  const SelectionResult tiny = bcsim::sus_select(h, {1e-12, 2});
  CHECK(tiny.order == std::vector<int>{0, 2});

  // At exactly zero even an orthogonal user fails the strict comparison.
  const SelectionResult zero = bcsim::sus_select(h, {0.0, 2});
  CHECK(zero.order == std::vector<int>{0});
  CHECK(zero.pool_exhausted);
}

TEST_CASE("zero-norm rows never enter the pool") {
  const ComplexMatrix h = ComplexMatrix::from_rows(
      {{Complex{0.0, 0.0}, Complex{0.0, 0.0}},
       {Complex{1.0, 0.0}, Complex{0.0, 0.0}}});
  const SelectionResult sel = bcsim::sus_select(h, {1.0, 2});
  CHECK(sel.order == std::vector<int>{1});
  CHECK(sel.pool_exhausted);
}

TEST_CASE("pool exhaustion is flagged when the threshold bites") {
  // Two nearly parallel users: after the first pick the other is dropped.
  const ComplexMatrix h = ComplexMatrix::from_rows(
      {{Complex{2.0, 0.0}, Complex{0.1, 0.0}},
       {Complex{1.0, 0.0}, Complex{0.0, 0.0}}});
  const SelectionResult sel = bcsim::sus_select(h, {0.5, 2});
  CHECK(sel.order == std::vector<int>{0});
  CHECK(sel.pool_exhausted);
}

TEST_CASE("invalid parameters are rejected") {
  const ComplexMatrix h = ComplexMatrix::identity(2);
  CHECK_THROWS_AS((void)bcsim::sus_select(h, {-0.1, 2}),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)bcsim::sus_select(h, {1.1, 2}),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)bcsim::sus_select(h, {0.5, 0}),
                  std::invalid_argument);
}

TEST_CASE("selection matches a straight-line transcription of the rounds") {
  // Independent oracle: no shortcuts, recompute every norm and every
  // correlation from scratch each round.
  bcsim::RngStream rng(32, 0);
  for (int rep = 0; rep < 500; ++rep) {
    const int m = 1 + static_cast<int>(rng.next_u64() % 4);
    const int k = m + static_cast<int>(rng.next_u64() % 7);
    const double beta = rng.next_unit();
    const ComplexMatrix h = bcsim::std_complex_gaussian(rng, k, m);

    std::vector<int> pool;
    for (int i = 0; i < k; ++i) {
      if (row_norm_sq(h, i) > 0.0) pool.push_back(i);
    }
    std::vector<int> expected;
    while (!pool.empty() && static_cast<int>(expected.size()) < m) {
      int best = pool.front();
      for (const int cand : pool) {
        if (row_norm_sq(h, cand) > row_norm_sq(h, best)) best = cand;
      }
      expected.push_back(best);
      std::vector<int> next_pool;
      for (const int cand : pool) {
        if (cand == best) continue;
        if (bcsim::correlation(h.row(best), h.row(cand)) < beta) {
          next_pool.push_back(cand);
        }
      }
      pool = next_pool;
    }

    const SelectionResult sel = bcsim::sus_select(h, {beta, m});
    CHECK(sel.order == expected);
    CHECK(sel.pool_exhausted == (static_cast<int>(expected.size()) < m));
  }
}

TEST_CASE("every selected pair respects the threshold") {
  bcsim::RngStream rng(33, 0);
  for (int rep = 0; rep < 200; ++rep) {
    const int m = 2 + static_cast<int>(rng.next_u64() % 3);
    const int k = m + static_cast<int>(rng.next_u64() % 8);
    const double beta = 0.2 + 0.8 * rng.next_unit();
    const ComplexMatrix h = bcsim::std_complex_gaussian(rng, k, m);
    const SelectionResult sel = bcsim::sus_select(h, {beta, m});
    for (std::size_t i = 0; i < sel.order.size(); ++i) {
      for (std::size_t j = i + 1; j < sel.order.size(); ++j) {
        CHECK(bcsim::correlation(h.row(sel.order[i]),
                                 h.row(sel.order[j])) < beta);
      }
    }
  }
}

TEST_SUITE_END();
