// Copyright 2026 The fedsmd Authors.
// SPDX-License-Identifier: Apache-2.0

#include <limits>

#include <cmath>

#include "doctest.h"
#include "fedsmd/clipping.hpp"
#include "fedsmd/error.hpp"
#include "helpers.hpp"

using namespace fedsmd;

TEST_SUITE("clipping") {
  TEST_CASE("examples") {
    ClipReport r = clip(Vector{3, 4}, 5.0);
    CHECK(r.clipped == Vector{3, 4});
    CHECK_FALSE(r.was_clipped);
    CHECK(r.input_norm == 5.0);

    r = clip(Vector{3, 4}, 2.5);
    CHECK(r.was_clipped);
    CHECK(r.clipped[0] == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(r.clipped[1] == doctest::Approx(2.0).epsilon(1e-15));

    r = clip(Vector{0, 0}, 1.0);
    CHECK(r.clipped == Vector{0, 0});
    CHECK_FALSE(r.was_clipped);
  }

  TEST_CASE("rejected inputs") {
    CHECK_THROWS_AS(clip(Vector{std::numeric_limits<double>::infinity(), 0}, 1.0), InvalidInput);
    CHECK_THROWS_AS(clip(Vector{std::nan(""), 0}, 1.0), InvalidInput);
    CHECK_THROWS_AS(clip(Vector{1, 0}, 0.0), InvalidInput);
    CHECK_THROWS_AS(clip(Vector{1, 0}, -1.0), InvalidInput);
  }

  TEST_CASE("fuzz: norm bound, direction, monotone level") {
    auto rng = testing::test_rng(21);
    for (int i = 0; i < 20000; ++i) {
      const std::size_t n = 1 + i % 7;
      const double scale = std::pow(10.0, -6.0 + 12.0 * rng.uniform());
      const Vector g = testing::uniform_vector(rng, n, -scale, scale);
      const double l1 = std::pow(10.0, -6.0 + 12.0 * rng.uniform());
      const double l2 = l1 * (1.0 + 3.0 * rng.uniform());
      const ClipReport a = clip(g, l1);
      const ClipReport b = clip(g, l2);
      REQUIRE(norm(a.clipped) <= l1);
      CHECK(a.was_clipped == (a.input_norm > l1));
      CHECK(norm(a.clipped) <= norm(b.clipped));
      // Nonnegative multiple of g: same signs, proportional components.
      const double factor = a.input_norm > 0.0 ? norm(a.clipped) / a.input_norm : 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        CHECK(a.clipped[j] * g[j] >= 0.0);
        CHECK(std::abs(a.clipped[j] - factor * g[j]) <= 1e-12 * std::abs(g[j]) * (1.0 + factor));
      }
    }
  }
}
