// Copyright 2026 The fedsmd Authors.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>

#include "doctest.h"
#include "fedsmd/domains.hpp"
#include "fedsmd/error.hpp"
#include "helpers.hpp"

using namespace fedsmd;
using fedsmd::testing::simplex_point;
using fedsmd::testing::test_rng;
using fedsmd::testing::uniform_vector;

namespace {

// Nearest simplex point by exhaustive search over the active support: for
// each nonempty support S, the projection onto the affine hull restricted
// to S, kept when feasible. Valid for tiny n only.
Vector brute_force_simplex(const Vector& z) {
  const std::size_t n = z.size();
  Vector best;
  double best_d = 1e300;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    double s = 0.0;
    std::size_t k = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (mask & (1u << j)) {
        s += z[j];
        ++k;
      }
    }
    const double shift = (s - 1.0) / static_cast<double>(k);
    Vector x(n, 0.0);
    bool ok = true;
    for (std::size_t j = 0; j < n; ++j) {
      if (mask & (1u << j)) {
        x[j] = z[j] - shift;
        if (x[j] < -1e-15) ok = false;
      }
    }
    if (!ok) continue;
    const double d = distance(x, z);
    if (d < best_d) {
      best_d = d;
      best = x;
    }
  }
  return best;
}

std::vector<Domain> sample_domains() {
  return {Domain::full_space(3), Domain::simplex(3),
          Domain::box({-1.0, 0.0, 0.5}, {1.0, 2.0, 0.5}),
          Domain::ball({0.5, -0.5, 1.0}, 2.0)};
}

Vector feasible_point(const Domain& d, CounterRng& rng) {
  switch (d.kind()) {
    case DomainKind::ProbabilitySimplex: return simplex_point(rng, d.dimension());
    default: return euclidean_project(d, uniform_vector(rng, d.dimension(), -3.0, 3.0));
  }
}

}  // namespace

TEST_SUITE("domains") {
  TEST_CASE("membership examples") {
    const Domain s = Domain::simplex(2);
    CHECK(contains(s, Vector{0.3, 0.7}, 1e-9));
    CHECK_FALSE(contains(s, Vector{0.6, 0.6}));
    CHECK_FALSE(contains(s, Vector{1.2, -0.2}));
    CHECK(contains(Domain::box({0, 0}, {1, 1}), Vector{1.0, 0.0}));
    CHECK(contains(Domain::ball({0, 0}, 1.0), Vector{0.6, 0.8}));
    CHECK_FALSE(contains(Domain::ball({0, 0}, 1.0), Vector{0.6, 0.81}));
    CHECK(contains(Domain::full_space(2), Vector{1e300, -1e300}));
    CHECK_THROWS_AS(contains(s, Vector{1.0}), InvalidInput);
  }

  TEST_CASE("projection examples") {
    CHECK(euclidean_project(Domain::full_space(2), Vector{5, -3}) == Vector{5, -3});
    const Vector p = euclidean_project(Domain::simplex(2), Vector{1.2, -0.2});
    CHECK(p[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(p[1] == doctest::Approx(0.0));
    const Vector b = euclidean_project(Domain::ball({0, 0}, 1.0), Vector{3, 4});
    CHECK(b[0] == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(b[1] == doctest::Approx(0.8).epsilon(1e-15));
    const Vector c = euclidean_project(Domain::box({0, 0}, {1, 1}), Vector{-1, 0.5});
    CHECK(c == Vector{0.0, 0.5});
  }

  TEST_CASE("feasible points are returned unchanged") {
    auto rng = test_rng(5);
    for (const Domain& d : sample_domains()) {
      for (int i = 0; i < 100; ++i) {
        const Vector y = feasible_point(d, rng);
        if (!contains(d, y)) continue;
        // The simplex projection renormalises, which may move the last bit.
        if (d.kind() == DomainKind::ProbabilitySimplex) {
          CHECK(distance(euclidean_project(d, y), y) <= 1e-15);
        } else {
          CHECK(euclidean_project(d, y) == y);
        }
      }
    }
  }

  TEST_CASE("simplex projection matches brute force for n <= 3") {
    auto rng = test_rng(6);
    for (std::size_t n = 1; n <= 3; ++n) {
      for (int i = 0; i < 2000; ++i) {
        const Vector z = uniform_vector(rng, n, -2.0, 2.0);
        const Vector fast = project_onto_simplex(z);
        const Vector slow = brute_force_simplex(z);
        REQUIRE(slow.size() == n);
        CHECK(distance(fast, slow) <= 1e-12);
      }
    }
  }

  TEST_CASE("projection idempotence, optimality, non-expansiveness") {
    auto rng = test_rng(7);
    for (const Domain& d : sample_domains()) {
      CAPTURE(d.name());
      for (int i = 0; i < 1000; ++i) {
        const Vector z1 = uniform_vector(rng, 3, -4.0, 4.0);
        const Vector z2 = uniform_vector(rng, 3, -4.0, 4.0);
        const Vector p1 = euclidean_project(d, z1);
        const Vector p2 = euclidean_project(d, z2);
        CHECK(contains(d, p1));
        CHECK(distance(euclidean_project(d, p1), p1) <= 1e-12);
        const Vector y = feasible_point(d, rng);
        CHECK(distance(p1, z1) <= distance(y, z1) + 1e-9);
        CHECK(distance(p1, p2) <= distance(z1, z2) + 1e-9);
      }
    }
  }

  TEST_CASE("default points") {
    CHECK(Domain::simplex(4).default_point() == Vector{0.25, 0.25, 0.25, 0.25});
    CHECK(Domain::full_space(2).default_point() == Vector{0.0, 0.0});
    CHECK(Domain::ball({1, 2}, 0.5).default_point() == Vector{1.0, 2.0});
    CHECK(Domain::box({-1, -1}, {1, 1}).default_point() == Vector{0.0, 0.0});
    CHECK(Domain::box({1, 2}, {3, 2}).default_point() == Vector{2.0, 2.0});
  }

  TEST_CASE("invalid construction") {
    CHECK_THROWS(Domain::simplex(0));
    CHECK_THROWS(Domain::box({1.0}, {0.0}));
    CHECK_THROWS(Domain::ball({0.0}, 0.0));
  }
}
