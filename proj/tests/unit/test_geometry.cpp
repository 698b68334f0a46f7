// Copyright 2026 The fedsmd Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "doctest.h"
#include "fedsmd/error.hpp"
#include "fedsmd/geometry.hpp"
#include "helpers.hpp"

using namespace fedsmd;
using fedsmd::testing::simplex_point;
using fedsmd::testing::test_rng;
using fedsmd::testing::uniform_vector;

namespace {

struct Case {
  MirrorGeometry geom;
  Domain domain;
};

std::vector<Case> cases(std::size_t n) {
  return {{MirrorGeometry::euclidean(n), Domain::full_space(n)},
          {MirrorGeometry::euclidean(n), Domain::simplex(n)},
          {MirrorGeometry::euclidean(n), Domain::box(Vector(n, -1.0), Vector(n, 2.0))},
          {MirrorGeometry::euclidean(n), Domain::ball(Vector(n, 0.5), 1.5)},
          {MirrorGeometry::negative_entropy(n), Domain::simplex(n)}};
}

Vector point_in(const Case& c, CounterRng& rng) {
  const std::size_t n = c.domain.dimension();
  if (c.domain.kind() == DomainKind::ProbabilitySimplex) return simplex_point(rng, n);
  return euclidean_project(c.domain, uniform_vector(rng, n, -3.0, 3.0));
}

double first_order_residual(const MirrorGeometry& geom, const Vector& x, const Vector& g,
                            double alpha, const Vector& y, const Vector& z) {
  const Vector gy = potential_gradient(geom, y);
  const Vector gx = potential_gradient(geom, x);
  double r = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    r += (alpha * g[j] + gy[j] - gx[j]) * (z[j] - y[j]);
  }
  return r;
}

}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("potential examples") {
    CHECK(potential(MirrorGeometry::euclidean(2), Vector{3, 4}) == 12.5);
    CHECK(potential(MirrorGeometry::negative_entropy(2), Vector{1, 0}) == 0.0);
    CHECK(potential(MirrorGeometry::negative_entropy(2), Vector{0.5, 0.5}) ==
          doctest::Approx(-0.69314718055994530942).epsilon(1e-15));
    CHECK_THROWS_AS(potential(MirrorGeometry::negative_entropy(2), Vector{-0.1, 1.1}),
                    InvalidInput);
  }

  TEST_CASE("bregman examples") {
    CHECK(bregman(MirrorGeometry::euclidean(2), Vector{1, 0}, Vector{0, 1}) == 1.0);
    CHECK(bregman(MirrorGeometry::euclidean(2), Vector{0.3, 7}, Vector{0.3, 7}) == 0.0);
    CHECK(bregman(MirrorGeometry::negative_entropy(2), Vector{0.3, 0.7}, Vector{0.3, 0.7}) ==
          doctest::Approx(0.0));
    CHECK(bregman(MirrorGeometry::negative_entropy(2), Vector{0.5, 0.5}, Vector{0.25, 0.75}) ==
          doctest::Approx(0.14384103622589046372).epsilon(1e-14));
    // Zero coordinates of y are clamped before the logarithm.
    CHECK(bregman(MirrorGeometry::negative_entropy(2), Vector{0.5, 0.5}, Vector{1, 0}) ==
          doctest::Approx(std::log(0.5) - 0.5 * std::log(kEntropyFloor)));
    CHECK_THROWS_AS(bregman(MirrorGeometry::negative_entropy(2), Vector{0.5, 0.5}, Vector{1.5, -0.5}),
                    InvalidInput);
    // Boundary x is allowed: 0 ln 0 = 0.
    CHECK(bregman(MirrorGeometry::negative_entropy(2), Vector{1, 0}, Vector{0.5, 0.5}) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-15));
  }

  TEST_CASE("three-point examples") {
    CHECK(std::abs(three_point_residual(MirrorGeometry::euclidean(2), Vector{1, 0}, Vector{0, 1},
                                        Vector{0.5, 0.5})) <= 1e-12);
    CHECK(std::abs(three_point_residual(MirrorGeometry::negative_entropy(2), Vector{0.2, 0.8},
                                        Vector{0.5, 0.5}, Vector{0.9, 0.1})) <= 1e-10);
    CHECK(three_point_residual(MirrorGeometry::euclidean(2), Vector{1, 0}, Vector{1, 0},
                               Vector{1, 0}) == 0.0);
  }

  TEST_CASE("mirror step examples") {
    const Vector a = mirror_step(MirrorGeometry::euclidean(2), Domain::full_space(2),
                                 Vector{1, 1}, Vector{1, 0}, 0.5);
    CHECK(a == Vector{0.5, 1.0});
    const Vector b = mirror_step(MirrorGeometry::negative_entropy(2), Domain::simplex(2),
                                 Vector{0.5, 0.5}, Vector{std::log(2.0), 0.0}, 1.0);
    CHECK(b[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(b[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    const Vector c = mirror_step(MirrorGeometry::euclidean(2), Domain::simplex(2),
                                 Vector{0.5, 0.5}, Vector{-0.7, 0.7}, 1.0);
    CHECK(c[0] == doctest::Approx(1.0));
    CHECK(c[1] == doctest::Approx(0.0));
  }

  TEST_CASE("unsupported pairings are rejected at construction") {
    CHECK_THROWS_AS(MirrorStepper(MirrorGeometry::negative_entropy(2), Domain::full_space(2)),
                    ConfigError);
    CHECK_THROWS_AS(MirrorStepper(MirrorGeometry::negative_entropy(2),
                                  Domain::box({0, 0}, {1, 1})),
                    ConfigError);
    CHECK_THROWS_AS(MirrorStepper(MirrorGeometry::euclidean(3), Domain::simplex(2)),
                    ConfigError);
  }

  TEST_CASE("strong convexity and three-point identity, random") {
    auto rng = test_rng(31);
    for (std::size_t n : {2u, 3u, 5u}) {
      for (const Case& c : cases(n)) {
        CAPTURE(c.domain.name());
        for (int i = 0; i < 1000; ++i) {
          const Vector x = point_in(c, rng), y = point_in(c, rng), z = point_in(c, rng);
          const double d = distance(x, y);
          CHECK(bregman(c.geom, x, y) >= 0.5 * d * d - 1e-10);
          CHECK(std::abs(three_point_residual(c.geom, x, y, z)) <= 1e-9);
        }
      }
    }
  }

  TEST_CASE("separate convexity, random") {
    auto rng = test_rng(32);
    for (const Case& c : cases(3)) {
      for (int i = 0; i < 500; ++i) {
        const Vector x = point_in(c, rng);
        const std::size_t k = 2 + i % 4;
        const Vector w = simplex_point(rng, k);
        Vector mix(3, 0.0);
        double rhs = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
          const Vector y = point_in(c, rng);
          for (std::size_t q = 0; q < 3; ++q) mix[q] += w[j] * y[q];
          rhs += w[j] * bregman(c.geom, x, y);
        }
        CHECK(bregman(c.geom, x, mix) <= rhs + 1e-10);
      }
    }
  }

  TEST_CASE("mirror step first-order optimality, random") {
    auto rng = test_rng(33);
    for (const Case& c : cases(3)) {
      const MirrorStepper stepper(c.geom, c.domain);
      for (int i = 0; i < 100; ++i) {
        const Vector x = point_in(c, rng);
        const Vector g = uniform_vector(rng, 3, -5.0, 5.0);
        const double alpha = 0.01 + rng.uniform();
        const Vector y = stepper.step(x, g, alpha);
        REQUIRE(contains(c.domain, y));
        if (c.geom.kind() == MirrorKind::NegativeEntropy) {
          bool interior = true;
          for (double v : y) interior = interior && v > 1e-200;
          REQUIRE(interior);
        }
        for (int k = 0; k < 100; ++k) {
          const Vector z = point_in(c, rng);
          CHECK(first_order_residual(c.geom, x, g, alpha, y, z) >= -1e-8);
        }
      }
    }
  }

  TEST_CASE("zero gradient is a fixed point") {
    auto rng = test_rng(34);
    for (const Case& c : cases(4)) {
      const MirrorStepper stepper(c.geom, c.domain);
      for (int i = 0; i < 50; ++i) {
        const Vector x = point_in(c, rng);
        const Vector y = stepper.step(x, Vector(4, 0.0), 0.7);
        CHECK(distance(x, y) <= 1e-15);
      }
    }
  }

  TEST_CASE("entropic step survives extreme gradients") {
    const MirrorStepper stepper(MirrorGeometry::negative_entropy(3), Domain::simplex(3));
    const Vector y = stepper.step(Vector{0.2, 0.3, 0.5}, Vector{1e6, -1e6, 0.0}, 1.0);
    CHECK(contains(Domain::simplex(3), y));
    CHECK(y[1] == doctest::Approx(1.0));
    CHECK(y[0] >= 0.0);
    CHECK(std::isfinite(bregman(MirrorGeometry::negative_entropy(3), Vector{0.3, 0.3, 0.4}, y)));
  }
}
