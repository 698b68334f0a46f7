// Copyright 2026 The fedsmd Authors.
// SPDX-License-Identifier: Apache-2.0

#include <filesystem>

#include <cmath>

#include "doctest.h"
#include "fedsmd/error.hpp"
#include "fedsmd/problems.hpp"
#include "helpers.hpp"

using namespace fedsmd;
using fedsmd::testing::simplex_point;
using fedsmd::testing::test_rng;
using fedsmd::testing::uniform_vector;

namespace {

Vector feasible(const Domain& d, CounterRng& rng) {
  if (d.kind() == DomainKind::ProbabilitySimplex) return simplex_point(rng, d.dimension());
  return euclidean_project(d, uniform_vector(rng, d.dimension(), -3.0, 3.0));
}

}  // namespace

TEST_SUITE("problems") {
  TEST_CASE("ground truth vector") {
    CHECK(regression_truth(2) == Vector{1, 0});
    CHECK(regression_truth(4) == Vector{1, 1, 0, 0});
    CHECK(regression_truth(5) == Vector{1, 1, 0, 0, 0});
    CHECK(regression_truth(1) == Vector{0});
  }

  TEST_CASE("generator is deterministic and well-formed") {
    const Problem a = generate_regression(6, 3, 42);
    const Problem b = generate_regression(6, 3, 42);
    const Problem c = generate_regression(6, 3, 43);
    CHECK(a.features() == b.features());
    CHECK(a.targets() == b.targets());
    CHECK(a.features() != c.features());
    for (const Vector& row : a.features()) {
      for (double v : row) CHECK((v >= -1.0 && v <= 1.0));
    }
    // The first m rows do not depend on m.
    const Problem wide = generate_regression(8, 3, 42);
    for (std::size_t i = 0; i < 6; ++i) CHECK(wide.features()[i] == a.features()[i]);
  }

  TEST_CASE("gradient examples") {
    const Problem pb = Problem::linear_regression({{1.0, 0.0}}, {0.0});
    CHECK(pb.gradient(0, Vector{1, 0}) == Vector{1, 0});
    const Problem pb2 = Problem::linear_regression({{0.5, 2.0}}, {1.5});
    CHECK(pb2.gradient(0, Vector{1, 0.5}) == Vector{0, 0});
    CHECK(pb2.agent_objective(0, Vector{1, 0.5}) == 0.0);
  }

  TEST_CASE("gradient matches central finite differences") {
    auto rng = test_rng(51);
    for (int i = 0; i < 100; ++i) {
      const std::size_t n = 1 + i % 5;
      const Problem pb = i % 3 == 2 ? Problem::quadratic(3, uniform_vector(rng, n, -1, 1), 1.7)
                                    : generate_regression(3, n, 100 + i);
      const Vector x = uniform_vector(rng, n, -2.0, 2.0);
      const std::size_t agent = i % 3;
      const Vector g = pb.gradient(agent, x);
      for (std::size_t j = 0; j < n; ++j) {
        const double h = 1e-6;
        Vector xp = x, xm = x;
        xp[j] += h;
        xm[j] -= h;
        const double fd = (pb.agent_objective(agent, xp) - pb.agent_objective(agent, xm)) / (2 * h);
        CHECK(std::abs(fd - g[j]) <= 1e-6 * std::max(1.0, std::abs(g[j])));
      }
    }
  }

  TEST_CASE("smoothness certificate") {
    auto rng = test_rng(52);
    const Problem pb = generate_regression(5, 4, 7);
    const double L = pb.smoothness();
    for (int i = 0; i < 1000; ++i) {
      const Vector x = uniform_vector(rng, 4, -3, 3), y = uniform_vector(rng, 4, -3, 3);
      for (std::size_t a = 0; a < 5; ++a) {
        CHECK(distance(pb.gradient(a, x), pb.gradient(a, y)) <= L * distance(x, y) * (1 + 1e-9));
      }
    }
  }

  TEST_CASE("gradient bound certificates") {
    auto rng = test_rng(53);
    const std::vector<Domain> domains = {Domain::simplex(3), Domain::box({-1, 0, 0.5}, {1, 2, 3}),
                                         Domain::ball({0.5, 0, -0.5}, 1.5)};
    for (const Domain& d : domains) {
      for (const Problem& pb : {generate_regression(6, 3, 8), Problem::quadratic(2, {2, -1, 0}, 0.7)}) {
        const auto G = pb.gradient_bound(d);
        REQUIRE(G.has_value());
        double seen = 0.0;
        for (int i = 0; i < 10000; ++i) {
          const Vector x = feasible(d, rng);
          for (std::size_t a = 0; a < pb.agents(); ++a) seen = std::max(seen, norm(pb.gradient(a, x)));
        }
        CHECK(seen <= *G * (1 + 1e-12));
      }
    }
    CHECK_FALSE(generate_regression(2, 2, 1).gradient_bound(Domain::full_space(2)).has_value());
    // The simplex formula: max_i |a_i| (max_j |a_ij| + |b_i|).
    const Problem pb = Problem::linear_regression({{0.6, -0.8}, {0.1, 0.2}}, {0.5, -2.0});
    const double expected = std::max(1.0 * (0.8 + 0.5), std::sqrt(0.05) * (0.2 + 2.0));
    CHECK(*pb.gradient_bound(Domain::simplex(2)) == doctest::Approx(expected));
  }

  TEST_CASE("optimum examples") {
    const Problem one = Problem::linear_regression({{1.0, -1.0}}, {0.4});
    const Optimum o = solve_optimum(one, Domain::simplex(2));
    CHECK(o.point[0] == doctest::Approx(0.7).epsilon(1e-14));
    CHECK(o.point[1] == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(std::abs(o.value) <= 1e-24);

    const Problem q = Problem::quadratic(3, {2.0, -1.0}, 1.0);
    const Optimum oq = solve_optimum(q, Domain::full_space(2));
    CHECK(oq.point == Vector{2.0, -1.0});
    CHECK(oq.value == 0.0);

    // Rank-deficient unconstrained least squares has no unique minimiser.
    CHECK_THROWS_AS(solve_optimum(generate_regression(1, 3, 1), Domain::full_space(3)), InvalidInput);
  }

  TEST_CASE("optimum beats random feasible points") {
    auto rng = test_rng(54);
    const std::vector<Domain> domains = {Domain::simplex(2), Domain::simplex(4),
                                         Domain::box(Vector(3, -0.2), Vector(3, 0.3)),
                                         Domain::ball(Vector(3, 0.0), 0.5), Domain::full_space(3)};
    for (const Domain& d : domains) {
      const Problem pb = generate_regression(8, d.dimension(), 99);
      const Optimum o = solve_optimum(pb, d);
      CHECK(contains(d, o.point));
      CHECK(o.value == pb.objective(o.point));
      for (int i = 0; i < 10000; ++i) {
        const Vector x = feasible(d, rng);
        CHECK(o.value <= pb.objective(x) + 1e-12);
      }
    }
  }

  TEST_CASE("instance round trip") {
    const Problem pb = generate_regression(4, 3, 5);
    const Problem back = parse_instance(serialize_instance(pb));
    CHECK(back.features() == pb.features());
    CHECK(back.targets() == pb.targets());

    const auto path = std::filesystem::temp_directory_path() / "fedsmd_instance_test.txt";
    write_instance(pb, path);
    const Problem file = read_instance(path);
    CHECK(file.features() == pb.features());
    std::filesystem::remove(path);

    CHECK_THROWS(parse_instance("1 2 3\n4 5\n"));
    CHECK_THROWS(parse_instance(""));
    CHECK_THROWS_AS(read_instance("/nonexistent/fedsmd/instance"), IoError);
  }
}
