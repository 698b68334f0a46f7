// Copyright 2026 The fedsmd Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <set>

#include "doctest.h"
#include "fedsmd/rng.hpp"

using namespace fedsmd;

TEST_SUITE("rng") {
  TEST_CASE("philox4x32-10 known answers") {
    using A4 = std::array<std::uint32_t, 4>;
    CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) ==
          A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                     {0xffffffff, 0xffffffff}) ==
          A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                     {0xa4093822, 0x299f31d0}) ==
          A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
  }

  TEST_CASE("streams are reproducible and distinct") {
    CounterRng a(7, {StreamPurpose::GradientNoise, 3, 11});
    CounterRng b(7, {StreamPurpose::GradientNoise, 3, 11});
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

    std::set<std::uint64_t> firsts;
    for (std::uint32_t agent = 0; agent < 4; ++agent) {
      for (std::uint64_t it = 0; it < 4; ++it) {
        firsts.insert(CounterRng(7, {StreamPurpose::GradientNoise, agent, it}).next_u64());
      }
    }
    firsts.insert(CounterRng(7, {StreamPurpose::ProblemInstance, 0, 0}).next_u64());
    firsts.insert(CounterRng(8, {StreamPurpose::GradientNoise, 0, 0}).next_u64());
    CHECK(firsts.size() == 18);
  }

  TEST_CASE("uniform range and moments") {
    CounterRng rng(1, {StreamPurpose::Test, 0, 0});
    double sum = 0.0, sq = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
      const double u = rng.uniform();
      REQUIRE(u >= 0.0);
      REQUIRE(u < 1.0);
      sum += u;
      sq += u * u;
    }
    CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
    CHECK(sq / n == doctest::Approx(1.0 / 3.0).epsilon(0.01));
  }

  TEST_CASE("normal moments") {
    CounterRng rng(2, {StreamPurpose::Test, 0, 0});
    double sum = 0.0, sq = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
      const double z = rng.normal();
      sum += z;
      sq += z * z;
    }
    CHECK(std::abs(sum / n) < 0.01);
    CHECK(sq / n == doctest::Approx(1.0).epsilon(0.02));
  }

  TEST_CASE("block accounting") {
    CounterRng rng(3, {StreamPurpose::Test, 0, 0});
    CHECK(rng.blocks_used() == 0);
    rng.next_u64();
    CHECK(rng.blocks_used() == 1);
    rng.next_u64();
    CHECK(rng.blocks_used() == 1);
    rng.next_u64();
    CHECK(rng.blocks_used() == 2);
  }
}
