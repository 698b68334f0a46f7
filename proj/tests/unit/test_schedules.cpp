// Copyright 2026 The fedsmd Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "doctest.h"
#include "fedsmd/error.hpp"
#include "fedsmd/schedules.hpp"

using namespace fedsmd;

namespace {

ScheduleParams minimax(double p, double gamma, double c) {
  const ExponentPair e = minimax_pair(p);
  ScheduleParams sp;
  sp.p = p;
  sp.mu = e.mu;
  sp.kappa = e.kappa;
  sp.gamma = gamma;
  sp.scale_constant = c;
  return sp;
}

}  // namespace

TEST_SUITE("schedules") {
  TEST_CASE("validation examples") {
    ScheduleParams sp;
    sp.p = 1.8;
    sp.mu = 1.0 / 3.6;
    sp.kappa = 0.7778;
    sp.gamma = 1.01;
    CHECK_FALSE(find_violation(sp).has_value());

    sp.p = 2.0;
    sp.mu = 0.25;
    sp.kappa = 0.6;
    auto bad = find_violation(sp);
    REQUIRE(bad.has_value());
    CHECK(bad->field == "kappa");
    CHECK_THROWS_AS(validate(sp), ConfigError);

    sp = ScheduleParams{};
    sp.gamma = 1.0;
    bad = find_violation(sp);
    REQUIRE(bad.has_value());
    CHECK(bad->field == "gamma");

    sp = ScheduleParams{};
    sp.p = 2.1;
    CHECK(find_violation(sp)->field == "tail_p");
    sp = ScheduleParams{};
    sp.scale_constant = 0.0;
    CHECK(find_violation(sp)->field == "scale_constant");
  }

  TEST_CASE("minimax pair") {
    CHECK(minimax_pair(2.0).kappa == 0.75);
    CHECK(minimax_pair(2.0).mu == 0.25);
    CHECK(minimax_pair(1.8).kappa == doctest::Approx(0.77778).epsilon(1e-5));
    CHECK(minimax_pair(1.8).mu == doctest::Approx(0.27778).epsilon(1e-4));
    CHECK(minimax_pair(1.0 + 1e-9).kappa == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(minimax_pair(1.0 + 1e-9).mu == doctest::Approx(0.5).epsilon(1e-8));
    CHECK_THROWS_AS(minimax_pair(1.0), InvalidInput);
    CHECK_THROWS_AS(minimax_pair(2.5), InvalidInput);
    for (double p : {1.05, 1.2, 1.5, 1.8, 2.0}) {
      const ExponentPair e = minimax_pair(p);
      CHECK(e.kappa == doctest::Approx(e.mu + 0.5).epsilon(1e-15));
      CHECK(e.kappa == doctest::Approx(1.0 - e.mu * (p - 1.0)).epsilon(1e-15));
      CHECK_NOTHROW(validate(minimax(p, 1.01, 1.0)));
    }
  }

  TEST_CASE("step size and clip level examples") {
    ScheduleParams sp = minimax(1.8, 1.01, 2.0);
    CHECK(step_size(sp, 1) == 0.5);
    sp.scale_constant = 0.5;
    CHECK(step_size(sp, 1) == 1.0);
    sp.scale_constant = 2.0;
    // tests/oracles/golden.py
    CHECK(step_size(sp, 100) == doctest::Approx(0.0048794374273290007751).epsilon(1e-13));
    CHECK(clip_level(sp, 100) == doctest::Approx(3.5938136638046273022).epsilon(1e-14));
    sp.scale_constant = 10.0;
    CHECK(clip_level(sp, 1) == 10.0);
    ScheduleParams q = minimax(2.0, 1.01, 1.0);
    CHECK(clip_level(q, 1024) == doctest::Approx(5.6568542494923801952).epsilon(1e-15));
  }

  TEST_CASE("monotonicity and alpha * lambda <= 1 up to 1e6") {
    for (double p : {1.2, 1.8, 2.0}) {
      for (double c : {0.3, 1.0, 2.0, 37.0}) {
        const ScheduleParams sp = minimax(p, 1.01, c);
        double prev_a = step_size(sp, 1), prev_l = clip_level(sp, 1);
        bool ok = prev_a * prev_l <= 1.0;
        for (std::size_t t = 2; t <= 1000000; ++t) {
          const double a = step_size(sp, t), l = clip_level(sp, t);
          ok = ok && a <= prev_a && l >= prev_l && a * l <= 1.0;
          prev_a = a;
          prev_l = l;
        }
        CHECK(ok);
      }
    }
  }

  TEST_CASE("communication clock") {
    const CommClock clock(2, 5);
    CHECK(clock.horizon() == 11);
    CHECK(clock.tau(1) == 1);
    CHECK(clock.tau(2) == 1);
    CHECK(clock.tau(3) == 1);
    CHECK(clock.tau(4) == 3);
    CHECK(clock.tau(5) == 5);
    CHECK(clock.tau(6) == 5);
    CHECK(clock.tau(11) == 11);
    CHECK_THROWS_AS(clock.tau(0), InvalidInput);
    CHECK_THROWS_AS(clock.tau(12), InvalidInput);
    std::size_t instants = 0;
    for (std::size_t t = 1; t <= clock.horizon(); ++t) instants += clock.is_sync_instant(t);
    CHECK(instants == 5);
    CHECK(clock.is_sync_instant(11));
    CHECK_FALSE(clock.is_sync_instant(1));
    CHECK(CommClock(2, 30000).horizon() == 60001);
    CHECK_THROWS_AS(CommClock(0, 3), ConfigError);
    CHECK_THROWS_AS(CommClock(3, 0), ConfigError);
  }

  TEST_CASE("consensus bound") {
    const ScheduleParams sp = minimax(1.8, 1.01, 2.0);
    const CommClock clock(2, 50);
    const Schedule s(sp, clock);
    auto al = [&](std::size_t t) { return step_size(sp, t) * clip_level(sp, t); };
    CHECK(s.consensus_bound(1) == 0.0);
    CHECK(s.consensus_bound(2) == doctest::Approx(2.0 * al(1)));
    CHECK(s.consensus_bound(3) == 0.0);
    CHECK(s.consensus_bound(4) == doctest::Approx(2.0 * al(3)));
    for (std::size_t t = 1; t <= clock.horizon(); ++t) {
      if (clock.is_sync_instant(t)) CHECK(s.consensus_bound(t) == 0.0);
      CHECK(s.consensus_bound(t) == consensus_bound(sp, clock, t));
    }
    const CommClock five(5, 4);
    const Schedule s5(sp, five);
    CHECK(s5.consensus_bound(5) == doctest::Approx(2.0 * (al(1) + al(2) + al(3) + al(4))));
    CHECK(s5.consensus_bound(9) == doctest::Approx(2.0 * (al(6) + al(7) + al(8))));
  }

  TEST_CASE("series diagnostics") {
    const ScheduleParams sp = minimax(1.8, 1.01, 2.0);
    const SeriesSums s = series_diagnostics(sp, 2, 100000);
    // tests/oracles/golden.py
    const double golden[6] = {0.86227789687264855, 2.0625236999156948, 2.0521730382195935,
                              0.11991592738168556, 0.42613242671714774, 0.29848662155069028};
    for (int k = 0; k < 6; ++k) CHECK(s.c[k] == doctest::Approx(golden[k]).epsilon(1e-11));

    const SeriesSums a = series_diagnostics(sp, 2, 1000);
    const SeriesSums b = series_diagnostics(sp, 2, 2000);
    for (int k = 0; k < 6; ++k) CHECK(b.c[k] >= a.c[k]);

    // C2 terms against the bound used to argue its finiteness.
    for (std::size_t t = 1; t <= 100000; t += 7) {
      const double term = step_size(sp, t) * std::pow(clip_level(sp, t), 1.0 - sp.p);
      const double bound = std::pow(1.0 + std::log(double(t)), -sp.gamma) *
                           std::pow(double(t), -(sp.kappa + (sp.p - 1.0) * sp.mu));
      CHECK(term <= bound * (1.0 + 1e-12));
    }
  }

  TEST_CASE("smoothness constant fixed point") {
    const ScheduleParams sp = minimax(1.8, 1.01, 1.0);
    SmoothnessInputs in;
    in.clients = 4;
    in.smoothness = 2.0;
    in.initial_radius = 0.8;
    in.initial_gradient = 1.5;
    in.period = 2;
    in.sigma_p = 4.0;
    in.delta = 0.05;
    in.horizon = 20001;
    const SmoothnessConstant k = resolve_smoothness_constant(sp, in);
    CHECK(k.converged);
    CHECK(k.a >= 8.0 * in.clients);
    CHECK(k.scale_constant == doctest::Approx(2.0 * 4 * 2.0 * (2.0 * 0.8 + 10.0 * k.a) + 3.0));
    ScheduleParams at = sp;
    at.scale_constant = k.scale_constant;
    const double formula = high_probability_constant(series_diagnostics(at, 2, in.horizon), in);
    CHECK(k.a >= formula * (1.0 - 1e-6));
  }
}
