// Copyright 2026 The fedsmd Authors.
// SPDX-License-Identifier: Apache-2.0

#include "fedsmd/federation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fedsmd/clipping.hpp"
#include "fedsmd/parallel.hpp"

namespace fedsmd {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double clamp_gap(double gap) {
  return (gap < 0.0 && gap >= -1e-9) ? 0.0 : gap;
}

class Checker {
 public:
  Checker(AssertionMode mode, FederationRun& run) : mode_(mode), run_(run) {}

  bool enabled() const { return mode_ != AssertionMode::Off; }

  void fail(std::size_t agent, std::size_t t, double value, double bound,
            const std::string& what) {
    if (mode_ == AssertionMode::Strict) {
      throw InvariantViolation(
          agent, t,
          what + " violated for client " + std::to_string(agent) +
              " at t = " + std::to_string(t) + ": " + std::to_string(value) +
              " > " + std::to_string(bound));
    }
    run_.violations.push_back({agent, t, value, bound, what});
  }

 private:
  AssertionMode mode_;
  FederationRun& run_;
};

}  // namespace

void validate(const FederationConfig& cfg) {
  if (cfg.clients == 0) throw ConfigError("clients", "need at least one client");
  if (cfg.workers == 0) throw ConfigError("workers", "need at least one worker");
  if (cfg.problem.agents() != cfg.clients) {
    throw ConfigError("clients", "problem has " +
                                     std::to_string(cfg.problem.agents()) +
                                     " agents but " +
                                     std::to_string(cfg.clients) +
                                     " clients are configured");
  }
  const std::size_t n = cfg.problem.dimension();
  if (cfg.domain.dimension() != n || cfg.geometry.dimension() != n) {
    throw ConfigError("dimension",
                      "problem, domain and mirror map dimensions differ");
  }
  if (!supports_mirror_step(cfg.geometry, cfg.domain)) {
    throw ConfigError("mirror", "no exact mirror step for " +
                                    cfg.geometry.name() + " on " +
                                    cfg.domain.name());
  }
  validate(cfg.schedule);
  validate(cfg.noise);
  if (!cfg.initial_points.empty()) {
    if (cfg.initial_points.size() != cfg.clients) {
      throw ConfigError("initial_points", "need one initial point per client");
    }
    for (const Vector& x : cfg.initial_points) {
      if (x.size() != n || !contains(cfg.domain, x)) {
        throw ConfigError("initial_points",
                          "initial point outside the decision domain");
      }
    }
  }
}

LocalStepResult local_step(const Schedule& schedule,
                           const MirrorStepper& stepper,
                           const StochasticOracle& oracle, std::size_t agent,
                           std::size_t t, ConstView state) {
  const Vector g = oracle.noisy_gradient(agent, t, state);
  ClipReport c = clip(g, schedule.lambda(t));
  return {stepper.step(state, c.clipped, schedule.alpha(t)), c.was_clipped};
}

Vector sync_round(std::span<const Vector> states) {
  if (states.empty()) throw InvalidInput("sync_round: no client states");
  const Vector& first = states.front();
  if (std::all_of(states.begin(), states.end(),
                  [&](const Vector& s) { return s == first; })) {
    return first;
  }
  Vector avg(first.size(), 0.0);
  for (const Vector& s : states) {
    require_same_size(avg, s, "sync_round");
    for (std::size_t j = 0; j < avg.size(); ++j) avg[j] += s[j];
  }
  const double m = static_cast<double>(states.size());
  for (double& v : avg) v /= m;
  return avg;
}

Vector ergodic_average(std::span<const Vector> trajectory) {
  if (trajectory.empty()) throw InvalidInput("ergodic_average: empty trajectory");
  Vector sum(trajectory.front().size(), 0.0);
  for (const Vector& x : trajectory) {
    require_same_size(sum, x, "ergodic_average");
    for (std::size_t j = 0; j < sum.size(); ++j) sum[j] += x[j];
  }
  for (double& v : sum) v /= static_cast<double>(trajectory.size());
  return sum;
}

const Vector& ergodic_average(const FederationRun& run, std::size_t client) {
  if (client >= run.ergodic.size()) {
    throw InvalidInput("ergodic_average: client index out of range");
  }
  return run.ergodic[client];
}

double global_error(const FederationRun& run, const Problem& problem,
                    double optimum_value) {
  if (run.ergodic.empty()) throw InvalidInput("global_error: run has no clients");
  double total = 0.0;
  for (const Vector& x : run.ergodic) total += problem.objective(x);
  return clamp_gap(total / static_cast<double>(run.ergodic.size()) -
                   optimum_value);
}

FederationRun run_federation(const FederationConfig& cfg) {
  validate(cfg);
  const Schedule schedule(cfg.schedule, cfg.clock);
  const MirrorStepper stepper(cfg.geometry, cfg.domain);
  const StochasticOracle oracle(cfg.problem, cfg.noise, cfg.master_seed);
  const std::size_t m = cfg.clients;
  const std::size_t n = cfg.problem.dimension();
  const std::size_t period = cfg.clock.period();
  const std::size_t horizon = cfg.clock.horizon();
  const double f_star = cfg.optimum_value.value_or(kNaN);

  FederationRun run;
  run.horizon = horizon;
  run.records.reserve(horizon);
  run.averages.reserve(horizon);
  Checker checker(cfg.assertion_mode, run);

  std::vector<Vector> x = cfg.initial_points.empty()
                              ? std::vector<Vector>(m, cfg.domain.default_point())
                              : cfg.initial_points;

  // Clients may start apart; their initial spread then adds to the bound
  // until the first synchronisation.
  double initial_spread = 0.0;
  {
    const Vector avg = sync_round(x);
    for (const Vector& xi : x) initial_spread = std::max(initial_spread, distance(xi, avg));
  }

  std::vector<Vector> ergodic_sum(m, Vector(n, 0.0));

  auto record_state = [&](std::size_t t, std::span<const Vector> states,
                          double clip_fraction) {
    const Vector avg = sync_round(states);
    IterationRecord rec;
    rec.t = t;
    rec.alpha = schedule.alpha(t);
    rec.lambda = schedule.lambda(t);
    rec.clip_fraction = clip_fraction;
    rec.consensus_bound = schedule.consensus_bound(t);
    if (t <= 1 + period && !cfg.clock.is_sync_instant(t)) {
      rec.consensus_bound += initial_spread;
    }
    rec.f_gap_average = cfg.problem.objective(avg) - f_star;

    double ergodic_total = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const Vector& xi = states[i];
      const double dev = distance(xi, avg);
      rec.consensus_max = std::max(rec.consensus_max, dev);
      if (checker.enabled()) {
        if (dev > rec.consensus_bound + kBoundSlack) {
          checker.fail(i, t, dev, rec.consensus_bound, "consensus bound");
        }
        if (cfg.clock.is_sync_instant(t) && xi != states[0]) {
          checker.fail(i, t, dev, 0.0, "exact consensus at sync instant");
        }
        if (!contains(cfg.domain, xi)) {
          checker.fail(i, t, 1.0, 0.0, "domain feasibility");
        }
      }
      Vector& sum = ergodic_sum[i];
      for (std::size_t j = 0; j < n; ++j) sum[j] += xi[j];
      Vector xhat(n);
      for (std::size_t j = 0; j < n; ++j) xhat[j] = sum[j] / static_cast<double>(t);
      ergodic_total += cfg.problem.objective(xhat);
    }
    rec.ergodic_gap = clamp_gap(ergodic_total / static_cast<double>(m) - f_star);

    if (cfg.recording == StateRecording::Full || t == 1 ||
        cfg.clock.is_sync_instant(t)) {
      run.snapshots.push_back({t, std::vector<Vector>(states.begin(), states.end())});
    }
    run.records.push_back(rec);
    run.averages.push_back(avg);
  };

  // Between syncs clients are independent; each round is one parallel
  // segment of P local steps followed by the averaging barrier.
  WorkerPool pool(std::min(cfg.workers, m));
  std::vector<std::vector<Vector>> segment(m, std::vector<Vector>(period));
  std::vector<std::vector<char>> clipped(m, std::vector<char>(period, 0));
  std::vector<std::vector<double>> moved(m, std::vector<double>(period, 0.0));
  std::vector<Vector> states(m);

  for (std::size_t round = 0; round < cfg.clock.rounds(); ++round) {
    const std::size_t t0 = 1 + round * period;
    pool.parallel_for(m, [&](std::size_t i) {
      const Vector* current = &x[i];
      for (std::size_t k = 0; k < period; ++k) {
        LocalStepResult step =
            local_step(schedule, stepper, oracle, i, t0 + k, *current);
        moved[i][k] = distance(step.next, *current);
        clipped[i][k] = step.was_clipped ? 1 : 0;
        segment[i][k] = std::move(step.next);
        current = &segment[i][k];
      }
    });

    for (std::size_t k = 0; k < period; ++k) {
      const std::size_t t = t0 + k;
      std::size_t clipped_count = 0;
      for (std::size_t i = 0; i < m; ++i) {
        states[i] = k == 0 ? x[i] : segment[i][k - 1];
        clipped_count += static_cast<std::size_t>(clipped[i][k]);
        const double limit = schedule.alpha(t) * schedule.lambda(t);
        if (checker.enabled() && moved[i][k] > limit + kBoundSlack) {
          checker.fail(i, t, moved[i][k], limit, "clipped step displacement");
        }
      }
      record_state(t, states,
                   static_cast<double>(clipped_count) / static_cast<double>(m));
    }

    std::vector<Vector> uploads(m);
    for (std::size_t i = 0; i < m; ++i) uploads[i] = std::move(segment[i][period - 1]);
    const Vector average = sync_round(uploads);
    for (std::size_t i = 0; i < m; ++i) x[i] = average;
    ++run.sync_rounds;
  }
  record_state(horizon, x, 0.0);

  run.ergodic.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    run.ergodic[i].resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      run.ergodic[i][j] = ergodic_sum[i][j] / static_cast<double>(horizon);
    }
  }
  return run;
}

}  // namespace fedsmd
