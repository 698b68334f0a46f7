// Copyright 2026 The fedsmd Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace fedsmd {

/// How the scale constant c* of the schedules is derived.
///   Smoothness:      c* = 2 m L (2 R1 + 10 A) + 2 B
///   BoundedGradient: c* = 2 G
enum class ScheduleVariant { Smoothness, BoundedGradient };

/// Step size and clipping level parameters:
///   alpha_t  = (1 + ln t)^(-gamma) t^(-(kappa - mu)) min{t^(-mu), 1/c*}
///   lambda_t = max{t^mu, c*}
struct ScheduleParams {
  double p = 1.8;  // tail parameter, (1, 2]
  double mu = 0.5 / 1.8;
  double kappa = 0.5 / 1.8 + 0.5;
  double gamma = 1.01;
  double scale_constant = 1.0;  // c*
  ScheduleVariant variant = ScheduleVariant::BoundedGradient;
};

/// A rejected parameter set: the config field at fault and the violated
/// condition.
struct ScheduleViolation {
  std::string field;
  std::string message;
};

/// nullopt when the parameters are admissible:
///   p in (1, 2], mu in (0, 1), kappa in (0, 1), gamma > 1, c* > 0,
///   kappa >= max{mu + 1/2, 1 - mu (p - 1)}.
std::optional<ScheduleViolation> find_violation(const ScheduleParams& params);

/// Throws ConfigError naming the violated inequality.
void validate(const ScheduleParams& params);

struct ExponentPair {
  double kappa;
  double mu;
};

/// (kappa, mu) = ((p + 1) / (2p), 1 / (2p)); both branches of the kappa
/// condition hold with equality.
ExponentPair minimax_pair(double p);

double step_size(const ScheduleParams& params, std::size_t t);
double clip_level(const ScheduleParams& params, std::size_t t);

/// Communication period P and number of rounds; horizon T = 1 + P * rounds.
/// Synchronisation instants are {1 + iP : i = 1..rounds}.
class CommClock {
 public:
  CommClock(std::size_t period, std::size_t rounds);

  std::size_t period() const noexcept { return period_; }
  std::size_t rounds() const noexcept { return rounds_; }
  std::size_t horizon() const noexcept { return 1 + period_ * rounds_; }

  bool is_sync_instant(std::size_t t) const noexcept;
  /// Latest sync instant <= t, or 1 while t <= 1 + P. Throws InvalidInput
  /// for t outside [1, T].
  std::size_t tau(std::size_t t) const;

 private:
  std::size_t period_;
  std::size_t rounds_;
};

/// tau for an unbounded horizon; used by the series sums.
std::size_t tau_unbounded(std::size_t period, std::size_t t);

/// alpha_t and lambda_t tabulated for t = 1..T. Immutable once built.
class Schedule {
 public:
  Schedule(const ScheduleParams& params, const CommClock& clock);

  const ScheduleParams& params() const noexcept { return params_; }
  const CommClock& clock() const noexcept { return clock_; }
  double alpha(std::size_t t) const { return alpha_.at(t - 1); }
  double lambda(std::size_t t) const { return lambda_.at(t - 1); }

  /// 2 * sum_{s = tau(t)}^{t-1} alpha_s lambda_s; zero at sync instants.
  double consensus_bound(std::size_t t) const;

 private:
  ScheduleParams params_;
  CommClock clock_;
  std::vector<double> alpha_;
  std::vector<double> lambda_;
};

double consensus_bound(const ScheduleParams& params, const CommClock& clock,
                       std::size_t t);

/// Partial sums up to N of
///   C0 = sum alpha_t alpha_tau^2 lambda_tau^2
///   C1 = sum alpha_t alpha_tau lambda_t lambda_tau
///   C2 = sum alpha_t lambda_t^(1-p)
///   C3 = sum alpha_t^2 lambda_t^(2-2p)
///   C4 = sum (alpha_t lambda_t)^2 lambda_t^(-p)
///   C5 = sum (alpha_t lambda_t)^4 lambda_t^(-p)
/// with tau = tau(t) for communication period P.
struct SeriesSums {
  std::array<double, 6> c{};
};

SeriesSums series_diagnostics(const ScheduleParams& params, std::size_t period,
                              std::size_t terms);

/// Problem data entering the smoothness-variant constant.
struct SmoothnessInputs {
  std::size_t clients = 1;
  double smoothness = 1.0;      // L
  double initial_radius = 0.0;  // R1
  double initial_gradient = 0.0;  // B
  std::size_t period = 1;       // P
  double sigma_p = 0.0;         // sigma^p
  double delta = 0.05;          // failure probability
  std::size_t horizon = 1;      // truncation N of the series
};

/// A = log(1/delta) + m L P^2 C0 + 2 m P C1 + 4 sigma^p C2
///     + 16 m sigma^{2p} C3 + 40 m sigma^p (1 + 3m) C4 + 40 m^2 sigma^p C5
///     + 8m
double high_probability_constant(const SeriesSums& sums,
                                 const SmoothnessInputs& in);

struct SmoothnessConstant {
  double a = 0.0;               // A
  double scale_constant = 0.0;  // c* = 2 m L (2 R1 + 10 A) + 2 B
  int iterations = 0;
  bool converged = false;
};

/// Resolves the circular dependency A -> c* -> C0..C5 -> A by a monotone
/// upward iteration starting at A = 8m: A <- max{A, formula(A)} until the
/// relative change is below 1e-6 (at most 50 steps). The result satisfies
/// A >= formula(A) up to that tolerance.
SmoothnessConstant resolve_smoothness_constant(const ScheduleParams& base,
                                               const SmoothnessInputs& in);

}  // namespace fedsmd
