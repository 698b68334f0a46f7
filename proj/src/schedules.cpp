// Copyright 2026 The fedsmd Authors.
// SPDX-License-Identifier: Apache-2.0

#include "fedsmd/schedules.hpp"

#include <algorithm>
#include <cmath>

#include "fedsmd/error.hpp"

namespace fedsmd {

namespace {

// Slack for the kappa inequality so the minimax pair, which meets it with
// equality, survives rounding.
constexpr double kKappaSlack = 1e-12;

}  // namespace

std::optional<ScheduleViolation> find_violation(const ScheduleParams& sp) {
  if (!(sp.p > 1.0 && sp.p <= 2.0)) {
    return ScheduleViolation{"tail_p", "tail parameter p must lie in (1, 2]"};
  }
  if (!(sp.mu > 0.0 && sp.mu < 1.0)) {
    return ScheduleViolation{"mu", "mu must lie in (0, 1)"};
  }
  if (!(sp.kappa > 0.0 && sp.kappa < 1.0)) {
    return ScheduleViolation{"kappa", "kappa must lie in (0, 1)"};
  }
  if (!(sp.gamma > 1.0) || !std::isfinite(sp.gamma)) {
    return ScheduleViolation{"gamma", "gamma must be strictly greater than 1"};
  }
  if (!(sp.scale_constant > 0.0) || !std::isfinite(sp.scale_constant)) {
    return ScheduleViolation{"scale_constant",
                             "scale constant c* must be positive and finite"};
  }
  if (sp.kappa < sp.mu + 0.5 - kKappaSlack) {
    return ScheduleViolation{"kappa", "kappa >= mu + 1/2 is violated"};
  }
  if (sp.kappa < 1.0 - sp.mu * (sp.p - 1.0) - kKappaSlack) {
    return ScheduleViolation{"kappa", "kappa >= 1 - mu (p - 1) is violated"};
  }
  return std::nullopt;
}

void validate(const ScheduleParams& params) {
  if (auto v = find_violation(params)) throw ConfigError(v->field, v->message);
}

ExponentPair minimax_pair(double p) {
  if (!(p > 1.0 && p <= 2.0)) {
    throw InvalidInput("minimax_pair: p must lie in (1, 2]");
  }
  return {(p + 1.0) / (2.0 * p), 1.0 / (2.0 * p)};
}

double step_size(const ScheduleParams& sp, std::size_t t) {
  const double td = static_cast<double>(t);
  const double alpha = std::pow(1.0 + std::log(td), -sp.gamma) *
                       std::pow(td, -(sp.kappa - sp.mu)) *
                       std::min(std::pow(td, -sp.mu), 1.0 / sp.scale_constant);
  // alpha_t * lambda_t <= 1 holds exactly in real arithmetic; keep it so
  // after rounding.
  if (alpha * clip_level(sp, t) > 1.0) return std::nextafter(alpha, 0.0);
  return alpha;
}

double clip_level(const ScheduleParams& sp, std::size_t t) {
  return std::max(std::pow(static_cast<double>(t), sp.mu), sp.scale_constant);
}

CommClock::CommClock(std::size_t period, std::size_t rounds)
    : period_(period), rounds_(rounds) {
  if (period == 0) throw ConfigError("period", "period must be at least 1");
  if (rounds == 0) throw ConfigError("rounds", "rounds must be at least 1");
}

bool CommClock::is_sync_instant(std::size_t t) const noexcept {
  return t > 1 && t <= horizon() && (t - 1) % period_ == 0;
}

std::size_t tau_unbounded(std::size_t period, std::size_t t) {
  if (t <= 1 + period) return 1;
  return 1 + ((t - 1) / period) * period;
}

std::size_t CommClock::tau(std::size_t t) const {
  if (t < 1 || t > horizon()) {
    throw InvalidInput("tau: iteration " + std::to_string(t) +
                       " outside [1, " + std::to_string(horizon()) + "]");
  }
  return tau_unbounded(period_, t);
}

Schedule::Schedule(const ScheduleParams& params, const CommClock& clock)
    : params_(params), clock_(clock) {
  validate(params_);
  const std::size_t horizon = clock_.horizon();
  alpha_.resize(horizon);
  lambda_.resize(horizon);
  for (std::size_t t = 1; t <= horizon; ++t) {
    alpha_[t - 1] = step_size(params_, t);
    lambda_[t - 1] = clip_level(params_, t);
  }
}

double Schedule::consensus_bound(std::size_t t) const {
  // States coincide right after averaging, even where tau(t) = 1 < t.
  if (clock_.is_sync_instant(t)) return 0.0;
  const std::size_t start = clock_.tau(t);
  double s = 0.0;
  for (std::size_t k = start; k < t; ++k) s += alpha_[k - 1] * lambda_[k - 1];
  return 2.0 * s;
}

double consensus_bound(const ScheduleParams& params, const CommClock& clock,
                       std::size_t t) {
  if (clock.is_sync_instant(t)) return 0.0;
  const std::size_t start = clock.tau(t);
  double s = 0.0;
  for (std::size_t k = start; k < t; ++k) {
    s += step_size(params, k) * clip_level(params, k);
  }
  return 2.0 * s;
}

SeriesSums series_diagnostics(const ScheduleParams& sp, std::size_t period,
                              std::size_t terms) {
  if (period == 0) throw InvalidInput("series_diagnostics: period must be >= 1");
  std::vector<double> alpha(terms), lambda(terms);
  for (std::size_t t = 1; t <= terms; ++t) {
    alpha[t - 1] = step_size(sp, t);
    lambda[t - 1] = clip_level(sp, t);
  }
  SeriesSums out;
  const double p = sp.p;
  for (std::size_t t = 1; t <= terms; ++t) {
    const double a = alpha[t - 1];
    const double l = lambda[t - 1];
    const std::size_t tau = tau_unbounded(period, t);
    const double at = alpha[tau - 1];
    const double lt = lambda[tau - 1];
    const double al = a * l;
    out.c[0] += a * at * at * lt * lt;
    out.c[1] += a * at * l * lt;
    out.c[2] += a * std::pow(l, 1.0 - p);
    out.c[3] += a * a * std::pow(l, 2.0 - 2.0 * p);
    out.c[4] += al * al * std::pow(l, -p);
    out.c[5] += al * al * al * al * std::pow(l, -p);
  }
  return out;
}

double high_probability_constant(const SeriesSums& s,
                                 const SmoothnessInputs& in) {
  const double m = static_cast<double>(in.clients);
  const double period = static_cast<double>(in.period);
  const double sp = in.sigma_p;
  return std::log(1.0 / in.delta) + m * in.smoothness * period * period * s.c[0] +
         2.0 * m * period * s.c[1] + 4.0 * sp * s.c[2] +
         16.0 * m * sp * sp * s.c[3] + 40.0 * m * sp * (1.0 + 3.0 * m) * s.c[4] +
         40.0 * m * m * sp * s.c[5] + 8.0 * m;
}

SmoothnessConstant resolve_smoothness_constant(const ScheduleParams& base,
                                               const SmoothnessInputs& in) {
  if (!(in.delta > 0.0 && in.delta < 1.0)) {
    throw ConfigError("delta", "delta must lie in (0, 1)");
  }
  if (!std::isfinite(in.sigma_p)) {
    throw ConfigError("tail_p",
                      "noise has no finite moment of order p; the smoothness "
                      "schedule constant is undefined");
  }
  const double m = static_cast<double>(in.clients);
  auto scale_for = [&](double a) {
    return 2.0 * m * in.smoothness * (2.0 * in.initial_radius + 10.0 * a) +
           2.0 * in.initial_gradient;
  };

  SmoothnessConstant out;
  out.a = 8.0 * m;
  for (out.iterations = 1; out.iterations <= 50; ++out.iterations) {
    ScheduleParams sp = base;
    sp.scale_constant = scale_for(out.a);
    const double next = std::max(
        out.a, high_probability_constant(
                   series_diagnostics(sp, in.period, in.horizon), in));
    const double change = (next - out.a) / out.a;
    out.a = next;
    if (change < 1e-6) {
      out.converged = true;
      break;
    }
  }
  out.iterations = std::min(out.iterations, 50);
  out.scale_constant = scale_for(out.a);
  return out;
}

}  // namespace fedsmd
