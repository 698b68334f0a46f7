// Copyright 2026 The fedsmd Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fedsmd/domains.hpp"
#include "fedsmd/geometry.hpp"
#include "fedsmd/noise.hpp"
#include "fedsmd/problems.hpp"
#include "fedsmd/schedules.hpp"

namespace fedsmd {

/// What to do when a runtime bound check fails.
///   Strict: throw InvariantViolation with the offending (agent, t).
///   Record: collect into FederationRun::violations and continue.
///   Off:    skip the checks.
enum class AssertionMode { Strict, Record, Off };

/// Full per-client states are kept at t = 1 and every sync instant
/// (SyncRounds) or at every iteration (Full).
enum class StateRecording { SyncRounds, Full };

/// Absolute slack on the consensus and displacement bounds.
inline constexpr double kBoundSlack = 1e-9;

struct FederationConfig {
  std::size_t clients = 1;
  CommClock clock{2, 10000};
  ScheduleParams schedule;
  MirrorGeometry geometry = MirrorGeometry::negative_entropy(2);
  Domain domain = Domain::simplex(2);
  Problem problem;
  NoiseModel noise;
  std::uint64_t master_seed = 0;
  /// Empty: every client starts at domain.default_point().
  std::vector<Vector> initial_points;
  AssertionMode assertion_mode = AssertionMode::Strict;
  StateRecording recording = StateRecording::SyncRounds;
  /// f(x*); metrics reporting a gap are NaN when absent.
  std::optional<double> optimum_value;
  /// Threads used for client updates between sync rounds. The trajectory is
  /// bit-identical for every value.
  std::size_t workers = 1;
};

/// Throws ConfigError / InvalidInput for inconsistent configurations.
void validate(const FederationConfig& config);

/// Metrics of the states x_{., t}.
struct IterationRecord {
  std::size_t t = 0;
  double f_gap_average = 0.0;  // f(xbar_t) - f*
  double ergodic_gap = 0.0;    // (1/m) sum_l f(xhat_l^t) - f*
  double consensus_max = 0.0;  // max_i |x_{i,t} - xbar_t|
  double consensus_bound = 0.0;
  double clip_fraction = 0.0;  // share of clients clipped in the step from t
  double alpha = 0.0;
  double lambda = 0.0;
};

struct StateSnapshot {
  std::size_t t = 0;
  std::vector<Vector> states;
};

struct BoundViolation {
  std::size_t agent = 0;
  std::size_t t = 0;
  double value = 0.0;
  double bound = 0.0;
  std::string what;
};

struct FederationRun {
  std::size_t horizon = 0;
  std::size_t sync_rounds = 0;
  std::vector<IterationRecord> records;  // records[t - 1]
  std::vector<Vector> averages;          // xbar_t, averages[t - 1]
  std::vector<StateSnapshot> snapshots;
  std::vector<Vector> ergodic;           // xhat_l^T per client
  std::vector<BoundViolation> violations;
};

struct LocalStepResult {
  Vector next;
  bool was_clipped = false;
};

/// One client update: noisy gradient, clip at lambda_t, mirror step with
/// alpha_t.
LocalStepResult local_step(const Schedule& schedule,
                           const MirrorStepper& stepper,
                           const StochasticOracle& oracle, std::size_t agent,
                           std::size_t t, ConstView state);

/// Server average (1/m) sum_j y_j, summed in index order. Returns the common
/// value exactly when all inputs are identical.
Vector sync_round(std::span<const Vector> states);

FederationRun run_federation(const FederationConfig& config);

/// Time average of a trajectory.
Vector ergodic_average(std::span<const Vector> trajectory);
/// xhat_l^T recorded by the run.
const Vector& ergodic_average(const FederationRun& run, std::size_t client);

/// (1/m) sum_l f(xhat_l^T) - f*. Values in [-1e-9, 0) are reported as 0.
double global_error(const FederationRun& run, const Problem& problem,
                    double optimum_value);

}  // namespace fedsmd
