// Copyright 2026 The fedsmd Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fedsmd/config.hpp"
#include "fedsmd/federation.hpp"
#include "fedsmd/problems.hpp"

namespace fedsmd {

/// Everything needed to execute one repetition of an experiment.
struct RunSetup {
  FederationConfig federation;
  Optimum optimum;
  double sigma_p = 0.0;          // certified noise moment bound
  std::optional<double> gradient_bound;  // G over the domain, when finite
  std::optional<SmoothnessConstant> smoothness;
};

/// Builds the problem instance, domain, schedule and optimum for repetition
/// `repetition`; both the instance and the noise use seed + repetition.
RunSetup build_run(const ExperimentConfig& cfg, std::size_t repetition);

Problem make_problem(const ExperimentConfig& cfg, std::uint64_t seed);
Domain make_domain(const ExperimentConfig& cfg);
NoiseModel make_noise(const ExperimentConfig& cfg);

/// The config with one sweep value applied. Period sweeps keep T fixed.
ExperimentConfig apply_sweep_value(const ExperimentConfig& cfg, double value);

struct CurvePoint {
  std::size_t t = 0;
  double f_gap_avg_clients = 0.0;  // global error of the ergodic averages at t
  double consensus_max = 0.0;
  double consensus_bound = 0.0;
  double alpha_t = 0.0;
  double lambda_t = 0.0;
  double clip_fraction = 0.0;
};

/// Rows at t = 1, stride, 2 stride, ... and T.
std::vector<CurvePoint> checkpoint_curve(const FederationRun& run,
                                         std::size_t stride);

/// Pointwise mean of curves sharing the same checkpoints.
std::vector<CurvePoint> mean_curve(std::span<const std::vector<CurvePoint>> curves);

struct RatePoint {
  double t = 0.0;
  double error = 0.0;
};

/// Least-squares slope of log(error) against log(t) over the points whose
/// log t lies in the upper half of the observed range. Non-positive errors
/// are dropped. Throws InvalidInput for fewer than 5 points or fewer than 3
/// usable ones.
double rate_slope(std::span<const RatePoint> curve);
double rate_slope(std::span<const CurvePoint> curve);

/// (1 - p) / (2p).
double theoretical_rate_exponent(double p);

struct SummaryRow {
  std::string sweep_param;
  double value = 0.0;
  std::size_t repetition = 0;
  std::uint64_t seed = 0;
  std::size_t horizon = 0;
  double global_error = 0.0;
  double final_consensus_max = 0.0;
  double mean_clip_fraction = 0.0;
  double fitted_slope = 0.0;  // NaN when the curve is too short to fit
};

struct SweepPoint {
  double value = 0.0;
  double mean_global_error = 0.0;
  double stddev_global_error = 0.0;  // sample deviation over repetitions
  std::vector<CurvePoint> curve;  // mean over repetitions
  std::string curve_file;         // empty when files are not written
};

struct ExperimentResult {
  std::string sweep_param;
  std::vector<SummaryRow> rows;  // ordered by sweep value, then repetition
  std::vector<SweepPoint> points;
  std::string summary_file;
  std::string plot_file;
  std::vector<BoundViolation> violations;  // Record mode only
};

struct ExperimentOptions {
  bool sweep = true;        // false: run the base config only
  bool write_files = true;  // CSV and plot script under cfg.out_dir
};

/// Runs every (sweep value, repetition) pair. Jobs run on cfg.workers
/// threads; the output does not depend on the worker count.
ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                const ExperimentOptions& options = {});

/// File-name token for a sweep value ("1.8", "4").
std::string value_token(double value);

}  // namespace fedsmd
