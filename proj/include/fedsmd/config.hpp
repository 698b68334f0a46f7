// Copyright 2026 The fedsmd Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fedsmd/domains.hpp"
#include "fedsmd/federation.hpp"
#include "fedsmd/geometry.hpp"
#include "fedsmd/noise.hpp"
#include "fedsmd/problems.hpp"
#include "fedsmd/schedules.hpp"

namespace fedsmd {

enum class SweepKind { None, Clients, Period, TailP };

/// Experiment description. Defaults are the desk-scale setting: entropic
/// map on the 2-simplex, shifted Pareto(2, 0.5) noise, p = 1.8,
/// gamma = 1.01, P = 2, 10000 rounds (T = 20001), 4 clients, 5 repetitions.
struct ExperimentConfig {
  std::size_t clients = 4;
  std::size_t period = 2;
  std::size_t rounds = 10000;
  std::size_t dimension = 2;

  MirrorKind mirror = MirrorKind::NegativeEntropy;
  DomainKind domain = DomainKind::ProbabilitySimplex;
  double box_lower = -1.0;
  double box_upper = 1.0;
  double ball_radius = 1.0;

  ProblemKind problem = ProblemKind::LinearRegression;
  double quadratic_scale = 1.0;
  std::string instance;  // regression instance file; generated when empty

  NoiseKind noise = NoiseKind::ShiftedPareto;
  double pareto_beta = 2.0;
  double pareto_scale = 0.5;
  double noise_std = 1.0;

  double tail_p = 1.8;
  std::optional<double> mu;     // default 1 / (2p)
  std::optional<double> kappa;  // default mu + 1/2
  double gamma = 1.01;
  ScheduleVariant schedule_variant = ScheduleVariant::BoundedGradient;
  std::optional<double> scale_constant;  // overrides the derived c*
  double delta = 0.05;

  std::uint64_t seed = 1;
  std::size_t repetitions = 5;
  std::size_t checkpoint_stride = 1000;
  SweepKind sweep = SweepKind::None;
  std::vector<double> sweep_values;
  std::size_t workers = 1;
  AssertionMode assertion = AssertionMode::Strict;
  StateRecording recording = StateRecording::SyncRounds;
  std::string out_dir = "fedsmd-out";

  std::size_t audit_samples = 1000000;

  std::size_t horizon() const { return 1 + period * rounds; }
};

/// Keys accepted by set_option / the config file, in documentation order.
const std::vector<std::string>& config_keys();

/// Applies one `key = value` setting. Throws ConfigError naming the key.
void set_option(ExperimentConfig& cfg, std::string_view key,
                std::string_view value, std::size_t line = 0);

/// Flat `key = value` text; '#' starts a comment. An empty text yields the
/// defaults. The result is validated.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Throws ConfigError naming the offending field.
void validate(const ExperimentConfig& cfg);

/// Schedule exponents implied by the config (c* left at its default).
ScheduleParams schedule_exponents(const ExperimentConfig& cfg);

/// Current value of a key in canonical form; "" for unset optional keys.
/// Throws ConfigError for unknown keys.
std::string get_option(const ExperimentConfig& cfg, std::string_view key);

/// Canonical `key = value` listing that parses back to the same config.
std::string to_text(const ExperimentConfig& cfg);

std::string sweep_name(SweepKind kind);

}  // namespace fedsmd
