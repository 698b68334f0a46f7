// Copyright 2026 The fedsmd Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>

#include "fedsmd/linalg.hpp"
#include "fedsmd/problems.hpp"
#include "fedsmd/rng.hpp"

namespace fedsmd {

enum class NoiseKind { None, ShiftedPareto, Gaussian };

/// Zero-mean per-coordinate i.i.d. gradient noise.
///
/// ShiftedPareto draws eta ~ Pareto(beta, x_scale) per coordinate and
/// returns eta - E[eta]; with beta = 2 the variance is infinite while every
/// moment of order p < 2 is finite.
struct NoiseModel {
  NoiseKind kind = NoiseKind::None;
  double beta = 2.0;
  double x_scale = 0.5;
  double stddev = 1.0;

  static NoiseModel none() { return {}; }
  static NoiseModel shifted_pareto(double beta, double x_scale) {
    return {NoiseKind::ShiftedPareto, beta, x_scale, 1.0};
  }
  static NoiseModel gaussian(double stddev) {
    return {NoiseKind::Gaussian, 2.0, 0.5, stddev};
  }

  /// E[eta] = beta * x_scale / (beta - 1) for the Pareto model, else 0.
  double mean_offset() const;
};

/// Throws ConfigError when parameters are invalid (beta <= 1 has no mean).
void validate(const NoiseModel& model);

/// Pareto inverse CDF: x_scale * (1 - u)^(-1/beta), u in [0, 1).
double pareto_inverse_cdf(double beta, double x_scale, double u);

/// One noise vector; consumes draws from `rng` only.
Vector sample_noise(const NoiseModel& model, std::size_t dim, CounterRng& rng);

/// E|xi_1|^p for a single coordinate, by closed form and quadrature.
/// +inf when the moment does not exist.
double coordinate_abs_moment(const NoiseModel& model, double p);

/// Certified sigma^p with E|xi|^p <= sigma^p for the dim-dimensional noise
/// vector. Uses |v|_2 <= |v|_p for p <= 2, so sigma^p = dim * E|xi_1|^p
/// (Pareto); Jensen's (dim * std^2)^(p/2) for the Gaussian.
double certified_moment_bound(const NoiseModel& model, double p,
                              std::size_t dim);

/// (1/N) sum_k |xi_k|^p over N draws from the Diagnostic stream of `seed`.
/// Converges for ShiftedPareto(beta = 2) when p < 2; diverges for p = 2.
double moment_diagnostic(const NoiseModel& model, double p, std::size_t dim,
                         std::size_t samples, std::uint64_t seed);

/// Unbiased stochastic gradients: grad f_i(x) - xi, where xi is drawn from
/// the stream (seed, agent, iteration).
class StochasticOracle {
 public:
  StochasticOracle(const Problem& problem, NoiseModel model,
                   std::uint64_t seed);

  /// Deterministic in (seed, agent, iteration, x).
  Vector noisy_gradient(std::size_t agent, std::uint64_t iteration,
                        ConstView x) const;

  /// Same distribution, drawing from a caller-supplied stream.
  Vector sample(std::size_t agent, ConstView x, CounterRng& rng) const;

  const Problem& problem() const noexcept { return *problem_; }
  const NoiseModel& model() const noexcept { return model_; }

 private:
  const Problem* problem_;
  NoiseModel model_;
  std::uint64_t seed_;
};

struct BiasVarianceReport {
  double gradient_norm = 0.0;
  double level = 0.0;
  double bias_norm = 0.0;         // |E[clip(g)] - grad f|
  double second_moment = 0.0;     // E|clip(g) - E[clip(g)]|^2
  double bias_bound = 0.0;        // 4 sigma^p level^(1-p)
  double second_moment_bound = 0.0;  // 40 sigma^p level^(2-p)
};

/// Monte-Carlo estimate of the clipped estimator's bias and centred second
/// moment at x, next to their theoretical bounds. Requires
/// |grad f_i(x)| <= level / 2; throws InvalidInput otherwise.
BiasVarianceReport clipped_bias_variance(const StochasticOracle& oracle,
                                         std::size_t agent, ConstView x,
                                         double level, double p,
                                         double sigma_p, std::size_t samples,
                                         std::uint64_t seed);

}  // namespace fedsmd
