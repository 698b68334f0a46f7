// Copyright 2026 The fedsmd Authors.
// SPDX-License-Identifier: Apache-2.0

#include "fedsmd/noise.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "fedsmd/clipping.hpp"

namespace fedsmd {

double NoiseModel::mean_offset() const {
  if (kind != NoiseKind::ShiftedPareto) return 0.0;
  return beta * x_scale / (beta - 1.0);
}

void validate(const NoiseModel& model) {
  switch (model.kind) {
    case NoiseKind::None:
      return;
    case NoiseKind::ShiftedPareto:
      if (!(model.beta > 1.0) || !std::isfinite(model.beta)) {
        throw ConfigError("pareto_beta",
                          "Pareto shape must exceed 1 for the mean to exist");
      }
      if (!(model.x_scale > 0.0) || !std::isfinite(model.x_scale)) {
        throw ConfigError("pareto_scale", "Pareto scale must be positive");
      }
      return;
    case NoiseKind::Gaussian:
      if (!(model.stddev > 0.0) || !std::isfinite(model.stddev)) {
        throw ConfigError("noise_std", "Gaussian std must be positive");
      }
      return;
  }
}

double pareto_inverse_cdf(double beta, double x_scale, double u) {
  return x_scale * std::pow(1.0 - u, -1.0 / beta);
}

Vector sample_noise(const NoiseModel& model, std::size_t dim, CounterRng& rng) {
  Vector xi(dim, 0.0);
  switch (model.kind) {
    case NoiseKind::None:
      break;
    case NoiseKind::ShiftedPareto: {
      const double offset = model.mean_offset();
      for (double& v : xi) {
        v = pareto_inverse_cdf(model.beta, model.x_scale, rng.uniform()) - offset;
      }
      break;
    }
    case NoiseKind::Gaussian:
      for (double& v : xi) v = model.stddev * rng.normal();
      break;
  }
  return xi;
}

double coordinate_abs_moment(const NoiseModel& model, double p) {
  if (!(p > 0.0)) throw InvalidInput("moment order must be positive");
  switch (model.kind) {
    case NoiseKind::None:
      return 0.0;
    case NoiseKind::Gaussian:
      // E|N(0, s^2)|^p = s^p 2^(p/2) Gamma((p+1)/2) / sqrt(pi)
      return std::pow(model.stddev, p) * std::pow(2.0, 0.5 * p) *
             boost::math::tgamma(0.5 * (p + 1.0)) / std::sqrt(std::numbers::pi);
    case NoiseKind::ShiftedPareto:
      break;
  }
  validate(model);
  const double beta = model.beta;
  const double xs = model.x_scale;
  if (p >= beta) return std::numeric_limits<double>::infinity();
  const double mean = model.mean_offset();
  const double front = beta * std::pow(xs, beta);

  // Right of the mean, x = mean / s:
  //   beta xs^beta mean^(p - beta) B(beta - p, p + 1).
  const double upper =
      front * std::pow(mean, p - beta) * boost::math::beta(beta - p, p + 1.0);

  // Left of the mean, a finite smooth integral on [xs, mean].
  boost::math::quadrature::tanh_sinh<double> integrator;
  const double lower = integrator.integrate(
      [&](double x) {
        return std::pow(mean - x, p) * front * std::pow(x, -beta - 1.0);
      },
      xs, mean);
  return upper + lower;
}

double certified_moment_bound(const NoiseModel& model, double p,
                              std::size_t dim) {
  if (!(p > 1.0 && p <= 2.0)) {
    throw InvalidInput("moment bound: p must lie in (1, 2]");
  }
  const double n = static_cast<double>(dim);
  switch (model.kind) {
    case NoiseKind::None:
      return 0.0;
    case NoiseKind::Gaussian:
      return std::pow(n * model.stddev * model.stddev, 0.5 * p);
    case NoiseKind::ShiftedPareto:
      break;
  }
  return n * coordinate_abs_moment(model, p);
}

double moment_diagnostic(const NoiseModel& model, double p, std::size_t dim,
                         std::size_t samples, std::uint64_t seed) {
  if (!(p > 1.0 && p <= 2.0)) {
    throw InvalidInput("moment_diagnostic: p must lie in (1, 2]");
  }
  if (samples == 0) throw InvalidInput("moment_diagnostic: no samples");
  CounterRng rng(seed, {StreamPurpose::Diagnostic, 0, 0});
  double total = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    total += std::pow(norm(sample_noise(model, dim, rng)), p);
  }
  return total / static_cast<double>(samples);
}

StochasticOracle::StochasticOracle(const Problem& problem, NoiseModel model,
                                   std::uint64_t seed)
    : problem_(&problem), model_(model), seed_(seed) {
  validate(model_);
}

Vector StochasticOracle::sample(std::size_t agent, ConstView x,
                                CounterRng& rng) const {
  Vector g = problem_->gradient(agent, x);
  const Vector xi = sample_noise(model_, g.size(), rng);
  // Gradient noise is defined as xi = grad f - noisy grad.
  for (std::size_t j = 0; j < g.size(); ++j) g[j] -= xi[j];
  return g;
}

Vector StochasticOracle::noisy_gradient(std::size_t agent,
                                        std::uint64_t iteration,
                                        ConstView x) const {
  CounterRng rng(seed_, {StreamPurpose::GradientNoise,
                         static_cast<std::uint32_t>(agent), iteration});
  return sample(agent, x, rng);
}

BiasVarianceReport clipped_bias_variance(const StochasticOracle& oracle,
                                         std::size_t agent, ConstView x,
                                         double level, double p,
                                         double sigma_p, std::size_t samples,
                                         std::uint64_t seed) {
  if (samples < 2) throw InvalidInput("bias/variance: need at least 2 samples");
  if (!(level > 0.0)) throw InvalidInput("bias/variance: level must be positive");
  const Vector grad = oracle.problem().gradient(agent, x);
  BiasVarianceReport report;
  report.gradient_norm = norm(grad);
  report.level = level;
  if (report.gradient_norm > 0.5 * level) {
    throw InvalidInput(
        "bias/variance bounds only hold when |grad f_i(x)| <= level/2; got "
        "|grad| = " + std::to_string(report.gradient_norm) +
        " with level = " + std::to_string(level));
  }

  // Welford accumulation of the clipped estimator, per coordinate.
  const std::size_t n = grad.size();
  Vector mean(n, 0.0), m2(n, 0.0);
  CounterRng rng(seed, {StreamPurpose::Diagnostic,
                        static_cast<std::uint32_t>(agent), 1});
  for (std::size_t k = 0; k < samples; ++k) {
    const ClipReport c = clip(oracle.sample(agent, x, rng), level);
    const double count = static_cast<double>(k + 1);
    for (std::size_t j = 0; j < n; ++j) {
      const double delta = c.clipped[j] - mean[j];
      mean[j] += delta / count;
      m2[j] += delta * (c.clipped[j] - mean[j]);
    }
  }
  double second = 0.0;
  for (double v : m2) second += v;
  report.bias_norm = distance(mean, grad);
  report.second_moment = second / static_cast<double>(samples);
  report.bias_bound = 4.0 * sigma_p * std::pow(level, 1.0 - p);
  report.second_moment_bound = 40.0 * sigma_p * std::pow(level, 2.0 - p);
  return report;
}

}  // namespace fedsmd
