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
#include "fedsmd/linalg.hpp"

namespace fedsmd {

enum class ProblemKind { LinearRegression, Quadratic };

/// A federated objective f = sum_i f_i, one local objective per agent.
///
/// LinearRegression: f_i(x) = 0.5 * (<a_i, x> - b_i)^2, agent i holds one
///                   (a_i, b_i) pair.
/// Quadratic:        f_i(x) = 0.5 * scale * |x - c|^2 for every agent.
class Problem {
 public:
  /// An empty problem with no agents; rejected by every consumer.
  Problem() = default;

  static Problem linear_regression(std::vector<Vector> features,
                                   Vector targets);
  static Problem quadratic(std::size_t agents, Vector center, double scale);

  ProblemKind kind() const noexcept { return kind_; }
  std::size_t agents() const noexcept { return agents_; }
  std::size_t dimension() const noexcept { return dimension_; }

  double agent_objective(std::size_t agent, ConstView x) const;
  double objective(ConstView x) const;
  Vector gradient(std::size_t agent, ConstView x) const;

  /// Lipschitz constant of every local gradient: max_i |a_i|^2 for
  /// regression, `scale` for the quadratic.
  double smoothness() const;

  /// sup over the domain of max_i |grad f_i|, exact for the shipped
  /// domains; nullopt when the domain is unbounded.
  std::optional<double> gradient_bound(const Domain& domain) const;

  const std::vector<Vector>& features() const noexcept { return features_; }
  const Vector& targets() const noexcept { return targets_; }
  const Vector& center() const noexcept { return center_; }
  double scale() const noexcept { return scale_; }

 private:
  void require_agent(std::size_t agent, ConstView x) const;

  ProblemKind kind_ = ProblemKind::LinearRegression;
  std::size_t agents_ = 0;
  std::size_t dimension_ = 0;
  std::vector<Vector> features_;
  Vector targets_;
  Vector center_;
  double scale_ = 1.0;
};

/// Ground truth used by the regression generator: first floor(n/2)
/// coordinates are 1, the rest 0.
Vector regression_truth(std::size_t dimension);

/// m agents, features uniform on [-1, 1]^n, b_i = <a_i, c> + N(0, 1).
/// Deterministic in `seed`.
Problem generate_regression(std::size_t agents, std::size_t dimension,
                            std::uint64_t seed);

struct Optimum {
  Vector point;
  double value = 0.0;
};

/// Minimiser of f over the domain. Throws InvalidInput when the minimiser
/// is not well defined (rank-deficient unconstrained least squares).
Optimum solve_optimum(const Problem& problem, const Domain& domain);

/// Plain-text instance format: one row per agent, n feature values then
/// the target, whitespace separated. Regression instances only.
std::string serialize_instance(const Problem& problem);
Problem parse_instance(std::string_view text);
void write_instance(const Problem& problem, const std::filesystem::path& path);
Problem read_instance(const std::filesystem::path& path);

}  // namespace fedsmd
