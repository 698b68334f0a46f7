// Copyright 2026 The fedsmd Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>

#include "fedsmd/linalg.hpp"

namespace fedsmd {

enum class DomainKind { FullSpace, ProbabilitySimplex, Box, EuclideanBall };

/// Default membership tolerance; also the simplex sum tolerance.
inline constexpr double kMembershipTolerance = 1e-9;

/// A closed convex decision set.
class Domain {
 public:
  static Domain full_space(std::size_t dimension);
  static Domain simplex(std::size_t dimension);
  static Domain box(Vector lower, Vector upper);
  static Domain ball(Vector center, double radius);

  DomainKind kind() const noexcept { return kind_; }
  std::size_t dimension() const noexcept { return dimension_; }
  bool bounded() const noexcept { return kind_ != DomainKind::FullSpace; }

  // Box bounds; empty for other kinds.
  const Vector& lower() const noexcept { return lower_; }
  const Vector& upper() const noexcept { return upper_; }
  // Ball data; empty/zero for other kinds.
  const Vector& center() const noexcept { return center_; }
  double radius() const noexcept { return radius_; }

  /// Barycenter of the simplex, the ball's center, zero for full space and
  /// for boxes containing zero, the box midpoint otherwise.
  Vector default_point() const;

  std::string name() const;

 private:
  Domain(DomainKind kind, std::size_t dimension)
      : kind_(kind), dimension_(dimension) {}

  DomainKind kind_;
  std::size_t dimension_;
  Vector lower_, upper_, center_;
  double radius_ = 0.0;
};

/// Membership within `tol`. Throws InvalidInput on dimension mismatch.
bool contains(const Domain& domain, ConstView x,
              double tol = kMembershipTolerance);

/// Euclidean projection onto the domain.
Vector euclidean_project(const Domain& domain, ConstView z);

/// Euclidean projection onto the probability simplex, sort-and-threshold
/// method, O(n log n).
Vector project_onto_simplex(ConstView z);

}  // namespace fedsmd
