// Copyright 2026 The fedsmd Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>

#include "fedsmd/domains.hpp"
#include "fedsmd/linalg.hpp"

namespace fedsmd {

enum class MirrorKind { Euclidean, NegativeEntropy };

/// Positive components below this are raised to it before taking logs.
inline constexpr double kEntropyFloor = 1e-300;

/// A 1-strongly convex mirror map on R^n.
///
/// Euclidean:        Phi(x) = 0.5 * |x|^2
/// NegativeEntropy:  Phi(x) = sum_i x_i ln x_i  (0 ln 0 = 0), defined on the
///                   nonnegative orthant; strongly convex with modulus 1 on
///                   the probability simplex.
///
/// A map with modulus s reduces to this case by rescaling the step size by s.
class MirrorGeometry {
 public:
  MirrorGeometry(MirrorKind kind, std::size_t dimension);

  static MirrorGeometry euclidean(std::size_t n) {
    return {MirrorKind::Euclidean, n};
  }
  static MirrorGeometry negative_entropy(std::size_t n) {
    return {MirrorKind::NegativeEntropy, n};
  }

  MirrorKind kind() const noexcept { return kind_; }
  std::size_t dimension() const noexcept { return dimension_; }
  std::string name() const;

 private:
  MirrorKind kind_;
  std::size_t dimension_;
};

double potential(const MirrorGeometry& geom, ConstView x);

/// Gradient of the mirror map. NegativeEntropy needs x > 0.
Vector potential_gradient(const MirrorGeometry& geom, ConstView x);

/// D(x || y) = Phi(x) - Phi(y) - <grad Phi(y), x - y>.
/// NegativeEntropy rejects y with a nonpositive component.
double bregman(const MirrorGeometry& geom, ConstView x, ConstView y);

/// <grad Phi(x) - grad Phi(y), y - z> - [D(z||x) - D(z||y) - D(y||x)].
/// Zero in exact arithmetic.
double three_point_residual(const MirrorGeometry& geom, ConstView x,
                            ConstView y, ConstView z);

/// Whether the (geometry, domain) pair has an exact proximal-step solver.
bool supports_mirror_step(const MirrorGeometry& geom, const Domain& domain);

/// Exact solver for  argmin_{z in domain} <g, z> + (1/alpha) D(z || x).
/// The pairing is checked once, at construction.
class MirrorStepper {
 public:
  MirrorStepper(MirrorGeometry geom, Domain domain);

  Vector step(ConstView x, ConstView g, double alpha) const;

  const MirrorGeometry& geometry() const noexcept { return geom_; }
  const Domain& domain() const noexcept { return domain_; }

 private:
  MirrorGeometry geom_;
  Domain domain_;
};

/// One-shot form of MirrorStepper::step.
Vector mirror_step(const MirrorGeometry& geom, const Domain& domain,
                   ConstView x, ConstView g, double alpha);

}  // namespace fedsmd
