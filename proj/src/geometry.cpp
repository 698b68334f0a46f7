// Copyright 2026 The fedsmd Authors.
// SPDX-License-Identifier: Apache-2.0

#include "fedsmd/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace fedsmd {

namespace {

void require_dimension(const MirrorGeometry& g, ConstView x, const char* op) {
  if (x.size() != g.dimension()) {
    throw InvalidInput(std::string(op) + ": expected dimension " +
                       std::to_string(g.dimension()) + ", got " +
                       std::to_string(x.size()));
  }
}

void require_nonnegative(ConstView x, const char* op) {
  for (double v : x) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw InvalidInput(std::string(op) +
                         ": negative entropy needs nonnegative finite input");
    }
  }
}

void require_positive(ConstView y, const char* op) {
  for (double v : y) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw InvalidInput(std::string(op) +
                         ": negative entropy needs strictly positive input");
    }
  }
}

inline double safe_log(double v) { return std::log(std::max(v, kEntropyFloor)); }

}  // namespace

MirrorGeometry::MirrorGeometry(MirrorKind kind, std::size_t dimension)
    : kind_(kind), dimension_(dimension) {
  if (dimension == 0) throw InvalidInput("mirror map dimension must be positive");
}

std::string MirrorGeometry::name() const {
  return kind_ == MirrorKind::Euclidean ? "euclidean" : "entropic";
}

double potential(const MirrorGeometry& geom, ConstView x) {
  require_dimension(geom, x, "potential");
  if (geom.kind() == MirrorKind::Euclidean) return 0.5 * squared_norm(x);
  require_nonnegative(x, "potential");
  double s = 0.0;
  for (double v : x) {
    if (v > 0.0) s += v * safe_log(v);
  }
  return s;
}

Vector potential_gradient(const MirrorGeometry& geom, ConstView x) {
  require_dimension(geom, x, "potential_gradient");
  if (geom.kind() == MirrorKind::Euclidean) return Vector(x.begin(), x.end());
  require_positive(x, "potential_gradient");
  Vector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = safe_log(x[i]) + 1.0;
  return out;
}

double bregman(const MirrorGeometry& geom, ConstView x, ConstView y) {
  require_dimension(geom, x, "bregman");
  require_dimension(geom, y, "bregman");
  if (geom.kind() == MirrorKind::Euclidean) {
    return 0.5 * squared_norm(subtract(x, y));
  }
  require_nonnegative(x, "bregman");
  require_nonnegative(y, "bregman");
  // Expanded form of Phi(x) - Phi(y) - <ln y + 1, x - y>.
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double ly = safe_log(y[i]);
    if (x[i] > 0.0) s += x[i] * (safe_log(x[i]) - ly);
    s += y[i] - x[i];
  }
  return s;
}

double three_point_residual(const MirrorGeometry& geom, ConstView x,
                            ConstView y, ConstView z) {
  const Vector gx = potential_gradient(geom, x);
  const Vector gy = potential_gradient(geom, y);
  require_dimension(geom, z, "three_point_residual");
  double lhs = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) lhs += (gx[i] - gy[i]) * (y[i] - z[i]);
  const double rhs = bregman(geom, z, x) - bregman(geom, z, y) - bregman(geom, y, x);
  return lhs - rhs;
}

bool supports_mirror_step(const MirrorGeometry& geom, const Domain& domain) {
  if (geom.dimension() != domain.dimension()) return false;
  if (geom.kind() == MirrorKind::Euclidean) return true;
  return domain.kind() == DomainKind::ProbabilitySimplex;
}

MirrorStepper::MirrorStepper(MirrorGeometry geom, Domain domain)
    : geom_(geom), domain_(std::move(domain)) {
  if (geom_.dimension() != domain_.dimension()) {
    throw ConfigError("dimension",
                      "mirror map and domain dimensions differ");
  }
  if (!supports_mirror_step(geom_, domain_)) {
    throw ConfigError("mirror", "no exact mirror step for " + geom_.name() +
                                    " geometry on " + domain_.name() +
                                    "; the entropic map requires the simplex");
  }
}

Vector MirrorStepper::step(ConstView x, ConstView g, double alpha) const {
  require_dimension(geom_, x, "mirror_step");
  require_dimension(geom_, g, "mirror_step");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw InvalidInput("mirror_step: step size must be positive and finite");
  }
  if (!all_finite(g)) throw InvalidInput("mirror_step: non-finite gradient");

  if (geom_.kind() == MirrorKind::Euclidean) {
    return euclidean_project(domain_, add_scaled(x, -alpha, g));
  }

  // Exponentiated update on the simplex, normalised in log space.
  require_nonnegative(x, "mirror_step");
  const std::size_t n = x.size();
  Vector logw(n);
  double top = -INFINITY;
  for (std::size_t j = 0; j < n; ++j) {
    logw[j] = safe_log(x[j]) - alpha * g[j];
    top = std::max(top, logw[j]);
  }
  Vector y(n);
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    y[j] = x[j] > 0.0 ? std::exp(logw[j] - top) : 0.0;
    total += y[j];
  }
  if (!(total > 0.0)) throw InvalidInput("mirror_step: point has no support");
  for (double& v : y) v /= total;
  return y;
}

Vector mirror_step(const MirrorGeometry& geom, const Domain& domain,
                   ConstView x, ConstView g, double alpha) {
  return MirrorStepper(geom, domain).step(x, g, alpha);
}

}  // namespace fedsmd
