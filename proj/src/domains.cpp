// Copyright 2026 The fedsmd Authors.
// SPDX-License-Identifier: Apache-2.0

#include "fedsmd/domains.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>

namespace fedsmd {

namespace {

void require_dimension(const Domain& d, ConstView x, const char* op) {
  if (x.size() != d.dimension()) {
    throw InvalidInput(std::string(op) + ": expected a vector of dimension " +
                       std::to_string(d.dimension()) + ", got " +
                       std::to_string(x.size()));
  }
}

void require_positive_dimension(std::size_t n) {
  if (n == 0) throw InvalidInput("domain dimension must be positive");
}

}  // namespace

Domain Domain::full_space(std::size_t dimension) {
  require_positive_dimension(dimension);
  return Domain(DomainKind::FullSpace, dimension);
}

Domain Domain::simplex(std::size_t dimension) {
  require_positive_dimension(dimension);
  return Domain(DomainKind::ProbabilitySimplex, dimension);
}

Domain Domain::box(Vector lower, Vector upper) {
  require_positive_dimension(lower.size());
  require_same_size(lower, upper, "box bounds");
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (!(lower[i] <= upper[i]) || !std::isfinite(lower[i]) ||
        !std::isfinite(upper[i])) {
      throw InvalidInput("box bounds must be finite with lower <= upper");
    }
  }
  Domain d(DomainKind::Box, lower.size());
  d.lower_ = std::move(lower);
  d.upper_ = std::move(upper);
  return d;
}

Domain Domain::ball(Vector center, double radius) {
  require_positive_dimension(center.size());
  if (!(radius > 0.0) || !std::isfinite(radius) || !all_finite(center)) {
    throw InvalidInput("ball needs a finite center and a positive radius");
  }
  Domain d(DomainKind::EuclideanBall, center.size());
  d.center_ = std::move(center);
  d.radius_ = radius;
  return d;
}

Vector Domain::default_point() const {
  switch (kind_) {
    case DomainKind::ProbabilitySimplex:
      return Vector(dimension_, 1.0 / static_cast<double>(dimension_));
    case DomainKind::EuclideanBall:
      return center_;
    case DomainKind::Box: {
      Vector zero(dimension_, 0.0);
      if (contains(*this, zero, 0.0)) return zero;
      Vector mid(dimension_);
      for (std::size_t i = 0; i < dimension_; ++i) {
        mid[i] = 0.5 * (lower_[i] + upper_[i]);
      }
      return mid;
    }
    case DomainKind::FullSpace:
      break;
  }
  return Vector(dimension_, 0.0);
}

std::string Domain::name() const {
  std::ostringstream os;
  switch (kind_) {
    case DomainKind::FullSpace:
      os << "R^" << dimension_;
      break;
    case DomainKind::ProbabilitySimplex:
      os << "simplex(" << dimension_ << ")";
      break;
    case DomainKind::Box:
      os << "box(" << dimension_ << ")";
      break;
    case DomainKind::EuclideanBall:
      os << "ball(" << dimension_ << ", r=" << radius_ << ")";
      break;
  }
  return os.str();
}

bool contains(const Domain& domain, ConstView x, double tol) {
  require_dimension(domain, x, "contains");
  if (!all_finite(x)) return false;
  switch (domain.kind()) {
    case DomainKind::FullSpace:
      return true;
    case DomainKind::ProbabilitySimplex: {
      double sum = 0.0;
      for (double v : x) {
        if (v < -tol) return false;
        sum += v;
      }
      return std::abs(sum - 1.0) <= tol;
    }
    case DomainKind::Box:
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < domain.lower()[i] - tol || x[i] > domain.upper()[i] + tol) {
          return false;
        }
      }
      return true;
    case DomainKind::EuclideanBall:
      return distance(x, domain.center()) <= domain.radius() + tol;
  }
  return false;
}

Vector project_onto_simplex(ConstView z) {
  const std::size_t n = z.size();
  if (n == 0) throw InvalidInput("simplex projection of an empty vector");
  if (!all_finite(z)) throw InvalidInput("simplex projection: non-finite input");

  double sum = 0.0;
  bool nonnegative = true;
  for (double v : z) {
    sum += v;
    nonnegative = nonnegative && v >= 0.0;
  }
  if (nonnegative && sum == 1.0) return Vector(z.begin(), z.end());

  Vector sorted(z.begin(), z.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double running = 0.0;
  double threshold = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    running += sorted[k];
    const double candidate = (running - 1.0) / static_cast<double>(k + 1);
    if (sorted[k] - candidate > 0.0) threshold = candidate;
  }
  Vector out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = std::max(z[i] - threshold, 0.0);
  return out;
}

Vector euclidean_project(const Domain& domain, ConstView z) {
  require_dimension(domain, z, "euclidean_project");
  switch (domain.kind()) {
    case DomainKind::FullSpace:
      return Vector(z.begin(), z.end());
    case DomainKind::ProbabilitySimplex:
      return project_onto_simplex(z);
    case DomainKind::Box: {
      Vector out(z.size());
      for (std::size_t i = 0; i < z.size(); ++i) {
        out[i] = std::clamp(z[i], domain.lower()[i], domain.upper()[i]);
      }
      return out;
    }
    case DomainKind::EuclideanBall: {
      const double dist = distance(z, domain.center());
      // The rescaled output can land an ulp outside; accept that band so the
      // projection is idempotent.
      constexpr double kBand = 4.0 * std::numeric_limits<double>::epsilon();
      if (dist <= domain.radius() * (1.0 + kBand)) return Vector(z.begin(), z.end());
      const double scale = domain.radius() / dist;
      Vector out(z.size());
      for (std::size_t i = 0; i < z.size(); ++i) {
        out[i] = domain.center()[i] + scale * (z[i] - domain.center()[i]);
      }
      return out;
    }
  }
  return Vector(z.begin(), z.end());
}

}  // namespace fedsmd
