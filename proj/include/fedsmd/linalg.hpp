// Copyright 2026 The fedsmd Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fedsmd/error.hpp"

namespace fedsmd {

using Vector = std::vector<double>;
using ConstView = std::span<const double>;

inline void require_same_size(ConstView a, ConstView b, const char* what) {
  if (a.size() != b.size()) {
    throw InvalidInput(std::string(what) + ": dimension mismatch (" +
                       std::to_string(a.size()) + " vs " +
                       std::to_string(b.size()) + ")");
  }
}

inline double dot(ConstView a, ConstView b) {
  require_same_size(a, b, "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double squared_norm(ConstView a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return s;
}

inline double norm(ConstView a) { return std::sqrt(squared_norm(a)); }

inline double distance(ConstView a, ConstView b) {
  require_same_size(a, b, "distance");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

inline bool all_finite(ConstView a) {
  for (double v : a) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

/// a - b
inline Vector subtract(ConstView a, ConstView b) {
  require_same_size(a, b, "subtract");
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

/// x + scale * d
inline Vector add_scaled(ConstView x, double scale, ConstView d) {
  require_same_size(x, d, "add_scaled");
  Vector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + scale * d[i];
  return out;
}

}  // namespace fedsmd
