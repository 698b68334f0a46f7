// Copyright 2026 The fedsmd Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>

#include "fedsmd/linalg.hpp"
#include "fedsmd/rng.hpp"

namespace fedsmd::testing {

inline CounterRng test_rng(std::uint64_t seed, std::uint64_t which = 0) {
  return CounterRng(seed, {StreamPurpose::Test, 0, which});
}

inline Vector uniform_vector(CounterRng& rng, std::size_t n, double lo, double hi) {
  Vector v(n);
  for (double& x : v) x = lo + (hi - lo) * rng.uniform();
  return v;
}

// Uniform on the simplex (normalized exponentials), strictly positive.
inline Vector simplex_point(CounterRng& rng, std::size_t n) {
  Vector v(n);
  double s = 0.0;
  for (double& x : v) {
    x = -std::log(1.0 - rng.uniform()) + 1e-12;
    s += x;
  }
  for (double& x : v) x /= s;
  return v;
}

}  // namespace fedsmd::testing
