// Copyright 2026 The fedsmd Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "fedsmd/linalg.hpp"

namespace fedsmd {

struct ClipReport {
  Vector clipped;
  bool was_clipped = false;
  double input_norm = 0.0;
  double level = 0.0;
};

/// Two-norm used by the clipping contract: the plain sum of squares, or a
/// rescaled sum when that would overflow or underflow.
double clip_norm(ConstView g);

/// min{1, level / |g|} * g, with clip(0, level) = 0.
///
/// clip_norm of the output never exceeds `level`, including after rounding.
/// Throws InvalidInput for non-finite g or a level that is not > 0.
ClipReport clip(ConstView g, double level);

}  // namespace fedsmd
