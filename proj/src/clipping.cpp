// Copyright 2026 The fedsmd Authors.
// SPDX-License-Identifier: Apache-2.0

#include "fedsmd/clipping.hpp"

#include <algorithm>
#include <cmath>

namespace fedsmd {

double clip_norm(ConstView g) {
  const double plain = norm(g);
  if (std::isfinite(plain) && plain > 1e-150) return plain;
  double top = 0.0;
  for (double v : g) top = std::max(top, std::abs(v));
  if (top == 0.0) return 0.0;
  double s = 0.0;
  for (double v : g) {
    const double r = v / top;
    s += r * r;
  }
  return top * std::sqrt(s);
}

ClipReport clip(ConstView g, double level) {
  if (!(level > 0.0)) throw InvalidInput("clip: level must be positive");
  if (!all_finite(g)) throw InvalidInput("clip: non-finite gradient");

  ClipReport report;
  report.level = level;
  report.input_norm = clip_norm(g);
  report.clipped.assign(g.begin(), g.end());
  if (report.input_norm <= level) return report;

  report.was_clipped = true;
  // Scale the unit direction rather than g itself: level / |g| alone can
  // underflow when the two are far apart.
  double target = level;
  for (;;) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      report.clipped[i] = (g[i] / report.input_norm) * target;
    }
    if (clip_norm(report.clipped) <= level) break;
    target = std::nextafter(target, 0.0);
  }
  return report;
}

}  // namespace fedsmd
