// Copyright 2026 The fedsmd Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "fedsmd/config.hpp"

namespace fedsmd {

struct AuditCheck {
  std::string name;
  bool passed = false;
  std::vector<std::string> details;
};

struct AuditReport {
  std::vector<AuditCheck> checks;

  bool passed() const;
  std::string to_text() const;
};

/// Diagnostic suites for the first repetition of `cfg`:
///   clipped-estimator bias and second moment (Monte-Carlo, cfg.audit_samples
///   draws, slack 1.2), series partial sums at N = T and 10 T, the schedule
///   product alpha_t lambda_t <= 1 over t <= T, and a consensus audit run in
///   Record mode.
AuditReport run_audit(const ExperimentConfig& cfg);

}  // namespace fedsmd
