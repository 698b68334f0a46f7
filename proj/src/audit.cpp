// Copyright 2026 The fedsmd Authors.
// SPDX-License-Identifier: Apache-2.0

#include "fedsmd/audit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "fedsmd/experiment.hpp"

namespace fedsmd {

namespace {

constexpr double kMonteCarloSlack = 1.2;

template <typename... Args>
std::string fmt(const char* pattern, Args... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

AuditCheck bias_variance_check(const ExperimentConfig& cfg, const RunSetup& setup) {
  AuditCheck check;
  check.name = "clipped estimator bias and second moment";
  const FederationConfig& fc = setup.federation;
  const double p = fc.schedule.p;
  if (!std::isfinite(setup.sigma_p)) {
    check.passed = true;
    check.details.push_back("skipped: the noise has no finite moment of order p");
    return check;
  }
  const StochasticOracle oracle(fc.problem, fc.noise, fc.master_seed);
  const Vector x = fc.domain.default_point();
  const double grad = norm(fc.problem.gradient(0, x));
  const double level = std::max(2.0, 2.0 * grad);
  const BiasVarianceReport r = clipped_bias_variance(
      oracle, 0, x, level, p, setup.sigma_p, cfg.audit_samples, cfg.seed);
  const bool bias_ok = r.bias_norm <= kMonteCarloSlack * r.bias_bound;
  const bool var_ok = r.second_moment <= kMonteCarloSlack * r.second_moment_bound;
  check.passed = bias_ok && var_ok;
  check.details.push_back(fmt("sigma^p = %.6g, |grad f| = %.6g, level = %.6g",
                              setup.sigma_p, r.gradient_norm, r.level));
  check.details.push_back(fmt("bias %.6g vs bound %.6g", r.bias_norm, r.bias_bound) +
                          (bias_ok ? " ok" : " EXCEEDED"));
  check.details.push_back(fmt("second moment %.6g vs bound %.6g", r.second_moment,
                              r.second_moment_bound) +
                          (var_ok ? " ok" : " EXCEEDED"));
  return check;
}

AuditCheck series_check(const RunSetup& setup) {
  AuditCheck check;
  check.name = "series partial sums";
  const FederationConfig& fc = setup.federation;
  const std::size_t n1 = fc.clock.horizon();
  const std::size_t n2 = 10 * n1;
  const SeriesSums a = series_diagnostics(fc.schedule, fc.clock.period(), n1);
  const SeriesSums b = series_diagnostics(fc.schedule, fc.clock.period(), n2);
  check.passed = true;
  check.details.push_back(fmt("c* = %.6g, N1 = %.0f, N2 = %.0f", fc.schedule.scale_constant,
                              static_cast<double>(n1), static_cast<double>(n2)));
  for (std::size_t k = 0; k < a.c.size(); ++k) {
    const double change = std::abs(b.c[k] - a.c[k]) / std::abs(b.c[k]);
    if (!std::isfinite(a.c[k]) || !std::isfinite(b.c[k])) check.passed = false;
    check.details.push_back("C" + std::to_string(k) +
                            fmt(": %.10g -> %.10g (relative change %.3g)", a.c[k], b.c[k], change));
  }
  return check;
}

AuditCheck schedule_check(const RunSetup& setup) {
  AuditCheck check;
  check.name = "schedule product alpha_t lambda_t <= 1";
  const FederationConfig& fc = setup.federation;
  double worst = 0.0;
  for (std::size_t t = 1; t <= fc.clock.horizon(); ++t) {
    worst = std::max(worst, step_size(fc.schedule, t) * clip_level(fc.schedule, t));
  }
  check.passed = worst <= 1.0;
  check.details.push_back(fmt("max over t <= T: %.17g", worst));
  return check;
}

AuditCheck consensus_check(RunSetup setup) {
  AuditCheck check;
  check.name = "consensus bound";
  setup.federation.assertion_mode = AssertionMode::Record;
  const FederationRun run = run_federation(setup.federation);
  double worst_ratio = 0.0;
  std::size_t syncs_exact = 0;
  for (const IterationRecord& r : run.records) {
    if (r.consensus_bound > 0.0) {
      worst_ratio = std::max(worst_ratio, r.consensus_max / r.consensus_bound);
    }
    if (setup.federation.clock.is_sync_instant(r.t) && r.consensus_max == 0.0) ++syncs_exact;
  }
  check.passed = run.violations.empty();
  check.details.push_back(fmt("T = %.0f, sync rounds = %.0f, exact at sync = %.0f",
                              static_cast<double>(run.horizon),
                              static_cast<double>(run.sync_rounds),
                              static_cast<double>(syncs_exact)));
  check.details.push_back(fmt("max deviation / bound = %.6g", worst_ratio));
  check.details.push_back(fmt("violations = %.0f", static_cast<double>(run.violations.size())));
  for (std::size_t i = 0; i < std::min<std::size_t>(run.violations.size(), 5); ++i) {
    const BoundViolation& v = run.violations[i];
    check.details.push_back(v.what + fmt(" at agent %.0f, t = %.0f: %.6g > %.6g",
                                         static_cast<double>(v.agent),
                                         static_cast<double>(v.t), v.value, v.bound));
  }
  return check;
}

}  // namespace

bool AuditReport::passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const AuditCheck& c) { return c.passed; });
}

std::string AuditReport::to_text() const {
  std::string out;
  for (const AuditCheck& c : checks) {
    out += std::string(c.passed ? "PASS " : "FAIL ") + c.name + '\n';
    for (const std::string& d : c.details) out += "  " + d + '\n';
  }
  return out;
}

AuditReport run_audit(const ExperimentConfig& cfg) {
  const RunSetup setup = build_run(cfg, 0);
  AuditReport report;
  report.checks.push_back(bias_variance_check(cfg, setup));
  report.checks.push_back(series_check(setup));
  report.checks.push_back(schedule_check(setup));
  report.checks.push_back(consensus_check(setup));
  return report;
}

}  // namespace fedsmd
