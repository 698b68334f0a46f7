// Copyright 2026 The fedsmd Authors.
// SPDX-License-Identifier: Apache-2.0

#include "fedsmd/fedsmd.h"

#include <cmath>
#include <exception>
#include <algorithm>
#include <limits>
#include <memory>
#include <new>
#include <string>
#include <utility>

#include "fedsmd/audit.hpp"
#include "fedsmd/clipping.hpp"
#include "fedsmd/config.hpp"
#include "fedsmd/csv.hpp"
#include "fedsmd/error.hpp"
#include "fedsmd/experiment.hpp"
#include "fedsmd/geometry.hpp"
#include "fedsmd/schedules.hpp"

struct fedsmd_config {
  fedsmd::ExperimentConfig cfg;
};

struct fedsmd_run {
  fedsmd::FederationRun run;
  std::size_t clients = 0;
  std::size_t dimension = 0;
  double global_error = 0.0;
  double optimum_value = 0.0;
};

struct fedsmd_experiment {
  fedsmd::ExperimentResult result;
};

struct fedsmd_text {
  std::string text;
};

namespace {

struct LastError {
  std::string message;
  std::string field;
  std::size_t line = 0;
};

thread_local LastError last_error;

void clear_error() {
  last_error.message.clear();
  last_error.field.clear();
  last_error.line = 0;
}

fedsmd_status fail(fedsmd_status status, std::string message) {
  last_error.message = std::move(message);
  last_error.field.clear();
  last_error.line = 0;
  return status;
}

template <typename Fn>
fedsmd_status guarded(Fn&& fn) {
  clear_error();
  try {
    fn();
    return FEDSMD_OK;
  } catch (const fedsmd::ConfigError& e) {
    fail(FEDSMD_ERR_CONFIG, e.what());
    last_error.field = e.field();
    last_error.line = e.line();
    return FEDSMD_ERR_CONFIG;
  } catch (const fedsmd::InvariantViolation& e) {
    return fail(FEDSMD_ERR_ASSERTION, e.what());
  } catch (const fedsmd::InvalidInput& e) {
    return fail(FEDSMD_ERR_INVALID_ARGUMENT, e.what());
  } catch (const fedsmd::IoError& e) {
    return fail(FEDSMD_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(FEDSMD_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(FEDSMD_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(FEDSMD_ERR_INTERNAL, "unknown error");
  }
}

#define FEDSMD_REQUIRE(cond, what)                                 \
  do {                                                             \
    if (!(cond)) return fail(FEDSMD_ERR_INVALID_ARGUMENT, (what)); \
  } while (0)

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

extern "C" {

const char* fedsmd_version(void) { return "0.1.0"; }
const char* fedsmd_last_error(void) { return last_error.message.c_str(); }
const char* fedsmd_last_error_field(void) { return last_error.field.c_str(); }
size_t fedsmd_last_error_line(void) { return last_error.line; }

const char* fedsmd_text_data(const fedsmd_text* text) {
  return text ? text->text.c_str() : "";
}
size_t fedsmd_text_size(const fedsmd_text* text) { return text ? text->text.size() : 0; }
void fedsmd_text_free(fedsmd_text* text) { delete text; }

fedsmd_status fedsmd_config_new(fedsmd_config** out) {
  FEDSMD_REQUIRE(out, "config_new: null output");
  return guarded([&] { *out = new fedsmd_config{}; });
}

fedsmd_status fedsmd_config_load(const char* path, fedsmd_config** out) {
  FEDSMD_REQUIRE(path && out, "config_load: null argument");
  return guarded([&] { *out = new fedsmd_config{fedsmd::load_config(path)}; });
}

fedsmd_status fedsmd_config_parse(const char* text, fedsmd_config** out) {
  FEDSMD_REQUIRE(text && out, "config_parse: null argument");
  return guarded([&] { *out = new fedsmd_config{fedsmd::parse_config(text)}; });
}

fedsmd_status fedsmd_config_set(fedsmd_config* cfg, const char* key, const char* value) {
  FEDSMD_REQUIRE(cfg && key && value, "config_set: null argument");
  return guarded([&] { fedsmd::set_option(cfg->cfg, key, value); });
}

fedsmd_status fedsmd_config_get(const fedsmd_config* cfg, const char* key,
                                fedsmd_text** value) {
  FEDSMD_REQUIRE(cfg && key && value, "config_get: null argument");
  return guarded([&] { *value = new fedsmd_text{fedsmd::get_option(cfg->cfg, key)}; });
}

fedsmd_status fedsmd_config_validate(const fedsmd_config* cfg) {
  FEDSMD_REQUIRE(cfg, "config_validate: null config");
  return guarded([&] { fedsmd::validate(cfg->cfg); });
}

fedsmd_status fedsmd_config_to_text(const fedsmd_config* cfg, fedsmd_text** out) {
  FEDSMD_REQUIRE(cfg && out, "config_to_text: null argument");
  return guarded([&] { *out = new fedsmd_text{fedsmd::to_text(cfg->cfg)}; });
}

void fedsmd_config_free(fedsmd_config* cfg) { delete cfg; }

fedsmd_status fedsmd_run_single(const fedsmd_config* cfg, size_t repetition,
                                fedsmd_run** out) {
  FEDSMD_REQUIRE(cfg && out, "run_single: null argument");
  return guarded([&] {
    const fedsmd::RunSetup setup = fedsmd::build_run(cfg->cfg, repetition);
    auto handle = std::make_unique<fedsmd_run>();
    handle->run = fedsmd::run_federation(setup.federation);
    handle->clients = setup.federation.clients;
    handle->dimension = setup.federation.problem.dimension();
    handle->optimum_value = setup.optimum.value;
    handle->global_error =
        fedsmd::global_error(handle->run, setup.federation.problem, setup.optimum.value);
    *out = handle.release();
  });
}

size_t fedsmd_run_horizon(const fedsmd_run* run) { return run ? run->run.horizon : 0; }
size_t fedsmd_run_sync_rounds(const fedsmd_run* run) { return run ? run->run.sync_rounds : 0; }
size_t fedsmd_run_clients(const fedsmd_run* run) { return run ? run->clients : 0; }
size_t fedsmd_run_dimension(const fedsmd_run* run) { return run ? run->dimension : 0; }
size_t fedsmd_run_violation_count(const fedsmd_run* run) {
  return run ? run->run.violations.size() : 0;
}
double fedsmd_run_global_error(const fedsmd_run* run) { return run ? run->global_error : kNaN; }
double fedsmd_run_optimum_value(const fedsmd_run* run) { return run ? run->optimum_value : kNaN; }

fedsmd_status fedsmd_run_record(const fedsmd_run* run, size_t t, fedsmd_record* out) {
  FEDSMD_REQUIRE(run && out, "run_record: null argument");
  FEDSMD_REQUIRE(t >= 1 && t <= run->run.records.size(), "run_record: t out of range");
  clear_error();
  const fedsmd::IterationRecord& r = run->run.records[t - 1];
  *out = {r.t, r.f_gap_average, r.ergodic_gap, r.consensus_max, r.consensus_bound,
          r.clip_fraction, r.alpha, r.lambda};
  return FEDSMD_OK;
}

fedsmd_status fedsmd_run_average(const fedsmd_run* run, size_t t, double* out,
                                 size_t dimension) {
  FEDSMD_REQUIRE(run && out, "run_average: null argument");
  FEDSMD_REQUIRE(t >= 1 && t <= run->run.averages.size(), "run_average: t out of range");
  FEDSMD_REQUIRE(dimension == run->dimension, "run_average: dimension mismatch");
  clear_error();
  const fedsmd::Vector& v = run->run.averages[t - 1];
  std::copy(v.begin(), v.end(), out);
  return FEDSMD_OK;
}

fedsmd_status fedsmd_run_ergodic(const fedsmd_run* run, size_t client, double* out,
                                 size_t dimension) {
  FEDSMD_REQUIRE(run && out, "run_ergodic: null argument");
  FEDSMD_REQUIRE(client < run->run.ergodic.size(), "run_ergodic: client out of range");
  FEDSMD_REQUIRE(dimension == run->dimension, "run_ergodic: dimension mismatch");
  clear_error();
  const fedsmd::Vector& v = run->run.ergodic[client];
  std::copy(v.begin(), v.end(), out);
  return FEDSMD_OK;
}

void fedsmd_run_free(fedsmd_run* run) { delete run; }

fedsmd_status fedsmd_experiment_run(const fedsmd_config* cfg, int sweep, int write_files,
                                    fedsmd_experiment** out) {
  FEDSMD_REQUIRE(cfg && out, "experiment_run: null argument");
  return guarded([&] {
    fedsmd::ExperimentOptions options;
    options.sweep = sweep != 0;
    options.write_files = write_files != 0;
    *out = new fedsmd_experiment{fedsmd::run_experiment(cfg->cfg, options)};
  });
}

size_t fedsmd_experiment_row_count(const fedsmd_experiment* exp) {
  return exp ? exp->result.rows.size() : 0;
}

fedsmd_status fedsmd_experiment_row(const fedsmd_experiment* exp, size_t index,
                                    fedsmd_summary_row* out) {
  FEDSMD_REQUIRE(exp && out, "experiment_row: null argument");
  FEDSMD_REQUIRE(index < exp->result.rows.size(), "experiment_row: index out of range");
  clear_error();
  const fedsmd::SummaryRow& r = exp->result.rows[index];
  *out = {r.sweep_param.c_str(), r.value, r.repetition, r.seed, r.horizon,
          r.global_error, r.final_consensus_max, r.mean_clip_fraction, r.fitted_slope};
  return FEDSMD_OK;
}

size_t fedsmd_experiment_point_count(const fedsmd_experiment* exp) {
  return exp ? exp->result.points.size() : 0;
}

fedsmd_status fedsmd_experiment_point(const fedsmd_experiment* exp, size_t index,
                                      double* value, double* mean_global_error,
                                      size_t* curve_length) {
  FEDSMD_REQUIRE(exp, "experiment_point: null experiment");
  FEDSMD_REQUIRE(index < exp->result.points.size(), "experiment_point: index out of range");
  clear_error();
  const fedsmd::SweepPoint& p = exp->result.points[index];
  if (value) *value = p.value;
  if (mean_global_error) *mean_global_error = p.mean_global_error;
  if (curve_length) *curve_length = p.curve.size();
  return FEDSMD_OK;
}

fedsmd_status fedsmd_experiment_point_stddev(const fedsmd_experiment* exp, size_t index,
                                             double* stddev) {
  FEDSMD_REQUIRE(exp && stddev, "experiment_point_stddev: null argument");
  FEDSMD_REQUIRE(index < exp->result.points.size(),
                 "experiment_point_stddev: index out of range");
  clear_error();
  *stddev = exp->result.points[index].stddev_global_error;
  return FEDSMD_OK;
}

fedsmd_status fedsmd_experiment_curve_point(const fedsmd_experiment* exp, size_t point,
                                            size_t k, fedsmd_curve_point* out) {
  FEDSMD_REQUIRE(exp && out, "experiment_curve_point: null argument");
  FEDSMD_REQUIRE(point < exp->result.points.size(), "experiment_curve_point: point out of range");
  const auto& curve = exp->result.points[point].curve;
  FEDSMD_REQUIRE(k < curve.size(), "experiment_curve_point: index out of range");
  clear_error();
  const fedsmd::CurvePoint& c = curve[k];
  *out = {c.t, c.f_gap_avg_clients, c.consensus_max, c.consensus_bound,
          c.alpha_t, c.lambda_t, c.clip_fraction};
  return FEDSMD_OK;
}

const char* fedsmd_experiment_summary_file(const fedsmd_experiment* exp) {
  return exp ? exp->result.summary_file.c_str() : "";
}

const char* fedsmd_experiment_plot_file(const fedsmd_experiment* exp) {
  return exp ? exp->result.plot_file.c_str() : "";
}

const char* fedsmd_experiment_curve_file(const fedsmd_experiment* exp, size_t point) {
  if (!exp || point >= exp->result.points.size()) return "";
  return exp->result.points[point].curve_file.c_str();
}

size_t fedsmd_experiment_violation_count(const fedsmd_experiment* exp) {
  return exp ? exp->result.violations.size() : 0;
}

fedsmd_status fedsmd_experiment_summary_csv(const fedsmd_experiment* exp, fedsmd_text** out) {
  FEDSMD_REQUIRE(exp && out, "experiment_summary_csv: null argument");
  return guarded([&] { *out = new fedsmd_text{fedsmd::summary_csv(exp->result.rows)}; });
}

void fedsmd_experiment_free(fedsmd_experiment* exp) { delete exp; }

fedsmd_status fedsmd_audit(const fedsmd_config* cfg, int* passed, fedsmd_text** report) {
  FEDSMD_REQUIRE(cfg && passed && report, "audit: null argument");
  return guarded([&] {
    const fedsmd::AuditReport r = fedsmd::run_audit(cfg->cfg);
    *passed = r.passed() ? 1 : 0;
    *report = new fedsmd_text{r.to_text()};
  });
}

fedsmd_status fedsmd_solve(const fedsmd_config* cfg, size_t repetition, double* x,
                           size_t dimension, double* value) {
  FEDSMD_REQUIRE(cfg && x && value, "solve: null argument");
  FEDSMD_REQUIRE(dimension == cfg->cfg.dimension, "solve: dimension mismatch");
  return guarded([&] {
    fedsmd::validate(cfg->cfg);
    const fedsmd::Problem pb = fedsmd::make_problem(cfg->cfg, cfg->cfg.seed + repetition);
    fedsmd::Optimum opt;
    try {
      opt = fedsmd::solve_optimum(pb, fedsmd::make_domain(cfg->cfg));
    } catch (const fedsmd::InvalidInput& e) {
      throw fedsmd::ConfigError("problem", e.what());
    }
    std::copy(opt.point.begin(), opt.point.end(), x);
    *value = opt.value;
  });
}

fedsmd_status fedsmd_write_instance(const fedsmd_config* cfg, size_t repetition,
                                    const char* path) {
  FEDSMD_REQUIRE(cfg && path, "write_instance: null argument");
  return guarded([&] {
    fedsmd::validate(cfg->cfg);
    fedsmd::write_instance(fedsmd::make_problem(cfg->cfg, cfg->cfg.seed + repetition), path);
  });
}

fedsmd_status fedsmd_clip(const double* g, size_t n, double level, double* out,
                          int* was_clipped) {
  FEDSMD_REQUIRE((g && out) || n == 0, "clip: null argument");
  return guarded([&] {
    const fedsmd::ClipReport r = fedsmd::clip(fedsmd::ConstView(g, n), level);
    std::copy(r.clipped.begin(), r.clipped.end(), out);
    if (was_clipped) *was_clipped = r.was_clipped ? 1 : 0;
  });
}

fedsmd_status fedsmd_bregman(fedsmd_mirror mirror, const double* x, const double* y,
                             size_t n, double* out) {
  FEDSMD_REQUIRE(x && y && out, "bregman: null argument");
  FEDSMD_REQUIRE(mirror == FEDSMD_MIRROR_EUCLIDEAN || mirror == FEDSMD_MIRROR_ENTROPIC,
                 "bregman: unknown mirror map");
  return guarded([&] {
    const fedsmd::MirrorGeometry geom(mirror == FEDSMD_MIRROR_EUCLIDEAN
                                          ? fedsmd::MirrorKind::Euclidean
                                          : fedsmd::MirrorKind::NegativeEntropy,
                                      n);
    *out = fedsmd::bregman(geom, fedsmd::ConstView(x, n), fedsmd::ConstView(y, n));
  });
}

fedsmd_status fedsmd_schedule(double p, double mu, double kappa, double gamma,
                              double scale_constant, size_t t, double* alpha,
                              double* lambda) {
  FEDSMD_REQUIRE(alpha && lambda, "schedule: null argument");
  return guarded([&] {
    fedsmd::ScheduleParams sp;
    sp.p = p;
    sp.mu = mu;
    sp.kappa = kappa;
    sp.gamma = gamma;
    sp.scale_constant = scale_constant;
    fedsmd::validate(sp);
    *alpha = fedsmd::step_size(sp, t);
    *lambda = fedsmd::clip_level(sp, t);
  });
}

fedsmd_status fedsmd_rate_slope(const double* t, const double* error, size_t n,
                                double* slope) {
  FEDSMD_REQUIRE(t && error && slope, "rate_slope: null argument");
  return guarded([&] {
    std::vector<fedsmd::RatePoint> pts(n);
    for (size_t i = 0; i < n; ++i) pts[i] = {t[i], error[i]};
    *slope = fedsmd::rate_slope(std::span<const fedsmd::RatePoint>(pts));
  });
}

double fedsmd_theoretical_rate_exponent(double p) {
  return fedsmd::theoretical_rate_exponent(p);
}

}  // extern "C"
