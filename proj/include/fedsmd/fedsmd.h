/* Copyright 2026 The fedsmd Authors.
 * SPDX-License-Identifier: Apache-2.0 */

#ifndef FEDSMD_FEDSMD_H_
#define FEDSMD_FEDSMD_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(FEDSMD_BUILDING_LIBRARY)
#define FEDSMD_API __declspec(dllexport)
#else
#define FEDSMD_API __declspec(dllimport)
#endif
#else
#define FEDSMD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fedsmd_status {
  FEDSMD_OK = 0,
  FEDSMD_ERR_CONFIG = 1,
  FEDSMD_ERR_ASSERTION = 2,
  FEDSMD_ERR_INVALID_ARGUMENT = 3,
  FEDSMD_ERR_IO = 4,
  FEDSMD_ERR_INTERNAL = 5
} fedsmd_status;

typedef enum fedsmd_mirror {
  FEDSMD_MIRROR_EUCLIDEAN = 0,
  FEDSMD_MIRROR_ENTROPIC = 1
} fedsmd_mirror;

typedef struct fedsmd_config fedsmd_config;
typedef struct fedsmd_run fedsmd_run;
typedef struct fedsmd_experiment fedsmd_experiment;
typedef struct fedsmd_text fedsmd_text;

typedef struct fedsmd_record {
  size_t t;
  double f_gap_average;
  double ergodic_gap;
  double consensus_max;
  double consensus_bound;
  double clip_fraction;
  double alpha;
  double lambda;
} fedsmd_record;

typedef struct fedsmd_summary_row {
  const char* sweep_param; /* owned by the experiment handle */
  double value;
  size_t repetition;
  uint64_t seed;
  size_t horizon;
  double global_error;
  double final_consensus_max;
  double mean_clip_fraction;
  double fitted_slope;
} fedsmd_summary_row;

typedef struct fedsmd_curve_point {
  size_t t;
  double f_gap_avg_clients;
  double consensus_max;
  double consensus_bound;
  double alpha_t;
  double lambda_t;
  double clip_fraction;
} fedsmd_curve_point;

FEDSMD_API const char* fedsmd_version(void);

/* Message of the last failed call on this thread; "" after a success. */
FEDSMD_API const char* fedsmd_last_error(void);
/* Config field named by the last FEDSMD_ERR_CONFIG, or "". */
FEDSMD_API const char* fedsmd_last_error_field(void);
/* Config file line of the last FEDSMD_ERR_CONFIG, or 0. */
FEDSMD_API size_t fedsmd_last_error_line(void);

/* ---- text buffers ---- */
FEDSMD_API const char* fedsmd_text_data(const fedsmd_text* text);
FEDSMD_API size_t fedsmd_text_size(const fedsmd_text* text);
FEDSMD_API void fedsmd_text_free(fedsmd_text* text);

/* ---- configuration ---- */
FEDSMD_API fedsmd_status fedsmd_config_new(fedsmd_config** out);
FEDSMD_API fedsmd_status fedsmd_config_load(const char* path, fedsmd_config** out);
FEDSMD_API fedsmd_status fedsmd_config_parse(const char* text, fedsmd_config** out);
/* Applies one key = value setting; call fedsmd_config_validate afterwards. */
FEDSMD_API fedsmd_status fedsmd_config_set(fedsmd_config* cfg, const char* key,
                                           const char* value);
/* Current value of `key`; "" for unset optional keys. */
FEDSMD_API fedsmd_status fedsmd_config_get(const fedsmd_config* cfg, const char* key,
                                           fedsmd_text** value);
FEDSMD_API fedsmd_status fedsmd_config_validate(const fedsmd_config* cfg);
FEDSMD_API fedsmd_status fedsmd_config_to_text(const fedsmd_config* cfg,
                                               fedsmd_text** out);
FEDSMD_API void fedsmd_config_free(fedsmd_config* cfg);

/* ---- single federation run (in memory) ---- */
FEDSMD_API fedsmd_status fedsmd_run_single(const fedsmd_config* cfg,
                                           size_t repetition, fedsmd_run** out);
FEDSMD_API size_t fedsmd_run_horizon(const fedsmd_run* run);
FEDSMD_API size_t fedsmd_run_sync_rounds(const fedsmd_run* run);
FEDSMD_API size_t fedsmd_run_clients(const fedsmd_run* run);
FEDSMD_API size_t fedsmd_run_dimension(const fedsmd_run* run);
FEDSMD_API size_t fedsmd_run_violation_count(const fedsmd_run* run);
FEDSMD_API double fedsmd_run_global_error(const fedsmd_run* run);
FEDSMD_API double fedsmd_run_optimum_value(const fedsmd_run* run);
/* t in [1, T]. */
FEDSMD_API fedsmd_status fedsmd_run_record(const fedsmd_run* run, size_t t,
                                           fedsmd_record* out);
/* Server average at t; `out` holds `dimension` values. */
FEDSMD_API fedsmd_status fedsmd_run_average(const fedsmd_run* run, size_t t,
                                            double* out, size_t dimension);
/* Ergodic average of one client at T. */
FEDSMD_API fedsmd_status fedsmd_run_ergodic(const fedsmd_run* run, size_t client,
                                            double* out, size_t dimension);
FEDSMD_API void fedsmd_run_free(fedsmd_run* run);

/* ---- experiments (sweeps, CSV output) ---- */
/* sweep = 0 runs the base config only; write_files = 0 keeps results in
 * memory. Engine invariant failures return FEDSMD_ERR_ASSERTION. */
FEDSMD_API fedsmd_status fedsmd_experiment_run(const fedsmd_config* cfg, int sweep,
                                               int write_files,
                                               fedsmd_experiment** out);
FEDSMD_API size_t fedsmd_experiment_row_count(const fedsmd_experiment* exp);
FEDSMD_API fedsmd_status fedsmd_experiment_row(const fedsmd_experiment* exp,
                                               size_t index,
                                               fedsmd_summary_row* out);
FEDSMD_API size_t fedsmd_experiment_point_count(const fedsmd_experiment* exp);
FEDSMD_API fedsmd_status fedsmd_experiment_point(const fedsmd_experiment* exp,
                                                 size_t index, double* value,
                                                 double* mean_global_error,
                                                 size_t* curve_length);
/* Sample standard deviation of the global error over repetitions (0 for one). */
FEDSMD_API fedsmd_status fedsmd_experiment_point_stddev(const fedsmd_experiment* exp,
                                                        size_t index, double* stddev);
FEDSMD_API fedsmd_status fedsmd_experiment_curve_point(
    const fedsmd_experiment* exp, size_t point, size_t k, fedsmd_curve_point* out);
/* Paths of written files, or "" when files were not written. */
FEDSMD_API const char* fedsmd_experiment_summary_file(const fedsmd_experiment* exp);
FEDSMD_API const char* fedsmd_experiment_plot_file(const fedsmd_experiment* exp);
FEDSMD_API const char* fedsmd_experiment_curve_file(const fedsmd_experiment* exp,
                                                    size_t point);
FEDSMD_API size_t fedsmd_experiment_violation_count(const fedsmd_experiment* exp);
FEDSMD_API fedsmd_status fedsmd_experiment_summary_csv(const fedsmd_experiment* exp,
                                                       fedsmd_text** out);
FEDSMD_API void fedsmd_experiment_free(fedsmd_experiment* exp);

/* ---- audit and solver ---- */
FEDSMD_API fedsmd_status fedsmd_audit(const fedsmd_config* cfg, int* passed,
                                      fedsmd_text** report);
/* Minimiser of the instance for `repetition`; `x` holds `dimension` values. */
FEDSMD_API fedsmd_status fedsmd_solve(const fedsmd_config* cfg, size_t repetition,
                                      double* x, size_t dimension, double* value);
FEDSMD_API fedsmd_status fedsmd_write_instance(const fedsmd_config* cfg,
                                               size_t repetition, const char* path);

/* ---- primitives ---- */
FEDSMD_API fedsmd_status fedsmd_clip(const double* g, size_t n, double level,
                                     double* out, int* was_clipped);
FEDSMD_API fedsmd_status fedsmd_bregman(fedsmd_mirror mirror, const double* x,
                                        const double* y, size_t n, double* out);
FEDSMD_API fedsmd_status fedsmd_schedule(double p, double mu, double kappa,
                                         double gamma, double scale_constant,
                                         size_t t, double* alpha, double* lambda);
FEDSMD_API fedsmd_status fedsmd_rate_slope(const double* t, const double* error,
                                           size_t n, double* slope);
FEDSMD_API double fedsmd_theoretical_rate_exponent(double p);

#ifdef __cplusplus
}
#endif

#endif /* FEDSMD_FEDSMD_H_ */
