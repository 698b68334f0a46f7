// Copyright 2026 The fedsmd Authors.
// SPDX-License-Identifier: Apache-2.0

// Command-line front end over the C API.

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fedsmd/fedsmd.h"

namespace {

enum ExitCode { kSuccess = 0, kConfigError = 1, kAssertionFailure = 2, kOtherError = 3 };

struct CommonOptions {
  std::string config_path;
  std::vector<std::string> settings;
  std::size_t workers = 0;
  bool long_horizon = false;
  std::string out_dir;
};

int report(fedsmd_status status) {
  const char* field = fedsmd_last_error_field();
  std::fprintf(stderr, "fedsmd: %s", fedsmd_last_error());
  if (status == FEDSMD_ERR_CONFIG && *field) std::fprintf(stderr, " [field: %s]", field);
  std::fprintf(stderr, "\n");
  switch (status) {
    case FEDSMD_OK: return kSuccess;
    case FEDSMD_ERR_CONFIG: return kConfigError;
    case FEDSMD_ERR_ASSERTION: return kAssertionFailure;
    default: return kOtherError;
  }
}

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("config", opts.config_path, "Config file (key = value lines)");
  cmd->add_option("-s,--set", opts.settings, "Override a setting: key=value")
      ->allow_extra_args(false);
  cmd->add_option("-w,--workers", opts.workers, "Worker threads");
  cmd->add_flag("--long-horizon", opts.long_horizon, "Long horizon: P = 2, 30000 rounds (T = 60001)");
  cmd->add_option("-o,--out", opts.out_dir, "Output directory");
}

std::string get(const fedsmd_config* cfg, const char* key) {
  fedsmd_text* text = nullptr;
  if (fedsmd_config_get(cfg, key, &text) != FEDSMD_OK) return "";
  std::string value = fedsmd_text_data(text);
  fedsmd_text_free(text);
  return value;
}

// Builds and validates the config; returns an exit code on failure.
int load(const CommonOptions& opts, fedsmd_config** cfg) {
  fedsmd_status st = opts.config_path.empty() ? fedsmd_config_new(cfg)
                                              : fedsmd_config_load(opts.config_path.c_str(), cfg);
  // An unreadable config file is a usage error, not an I/O failure of a run.
  if (st == FEDSMD_ERR_IO) return report(st), kConfigError;
  if (st != FEDSMD_OK) return report(st);
  auto set = [&](const std::string& key, const std::string& value) {
    return fedsmd_config_set(*cfg, key.c_str(), value.c_str());
  };
  for (const std::string& kv : opts.settings) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "fedsmd: --set expects key=value, got '%s'\n", kv.c_str());
      return kConfigError;
    }
    if ((st = set(kv.substr(0, eq), kv.substr(eq + 1))) != FEDSMD_OK) return report(st);
  }
  if (opts.workers > 0 && (st = set("workers", std::to_string(opts.workers))) != FEDSMD_OK) {
    return report(st);
  }
  if (opts.long_horizon && (st = set("long_horizon", "true")) != FEDSMD_OK) return report(st);
  if (!opts.out_dir.empty() && (st = set("out_dir", opts.out_dir)) != FEDSMD_OK) {
    return report(st);
  }
  if ((st = fedsmd_config_validate(*cfg)) != FEDSMD_OK) return report(st);
  return kSuccess;
}

int run_experiment(const CommonOptions& opts, bool sweep, bool write_files) {
  fedsmd_config* cfg = nullptr;
  if (int rc = load(opts, &cfg); rc != kSuccess) {
    fedsmd_config_free(cfg);
    return rc;
  }
  fedsmd_experiment* exp = nullptr;
  const fedsmd_status st = fedsmd_experiment_run(cfg, sweep ? 1 : 0, write_files ? 1 : 0, &exp);
  fedsmd_config_free(cfg);
  if (st != FEDSMD_OK) return report(st);

  std::printf("%-8s %10s %4s %12s %7s %14s %14s %8s %9s\n", "param", "value", "rep", "seed",
              "T", "global_error", "consensus", "clipped", "slope");
  for (std::size_t i = 0; i < fedsmd_experiment_row_count(exp); ++i) {
    fedsmd_summary_row r;
    fedsmd_experiment_row(exp, i, &r);
    std::printf("%-8s %10.4g %4zu %12llu %7zu %14.6e %14.6e %8.4f %9.4f\n", r.sweep_param,
                r.value, r.repetition, static_cast<unsigned long long>(r.seed), r.horizon,
                r.global_error, r.final_consensus_max, r.mean_clip_fraction, r.fitted_slope);
  }
  if (sweep) {
    std::printf("\nglobal error per sweep value (mean +- sd over repetitions):\n");
    for (std::size_t i = 0; i < fedsmd_experiment_point_count(exp); ++i) {
      double value = 0.0, mean = 0.0, sd = 0.0;
      fedsmd_experiment_point(exp, i, &value, &mean, nullptr);
      fedsmd_experiment_point_stddev(exp, i, &sd);
      std::printf("  %-10.4g %.6e +- %.3e\n", value, mean, sd);
    }
  }
  if (write_files) {
    std::printf("\nsummary: %s\nplot:    %s\n", fedsmd_experiment_summary_file(exp),
                fedsmd_experiment_plot_file(exp));
  }
  const std::size_t violations = fedsmd_experiment_violation_count(exp);
  fedsmd_experiment_free(exp);
  if (violations > 0) {
    std::fprintf(stderr, "fedsmd: %zu recorded bound violations\n", violations);
    return kAssertionFailure;
  }
  return kSuccess;
}

int run_audit(const CommonOptions& opts) {
  fedsmd_config* cfg = nullptr;
  if (int rc = load(opts, &cfg); rc != kSuccess) {
    fedsmd_config_free(cfg);
    return rc;
  }
  int passed = 0;
  fedsmd_text* text = nullptr;
  const fedsmd_status st = fedsmd_audit(cfg, &passed, &text);
  fedsmd_config_free(cfg);
  if (st != FEDSMD_OK) return report(st);
  std::fputs(fedsmd_text_data(text), stdout);
  fedsmd_text_free(text);
  return passed ? kSuccess : kAssertionFailure;
}

int run_solve(const CommonOptions& opts, std::size_t repetition, const std::string& instance_out) {
  fedsmd_config* cfg = nullptr;
  if (int rc = load(opts, &cfg); rc != kSuccess) {
    fedsmd_config_free(cfg);
    return rc;
  }
  const std::size_t dim = std::stoul(get(cfg, "dimension"));

  std::vector<double> x(dim);
  double value = 0.0;
  fedsmd_status st = fedsmd_solve(cfg, repetition, x.data(), dim, &value);
  if (st == FEDSMD_OK && !instance_out.empty()) {
    st = fedsmd_write_instance(cfg, repetition, instance_out.c_str());
  }
  fedsmd_config_free(cfg);
  if (st != FEDSMD_OK) return report(st);
  std::printf("x* =");
  for (double v : x) std::printf(" %.17g", v);
  std::printf("\nf* = %.17g\n", value);
  if (!instance_out.empty()) std::printf("instance written to %s\n", instance_out.c_str());
  return kSuccess;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Clipped federated stochastic mirror descent experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", fedsmd_version());

  CommonOptions run_opts, sweep_opts, audit_opts, solve_opts;
  bool no_files = false;
  std::size_t repetition = 0;
  std::string instance_out;

  CLI::App* run = app.add_subcommand("run", "Run the base config (all repetitions)");
  add_common(run, run_opts);
  run->add_flag("--no-files", no_files, "Keep results in memory; print only");

  CLI::App* sweep = app.add_subcommand("sweep", "Run the configured sweep");
  add_common(sweep, sweep_opts);
  sweep->add_flag("--no-files", no_files, "Keep results in memory; print only");

  CLI::App* audit = app.add_subcommand("audit", "Bias/variance, series and consensus audits");
  add_common(audit, audit_opts);

  CLI::App* solve = app.add_subcommand("solve", "Print x* and f* of the problem instance");
  add_common(solve, solve_opts);
  solve->add_option("-r,--repetition", repetition, "Repetition index (instance seed offset)");
  solve->add_option("--write-instance", instance_out, "Also write the instance to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kSuccess : kConfigError;
  }

  if (*run) return run_experiment(run_opts, false, !no_files);
  if (*sweep) {
    fedsmd_config* probe = nullptr;
    if (int rc = load(sweep_opts, &probe); rc != kSuccess) {
      fedsmd_config_free(probe);
      return rc;
    }
    const bool has_sweep = get(probe, "sweep") != "none";
    fedsmd_config_free(probe);
    if (!has_sweep) {
      std::fprintf(stderr, "fedsmd: sweep needs sweep = clients|period|tail_p [field: sweep]\n");
      return kConfigError;
    }
    return run_experiment(sweep_opts, true, !no_files);
  }
  if (*audit) return run_audit(audit_opts);
  if (*solve) return run_solve(solve_opts, repetition, instance_out);
  return kSuccess;
}
