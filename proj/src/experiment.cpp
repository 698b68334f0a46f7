// Copyright 2026 The fedsmd Authors.
// SPDX-License-Identifier: Apache-2.0

#include "fedsmd/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>

#include "fedsmd/csv.hpp"
#include "fedsmd/error.hpp"
#include "fedsmd/parallel.hpp"

namespace fedsmd {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct JobResult {
  SummaryRow row;
  std::vector<CurvePoint> curve;
  std::vector<BoundViolation> violations;
};

}  // namespace

Problem make_problem(const ExperimentConfig& cfg, std::uint64_t seed) {
  if (!cfg.instance.empty()) {
    Problem pb = read_instance(cfg.instance);
    if (pb.agents() != cfg.clients || pb.dimension() != cfg.dimension) {
      throw ConfigError("instance",
                        "instance has " + std::to_string(pb.agents()) +
                            " agents of dimension " +
                            std::to_string(pb.dimension()) +
                            ", config expects " + std::to_string(cfg.clients) +
                            " of dimension " + std::to_string(cfg.dimension));
    }
    return pb;
  }
  if (cfg.problem == ProblemKind::Quadratic) {
    return Problem::quadratic(cfg.clients, regression_truth(cfg.dimension),
                              cfg.quadratic_scale);
  }
  return generate_regression(cfg.clients, cfg.dimension, seed);
}

Domain make_domain(const ExperimentConfig& cfg) {
  const std::size_t n = cfg.dimension;
  switch (cfg.domain) {
    case DomainKind::FullSpace: return Domain::full_space(n);
    case DomainKind::ProbabilitySimplex: return Domain::simplex(n);
    case DomainKind::Box:
      return Domain::box(Vector(n, cfg.box_lower), Vector(n, cfg.box_upper));
    case DomainKind::EuclideanBall:
      return Domain::ball(Vector(n, 0.0), cfg.ball_radius);
  }
  throw ConfigError("domain", "unknown domain");
}

NoiseModel make_noise(const ExperimentConfig& cfg) {
  switch (cfg.noise) {
    case NoiseKind::None: return NoiseModel::none();
    case NoiseKind::ShiftedPareto:
      return NoiseModel::shifted_pareto(cfg.pareto_beta, cfg.pareto_scale);
    case NoiseKind::Gaussian: return NoiseModel::gaussian(cfg.noise_std);
  }
  return NoiseModel::none();
}

RunSetup build_run(const ExperimentConfig& cfg, std::size_t repetition) {
  validate(cfg);
  const std::uint64_t seed = cfg.seed + repetition;
  RunSetup setup;
  FederationConfig& fc = setup.federation;
  fc.clients = cfg.clients;
  fc.clock = CommClock(cfg.period, cfg.rounds);
  fc.geometry = MirrorGeometry(cfg.mirror, cfg.dimension);
  fc.domain = make_domain(cfg);
  fc.problem = make_problem(cfg, seed);
  fc.noise = make_noise(cfg);
  fc.master_seed = seed;
  fc.assertion_mode = cfg.assertion;
  fc.recording = cfg.recording;
  fc.workers = cfg.workers;

  try {
    setup.optimum = solve_optimum(fc.problem, fc.domain);
  } catch (const InvalidInput& e) {
    throw ConfigError("problem", e.what());
  }
  fc.optimum_value = setup.optimum.value;

  ScheduleParams sp = schedule_exponents(cfg);
  setup.sigma_p = certified_moment_bound(fc.noise, sp.p, cfg.dimension);
  setup.gradient_bound = fc.problem.gradient_bound(fc.domain);

  if (cfg.scale_constant) {
    sp.scale_constant = *cfg.scale_constant;
  } else if (sp.variant == ScheduleVariant::BoundedGradient) {
    if (!setup.gradient_bound) {
      throw ConfigError("schedule_variant",
                        "no gradient bound on this domain; set scale_constant");
    }
    sp.scale_constant = *setup.gradient_bound > 0.0 ? 2.0 * *setup.gradient_bound : 1.0;
  } else {
    if (!std::isfinite(setup.sigma_p)) {
      throw ConfigError("tail_p",
                        "the noise has no finite moment of order tail_p; the "
                        "smooth schedule needs one");
    }
    const Vector x1 = fc.domain.default_point();
    SmoothnessInputs in;
    in.clients = cfg.clients;
    in.smoothness = fc.problem.smoothness();
    in.initial_radius = std::sqrt(2.0 * bregman(fc.geometry, setup.optimum.point, x1));
    for (std::size_t i = 0; i < cfg.clients; ++i) {
      in.initial_gradient = std::max(in.initial_gradient, norm(fc.problem.gradient(i, x1)));
    }
    in.period = cfg.period;
    in.sigma_p = setup.sigma_p;
    in.delta = cfg.delta;
    in.horizon = fc.clock.horizon();
    setup.smoothness = resolve_smoothness_constant(sp, in);
    sp.scale_constant = setup.smoothness->scale_constant;
  }
  validate(sp);
  fc.schedule = sp;
  return setup;
}

ExperimentConfig apply_sweep_value(const ExperimentConfig& cfg, double value) {
  ExperimentConfig out = cfg;
  out.sweep = SweepKind::None;
  out.sweep_values.clear();
  switch (cfg.sweep) {
    case SweepKind::None:
      break;
    case SweepKind::Clients:
      out.clients = static_cast<std::size_t>(value);
      break;
    case SweepKind::Period: {
      const std::size_t period = static_cast<std::size_t>(value);
      out.period = period;
      out.rounds = (cfg.horizon() - 1) / period;
      break;
    }
    case SweepKind::TailP:
      out.tail_p = value;
      break;
  }
  return out;
}

std::vector<CurvePoint> checkpoint_curve(const FederationRun& run,
                                         std::size_t stride) {
  if (stride == 0) throw InvalidInput("checkpoint_curve: stride must be >= 1");
  if (run.records.size() != run.horizon || run.horizon == 0) {
    throw InvalidInput("checkpoint_curve: incomplete run");
  }
  std::vector<std::size_t> ts{1};
  for (std::size_t t = stride; t < run.horizon; t += stride) {
    if (t > 1) ts.push_back(t);
  }
  if (ts.back() != run.horizon) ts.push_back(run.horizon);

  std::vector<CurvePoint> curve;
  curve.reserve(ts.size());
  for (std::size_t t : ts) {
    const IterationRecord& r = run.records[t - 1];
    curve.push_back({t, r.ergodic_gap, r.consensus_max, r.consensus_bound,
                     r.alpha, r.lambda, r.clip_fraction});
  }
  return curve;
}

std::vector<CurvePoint> mean_curve(std::span<const std::vector<CurvePoint>> curves) {
  if (curves.empty()) return {};
  std::vector<CurvePoint> out = curves.front();
  for (std::size_t c = 1; c < curves.size(); ++c) {
    if (curves[c].size() != out.size()) {
      throw InvalidInput("mean_curve: curves have different checkpoints");
    }
    for (std::size_t k = 0; k < out.size(); ++k) {
      const CurvePoint& p = curves[c][k];
      if (p.t != out[k].t) throw InvalidInput("mean_curve: checkpoint mismatch");
      out[k].f_gap_avg_clients += p.f_gap_avg_clients;
      out[k].consensus_max += p.consensus_max;
      out[k].consensus_bound += p.consensus_bound;
      out[k].alpha_t += p.alpha_t;
      out[k].lambda_t += p.lambda_t;
      out[k].clip_fraction += p.clip_fraction;
    }
  }
  const double count = static_cast<double>(curves.size());
  for (CurvePoint& p : out) {
    p.f_gap_avg_clients /= count;
    p.consensus_max /= count;
    p.consensus_bound /= count;
    p.alpha_t /= count;
    p.lambda_t /= count;
    p.clip_fraction /= count;
  }
  return out;
}

double rate_slope(std::span<const RatePoint> curve) {
  if (curve.size() < 5) throw InvalidInput("rate_slope: need at least 5 checkpoints");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const RatePoint& p : curve) {
    if (!(p.t > 0.0)) throw InvalidInput("rate_slope: checkpoints must be positive");
    lo = std::min(lo, std::log(p.t));
    hi = std::max(hi, std::log(p.t));
  }
  const double mid = 0.5 * (lo + hi);
  std::vector<std::pair<double, double>> pts;
  for (const RatePoint& p : curve) {
    const double lt = std::log(p.t);
    if (lt < mid || !(p.error > 0.0) || !std::isfinite(p.error)) continue;
    pts.emplace_back(lt, std::log(p.error));
  }
  if (pts.size() < 3) throw InvalidInput("rate_slope: fewer than 3 usable points");
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(pts.size());
  my /= static_cast<double>(pts.size());
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (!(sxx > 0.0)) throw InvalidInput("rate_slope: checkpoints do not vary");
  return sxy / sxx;
}

double rate_slope(std::span<const CurvePoint> curve) {
  std::vector<RatePoint> pts;
  pts.reserve(curve.size());
  for (const CurvePoint& p : curve) {
    pts.push_back({static_cast<double>(p.t), p.f_gap_avg_clients});
  }
  return rate_slope(std::span<const RatePoint>(pts));
}

double theoretical_rate_exponent(double p) { return (1.0 - p) / (2.0 * p); }

std::string value_token(double value) {
  if (std::isnan(value)) return "none";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", value);
  return buf;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                const ExperimentOptions& options) {
  validate(cfg);
  const bool sweeping = options.sweep && cfg.sweep != SweepKind::None;
  const std::vector<double> values = sweeping ? cfg.sweep_values : std::vector<double>{kNaN};
  const std::string param = sweeping ? sweep_name(cfg.sweep) : "none";
  const std::size_t reps = cfg.repetitions;
  const std::size_t jobs = values.size() * reps;

  std::vector<JobResult> results(jobs);
  const std::size_t job_workers = std::min(cfg.workers, jobs);
  WorkerPool pool(job_workers);
  pool.parallel_for(jobs, [&](std::size_t job) {
    const double value = values[job / reps];
    const std::size_t rep = job % reps;
    const ExperimentConfig point = sweeping ? apply_sweep_value(cfg, value) : cfg;
    RunSetup setup = build_run(point, rep);
    // One level of parallelism: the engine only gets threads when there is
    // a single job.
    setup.federation.workers = jobs == 1 ? cfg.workers : 1;
    const FederationRun run = run_federation(setup.federation);

    JobResult& out = results[job];
    out.curve = checkpoint_curve(run, cfg.checkpoint_stride);
    out.violations = run.violations;
    SummaryRow& row = out.row;
    row.sweep_param = param;
    row.value = value;
    row.repetition = rep;
    row.seed = setup.federation.master_seed;
    row.horizon = run.horizon;
    row.global_error = global_error(run, setup.federation.problem, setup.optimum.value);
    row.final_consensus_max = run.records.back().consensus_max;
    double clipped = 0.0;
    for (std::size_t t = 1; t < run.horizon; ++t) clipped += run.records[t - 1].clip_fraction;
    row.mean_clip_fraction = run.horizon > 1 ? clipped / static_cast<double>(run.horizon - 1) : 0.0;

    std::vector<RatePoint> fit;
    for (const CurvePoint& p : out.curve) {
      if (p.t >= cfg.checkpoint_stride) {
        fit.push_back({static_cast<double>(p.t), p.f_gap_avg_clients});
      }
    }
    try {
      row.fitted_slope = rate_slope(std::span<const RatePoint>(fit));
    } catch (const InvalidInput&) {
      row.fitted_slope = kNaN;
    }
  });

  ExperimentResult result;
  result.sweep_param = param;
  for (std::size_t v = 0; v < values.size(); ++v) {
    SweepPoint point;
    point.value = values[v];
    std::vector<std::vector<CurvePoint>> curves;
    double total = 0.0;
    for (std::size_t rep = 0; rep < reps; ++rep) {
      JobResult& job = results[v * reps + rep];
      total += job.row.global_error;
      result.rows.push_back(job.row);
      curves.push_back(std::move(job.curve));
      result.violations.insert(result.violations.end(), job.violations.begin(),
                               job.violations.end());
    }
    point.mean_global_error = total / static_cast<double>(reps);
    if (reps > 1) {
      double ss = 0.0;
      for (std::size_t rep = 0; rep < reps; ++rep) {
        const double d = result.rows[v * reps + rep].global_error - point.mean_global_error;
        ss += d * d;
      }
      point.stddev_global_error = std::sqrt(ss / static_cast<double>(reps - 1));
    }
    point.curve = mean_curve(curves);
    result.points.push_back(std::move(point));
  }

  if (options.write_files) {
    const std::filesystem::path dir(cfg.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    for (SweepPoint& point : result.points) {
      const std::string name = sweeping ? "curve_" + param + "_" + value_token(point.value) + ".csv"
                                        : std::string("curve.csv");
      write_text_file(dir / name, curve_csv(point.curve));
      point.curve_file = (dir / name).string();
    }
    const std::string stem = sweeping ? "_" + param : std::string();
    result.summary_file = (dir / ("summary" + stem + ".csv")).string();
    write_text_file(result.summary_file, summary_csv(result.rows));
    result.plot_file = (dir / ("plot" + stem + ".gp")).string();
    write_text_file(result.plot_file, plot_script(param, result.points));
  }
  return result;
}

}  // namespace fedsmd
