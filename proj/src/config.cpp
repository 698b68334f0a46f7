// Copyright 2026 The fedsmd Authors.
// SPDX-License-Identifier: Apache-2.0

#include "fedsmd/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace fedsmd {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value,
                            const std::string& expected, std::size_t line) {
  std::string msg;
  if (line > 0) msg = "line " + std::to_string(line) + ": ";
  msg += "invalid value '" + std::string(value) + "' for " + std::string(key) +
         " (expected " + expected + ")";
  throw ConfigError(std::string(key), msg, line);
}

double to_double(std::string_view key, std::string_view value,
                 std::size_t line) {
  const std::string v = trim(value);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size() ||
      !std::isfinite(out)) {
    bad_value(key, value, "a finite number", line);
  }
  return out;
}

std::uint64_t to_unsigned(std::string_view key, std::string_view value,
                          std::size_t line) {
  const std::string v = trim(value);
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size()) {
    bad_value(key, value, "a nonnegative integer", line);
  }
  return out;
}

bool to_bool(std::string_view key, std::string_view value, std::size_t line) {
  const std::string v = lower(trim(value));
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  bad_value(key, value, "true or false", line);
}

std::vector<double> to_list(std::string_view key, std::string_view value,
                            std::size_t line) {
  std::vector<double> out;
  std::string item;
  std::istringstream in{std::string(value)};
  while (std::getline(in, item, ',')) {
    if (trim(item).empty()) continue;
    out.push_back(to_double(key, item, line));
  }
  if (out.empty()) bad_value(key, value, "a comma-separated list", line);
  return out;
}

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* mirror_text(MirrorKind k) {
  return k == MirrorKind::Euclidean ? "euclidean" : "entropic";
}

const char* domain_text(DomainKind k) {
  switch (k) {
    case DomainKind::FullSpace: return "free";
    case DomainKind::ProbabilitySimplex: return "simplex";
    case DomainKind::Box: return "box";
    case DomainKind::EuclideanBall: return "ball";
  }
  return "simplex";
}

const char* noise_text(NoiseKind k) {
  switch (k) {
    case NoiseKind::None: return "none";
    case NoiseKind::ShiftedPareto: return "pareto";
    case NoiseKind::Gaussian: return "gaussian";
  }
  return "none";
}

const char* assertion_text(AssertionMode m) {
  switch (m) {
    case AssertionMode::Strict: return "strict";
    case AssertionMode::Record: return "record";
    case AssertionMode::Off: return "off";
  }
  return "strict";
}

}  // namespace

std::string sweep_name(SweepKind kind) {
  switch (kind) {
    case SweepKind::None: return "none";
    case SweepKind::Clients: return "clients";
    case SweepKind::Period: return "period";
    case SweepKind::TailP: return "tail_p";
  }
  return "none";
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "clients",       "period",          "rounds",
      "tail_p",        "gamma",           "mu",
      "kappa",         "mirror",          "domain",
      "dimension",     "seed",            "repetitions",
      "schedule_variant", "scale_constant", "delta",
      "out_dir",       "noise",           "pareto_beta",
      "pareto_scale",  "noise_std",       "problem",
      "quadratic_scale", "instance",      "box_lower",
      "box_upper",     "ball_radius",     "checkpoint_stride",
      "sweep",         "sweep_values",    "workers",
      "assertion",     "record_states",   "long_horizon",
      "audit_samples"};
  return keys;
}

void set_option(ExperimentConfig& cfg, std::string_view raw_key,
                std::string_view raw_value, std::size_t line) {
  const std::string key = lower(trim(raw_key));
  const std::string value = trim(raw_value);
  const std::string word = lower(value);
  auto count = [&](std::uint64_t minimum) {
    const std::uint64_t v = to_unsigned(key, value, line);
    if (v < minimum) {
      bad_value(key, value, "an integer >= " + std::to_string(minimum), line);
    }
    return static_cast<std::size_t>(v);
  };

  if (key == "clients") cfg.clients = count(1);
  else if (key == "period") cfg.period = count(1);
  else if (key == "rounds") cfg.rounds = count(1);
  else if (key == "dimension") cfg.dimension = count(1);
  else if (key == "tail_p") cfg.tail_p = to_double(key, value, line);
  else if (key == "gamma") cfg.gamma = to_double(key, value, line);
  else if (key == "mu") cfg.mu = to_double(key, value, line);
  else if (key == "kappa") cfg.kappa = to_double(key, value, line);
  else if (key == "delta") cfg.delta = to_double(key, value, line);
  else if (key == "scale_constant") cfg.scale_constant = to_double(key, value, line);
  else if (key == "mirror") {
    if (word == "euclidean") cfg.mirror = MirrorKind::Euclidean;
    else if (word == "entropic") cfg.mirror = MirrorKind::NegativeEntropy;
    else bad_value(key, value, "euclidean or entropic", line);
  } else if (key == "domain") {
    if (word == "simplex") cfg.domain = DomainKind::ProbabilitySimplex;
    else if (word == "box") cfg.domain = DomainKind::Box;
    else if (word == "ball") cfg.domain = DomainKind::EuclideanBall;
    else if (word == "free") cfg.domain = DomainKind::FullSpace;
    else bad_value(key, value, "simplex, box, ball or free", line);
  } else if (key == "seed") cfg.seed = to_unsigned(key, value, line);
  else if (key == "repetitions") cfg.repetitions = count(1);
  else if (key == "schedule_variant") {
    if (word == "smooth") cfg.schedule_variant = ScheduleVariant::Smoothness;
    else if (word == "bounded_gradient")
      cfg.schedule_variant = ScheduleVariant::BoundedGradient;
    else bad_value(key, value, "smooth or bounded_gradient", line);
  } else if (key == "out_dir") {
    if (value.empty()) bad_value(key, value, "a directory path", line);
    cfg.out_dir = value;
  } else if (key == "noise") {
    if (word == "pareto") cfg.noise = NoiseKind::ShiftedPareto;
    else if (word == "gaussian") cfg.noise = NoiseKind::Gaussian;
    else if (word == "none") cfg.noise = NoiseKind::None;
    else bad_value(key, value, "pareto, gaussian or none", line);
  } else if (key == "pareto_beta") cfg.pareto_beta = to_double(key, value, line);
  else if (key == "pareto_scale") cfg.pareto_scale = to_double(key, value, line);
  else if (key == "noise_std") cfg.noise_std = to_double(key, value, line);
  else if (key == "problem") {
    if (word == "regression") cfg.problem = ProblemKind::LinearRegression;
    else if (word == "quadratic") cfg.problem = ProblemKind::Quadratic;
    else bad_value(key, value, "regression or quadratic", line);
  } else if (key == "quadratic_scale") cfg.quadratic_scale = to_double(key, value, line);
  else if (key == "instance") cfg.instance = value;
  else if (key == "box_lower") cfg.box_lower = to_double(key, value, line);
  else if (key == "box_upper") cfg.box_upper = to_double(key, value, line);
  else if (key == "ball_radius") cfg.ball_radius = to_double(key, value, line);
  else if (key == "checkpoint_stride") cfg.checkpoint_stride = count(1);
  else if (key == "sweep") {
    if (word == "none") cfg.sweep = SweepKind::None;
    else if (word == "clients") cfg.sweep = SweepKind::Clients;
    else if (word == "period") cfg.sweep = SweepKind::Period;
    else if (word == "tail_p") cfg.sweep = SweepKind::TailP;
    else bad_value(key, value, "none, clients, period or tail_p", line);
  } else if (key == "sweep_values") cfg.sweep_values = to_list(key, value, line);
  else if (key == "workers") cfg.workers = count(1);
  else if (key == "assertion") {
    if (word == "strict") cfg.assertion = AssertionMode::Strict;
    else if (word == "record") cfg.assertion = AssertionMode::Record;
    else if (word == "off") cfg.assertion = AssertionMode::Off;
    else bad_value(key, value, "strict, record or off", line);
  } else if (key == "record_states") {
    if (word == "sync") cfg.recording = StateRecording::SyncRounds;
    else if (word == "full") cfg.recording = StateRecording::Full;
    else bad_value(key, value, "sync or full", line);
  } else if (key == "long_horizon") {
    // Long horizon: P = 2, 30000 rounds, T = 60001.
    if (to_bool(key, value, line)) {
      cfg.period = 2;
      cfg.rounds = 30000;
    }
  } else if (key == "audit_samples") cfg.audit_samples = count(1000);
  else {
    std::string msg;
    if (line > 0) msg = "line " + std::to_string(line) + ": ";
    throw ConfigError(key, msg + "unknown key '" + key + "'", line);
  }
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("", "line " + std::to_string(line_no) +
                                ": expected 'key = value'",
                        line_no);
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    if (key.empty()) {
      throw ConfigError("", "line " + std::to_string(line_no) + ": missing key",
                        line_no);
    }
    set_option(cfg, key, std::string_view(line).substr(eq + 1), line_no);
  }
  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

ScheduleParams schedule_exponents(const ExperimentConfig& cfg) {
  ScheduleParams sp;
  sp.p = cfg.tail_p;
  sp.mu = cfg.mu.value_or(0.5 / cfg.tail_p);
  sp.kappa = cfg.kappa.value_or(sp.mu + 0.5);
  sp.gamma = cfg.gamma;
  sp.variant = cfg.schedule_variant;
  sp.scale_constant = cfg.scale_constant.value_or(1.0);
  return sp;
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.clients == 0) throw ConfigError("clients", "clients must be >= 1");
  if (cfg.period == 0) throw ConfigError("period", "period must be >= 1");
  if (cfg.rounds == 0) throw ConfigError("rounds", "rounds must be >= 1");
  if (cfg.dimension == 0) throw ConfigError("dimension", "dimension must be >= 1");
  if (cfg.repetitions == 0) throw ConfigError("repetitions", "repetitions must be >= 1");
  if (cfg.checkpoint_stride == 0) {
    throw ConfigError("checkpoint_stride", "checkpoint_stride must be >= 1");
  }
  if (cfg.workers == 0) throw ConfigError("workers", "workers must be >= 1");

  validate(schedule_exponents(cfg));

  if (cfg.mirror == MirrorKind::NegativeEntropy &&
      cfg.domain != DomainKind::ProbabilitySimplex) {
    throw ConfigError("mirror", "the entropic mirror map requires domain = simplex");
  }
  if (cfg.domain == DomainKind::Box && !(cfg.box_lower <= cfg.box_upper)) {
    throw ConfigError("box_lower", "box_lower must not exceed box_upper");
  }
  if (cfg.domain == DomainKind::EuclideanBall && !(cfg.ball_radius > 0.0)) {
    throw ConfigError("ball_radius", "ball_radius must be positive");
  }
  if (cfg.problem == ProblemKind::Quadratic && !(cfg.quadratic_scale > 0.0)) {
    throw ConfigError("quadratic_scale", "quadratic_scale must be positive");
  }
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) {
    throw ConfigError("delta", "delta must lie in (0, 1)");
  }
  NoiseModel noise;
  noise.kind = cfg.noise;
  noise.beta = cfg.pareto_beta;
  noise.x_scale = cfg.pareto_scale;
  noise.stddev = cfg.noise_std;
  validate(noise);

  if (cfg.schedule_variant == ScheduleVariant::BoundedGradient &&
      cfg.domain == DomainKind::FullSpace && !cfg.scale_constant) {
    throw ConfigError("schedule_variant",
                      "bounded_gradient needs a bounded domain or an explicit "
                      "scale_constant");
  }

  if (cfg.sweep != SweepKind::None) {
    if (cfg.sweep_values.empty()) {
      throw ConfigError("sweep_values", "sweep_values must not be empty");
    }
    for (double v : cfg.sweep_values) {
      switch (cfg.sweep) {
        case SweepKind::Clients:
        case SweepKind::Period:
          if (!(v >= 1.0) || v != std::floor(v)) {
            throw ConfigError("sweep_values",
                              "client counts and periods must be integers >= 1");
          }
          if (cfg.sweep == SweepKind::Period &&
              (cfg.horizon() - 1) % static_cast<std::size_t>(v) != 0) {
            throw ConfigError("sweep_values",
                              "period " + number(v) + " does not divide T - 1 = " +
                                  std::to_string(cfg.horizon() - 1));
          }
          if (cfg.sweep == SweepKind::Clients && !cfg.instance.empty()) {
            throw ConfigError("sweep", "a fixed instance file cannot be swept over clients");
          }
          break;
        case SweepKind::TailP: {
          ExperimentConfig probe = cfg;
          probe.tail_p = v;
          if (auto bad = find_violation(schedule_exponents(probe))) {
            throw ConfigError("sweep_values", "tail_p = " + number(v) + ": " +
                                                  bad->message);
          }
          break;
        }
        case SweepKind::None:
          break;
      }
    }
  }
}

std::string get_option(const ExperimentConfig& cfg, std::string_view raw_key) {
  const std::string key = lower(trim(raw_key));
  const auto& keys = config_keys();
  if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
    throw ConfigError(key, "unknown key '" + key + "'");
  }
  std::istringstream in(to_text(cfg));
  std::string line;
  const std::string prefix = key + " = ";
  while (std::getline(in, line)) {
    if (line.rfind(prefix, 0) == 0) return line.substr(prefix.size());
  }
  return "";
}

std::string to_text(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << "clients = " << cfg.clients << '\n'
     << "period = " << cfg.period << '\n'
     << "rounds = " << cfg.rounds << '\n'
     << "dimension = " << cfg.dimension << '\n'
     << "mirror = " << mirror_text(cfg.mirror) << '\n'
     << "domain = " << domain_text(cfg.domain) << '\n'
     << "box_lower = " << number(cfg.box_lower) << '\n'
     << "box_upper = " << number(cfg.box_upper) << '\n'
     << "ball_radius = " << number(cfg.ball_radius) << '\n'
     << "problem = "
     << (cfg.problem == ProblemKind::Quadratic ? "quadratic" : "regression") << '\n'
     << "quadratic_scale = " << number(cfg.quadratic_scale) << '\n';
  if (!cfg.instance.empty()) os << "instance = " << cfg.instance << '\n';
  os << "noise = " << noise_text(cfg.noise) << '\n'
     << "pareto_beta = " << number(cfg.pareto_beta) << '\n'
     << "pareto_scale = " << number(cfg.pareto_scale) << '\n'
     << "noise_std = " << number(cfg.noise_std) << '\n'
     << "tail_p = " << number(cfg.tail_p) << '\n';
  if (cfg.mu) os << "mu = " << number(*cfg.mu) << '\n';
  if (cfg.kappa) os << "kappa = " << number(*cfg.kappa) << '\n';
  os << "gamma = " << number(cfg.gamma) << '\n'
     << "schedule_variant = "
     << (cfg.schedule_variant == ScheduleVariant::Smoothness ? "smooth"
                                                             : "bounded_gradient")
     << '\n';
  if (cfg.scale_constant) os << "scale_constant = " << number(*cfg.scale_constant) << '\n';
  os << "delta = " << number(cfg.delta) << '\n'
     << "seed = " << cfg.seed << '\n'
     << "repetitions = " << cfg.repetitions << '\n'
     << "checkpoint_stride = " << cfg.checkpoint_stride << '\n'
     << "sweep = " << sweep_name(cfg.sweep) << '\n';
  if (!cfg.sweep_values.empty()) {
    os << "sweep_values = ";
    for (std::size_t i = 0; i < cfg.sweep_values.size(); ++i) {
      os << (i ? "," : "") << number(cfg.sweep_values[i]);
    }
    os << '\n';
  }
  os << "workers = " << cfg.workers << '\n'
     << "assertion = " << assertion_text(cfg.assertion) << '\n'
     << "record_states = "
     << (cfg.recording == StateRecording::Full ? "full" : "sync") << '\n'
     << "out_dir = " << cfg.out_dir << '\n'
     << "audit_samples = " << cfg.audit_samples << '\n';
  return os.str();
}

}  // namespace fedsmd
