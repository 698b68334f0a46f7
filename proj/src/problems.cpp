// Copyright 2026 The fedsmd Authors.
// SPDX-License-Identifier: Apache-2.0

#include "fedsmd/problems.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fedsmd/rng.hpp"

namespace fedsmd {

namespace {

// Row-major dense solve with partial pivoting; nullopt when singular.
std::optional<Vector> solve_dense(std::vector<double> m, Vector rhs) {
  const std::size_t n = rhs.size();
  double scale = 0.0;
  for (double v : m) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return std::nullopt;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(m[r * n + col]) > std::abs(m[pivot * n + col])) pivot = r;
    }
    if (std::abs(m[pivot * n + col]) <= 1e-12 * scale) return std::nullopt;
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(m[col * n + c], m[pivot * n + c]);
      std::swap(rhs[col], rhs[pivot]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = m[r * n + col] / m[col * n + col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) m[r * n + c] -= f * m[col * n + c];
      rhs[r] -= f * rhs[col];
    }
  }
  Vector x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = rhs[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= m[i * n + c] * x[c];
    x[i] = s / m[i * n + i];
  }
  return x;
}

// Least squares restricted to `free_idx`, other coordinates held at `base`.
// With `sum_to_one`, adds the constraint sum_{free} x = 1 - sum_{fixed} x.
std::optional<Vector> restricted_least_squares(
    const Problem& pb, const std::vector<std::size_t>& free_idx,
    const Vector& base, bool sum_to_one) {
  const std::size_t k = free_idx.size();
  const std::size_t dim = k + (sum_to_one ? 1 : 0);
  if (k == 0) return std::nullopt;
  std::vector<double> m(dim * dim, 0.0);
  Vector rhs(dim, 0.0);
  for (std::size_t i = 0; i < pb.agents(); ++i) {
    const Vector& a = pb.features()[i];
    double fixed = 0.0;
    for (std::size_t j = 0; j < base.size(); ++j) {
      if (std::find(free_idx.begin(), free_idx.end(), j) == free_idx.end()) {
        fixed += a[j] * base[j];
      }
    }
    const double r = pb.targets()[i] - fixed;
    for (std::size_t p = 0; p < k; ++p) {
      rhs[p] += a[free_idx[p]] * r;
      for (std::size_t q = 0; q < k; ++q) {
        m[p * dim + q] += a[free_idx[p]] * a[free_idx[q]];
      }
    }
  }
  if (sum_to_one) {
    double fixed_mass = 0.0;
    for (std::size_t j = 0; j < base.size(); ++j) {
      if (std::find(free_idx.begin(), free_idx.end(), j) == free_idx.end()) {
        fixed_mass += base[j];
      }
    }
    for (std::size_t p = 0; p < k; ++p) {
      m[p * dim + k] = 1.0;
      m[k * dim + p] = 1.0;
    }
    rhs[k] = 1.0 - fixed_mass;
  }
  auto sol = solve_dense(std::move(m), std::move(rhs));
  if (!sol) return std::nullopt;
  Vector out = base;
  for (std::size_t p = 0; p < k; ++p) out[free_idx[p]] = (*sol)[p];
  return out;
}

Vector full_gradient(const Problem& pb, ConstView x) {
  Vector g(pb.dimension(), 0.0);
  for (std::size_t i = 0; i < pb.agents(); ++i) {
    const Vector gi = pb.gradient(i, x);
    for (std::size_t j = 0; j < g.size(); ++j) g[j] += gi[j];
  }
  return g;
}

// Accelerated projected gradient with function-value restart.
Vector accelerated_projected_gradient(const Problem& pb, const Domain& dom) {
  double lipschitz = 0.0;
  for (const Vector& a : pb.features()) lipschitz += squared_norm(a);
  lipschitz = std::max(lipschitz, 1e-300);
  const double step = 1.0 / lipschitz;

  Vector x = dom.default_point();
  Vector y = x;
  double momentum = 1.0;
  double fx = pb.objective(x);
  for (int iter = 0; iter < 200000; ++iter) {
    const Vector g = full_gradient(pb, y);
    Vector next = euclidean_project(dom, add_scaled(y, -step, g));
    const double fnext = pb.objective(next);
    if (fnext > fx) {  // restart
      momentum = 1.0;
      y = x;
      continue;
    }
    const double next_momentum =
        0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
    const double moved = distance(next, x);
    Vector extrapolated(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
      extrapolated[j] =
          next[j] + (momentum - 1.0) / next_momentum * (next[j] - x[j]);
    }
    x = std::move(next);
    fx = fnext;
    y = std::move(extrapolated);
    momentum = next_momentum;
    if (moved <= 1e-15 * (1.0 + norm(x))) break;
  }
  return x;
}

// Exact refinement on the active face found by the iterative solver.
Vector polish(const Problem& pb, const Domain& dom, Vector x) {
  constexpr double kActive = 1e-10;
  std::vector<std::size_t> free_idx;
  Vector base = x;
  if (dom.kind() == DomainKind::ProbabilitySimplex) {
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (x[j] > kActive) free_idx.push_back(j);
      else base[j] = 0.0;
    }
  } else if (dom.kind() == DomainKind::Box) {
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (x[j] - dom.lower()[j] <= kActive) base[j] = dom.lower()[j];
      else if (dom.upper()[j] - x[j] <= kActive) base[j] = dom.upper()[j];
      else free_idx.push_back(j);
    }
  } else {
    return x;
  }
  const auto candidate = restricted_least_squares(
      pb, free_idx, base, dom.kind() == DomainKind::ProbabilitySimplex);
  if (!candidate) return x;
  const Vector feasible = euclidean_project(dom, *candidate);
  if (distance(feasible, *candidate) > 1e-12) return x;
  return pb.objective(feasible) <= pb.objective(x) ? feasible : x;
}

void append_number(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

}  // namespace

Problem Problem::linear_regression(std::vector<Vector> features,
                                   Vector targets) {
  if (features.empty()) throw InvalidInput("regression needs at least one agent");
  if (features.size() != targets.size()) {
    throw InvalidInput("regression: feature and target counts differ");
  }
  const std::size_t n = features.front().size();
  if (n == 0) throw InvalidInput("regression: empty feature vector");
  for (const Vector& a : features) {
    if (a.size() != n) throw InvalidInput("regression: ragged feature rows");
    if (!all_finite(a)) throw InvalidInput("regression: non-finite feature");
  }
  if (!all_finite(targets)) throw InvalidInput("regression: non-finite target");
  Problem p;
  p.kind_ = ProblemKind::LinearRegression;
  p.agents_ = features.size();
  p.dimension_ = n;
  p.features_ = std::move(features);
  p.targets_ = std::move(targets);
  return p;
}

Problem Problem::quadratic(std::size_t agents, Vector center, double scale) {
  if (agents == 0) throw InvalidInput("quadratic needs at least one agent");
  if (center.empty() || !all_finite(center)) {
    throw InvalidInput("quadratic: center must be a finite nonempty vector");
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw InvalidInput("quadratic: scale must be positive");
  }
  Problem p;
  p.kind_ = ProblemKind::Quadratic;
  p.agents_ = agents;
  p.dimension_ = center.size();
  p.center_ = std::move(center);
  p.scale_ = scale;
  return p;
}

void Problem::require_agent(std::size_t agent, ConstView x) const {
  if (agent >= agents_) {
    throw InvalidInput("agent index " + std::to_string(agent) +
                       " out of range");
  }
  if (x.size() != dimension_) {
    throw InvalidInput("problem: expected dimension " +
                       std::to_string(dimension_) + ", got " +
                       std::to_string(x.size()));
  }
}

double Problem::agent_objective(std::size_t agent, ConstView x) const {
  require_agent(agent, x);
  if (kind_ == ProblemKind::Quadratic) {
    const double d = distance(x, center_);
    return 0.5 * scale_ * d * d;
  }
  const double r = dot(features_[agent], x) - targets_[agent];
  return 0.5 * r * r;
}

double Problem::objective(ConstView x) const {
  double s = 0.0;
  for (std::size_t i = 0; i < agents_; ++i) s += agent_objective(i, x);
  return s;
}

Vector Problem::gradient(std::size_t agent, ConstView x) const {
  require_agent(agent, x);
  Vector g(dimension_);
  if (kind_ == ProblemKind::Quadratic) {
    for (std::size_t j = 0; j < dimension_; ++j) g[j] = scale_ * (x[j] - center_[j]);
    return g;
  }
  const Vector& a = features_[agent];
  const double r = dot(a, x) - targets_[agent];
  for (std::size_t j = 0; j < dimension_; ++j) g[j] = r * a[j];
  return g;
}

double Problem::smoothness() const {
  if (kind_ == ProblemKind::Quadratic) return scale_;
  double best = 0.0;
  for (const Vector& a : features_) best = std::max(best, squared_norm(a));
  return best;
}

std::optional<double> Problem::gradient_bound(const Domain& domain) const {
  if (!domain.bounded()) return std::nullopt;
  if (domain.dimension() != dimension_) {
    throw InvalidInput("gradient_bound: domain dimension mismatch");
  }
  const std::size_t n = dimension_;

  if (kind_ == ProblemKind::Quadratic) {
    // scale * max_x |x - c|, attained at an extreme point.
    double far = 0.0;
    switch (domain.kind()) {
      case DomainKind::ProbabilitySimplex:
        for (std::size_t v = 0; v < n; ++v) {
          double s = 0.0;
          for (std::size_t j = 0; j < n; ++j) {
            const double d = (j == v ? 1.0 : 0.0) - center_[j];
            s += d * d;
          }
          far = std::max(far, std::sqrt(s));
        }
        break;
      case DomainKind::Box: {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          const double d = std::max(std::abs(domain.lower()[j] - center_[j]),
                                    std::abs(domain.upper()[j] - center_[j]));
          s += d * d;
        }
        far = std::sqrt(s);
        break;
      }
      case DomainKind::EuclideanBall:
        far = distance(domain.center(), center_) + domain.radius();
        break;
      case DomainKind::FullSpace:
        return std::nullopt;
    }
    return scale_ * far;
  }

  // |grad f_i| = |a_i| * |<a_i, x> - b_i| <= |a_i| * (max_x |<a_i, x>| + |b_i|).
  double bound = 0.0;
  for (std::size_t i = 0; i < agents_; ++i) {
    const Vector& a = features_[i];
    double reach = 0.0;
    switch (domain.kind()) {
      case DomainKind::ProbabilitySimplex:
        for (double v : a) reach = std::max(reach, std::abs(v));
        break;
      case DomainKind::Box:
        for (std::size_t j = 0; j < n; ++j) {
          reach += std::max(std::abs(a[j] * domain.lower()[j]),
                            std::abs(a[j] * domain.upper()[j]));
        }
        break;
      case DomainKind::EuclideanBall:
        reach = std::abs(dot(a, domain.center())) + domain.radius() * norm(a);
        break;
      case DomainKind::FullSpace:
        return std::nullopt;
    }
    bound = std::max(bound, norm(a) * (reach + std::abs(targets_[i])));
  }
  return bound;
}

Vector regression_truth(std::size_t dimension) {
  Vector c(dimension, 0.0);
  for (std::size_t i = 0; i < dimension / 2; ++i) c[i] = 1.0;
  return c;
}

Problem generate_regression(std::size_t agents, std::size_t dimension,
                            std::uint64_t seed) {
  if (agents == 0 || dimension == 0) {
    throw InvalidInput("generate_regression: agents and dimension must be >= 1");
  }
  const Vector truth = regression_truth(dimension);
  std::vector<Vector> features(agents, Vector(dimension));
  Vector targets(agents);
  for (std::size_t i = 0; i < agents; ++i) {
    // Agent i's data depends only on (seed, i).
    CounterRng rng(seed, {StreamPurpose::ProblemInstance,
                          static_cast<std::uint32_t>(i), 0});
    for (double& v : features[i]) v = 2.0 * rng.uniform() - 1.0;
    targets[i] = dot(features[i], truth) + rng.normal();
  }
  return Problem::linear_regression(std::move(features), std::move(targets));
}

Optimum solve_optimum(const Problem& problem, const Domain& domain) {
  if (domain.dimension() != problem.dimension()) {
    throw InvalidInput("solve_optimum: domain dimension mismatch");
  }
  Optimum opt;
  if (problem.kind() == ProblemKind::Quadratic) {
    opt.point = euclidean_project(domain, problem.center());
  } else if (domain.kind() == DomainKind::FullSpace) {
    const std::size_t n = problem.dimension();
    std::vector<double> normal(n * n, 0.0);
    Vector rhs(n, 0.0);
    for (std::size_t i = 0; i < problem.agents(); ++i) {
      const Vector& a = problem.features()[i];
      for (std::size_t p = 0; p < n; ++p) {
        rhs[p] += a[p] * problem.targets()[i];
        for (std::size_t q = 0; q < n; ++q) normal[p * n + q] += a[p] * a[q];
      }
    }
    auto sol = solve_dense(std::move(normal), std::move(rhs));
    if (!sol) {
      throw InvalidInput(
          "solve_optimum: normal equations are singular; the unconstrained "
          "minimiser is not unique");
    }
    opt.point = std::move(*sol);
  } else if (domain.kind() == DomainKind::ProbabilitySimplex &&
             problem.dimension() == 2) {
    // x = (s, 1 - s): <a, x> - b = (a0 - a1) s + (a1 - b), convex in s.
    double curvature = 0.0, slope = 0.0;
    for (std::size_t i = 0; i < problem.agents(); ++i) {
      const Vector& a = problem.features()[i];
      const double d = a[0] - a[1];
      const double e = a[1] - problem.targets()[i];
      curvature += d * d;
      slope += d * e;
    }
    const double s =
        curvature > 0.0 ? std::clamp(-slope / curvature, 0.0, 1.0) : 0.5;
    opt.point = {s, 1.0 - s};
  } else {
    opt.point = polish(problem, domain,
                       accelerated_projected_gradient(problem, domain));
  }
  opt.value = problem.objective(opt.point);
  return opt;
}

std::string serialize_instance(const Problem& problem) {
  if (problem.kind() != ProblemKind::LinearRegression) {
    throw InvalidInput("only regression instances are serialisable");
  }
  std::string out;
  for (std::size_t i = 0; i < problem.agents(); ++i) {
    for (double v : problem.features()[i]) {
      append_number(out, v);
      out += ' ';
    }
    append_number(out, problem.targets()[i]);
    out += '\n';
  }
  return out;
}

Problem parse_instance(std::string_view text) {
  std::vector<Vector> features;
  Vector targets;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream row(line);
    Vector values;
    std::string token;
    while (row >> token) {
      double v = 0.0;
      const auto [ptr, ec] =
          std::from_chars(token.data(), token.data() + token.size(), v);
      if (ec != std::errc() || ptr != token.data() + token.size()) {
        throw InvalidInput("instance line " + std::to_string(line_no) +
                           ": not a number: " + token);
      }
      values.push_back(v);
    }
    if (values.empty()) continue;
    if (values.size() < 2) {
      throw InvalidInput("instance line " + std::to_string(line_no) +
                         ": need at least one feature and a target");
    }
    targets.push_back(values.back());
    values.pop_back();
    features.push_back(std::move(values));
  }
  return Problem::linear_regression(std::move(features), std::move(targets));
}

void write_instance(const Problem& problem, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << serialize_instance(problem);
  if (!out) throw IoError("failed writing " + path.string());
}

Problem read_instance(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

}  // namespace fedsmd
