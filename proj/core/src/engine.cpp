#include "drfp/engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "drfp/error.hpp"

namespace drfp {

StepSchedule::StepSchedule(double scale, double shift, double power)
    : scale_(scale), shift_(shift), power_(power) {
  if (!(scale > 0.0)) throw Error(ErrorCategory::config, "step scale must be positive");
  if (!(shift >= 0.0)) throw Error(ErrorCategory::config, "step shift must be nonnegative");
  if (!(power > 0.5 && power <= 1.0)) {
    throw Error(ErrorCategory::config, "step power must lie in (0.5, 1]");
  }
}

double StepSchedule::operator()(std::size_t k) const {
  const double base = static_cast<double>(k) + shift_;
  if (!(base > 0.0)) throw Error(ErrorCategory::config, "step size undefined at k + shift = 0");
  return scale_ / std::pow(base, power_);
}

RngStream::RngStream(std::uint64_t seed, std::size_t nodes) : seed_(seed) {
  streams_.reserve(nodes);
  for (std::size_t j = 0; j < nodes; ++j) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(j), 0x5eedu};
    streams_.emplace_back(seq);
  }
}

std::size_t RngStream::draw(std::size_t node, std::size_t count) {
  std::uniform_int_distribution<std::size_t> dist(0, count - 1);
  return dist(streams_.at(node));
}

void EngineOptions::validate() const {
  if (!(beta > 0.0 && beta < 2.0)) throw Error(ErrorCategory::config, "beta must lie in (0, 2)");
  if (max_iter < 1) throw Error(ErrorCategory::config, "max_iter must be at least 1");
  if (random_projections < 1) {
    throw Error(ErrorCategory::config, "at least one random projection per round is required");
  }
  if (!(divergence_bound > 0.0)) throw Error(ErrorCategory::config, "bad divergence bound");
}

std::vector<Vector> consensus_descent(const std::vector<Vector>& states, const WeightMatrix& a,
                                      const Vector& cost, double zeta) {
  if (states.size() != a.size()) {
    throw Error(ErrorCategory::dimension, "state count does not match the weight matrix");
  }
  for (const auto& s : states) {
    if (s.size() != cost.size()) {
      throw Error(ErrorCategory::dimension, "state dimension does not match the cost vector");
    }
  }
  std::vector<Vector> mixed;
  mixed.reserve(states.size());
  for (std::size_t j = 0; j < states.size(); ++j) {
    Vector p = -zeta * cost;
    for (std::size_t i : a.graph().in_neighbors(j)) p += a(j, i) * states[i];
    mixed.push_back(std::move(p));
  }
  return mixed;
}

PolyakResult random_projection(const Vector& p, std::span<const ConvexFn> constraints,
                               std::size_t omega, double beta) {
  if (omega >= constraints.size()) {
    throw Error(ErrorCategory::config, "selected constraint index out of range");
  }
  return polyak_step(p, constraints[omega], beta);
}

FixedProjectionResult fixed_projection(const Vector& q, const Vector& evaluation_point,
                                       const ConvexFn& crucial, const EpigraphProblem& problem,
                                       double beta) {
  if (!(beta > 0.0 && beta < 2.0)) throw Error(ErrorCategory::config, "beta must lie in (0, 2)");
  const double violation = positive_part(crucial, evaluation_point);
  if (violation == 0.0) return {problem.project_theta(q), 0.0, 0.0};
  const Vector v = crucial.subgrad(evaluation_point);
  const double norm_sq = v.squaredNorm();
  if (norm_sq == 0.0) {
    throw Error(ErrorCategory::config, "crucial constraint has a zero subgradient while violated");
  }
  const double coefficient = beta * violation / norm_sq;
  return {problem.project_theta(q - coefficient * v), violation, coefficient};
}

Vector consensus_weights(const GraphSchedule& schedule) {
  const WeightMatrix a = schedule.is_fixed() ? schedule.graphs().front()
                                             : schedule.period_product();
  return perron_vector(a).pi;
}

void require_connected(const GraphSchedule& schedule) {
  if (!is_jointly_strongly_connected(schedule, schedule.period())) {
    throw Error(ErrorCategory::graph,
                schedule.is_fixed() ? "digraph is not strongly connected"
                                    : "schedule is not jointly strongly connected over a period");
  }
}

double epigraph_violation(const EpigraphProblem& problem, const Vector& theta) {
  const auto m = static_cast<Eigen::Index>(problem.x_dim);
  double worst = problem.domain.distance(theta.head(m));
  for (std::size_t j = 0; j < problem.nodes; ++j) {
    worst = std::max(worst, positive_part(problem.crucial[j], theta));
    for (const auto& g : problem.relaxable[j]) worst = std::max(worst, positive_part(g, theta));
  }
  return worst;
}

namespace detail {

void check_divergence(const Vector& state, std::size_t node, std::size_t iter, double bound) {
  for (Eigen::Index c = 0; c < state.size(); ++c) {
    if (!std::isfinite(state(c)) || std::abs(state(c)) > bound) {
      throw Error(ErrorCategory::divergence,
                  "state of node " + std::to_string(node + 1) + " diverged at iteration " +
                      std::to_string(iter) + " (coordinate " + std::to_string(c + 1) + ")");
    }
  }
}

bool StopMonitor::update(const TraceRow& row) {
  if (!rule_.enabled) return false;
  const bool below = row.consensus_residual < rule_.consensus_tolerance &&
                     row.feasibility_violation < rule_.feasibility_tolerance;
  streak_ = below ? streak_ + 1 : 0;
  return streak_ >= rule_.patience;
}

}  // namespace detail

namespace {

std::size_t select_constraint(std::span<const ConvexFn> constraints, const Vector& point,
                              SelectionRule rule, RngStream& rng, std::size_t node) {
  if (rule == SelectionRule::uniform) return rng.draw(node, constraints.size());
  std::size_t best = 0;
  double best_distance = -1.0;
  for (std::size_t l = 0; l < constraints.size(); ++l) {
    const double d = polyak_distance(constraints[l], point);
    if (d > best_distance) {
      best_distance = d;
      best = l;
    }
  }
  return best;
}

}  // namespace

RunTrace run(const EpigraphProblem& problem, const GraphSchedule& schedule,
             const EngineOptions& options, std::uint64_t seed) {
  options.validate();
  if (schedule.size() != problem.nodes) {
    throw Error(ErrorCategory::dimension, "schedule node count does not match the problem");
  }
  require_connected(schedule);

  const std::size_t n = problem.nodes;
  const auto d = static_cast<Eigen::Index>(problem.dim());
  std::vector<Vector> states(n, Vector::Zero(d));
  RngStream rng(seed, n);

  TraceRecorder recorder(
      consensus_weights(schedule),
      [&problem](const Vector& avg) { return epigraph_violation(problem, avg); },
      [&problem](const Vector& avg) { return problem.cost.dot(avg); }, options.thinning,
      options.record_stride);
  detail::StopMonitor monitor(options.stopping);

  std::size_t k = 1;
  bool stopped = false;
  for (; k <= options.max_iter; ++k) {
    const std::vector<Vector> mixed =
        consensus_descent(states, schedule.at(k), problem.cost, options.steps(k));
    std::vector<Vector> next(n);
    for (std::size_t j = 0; j < n; ++j) {
      const Vector& p = mixed[j];
      const std::span<const ConvexFn> local(problem.relaxable[j]);
      Vector q = p;
      NodeUpdate update;
      update.iter = k;
      update.node = j;
      if (!local.empty()) {
        for (std::size_t r = 0; r < options.random_projections; ++r) {
          const std::size_t omega = select_constraint(local, q, options.selection, rng, j);
          PolyakResult step = random_projection(q, local, omega, options.beta);
          if (r == 0) {
            update.selected_constraint = omega;
            update.random_violation = step.violation;
            update.random_direction_norm_sq = step.direction_norm_sq;
          }
          q = std::move(step.point);
        }
      }
      const Vector& evaluation =
          options.crucial_evaluation == CrucialEvaluation::after_random_projection ? q : p;
      FixedProjectionResult fixed =
          fixed_projection(q, evaluation, problem.crucial[j], problem, options.beta);
      detail::check_divergence(fixed.state, j, k, options.divergence_bound);
      next[j] = std::move(fixed.state);
      if (options.observer) {
        update.consensus_point = &p;
        update.after_random = &q;
        update.next_state = &next[j];
        update.crucial_violation = fixed.violation;
        update.crucial_coefficient = fixed.coefficient;
        options.observer(update);
      }
    }
    states = std::move(next);
    const TraceRow row = recorder.measure(k, states);
    stopped = monitor.update(row);
    recorder.store(row, states, stopped || k == options.max_iter);
    if (stopped) break;
  }
  const std::size_t iterations = stopped ? k : options.max_iter;
  return recorder.finish(std::move(states), iterations, stopped);
}

}  // namespace drfp
