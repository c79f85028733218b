#include "drfp/baselines.hpp"

#include <string>

#include "drfp/error.hpp"

namespace drfp {

std::string_view to_string(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::dgd:
      return "dgd";
    case BaselineKind::constrained_dgd:
      return "constrained-dgd";
    case BaselineKind::distributed_polyak_random:
      return "distributed-polyak-random";
  }
  return "unknown";
}

std::vector<Vector> dgd_step(const std::vector<Vector>& states, const WeightMatrix& a,
                             const std::vector<ConvexFn>& objectives, double zeta) {
  if (objectives.size() != states.size()) {
    throw Error(ErrorCategory::dimension, "one objective per node is required");
  }
  const Vector no_cost = Vector::Zero(states.front().size());
  std::vector<Vector> next = consensus_descent(states, a, no_cost, 0.0);
  for (std::size_t i = 0; i < next.size(); ++i) next[i] -= zeta * objectives[i].subgrad(states[i]);
  return next;
}

Vector dgd_bias_predictor(const PerronVector& pi, const std::vector<ConvexFn>& objectives) {
  if (static_cast<std::size_t>(pi.pi.size()) != objectives.size()) {
    throw Error(ErrorCategory::dimension, "Perron vector length does not match the node count");
  }
  // grad sum_i pi_i w_i ||x - c_i||^2 = 0  =>  x = sum pi_i w_i c_i / sum pi_i w_i
  Vector weighted = Vector::Zero(static_cast<Eigen::Index>(objectives.front().dim()));
  double total = 0.0;
  for (std::size_t i = 0; i < objectives.size(); ++i) {
    const auto q = objectives[i].as_quadratic();
    if (!q) {
      throw Error(ErrorCategory::unsupported,
                  "bias predictor needs isotropic quadratic objectives (node " +
                      std::to_string(i + 1) + ")");
    }
    const double w = pi.pi(static_cast<Eigen::Index>(i)) * q->weight;
    weighted += w * q->center;
    total += w;
  }
  if (!(total > 0.0)) {
    throw Error(ErrorCategory::unsupported, "weighted objective has no unique minimiser");
  }
  return weighted / total;
}

Vector project_local(const Vector& x, const SimpleSet& domain,
                     const std::vector<ConvexFn>& constraints,
                     const LocalProjectionOptions& options) {
  std::vector<SimpleSet> sets{domain};
  for (const auto& g : constraints) {
    auto set = g.as_simple_set();
    if (!set) {
      throw Error(ErrorCategory::unsupported,
                  "local projection supports only ball and halfspace constraints");
    }
    sets.push_back(std::move(*set));
  }

  Vector y = x;
  std::vector<Vector> increments(sets.size(), Vector::Zero(x.size()));
  for (std::size_t sweep = 0; sweep < options.max_sweeps; ++sweep) {
    const Vector start = y;
    for (std::size_t i = 0; i < sets.size(); ++i) {
      const Vector shifted = y + increments[i];
      y = sets[i].project(shifted);
      increments[i] = shifted - y;
    }
    if ((y - start).norm() < options.tolerance) {
      for (const auto& s : sets) {
        if (s.distance(y) > 1e-8) {
          throw Error(ErrorCategory::infeasible,
                      "alternating projections stalled outside the local feasible set");
        }
      }
      return y;
    }
  }
  throw Error(ErrorCategory::infeasible,
              "alternating projections did not converge; local feasible set is probably empty");
}

std::vector<Vector> constrained_dgd_step(const std::vector<Vector>& states, const WeightMatrix& a,
                                         const Problem& problem, double zeta,
                                         const LocalProjectionOptions& options) {
  std::vector<Vector> next = dgd_step(states, a, problem.objectives, zeta);
  for (std::size_t i = 0; i < next.size(); ++i) {
    next[i] = project_local(next[i], problem.domain, problem.constraints[i], options);
  }
  return next;
}

std::vector<Vector> distributed_polyak_step(const std::vector<Vector>& states,
                                            const WeightMatrix& a,
                                            const EpigraphProblem& problem, double zeta,
                                            double beta, RngStream& rng) {
  std::vector<Vector> next = consensus_descent(states, a, problem.cost, zeta);
  for (std::size_t j = 0; j < next.size(); ++j) {
    const auto& local = problem.relaxable[j];
    const std::size_t omega = rng.draw(j, local.size() + 1);
    const ConvexFn& selected = omega == 0 ? problem.crucial[j] : local[omega - 1];
    next[j] = problem.project_theta(polyak_step(next[j], selected, beta).point);
  }
  return next;
}

namespace {

// Shared synchronous loop: `step(k, states, a, zeta)` returns the next states.
template <class Step>
RunTrace run_rounds(const GraphSchedule& schedule, const EngineOptions& options,
                    std::vector<Vector> states, TraceRecorder::Metric feasibility,
                    TraceRecorder::Metric objective, Step&& step) {
  options.validate();
  require_connected(schedule);
  TraceRecorder recorder(consensus_weights(schedule), std::move(feasibility),
                         std::move(objective), options.thinning, options.record_stride);
  detail::StopMonitor monitor(options.stopping);
  std::size_t k = 1;
  bool stopped = false;
  for (; k <= options.max_iter; ++k) {
    states = step(k, states, schedule.at(k), options.steps(k));
    for (std::size_t j = 0; j < states.size(); ++j) {
      detail::check_divergence(states[j], j, k, options.divergence_bound);
    }
    const TraceRow row = recorder.measure(k, states);
    stopped = monitor.update(row);
    recorder.store(row, states, stopped || k == options.max_iter);
    if (stopped) break;
  }
  return recorder.finish(std::move(states), stopped ? k : options.max_iter, stopped);
}

void require_nodes(const GraphSchedule& schedule, std::size_t nodes) {
  if (schedule.size() != nodes) {
    throw Error(ErrorCategory::dimension, "schedule node count does not match the problem");
  }
}

}  // namespace

RunTrace run_dgd(const Problem& problem, const GraphSchedule& schedule,
                 const EngineOptions& options) {
  problem.validate();
  require_nodes(schedule, problem.nodes());
  const double n = static_cast<double>(problem.nodes());
  return run_rounds(
      schedule, options,
      std::vector<Vector>(problem.nodes(), Vector::Zero(static_cast<Eigen::Index>(problem.dim))),
      [&problem](const Vector& x) { return problem.max_violation(x); },
      [&problem, n](const Vector& x) { return problem.objective(x) / n; },
      [&problem](std::size_t, const std::vector<Vector>& states, const WeightMatrix& a,
                 double zeta) { return dgd_step(states, a, problem.objectives, zeta); });
}

RunTrace run_constrained_dgd(const Problem& problem, const GraphSchedule& schedule,
                             const EngineOptions& options,
                             const LocalProjectionOptions& projection) {
  problem.validate();
  require_nodes(schedule, problem.nodes());
  const double n = static_cast<double>(problem.nodes());
  return run_rounds(
      schedule, options,
      std::vector<Vector>(problem.nodes(), Vector::Zero(static_cast<Eigen::Index>(problem.dim))),
      [&problem](const Vector& x) { return problem.max_violation(x); },
      [&problem, n](const Vector& x) { return problem.objective(x) / n; },
      [&](std::size_t, const std::vector<Vector>& states, const WeightMatrix& a, double zeta) {
        return constrained_dgd_step(states, a, problem, zeta, projection);
      });
}

RunTrace run_distributed_polyak(const EpigraphProblem& problem, const GraphSchedule& schedule,
                                const EngineOptions& options, std::uint64_t seed) {
  require_nodes(schedule, problem.nodes);
  RngStream rng(seed, problem.nodes);
  return run_rounds(
      schedule, options,
      std::vector<Vector>(problem.nodes, Vector::Zero(static_cast<Eigen::Index>(problem.dim()))),
      [&problem](const Vector& theta) { return epigraph_violation(problem, theta); },
      [&problem](const Vector& theta) { return problem.cost.dot(theta); },
      [&](std::size_t, const std::vector<Vector>& states, const WeightMatrix& a, double zeta) {
        return distributed_polyak_step(states, a, problem, zeta, options.beta, rng);
      });
}

}  // namespace drfp
