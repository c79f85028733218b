#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "drfp/convex.hpp"
#include "drfp/graph.hpp"
#include "drfp/linalg.hpp"
#include "drfp/problem.hpp"
#include "drfp/trace.hpp"

namespace drfp {

/// zeta_k = scale / (k + shift)^power with 0.5 < power <= 1, which keeps the
/// sum divergent and the sum of squares finite.
class StepSchedule {
 public:
  StepSchedule() = default;
  StepSchedule(double scale, double shift, double power);

  double operator()(std::size_t k) const;

  double scale() const { return scale_; }
  double shift() const { return shift_; }
  double power() const { return power_; }

 private:
  double scale_ = 1.0;
  double shift_ = 0.0;
  double power_ = 1.0;
};

/// One independent generator per node, seeded from (seed, node), so the
/// draws of a node never depend on evaluation order.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::size_t nodes);

  /// Uniform on {0, ..., count - 1}.
  std::size_t draw(std::size_t node, std::size_t count);

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::vector<std::mt19937_64> streams_;
};

/// Where the crucial constraint is evaluated in the fixed projection.
enum class CrucialEvaluation {
  /// At the output of the random projection (the concrete D-RFP listing).
  after_random_projection,
  /// At the consensus point p_j, as in the generic recursion.
  at_consensus_point,
};

enum class SelectionRule { uniform, most_violated };

/// Stop once both metrics stay below their thresholds for `patience`
/// consecutive rounds.
struct StoppingRule {
  bool enabled = false;
  double consensus_tolerance = 1e-6;
  double feasibility_tolerance = 1e-6;
  std::size_t patience = 100;
};

/// Everything one node did in one round, for invariant checks.
struct NodeUpdate {
  std::size_t iter = 0;
  std::size_t node = 0;
  const Vector* consensus_point = nullptr;
  const Vector* after_random = nullptr;
  const Vector* next_state = nullptr;
  std::optional<std::size_t> selected_constraint;
  double random_violation = 0.0;
  double random_direction_norm_sq = 0.0;
  double crucial_violation = 0.0;
  /// beta * violation / ||v||^2, the multiplier of the crucial step.
  double crucial_coefficient = 0.0;
};

struct EngineOptions {
  double beta = 1.0;
  StepSchedule steps;
  std::size_t max_iter = 100000;
  /// Keep per-node states every `thinning` rounds; 0 disables.
  std::size_t thinning = 0;
  std::size_t record_stride = 1;
  CrucialEvaluation crucial_evaluation = CrucialEvaluation::after_random_projection;
  SelectionRule selection = SelectionRule::uniform;
  std::size_t random_projections = 1;
  StoppingRule stopping;
  double divergence_bound = 1e12;
  std::function<void(const NodeUpdate&)> observer;

  void validate() const;
};

/// p_j = sum_i a_ji theta_i - zeta * c for every j, from one frozen snapshot.
std::vector<Vector> consensus_descent(const std::vector<Vector>& states, const WeightMatrix& a,
                                      const Vector& cost, double zeta);

/// One Polyak step on constraint `omega` (0-based) of the node's list.
PolyakResult random_projection(const Vector& p, std::span<const ConvexFn> constraints,
                               std::size_t omega, double beta);

struct FixedProjectionResult {
  Vector state;
  double violation = 0.0;
  double coefficient = 0.0;
};

/// theta = Proj_Theta(q - beta * h(e)_+ / ||v||^2 * v), v a subgradient of the
/// crucial constraint h at the evaluation point e (either q or p).
FixedProjectionResult fixed_projection(const Vector& q, const Vector& evaluation_point,
                                       const ConvexFn& crucial, const EpigraphProblem& problem,
                                       double beta);

/// Perron weights used for theta_bar: those of the fixed matrix, or of the
/// product over one period for a switching schedule.
Vector consensus_weights(const GraphSchedule& schedule);

/// Validates strong connectivity of the schedule (joint over one period).
void require_connected(const GraphSchedule& schedule);

/// Largest positive part of every node's crucial and relaxable constraints
/// at theta, plus the distance of the x-block to X.
double epigraph_violation(const EpigraphProblem& problem, const Vector& theta);

/// Synchronous D-RFP simulation from x_j = 0, t_j = 0. Deterministic for a
/// fixed seed. Throws ErrorCategory::divergence naming the node and round
/// when a state leaves the divergence bound.
RunTrace run(const EpigraphProblem& problem, const GraphSchedule& schedule,
             const EngineOptions& options, std::uint64_t seed);

namespace detail {

void check_divergence(const Vector& state, std::size_t node, std::size_t iter, double bound);

/// Tracks the consecutive-rounds condition of a StoppingRule.
class StopMonitor {
 public:
  explicit StopMonitor(const StoppingRule& rule) : rule_(rule) {}
  bool update(const TraceRow& row);

 private:
  StoppingRule rule_;
  std::size_t streak_ = 0;
};

}  // namespace detail

}  // namespace drfp
