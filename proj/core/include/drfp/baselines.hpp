#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "drfp/convex.hpp"
#include "drfp/engine.hpp"
#include "drfp/graph.hpp"
#include "drfp/problem.hpp"
#include "drfp/trace.hpp"

namespace drfp {

enum class BaselineKind { dgd, constrained_dgd, distributed_polyak_random };

std::string_view to_string(BaselineKind kind);

/// x_i <- sum_j a_ij x_j - zeta * grad f_i(x_i), subgradient taken at the
/// node's own previous state.
std::vector<Vector> dgd_step(const std::vector<Vector>& states, const WeightMatrix& a,
                             const std::vector<ConvexFn>& objectives, double zeta);

/// argmin sum_i pi_i f_i for isotropic quadratics f_i; the point DGD settles
/// at on a fixed digraph. Throws ErrorCategory::unsupported otherwise.
Vector dgd_bias_predictor(const PerronVector& pi, const std::vector<ConvexFn>& objectives);

struct LocalProjectionOptions {
  double tolerance = 1e-10;
  std::size_t max_sweeps = 10000;
};

/// Euclidean projection onto X intersected with the sublevel sets of the
/// given constraints, by Dykstra's alternating projections. Every constraint
/// must be a ball or halfspace (see ConvexFn::as_simple_set). Throws
/// ErrorCategory::infeasible when the sweeps stall outside the intersection.
Vector project_local(const Vector& x, const SimpleSet& domain,
                     const std::vector<ConvexFn>& constraints,
                     const LocalProjectionOptions& options = {});

/// Consensus, local subgradient step, then projection onto the node's own
/// feasible set.
std::vector<Vector> constrained_dgd_step(const std::vector<Vector>& states, const WeightMatrix& a,
                                         const Problem& problem, double zeta,
                                         const LocalProjectionOptions& options = {});

/// D-RFP round with the crucial constraint moved into the random pool:
/// omega is uniform on {0, ..., tau_j}, 0 picks the crucial constraint, and
/// no fixed projection follows. The result is projected onto X x R^n.
std::vector<Vector> distributed_polyak_step(const std::vector<Vector>& states,
                                            const WeightMatrix& a,
                                            const EpigraphProblem& problem, double zeta,
                                            double beta, RngStream& rng);

/// Runs in x-space. The recorded objective is F(x_bar) / n, the value the
/// epigraph objective takes at a tight t, so traces are comparable with D-RFP.
RunTrace run_dgd(const Problem& problem, const GraphSchedule& schedule,
                 const EngineOptions& options);
RunTrace run_constrained_dgd(const Problem& problem, const GraphSchedule& schedule,
                             const EngineOptions& options,
                             const LocalProjectionOptions& projection = {});
RunTrace run_distributed_polyak(const EpigraphProblem& problem, const GraphSchedule& schedule,
                                const EngineOptions& options, std::uint64_t seed);

}  // namespace drfp
