#pragma once

#include <cstddef>
#include <string_view>

#include "drfp/linalg.hpp"
#include "drfp/problem.hpp"

namespace drfp::harness {

enum class OracleMethod { grid, centralized_projected_subgradient, closed_form };

std::string_view to_string(OracleMethod method);

/// Centralised reference optimum of a Problem.
struct OracleResult {
  Vector xstar;
  double value = 0.0;
  OracleMethod method = OracleMethod::grid;
  /// Final grid spacing (grid) or 0.
  double resolution = 0.0;
  /// Iterations (subgradient) or evaluated grid points (grid).
  std::size_t iterations = 0;
};

struct GridOptions {
  /// Initial spacing as a fraction of the longer bounding-box side.
  double resolution = 1e-3;
  /// Each round shrinks the spacing tenfold around the incumbent.
  int refinements = 3;
};

/// Exhaustive search over the bounding box of a planar problem, keeping the
/// best point that satisfies every constraint exactly, then local refinement.
/// Throws ErrorCategory::infeasible when no grid point is feasible.
OracleResult grid_oracle(const Problem& problem, const GridOptions& options = {});

struct SubgradientOracleOptions {
  std::size_t iterations = 1000000;
  /// Step length scale; the k-th step is scale / sqrt(k) along -g / ||g||.
  double step_scale = 1.0;
};

/// Projected subgradient method on the whole problem, projecting onto the
/// full intersection with Dykstra sweeps, returning the best iterate.
OracleResult centralized_subgradient_oracle(const Problem& problem,
                                            const SubgradientOracleOptions& options = {});

/// Closed-form minimiser for unconstrained sums of isotropic quadratics.
OracleResult quadratic_oracle(const Problem& problem);

/// Picks closed form, grid (planar) or projected subgradient, in that order.
OracleResult default_oracle(const Problem& problem, const GridOptions& grid = {});

}  // namespace drfp::harness
