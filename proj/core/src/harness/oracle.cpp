#include "drfp/harness/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "drfp/baselines.hpp"
#include "drfp/error.hpp"

namespace drfp::harness {

std::string_view to_string(OracleMethod method) {
  switch (method) {
    case OracleMethod::grid:
      return "grid";
    case OracleMethod::centralized_projected_subgradient:
      return "centralized-projected-subgradient";
    case OracleMethod::closed_form:
      return "closed-form";
  }
  return "unknown";
}

namespace {

struct Box2 {
  Vector lower;
  Vector upper;
};

void intersect(std::optional<Box2>& box, const Vector& lower, const Vector& upper) {
  if (!box) {
    box = Box2{lower, upper};
  } else {
    box->lower = box->lower.cwiseMax(lower);
    box->upper = box->upper.cwiseMin(upper);
  }
}

void bound_by(std::optional<Box2>& box, const SimpleSet& set) {
  if (const auto* b = std::get_if<SimpleSet::Box>(&set.variant())) {
    intersect(box, b->lower, b->upper);
  } else if (const auto* ball = std::get_if<SimpleSet::Ball>(&set.variant())) {
    intersect(box, (ball->center.array() - ball->radius).matrix(),
              (ball->center.array() + ball->radius).matrix());
  }
}

Box2 search_box(const Problem& problem) {
  std::optional<Box2> box;
  bound_by(box, problem.domain);
  for (const auto& local : problem.constraints) {
    for (const auto& g : local) {
      if (auto set = g.as_simple_set()) bound_by(box, *set);
    }
  }
  if (!box) {
    throw Error(ErrorCategory::unsupported, "grid oracle needs a bounded domain or ball constraint");
  }
  if ((box->lower.array() > box->upper.array()).any()) {
    throw Error(ErrorCategory::infeasible, "constraint bounding boxes do not overlap");
  }
  return *box;
}

bool feasible(const Problem& problem, const Vector& x) {
  if (!problem.domain.contains(x)) return false;
  for (const auto& local : problem.constraints) {
    for (const auto& g : local) {
      if (g.eval(x) > 0.0) return false;
    }
  }
  return true;
}

struct Incumbent {
  Vector x;
  double value = std::numeric_limits<double>::infinity();
};

// Scans lower + h * (i, j) for i, j in [0, steps].
void scan(const Problem& problem, const Vector& lower, double h, long steps_x, long steps_y,
          Incumbent& best, std::size_t& evaluated) {
  Vector x(2);
  for (long i = 0; i <= steps_x; ++i) {
    x(0) = lower(0) + h * static_cast<double>(i);
    for (long j = 0; j <= steps_y; ++j) {
      x(1) = lower(1) + h * static_cast<double>(j);
      ++evaluated;
      if (!feasible(problem, x)) continue;
      const double value = problem.objective(x);
      if (value < best.value) {
        best.value = value;
        best.x = x;
      }
    }
  }
}

}  // namespace

OracleResult grid_oracle(const Problem& problem, const GridOptions& options) {
  problem.validate();
  if (problem.dim != 2) {
    throw Error(ErrorCategory::unsupported, "grid oracle handles planar problems only");
  }
  if (!(options.resolution > 0.0) || options.refinements < 0) {
    throw Error(ErrorCategory::config, "invalid grid oracle resolution");
  }
  const Box2 box = search_box(problem);
  const Vector side = box.upper - box.lower;
  double h = std::max(options.resolution * side.maxCoeff(), 1e-12);

  Incumbent best;
  std::size_t evaluated = 0;
  scan(problem, box.lower, h, static_cast<long>(std::ceil(side(0) / h)),
       static_cast<long>(std::ceil(side(1) / h)), best, evaluated);
  if (!std::isfinite(best.value)) {
    throw Error(ErrorCategory::infeasible,
                "no feasible grid point; the problem is infeasible or the grid too coarse");
  }

  constexpr long kHalfWidth = 50;
  for (int round = 0; round < options.refinements; ++round) {
    const double coarse = h;
    h /= 10.0;
    Vector lower = (best.x.array() - 5.0 * coarse).matrix().cwiseMax(box.lower);
    const Vector upper = (best.x.array() + 5.0 * coarse).matrix().cwiseMin(box.upper);
    const long sx = std::min(2 * kHalfWidth, static_cast<long>(std::ceil((upper(0) - lower(0)) / h)));
    const long sy = std::min(2 * kHalfWidth, static_cast<long>(std::ceil((upper(1) - lower(1)) / h)));
    scan(problem, lower, h, sx, sy, best, evaluated);
  }
  return {best.x, best.value, OracleMethod::grid, h, evaluated};
}

OracleResult centralized_subgradient_oracle(const Problem& problem,
                                            const SubgradientOracleOptions& options) {
  problem.validate();
  std::vector<ConvexFn> all;
  for (const auto& local : problem.constraints) all.insert(all.end(), local.begin(), local.end());

  Vector x = project_local(Vector::Zero(static_cast<Eigen::Index>(problem.dim)), problem.domain, all);
  Incumbent best{x, problem.objective(x)};
  for (std::size_t k = 1; k <= options.iterations; ++k) {
    Vector g = Vector::Zero(x.size());
    for (const auto& f : problem.objectives) g += f.subgrad(x);
    const double norm = g.norm();
    if (norm == 0.0) break;
    const double step = options.step_scale / std::sqrt(static_cast<double>(k));
    x = project_local(x - (step / norm) * g, problem.domain, all);
    const double value = problem.objective(x);
    if (value < best.value) {
      best.value = value;
      best.x = x;
    }
  }
  return {best.x, best.value, OracleMethod::centralized_projected_subgradient, 0.0,
          options.iterations};
}

OracleResult quadratic_oracle(const Problem& problem) {
  problem.validate();
  for (const auto& local : problem.constraints) {
    if (!local.empty()) throw Error(ErrorCategory::unsupported, "closed form needs no constraints");
  }
  if (!std::holds_alternative<SimpleSet::WholeSpace>(problem.domain.variant())) {
    throw Error(ErrorCategory::unsupported, "closed form needs an unconstrained domain");
  }
  const Vector uniform = Vector::Ones(static_cast<Eigen::Index>(problem.nodes()));
  const Vector xstar = dgd_bias_predictor(PerronVector{uniform}, problem.objectives);
  return {xstar, problem.objective(xstar), OracleMethod::closed_form, 0.0, 0};
}

OracleResult default_oracle(const Problem& problem, const GridOptions& grid) {
  const bool unconstrained =
      std::holds_alternative<SimpleSet::WholeSpace>(problem.domain.variant()) &&
      std::all_of(problem.constraints.begin(), problem.constraints.end(),
                  [](const auto& local) { return local.empty(); });
  if (unconstrained) {
    const bool quadratic =
        std::all_of(problem.objectives.begin(), problem.objectives.end(),
                    [](const ConvexFn& f) { return f.as_quadratic().has_value(); });
    if (quadratic) return quadratic_oracle(problem);
  }
  if (problem.dim == 2) return grid_oracle(problem, grid);
  return centralized_subgradient_oracle(problem);
}

}  // namespace drfp::harness
