#include "drfp/problem.hpp"

#include <algorithm>
#include <string>

#include "drfp/error.hpp"

namespace drfp {

void Problem::validate() const {
  if (objectives.empty()) throw Error(ErrorCategory::config, "problem has no nodes");
  if (constraints.size() != objectives.size()) {
    throw Error(ErrorCategory::config, "constraint lists must match the node count");
  }
  if (domain.dim() != dim) {
    throw Error(ErrorCategory::dimension, "domain dimension does not match the problem");
  }
  for (std::size_t i = 0; i < objectives.size(); ++i) {
    if (objectives[i].dim() != dim) {
      throw Error(ErrorCategory::dimension,
                  "objective of node " + std::to_string(i + 1) + " has the wrong dimension");
    }
    for (const auto& g : constraints[i]) {
      if (g.dim() != dim) {
        throw Error(ErrorCategory::dimension,
                    "constraint of node " + std::to_string(i + 1) + " has the wrong dimension");
      }
    }
  }
}

double Problem::objective(const Vector& x) const {
  double total = 0.0;
  for (const auto& f : objectives) total += f.eval(x);
  return total;
}

double Problem::max_violation(const Vector& x) const {
  double worst = domain.distance(x);
  for (const auto& local : constraints) {
    for (const auto& g : local) worst = std::max(worst, positive_part(g, x));
  }
  return worst;
}

Vector EpigraphProblem::project_theta(const Vector& theta) const {
  Vector result = theta;
  const auto m = static_cast<Eigen::Index>(x_dim);
  result.head(m) = domain.project(theta.head(m));
  return result;
}

EpigraphProblem epigraph_transform(const Problem& p) {
  p.validate();
  const std::size_t m = p.dim;
  const std::size_t n = p.nodes();
  const std::size_t d = m + n;

  EpigraphProblem e;
  e.x_dim = m;
  e.nodes = n;
  e.domain = p.domain;
  e.cost = Vector::Zero(static_cast<Eigen::Index>(d));
  e.cost.tail(static_cast<Eigen::Index>(n)).setConstant(1.0 / static_cast<double>(n));

  e.crucial.reserve(n);
  e.relaxable.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    Vector minus_ej = Vector::Zero(static_cast<Eigen::Index>(d));
    minus_ej(static_cast<Eigen::Index>(m + j)) = -1.0;
    e.crucial.push_back(ConvexFn::lift(p.objectives[j], d, 0) +
                        ConvexFn::affine(std::move(minus_ej), 0.0));
    std::vector<ConvexFn> lifted;
    lifted.reserve(p.constraints[j].size());
    for (const auto& g : p.constraints[j]) lifted.push_back(ConvexFn::lift(g, d, 0));
    e.relaxable.push_back(std::move(lifted));
  }
  return e;
}

std::size_t node_identifier_check(const EpigraphProblem& p, std::size_t node_id) {
  if (node_id < 1 || node_id > p.nodes) {
    throw Error(ErrorCategory::config, "node identifier " + std::to_string(node_id) +
                                           " outside 1.." + std::to_string(p.nodes));
  }
  return p.x_dim + node_id - 1;
}

}  // namespace drfp
