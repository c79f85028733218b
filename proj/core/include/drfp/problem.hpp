#pragma once

#include <cstddef>
#include <vector>

#include "drfp/convex.hpp"
#include "drfp/linalg.hpp"

namespace drfp {

/// minimise sum_i f_i(x) over x in X subject to g_i^l(x) <= 0 for every
/// node i and each of its local constraints l.
struct Problem {
  std::size_t dim = 0;
  SimpleSet domain = SimpleSet::whole_space(0);
  std::vector<ConvexFn> objectives;
  std::vector<std::vector<ConvexFn>> constraints;

  std::size_t nodes() const { return objectives.size(); }

  /// Throws ErrorCategory::dimension / config on inconsistent data.
  void validate() const;

  double objective(const Vector& x) const;
  /// Largest positive part over all local constraints, together with the
  /// distance from x to the domain.
  double max_violation(const Vector& x) const;
};

/// Linear-objective reformulation over theta = (x, t) in R^(m + n):
///   minimise c^T theta,  c = [0_m; 1_n] / n
///   s.t. f_j(x) - t_j <= 0         (crucial, one per node)
///        g_j^l(x) <= 0             (relaxable)
///        theta in X x R^n
struct EpigraphProblem {
  std::size_t x_dim = 0;
  std::size_t nodes = 0;
  Vector cost;
  SimpleSet domain = SimpleSet::whole_space(0);
  std::vector<ConvexFn> crucial;
  std::vector<std::vector<ConvexFn>> relaxable;

  std::size_t dim() const { return x_dim + nodes; }

  /// Projection onto X x R^n: the x-block is projected, t is untouched.
  Vector project_theta(const Vector& theta) const;

  auto x_block(const Vector& theta) const {
    return theta.head(static_cast<Eigen::Index>(x_dim));
  }
  auto t_block(const Vector& theta) const {
    return theta.tail(static_cast<Eigen::Index>(nodes));
  }
};

EpigraphProblem epigraph_transform(const Problem& p);

/// Coordinate of theta that node `node_id` (1-based identifier) reads as its
/// own epigraph variable t_j, i.e. the support of e_j. Throws
/// ErrorCategory::config when the identifier is outside 1..n.
std::size_t node_identifier_check(const EpigraphProblem& p, std::size_t node_id);

}  // namespace drfp
