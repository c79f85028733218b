#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "drfp/error.hpp"
#include "drfp/harness/instances.hpp"
#include "drfp/harness/oracle.hpp"
#include "drfp/problem.hpp"

using namespace drfp;

namespace {

Vector v2(double a, double b) { return (Vector(2) << a, b).finished(); }

Vector theta_of(const Vector& x, const Vector& t) {
  Vector theta(x.size() + t.size());
  theta << x, t;
  return theta;
}

harness::FacilitySpec two_node_spec() {
  harness::FacilitySpec s;
  s.anchors = {v2(4, 0), v2(0, 3)};
  s.weights = {1.0, 2.0};
  s.centers1 = {v2(0, 0), v2(0, 0)};
  s.radii1 = {2.0, 2.5};
  s.centers2 = {v2(1, 0), v2(-0.5, 0.5)};
  s.radii2 = {2.0, 3.0};
  return s;
}

}  // namespace

TEST(Epigraph, ScalarQuadratic) {
  Problem p;
  p.dim = 1;
  p.domain = SimpleSet::whole_space(1);
  p.objectives = {ConvexFn::squared_distance(Vector::Zero(1), 1.0)};
  p.constraints = {{}};
  const EpigraphProblem e = epigraph_transform(p);
  EXPECT_EQ(e.dim(), 2u);
  EXPECT_EQ(e.cost, v2(0, 1));
  // minimise t subject to x^2 <= t: (0, 0) is feasible and every feasible
  // point has t >= 0.
  EXPECT_LE(e.crucial[0].eval(v2(0, 0)), 0.0);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int k = 0; k < 200; ++k) {
    const Vector theta = v2(u(rng), u(rng));
    if (e.crucial[0].eval(theta) <= 0.0) EXPECT_GE(e.cost.dot(theta), 0.0);
  }
}

TEST(Epigraph, FacilityStructure) {
  const Problem p = harness::facility_location_problem(harness::default_facility_instance());
  const EpigraphProblem e = epigraph_transform(p);
  const std::size_t n = p.nodes();
  EXPECT_EQ(e.dim(), 2 + n);
  EXPECT_EQ(e.cost.head(2), Vector::Zero(2));
  for (std::size_t j = 0; j < n; ++j) EXPECT_DOUBLE_EQ(e.cost(2 + static_cast<Eigen::Index>(j)), 1.0 / static_cast<double>(n));

  std::size_t tau = 0;
  for (const auto& g : p.constraints) tau += g.size();
  std::size_t relaxable = 0;
  for (const auto& g : e.relaxable) relaxable += g.size();
  EXPECT_EQ(relaxable, tau);

  // Crucial subgradient has the shape (v_j, -e_j).
  const Vector theta = theta_of(v2(0.3, -0.7), Vector::Constant(static_cast<Eigen::Index>(n), 0.1));
  for (std::size_t j = 0; j < n; ++j) {
    const Vector u = e.crucial[j].subgrad(theta);
    const Vector v = p.objectives[j].subgrad(v2(0.3, -0.7));
    EXPECT_LT((u.head(2) - v).norm(), 1e-15);
    Vector ej = Vector::Zero(static_cast<Eigen::Index>(n));
    ej(static_cast<Eigen::Index>(j)) = -1.0;
    EXPECT_EQ(u.tail(static_cast<Eigen::Index>(n)), ej);
    EXPECT_NEAR(u.squaredNorm(), v.squaredNorm() + 1.0, 1e-14);
  }
}

TEST(Epigraph, TightPairsAreFeasibleAndPriced) {
  const Problem p = harness::facility_location_problem(harness::default_facility_instance());
  const EpigraphProblem e = epigraph_transform(p);
  const auto n = static_cast<double>(p.nodes());
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-3, 3);
  int feasible = 0;
  for (int k = 0; k < 500; ++k) {
    const Vector x = v2(u(rng), u(rng));
    if (p.max_violation(x) > 0.0) continue;
    ++feasible;
    Vector t(static_cast<Eigen::Index>(p.nodes()));
    for (std::size_t j = 0; j < p.nodes(); ++j) t(static_cast<Eigen::Index>(j)) = p.objectives[j].eval(x);
    const Vector theta = theta_of(x, t);
    for (std::size_t j = 0; j < p.nodes(); ++j) {
      EXPECT_LE(e.crucial[j].eval(theta), 1e-15);
      for (const auto& g : e.relaxable[j]) EXPECT_LE(g.eval(theta), 0.0);
    }
    EXPECT_NEAR(n * e.cost.dot(theta), p.objective(x), 1e-12);
  }
  EXPECT_GT(feasible, 20);
}

TEST(Epigraph, OptimumMatchesGridOracleOnTwoNodes) {
  const Problem p = harness::facility_location_problem(two_node_spec());
  const EpigraphProblem e = epigraph_transform(p);
  // Independent brute force over x with t tight.
  double best = std::numeric_limits<double>::infinity();
  Vector best_x;
  const double h = 2e-3;
  for (double x = -2.5; x <= 2.5; x += h) {
    for (double y = -2.5; y <= 2.5; y += h) {
      const Vector pt = v2(x, y);
      if (p.max_violation(pt) > 0.0) continue;
      const Vector t = v2(p.objectives[0].eval(pt), p.objectives[1].eval(pt));
      const double value = 2.0 * e.cost.dot(theta_of(pt, t));
      if (value < best) {
        best = value;
        best_x = pt;
      }
    }
  }
  const auto oracle = harness::grid_oracle(p);
  // Lipschitz constant of the objective is sum w = 3.
  EXPECT_NEAR(best, oracle.value, 3.0 * h * std::sqrt(2.0));
  EXPECT_LE(oracle.value, best + 1e-12);
  EXPECT_LE(p.max_violation(oracle.xstar), 1e-9);
}

TEST(NodeIdentifier, Selectors) {
  Problem p;
  p.dim = 2;
  p.domain = SimpleSet::whole_space(2);
  p.objectives.assign(3, subgrad_norm_affine(v2(0, 0), 1.0));
  p.constraints.assign(3, {});
  const EpigraphProblem e = epigraph_transform(p);
  EXPECT_EQ(node_identifier_check(e, 1), 2u);
  EXPECT_EQ(node_identifier_check(e, 3), e.dim() - 1);
  try {
    node_identifier_check(e, 0);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.category(), ErrorCategory::config);
  }
  EXPECT_THROW(node_identifier_check(e, 4), Error);
}

TEST(Problem, ValidateRejectsMismatches) {
  Problem p;
  p.dim = 2;
  p.domain = SimpleSet::whole_space(2);
  p.objectives = {subgrad_norm_affine(Vector::Zero(3), 1.0)};
  p.constraints = {{}};
  EXPECT_THROW(p.validate(), Error);
  p.objectives = {subgrad_norm_affine(Vector::Zero(2), 1.0)};
  p.constraints = {};
  EXPECT_THROW(p.validate(), Error);
  p.objectives.clear();
  EXPECT_THROW(p.validate(), Error);
}

TEST(Problem, ProjectThetaActsOnXOnly) {
  Problem p;
  p.dim = 2;
  p.domain = SimpleSet::box(v2(0, 0), v2(1, 1));
  p.objectives = {subgrad_norm_affine(v2(0, 0), 1.0)};
  p.constraints = {{}};
  const EpigraphProblem e = epigraph_transform(p);
  const Vector out = e.project_theta((Vector(3) << 2.0, -1.0, -50.0).finished());
  EXPECT_EQ(out, (Vector(3) << 1.0, 0.0, -50.0).finished());
}
