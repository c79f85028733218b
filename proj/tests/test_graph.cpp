#include <gtest/gtest.h>

#include <random>

#include "drfp/error.hpp"
#include "drfp/graph.hpp"
#include "support.hpp"

using namespace drfp;

namespace {

Matrix two_by_two() {
  Matrix a(2, 2);
  a << 0.5, 0.5, 0.25, 0.75;
  return a;
}

WeightMatrix complete_two(const Matrix& a) { return WeightMatrix(Digraph(2, {{0, 1}, {1, 0}}), a); }

void expect_error(ErrorCategory category, auto&& fn) {
  try {
    fn();
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), category) << e.what();
  }
}

}  // namespace

TEST(StronglyConnected, SingleNode) { EXPECT_TRUE(is_strongly_connected(Digraph(1))); }

TEST(StronglyConnected, ThreeCycle) {
  EXPECT_TRUE(is_strongly_connected(Digraph(3, {{1, 0}, {2, 1}, {0, 2}})));
}

TEST(StronglyConnected, OneWayPair) {
  // (1,2): node 1 receives from node 2 only.
  EXPECT_FALSE(is_strongly_connected(Digraph(2, {{0, 1}})));
}

TEST(JointConnectivity, HalvesOfACycle) {
  Digraph first(4, {{1, 0}, {2, 1}});
  Digraph second(4, {{3, 2}, {0, 3}});
  EXPECT_FALSE(is_strongly_connected(first));
  EXPECT_FALSE(is_strongly_connected(second));
  auto schedule = GraphSchedule::cycle({uniform_row_weights(first), uniform_row_weights(second)});
  EXPECT_TRUE(is_jointly_strongly_connected(schedule, 2));
  EXPECT_FALSE(is_jointly_strongly_connected(schedule, 1));
}

TEST(JointConnectivity, FixedStronglyConnected) {
  auto schedule = GraphSchedule::fixed(uniform_row_weights(Digraph(3, {{1, 0}, {2, 1}, {0, 2}})));
  EXPECT_TRUE(is_jointly_strongly_connected(schedule, 1));
}

TEST(JointConnectivity, NodeWithoutInEdges) {
  Digraph a(3, {{1, 0}, {2, 1}});
  Digraph b(3, {{2, 0}, {1, 2}});
  auto schedule = GraphSchedule::cycle({uniform_row_weights(a), uniform_row_weights(b)});
  EXPECT_FALSE(is_jointly_strongly_connected(schedule, 2));
  EXPECT_FALSE(is_jointly_strongly_connected(schedule, 10));
}

TEST(JointConnectivity, WindowZeroIsAnError) {
  auto schedule = GraphSchedule::fixed(uniform_row_weights(Digraph(1)));
  expect_error(ErrorCategory::config, [&] { is_jointly_strongly_connected(schedule, 0); });
}

TEST(JointConnectivity, WindowStraddlesPeriodBoundary) {
  // Pattern a a b: windows of 2 starting at round 1 see only a.
  Digraph a(3, {{1, 0}, {2, 1}});
  Digraph b(3, {{0, 2}});
  GraphSchedule schedule({uniform_row_weights(a), uniform_row_weights(b)}, {0, 0, 1});
  EXPECT_FALSE(is_jointly_strongly_connected(schedule, 2));
  EXPECT_TRUE(is_jointly_strongly_connected(schedule, 3));
}

TEST(UniformWeights, CompleteTwoNode) {
  auto a = uniform_row_weights(Digraph(2, {{0, 1}, {1, 0}}));
  EXPECT_TRUE(a.matrix().isApprox(Matrix::Constant(2, 2, 0.5)));
}

TEST(UniformWeights, SelfLoopOnly) {
  auto a = uniform_row_weights(Digraph(3, {{1, 0}}));
  EXPECT_DOUBLE_EQ(a(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(a(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(a(0, 2), 0.0);
  EXPECT_DOUBLE_EQ(a(1, 0), 0.5);
}

TEST(UniformWeights, ThreeCycle) {
  auto a = uniform_row_weights(Digraph(3, {{1, 0}, {2, 1}, {0, 2}}));
  for (Eigen::Index i = 0; i < 3; ++i) {
    int halves = 0;
    for (Eigen::Index j = 0; j < 3; ++j) halves += a.matrix()(i, j) == 0.5;
    EXPECT_EQ(halves, 2);
  }
}

TEST(WeightMatrix, RejectsBadInput) {
  Digraph g(2, {{0, 1}, {1, 0}});
  Matrix not_stochastic = Matrix::Constant(2, 2, 0.4);
  expect_error(ErrorCategory::graph, [&] { WeightMatrix(g, not_stochastic); });
  expect_error(ErrorCategory::graph, [&] { WeightMatrix(Digraph(2, {{1, 0}}), two_by_two()); });
  Matrix negative(2, 2);
  negative << 1.5, -0.5, 0.5, 0.5;
  expect_error(ErrorCategory::graph, [&] { WeightMatrix(g, negative); });
  expect_error(ErrorCategory::dimension, [&] { WeightMatrix(g, Matrix::Identity(3, 3)); });
}

TEST(Perron, DoublyStochastic) {
  Digraph complete(4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      if (i != j) complete.add_edge(i, j);
  auto pi = perron_vector(WeightMatrix(complete, Matrix::Constant(4, 4, 0.25)));
  for (Eigen::Index i = 0; i < 4; ++i) EXPECT_NEAR(pi.pi(i), 0.25, 1e-15);
}

TEST(Perron, TwoByTwo) {
  auto pi = perron_vector(complete_two(two_by_two()));
  const Vector oracle = test::perron_by_linear_solve(two_by_two());
  EXPECT_NEAR(oracle(0), 1.0 / 3.0, 1e-14);
  EXPECT_NEAR(pi.pi(0), oracle(0), 1e-12);
  EXPECT_NEAR(pi.pi(1), oracle(1), 1e-12);
}

TEST(Perron, ThreeNodeAgainstLinearSolve) {
  Digraph g(3, {{1, 0}, {2, 1}, {0, 2}, {2, 0}});
  Matrix a(3, 3);
  a << 0.6, 0.0, 0.4, 0.3, 0.7, 0.0, 0.2, 0.5, 0.3;
  auto pi = perron_vector(WeightMatrix(g, a));
  EXPECT_LT((pi.pi - test::perron_by_linear_solve(a)).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Perron, CapSignalsConvergenceFailure) {
  // Second eigenvalue -0.997: the iterate oscillates long past a 50-step cap.
  Matrix a(2, 2);
  a << 0.001, 0.999, 0.998, 0.002;
  PerronOptions opts;
  opts.max_iterations = 50;
  expect_error(ErrorCategory::convergence, [&] { perron_vector(complete_two(a), opts); });
  EXPECT_NO_THROW(perron_vector(complete_two(a)));
}

TEST(Balanced, Examples) {
  EXPECT_TRUE(is_balanced(complete_two(Matrix::Constant(2, 2, 0.5))));
  EXPECT_FALSE(is_balanced(complete_two(two_by_two())));
  EXPECT_TRUE(is_balanced(uniform_row_weights(Digraph(3))));
}

TEST(Contraction, RankOne) {
  auto a = complete_two(Matrix::Constant(2, 2, 0.5));
  EXPECT_NEAR(disagreement_contraction(a, perron_vector(a)), 0.0, 1e-12);
}

TEST(Contraction, TwoByTwo) {
  auto a = complete_two(two_by_two());
  const auto pi = perron_vector(a);
  const Matrix deflated = two_by_two() - Vector::Ones(2) * pi.pi.transpose();
  EXPECT_NEAR(test::spectral_radius(deflated), 0.25, 1e-12);
  EXPECT_NEAR(disagreement_contraction(a, pi), 0.25, 1e-9);
}

TEST(Properties, RandomGraphs) {
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<std::size_t> size(2, 20);
  for (int trial = 0; trial < 100; ++trial) {
    const Digraph g = test::random_strongly_connected(size(rng), rng, 0.15);
    ASSERT_TRUE(is_strongly_connected(g));
    const WeightMatrix a = trial % 2 ? uniform_row_weights(g) : test::random_weights(g, rng);
    // Pattern and row sums.
    for (std::size_t i = 0; i < g.size(); ++i) {
      EXPECT_NEAR(a.matrix().row(static_cast<Eigen::Index>(i)).sum(), 1.0, 1e-12);
      for (std::size_t j = 0; j < g.size(); ++j) {
        EXPECT_EQ(a(i, j) > 0.0, i == j || g.has_edge(i, j));
      }
    }
    const auto pi = perron_vector(a);
    EXPECT_LT((pi.pi.transpose() * a.matrix() - pi.pi.transpose()).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_GT(pi.pi.minCoeff(), 0.0);
    EXPECT_NEAR(pi.pi.sum(), 1.0, 1e-12);
    EXPECT_LT((pi.pi - test::perron_by_linear_solve(a.matrix())).cwiseAbs().maxCoeff(), 1e-9);
    const double rho = disagreement_contraction(a, pi);
    EXPECT_LT(rho, 1.0);
    const Matrix deflated = a.matrix() - Vector::Ones(a.matrix().rows()) * pi.pi.transpose();
    EXPECT_NEAR(rho, test::spectral_radius(deflated), 1e-6);
  }
}

TEST(Properties, BalancedImpliesUniformPerron) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    // Symmetric weights on an undirected graph are doubly stochastic.
    const std::size_t n = 3 + static_cast<std::size_t>(trial % 8);
    Digraph g = test::random_strongly_connected(n, rng, 0.2);
    for (const auto& [i, j] : g.edges()) g.add_edge(j, i);
    const auto nn = static_cast<Eigen::Index>(n);
    Matrix a = Matrix::Zero(nn, nn);
    std::size_t max_degree = 0;
    for (std::size_t i = 0; i < n; ++i) max_degree = std::max(max_degree, g.in_neighbors(i).size());
    for (const auto& [i, j] : g.edges()) {
      if (i != j) a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1.0 / static_cast<double>(max_degree);
    }
    for (Eigen::Index i = 0; i < nn; ++i) a(i, i) = 1.0 - a.row(i).sum();
    const WeightMatrix w(g, a);
    ASSERT_TRUE(is_balanced(w));
    EXPECT_LT((perron_vector(w).pi - Vector::Constant(nn, 1.0 / static_cast<double>(n))).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(EdgeList, ParsesAndRoundTrips) {
  const Digraph g = Digraph::parse_edge_list("# comment\nnodes 3\n2 1\n3 2\n\n1 3\n");
  EXPECT_TRUE(g.has_edge(1, 0));
  EXPECT_TRUE(g.has_edge(0, 2));
  EXPECT_FALSE(g.has_edge(0, 1));
  EXPECT_TRUE(g.has_edge(1, 1));
  EXPECT_EQ(Digraph::parse_edge_list(g.to_edge_list()), g);
}

TEST(EdgeList, Errors) {
  expect_error(ErrorCategory::graph, [] { Digraph::parse_edge_list("2 1\n"); });
  expect_error(ErrorCategory::graph, [] { Digraph::parse_edge_list("nodes 2\n3 1\n"); });
  expect_error(ErrorCategory::graph, [] { Digraph::parse_edge_list("nodes 2\n2 1 5\n"); });
  expect_error(ErrorCategory::graph, [] { Digraph::parse_edge_list(""); });
}

TEST(Schedule, PatternCyclesFromRoundOne) {
  auto a = uniform_row_weights(Digraph(2, {{1, 0}}));
  auto b = uniform_row_weights(Digraph(2, {{0, 1}}));
  GraphSchedule s({a, b}, {0, 1, 1});
  EXPECT_EQ(s.period(), 3u);
  EXPECT_EQ(s.at(1).graph(), a.graph());
  EXPECT_EQ(s.at(2).graph(), b.graph());
  EXPECT_EQ(s.at(3).graph(), b.graph());
  EXPECT_EQ(s.at(4).graph(), a.graph());
}

TEST(Schedule, PeriodProductIsRowStochastic) {
  auto a = uniform_row_weights(Digraph(3, {{1, 0}, {2, 1}}));
  auto b = uniform_row_weights(Digraph(3, {{0, 2}}));
  const auto s = GraphSchedule::cycle({a, b});
  const Matrix expected = b.matrix() * a.matrix();
  EXPECT_TRUE(s.period_product().matrix().isApprox(expected, 1e-14));
}
