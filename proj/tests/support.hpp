#pragma once

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "drfp/graph.hpp"

namespace drfp::test {

// A random ring through a shuffled node order keeps it strongly connected;
// extra edges are sprinkled on top.
inline Digraph random_strongly_connected(std::size_t n, std::mt19937_64& rng, double density) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  Digraph g(n);
  for (std::size_t k = 0; k < n; ++k) g.add_edge(order[(k + 1) % n], order[k]);
  std::bernoulli_distribution extra(density);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && extra(rng)) g.add_edge(i, j);
  return g;
}

// Random positive weights on the edge pattern, rows normalised.
inline WeightMatrix random_weights(const Digraph& g, std::mt19937_64& rng) {
  const auto n = static_cast<Eigen::Index>(g.size());
  std::uniform_real_distribution<double> u(0.1, 1.0);
  Matrix a = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (std::size_t j : g.in_neighbors(static_cast<std::size_t>(i))) {
      a(i, static_cast<Eigen::Index>(j)) = u(rng);
    }
    a.row(i) /= a.row(i).sum();
  }
  return WeightMatrix(g, a);
}

// Dense oracle: solve pi^T (A - I) = 0 with sum(pi) = 1.
inline Vector perron_by_linear_solve(const Matrix& a) {
  const auto n = a.rows();
  Matrix m(n + 1, n);
  m.topRows(n) = (a - Matrix::Identity(n, n)).transpose();
  m.row(n).setOnes();
  Vector rhs = Vector::Zero(n + 1);
  rhs(n) = 1.0;
  return m.colPivHouseholderQr().solve(rhs);
}

inline double spectral_radius(const Matrix& m) {
  Eigen::EigenSolver<Matrix> es(m, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace drfp::test
