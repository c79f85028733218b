#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "drfp/linalg.hpp"

namespace drfp {

/// Communication topology. Node indices are 0-based in the API; the
/// text edge-list format is 1-based. An edge (i, j) means node i receives
/// from node j. Every node is its own in- and out-neighbor.
class Digraph {
 public:
  using Edge = std::pair<std::size_t, std::size_t>;

  explicit Digraph(std::size_t nodes);
  Digraph(std::size_t nodes, const std::vector<Edge>& edges);

  /// Parses `nodes N` followed by `i j` lines (1-based). Blank lines and
  /// lines starting with '#' are skipped.
  static Digraph parse_edge_list(std::istream& in);
  static Digraph parse_edge_list(const std::string& text);

  void add_edge(std::size_t receiver, std::size_t sender);

  std::size_t size() const { return in_.size(); }
  bool has_edge(std::size_t receiver, std::size_t sender) const;

  /// Sorted, self included.
  const std::vector<std::size_t>& in_neighbors(std::size_t node) const { return in_[node]; }
  const std::vector<std::size_t>& out_neighbors(std::size_t node) const { return out_[node]; }

  /// Edges excluding the implicit self-loops, 0-based.
  std::vector<Edge> edges() const;
  std::string to_edge_list() const;

  Digraph united_with(const Digraph& other) const;

  friend bool operator==(const Digraph&, const Digraph&) = default;

 private:
  std::vector<std::vector<std::size_t>> in_;
  std::vector<std::vector<std::size_t>> out_;
};

/// Row-stochastic matrix whose sparsity pattern is exactly the digraph
/// plus the diagonal.
class WeightMatrix {
 public:
  /// Validates pattern, nonnegativity and unit row sums (tolerance 1e-12).
  WeightMatrix(Digraph graph, Matrix weights);

  const Matrix& matrix() const { return a_; }
  const Digraph& graph() const { return graph_; }
  std::size_t size() const { return graph_.size(); }
  double operator()(std::size_t i, std::size_t j) const { return a_(i, j); }

 private:
  Digraph graph_;
  Matrix a_;
};

struct PerronVector {
  Vector pi;
};

struct PerronOptions {
  double tolerance = 1e-13;
  std::size_t max_iterations = 100000;
};

/// A finite list of weight matrices cycled by a repeating pattern. Round k
/// (1-based) uses graphs[pattern[(k - 1) % pattern.size()]], so a pattern
/// {0, 1} puts the first graph at odd rounds and the second at even ones.
class GraphSchedule {
 public:
  static GraphSchedule fixed(WeightMatrix weights);
  static GraphSchedule cycle(std::vector<WeightMatrix> graphs);
  GraphSchedule(std::vector<WeightMatrix> graphs, std::vector<std::size_t> pattern);

  const WeightMatrix& at(std::size_t round) const;
  std::size_t period() const { return pattern_.size(); }
  std::size_t size() const { return graphs_.front().size(); }
  bool is_fixed() const { return graphs_.size() == 1; }

  const std::vector<WeightMatrix>& graphs() const { return graphs_; }
  const std::vector<std::size_t>& pattern() const { return pattern_; }

  /// Product A(P) ... A(1) over one period, adapted to the union graph.
  WeightMatrix period_product() const;

 private:
  std::vector<WeightMatrix> graphs_;
  std::vector<std::size_t> pattern_;
};

bool is_strongly_connected(const Digraph& g);

/// True iff the union of every `window` consecutive rounds is strongly
/// connected. Checking the starts within one period is sufficient.
bool is_jointly_strongly_connected(const GraphSchedule& schedule, std::size_t window);

/// Equal-neighbor rule: a[i][j] = 1 / |N_i^in| over in-neighbors (self included).
WeightMatrix uniform_row_weights(const Digraph& g);

/// Left power iteration from the uniform vector. Throws
/// ErrorCategory::convergence when the cap is hit, which in practice means
/// the graph is not strongly connected.
PerronVector perron_vector(const WeightMatrix& a, const PerronOptions& options = {});

/// A is also column-stochastic within `tolerance`.
bool is_balanced(const WeightMatrix& a, double tolerance = 1e-12);

/// Spectral radius of A - 1 pi^T.
double disagreement_contraction(const WeightMatrix& a, const PerronVector& pi);

}  // namespace drfp
