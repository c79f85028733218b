#include "drfp/graph.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>

#include "drfp/error.hpp"

namespace drfp {

namespace {

void insert_sorted(std::vector<std::size_t>& list, std::size_t value) {
  auto it = std::lower_bound(list.begin(), list.end(), value);
  if (it == list.end() || *it != value) list.insert(it, value);
}

// Nodes reachable from `root` following `adjacency`.
std::vector<bool> reach(const Digraph& g, std::size_t root, bool along_out_edges) {
  std::vector<bool> seen(g.size(), false);
  std::vector<std::size_t> stack{root};
  seen[root] = true;
  while (!stack.empty()) {
    const std::size_t u = stack.back();
    stack.pop_back();
    const auto& next = along_out_edges ? g.out_neighbors(u) : g.in_neighbors(u);
    for (std::size_t v : next) {
      if (!seen[v]) {
        seen[v] = true;
        stack.push_back(v);
      }
    }
  }
  return seen;
}

}  // namespace

Digraph::Digraph(std::size_t nodes) : in_(nodes), out_(nodes) {
  if (nodes == 0) throw Error(ErrorCategory::graph, "digraph needs at least one node");
  for (std::size_t i = 0; i < nodes; ++i) {
    in_[i].push_back(i);
    out_[i].push_back(i);
  }
}

Digraph::Digraph(std::size_t nodes, const std::vector<Edge>& edges) : Digraph(nodes) {
  for (const auto& [receiver, sender] : edges) add_edge(receiver, sender);
}

void Digraph::add_edge(std::size_t receiver, std::size_t sender) {
  if (receiver >= size() || sender >= size()) {
    throw Error(ErrorCategory::graph, "edge (" + std::to_string(receiver + 1) + ", " +
                                          std::to_string(sender + 1) + ") out of range for " +
                                          std::to_string(size()) + " nodes");
  }
  insert_sorted(in_[receiver], sender);
  insert_sorted(out_[sender], receiver);
}

bool Digraph::has_edge(std::size_t receiver, std::size_t sender) const {
  const auto& list = in_[receiver];
  return std::binary_search(list.begin(), list.end(), sender);
}

std::vector<Digraph::Edge> Digraph::edges() const {
  std::vector<Edge> result;
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j : in_[i]) {
      if (j != i) result.emplace_back(i, j);
    }
  }
  return result;
}

std::string Digraph::to_edge_list() const {
  std::ostringstream out;
  out << "nodes " << size() << '\n';
  for (const auto& [i, j] : edges()) out << i + 1 << ' ' << j + 1 << '\n';
  return out.str();
}

Digraph Digraph::parse_edge_list(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t nodes = 0;
  std::vector<Edge> edges;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    if (nodes == 0) {
      std::string keyword;
      long long count = 0;
      if (!(fields >> keyword >> count) || keyword != "nodes" || count < 1) {
        throw Error(ErrorCategory::graph,
                    "edge list line " + std::to_string(line_no) + ": expected 'nodes N' header");
      }
      nodes = static_cast<std::size_t>(count);
      continue;
    }
    long long i = 0;
    long long j = 0;
    std::string rest;
    if (!(fields >> i >> j) || (fields >> rest)) {
      throw Error(ErrorCategory::graph,
                  "edge list line " + std::to_string(line_no) + ": expected 'i j'");
    }
    if (i < 1 || j < 1 || static_cast<std::size_t>(i) > nodes ||
        static_cast<std::size_t>(j) > nodes) {
      throw Error(ErrorCategory::graph,
                  "edge list line " + std::to_string(line_no) + ": node index out of range");
    }
    edges.emplace_back(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1));
  }
  if (nodes == 0) throw Error(ErrorCategory::graph, "edge list is missing the 'nodes N' header");
  return Digraph(nodes, edges);
}

Digraph Digraph::parse_edge_list(const std::string& text) {
  std::istringstream in(text);
  return parse_edge_list(in);
}

Digraph Digraph::united_with(const Digraph& other) const {
  if (other.size() != size()) {
    throw Error(ErrorCategory::dimension, "cannot unite digraphs of different sizes");
  }
  Digraph result = *this;
  for (const auto& [i, j] : other.edges()) result.add_edge(i, j);
  return result;
}

WeightMatrix::WeightMatrix(Digraph graph, Matrix weights)
    : graph_(std::move(graph)), a_(std::move(weights)) {
  const auto n = static_cast<Eigen::Index>(graph_.size());
  if (a_.rows() != n || a_.cols() != n) {
    throw Error(ErrorCategory::dimension, "weight matrix shape does not match the digraph");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double w = a_(i, j);
      const bool edge = graph_.has_edge(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      if (!std::isfinite(w) || w < 0.0 || (w > 0.0) != edge) {
        throw Error(ErrorCategory::graph, "weight a[" + std::to_string(i + 1) + "][" +
                                              std::to_string(j + 1) +
                                              "] is not adapted to the digraph");
      }
    }
    if (std::abs(a_.row(i).sum() - 1.0) > 1e-12) {
      throw Error(ErrorCategory::graph,
                  "row " + std::to_string(i + 1) + " of the weight matrix does not sum to 1");
    }
  }
}

GraphSchedule GraphSchedule::fixed(WeightMatrix weights) {
  return GraphSchedule({std::move(weights)}, {0});
}

GraphSchedule GraphSchedule::cycle(std::vector<WeightMatrix> graphs) {
  std::vector<std::size_t> pattern(graphs.size());
  for (std::size_t i = 0; i < pattern.size(); ++i) pattern[i] = i;
  return GraphSchedule(std::move(graphs), std::move(pattern));
}

GraphSchedule::GraphSchedule(std::vector<WeightMatrix> graphs, std::vector<std::size_t> pattern)
    : graphs_(std::move(graphs)), pattern_(std::move(pattern)) {
  if (graphs_.empty() || pattern_.empty()) {
    throw Error(ErrorCategory::graph, "graph schedule is empty");
  }
  for (const auto& w : graphs_) {
    if (w.size() != graphs_.front().size()) {
      throw Error(ErrorCategory::dimension, "graphs in a schedule must share the node count");
    }
  }
  for (std::size_t idx : pattern_) {
    if (idx >= graphs_.size()) {
      throw Error(ErrorCategory::graph, "schedule pattern refers to a missing graph");
    }
  }
}

const WeightMatrix& GraphSchedule::at(std::size_t round) const {
  const std::size_t slot = (round == 0 ? 0 : round - 1) % pattern_.size();
  return graphs_[pattern_[slot]];
}

WeightMatrix GraphSchedule::period_product() const {
  const auto n = static_cast<Eigen::Index>(size());
  Matrix product = Matrix::Identity(n, n);
  for (std::size_t round = 1; round <= period(); ++round) product = at(round).matrix() * product;
  // Re-normalise rows to absorb accumulated rounding.
  for (Eigen::Index i = 0; i < n; ++i) product.row(i) /= product.row(i).sum();
  Digraph pattern(size());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j && product(i, j) > 0.0) {
        pattern.add_edge(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      }
    }
  }
  return WeightMatrix(std::move(pattern), std::move(product));
}

bool is_strongly_connected(const Digraph& g) {
  const auto forward = reach(g, 0, true);
  const auto backward = reach(g, 0, false);
  return std::all_of(forward.begin(), forward.end(), [](bool b) { return b; }) &&
         std::all_of(backward.begin(), backward.end(), [](bool b) { return b; });
}

bool is_jointly_strongly_connected(const GraphSchedule& schedule, std::size_t window) {
  if (window < 1) throw Error(ErrorCategory::config, "connectivity window must be at least 1");
  const std::size_t period = schedule.period();
  for (std::size_t start = 1; start <= period; ++start) {
    Digraph joint = schedule.at(start).graph();
    for (std::size_t offset = 1; offset < window; ++offset) {
      joint = joint.united_with(schedule.at(start + offset).graph());
    }
    if (!is_strongly_connected(joint)) return false;
  }
  return true;
}

WeightMatrix uniform_row_weights(const Digraph& g) {
  const auto n = static_cast<Eigen::Index>(g.size());
  Matrix a = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto& in = g.in_neighbors(i);
    const double w = 1.0 / static_cast<double>(in.size());
    for (std::size_t j : in) a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = w;
  }
  return WeightMatrix(g, std::move(a));
}

PerronVector perron_vector(const WeightMatrix& a, const PerronOptions& options) {
  const auto n = static_cast<Eigen::Index>(a.size());
  const Matrix at = a.matrix().transpose();
  Vector pi = Vector::Constant(n, 1.0 / static_cast<double>(n));
  for (std::size_t iter = 0; iter < options.max_iterations; ++iter) {
    Vector next = at * pi;
    next /= next.sum();
    const double change = (next - pi).cwiseAbs().maxCoeff();
    pi = std::move(next);
    if (change < options.tolerance) {
      if (pi.minCoeff() <= 0.0) {
        throw Error(ErrorCategory::graph,
                    "Perron vector has a zero entry; the digraph is not strongly connected");
      }
      return {std::move(pi)};
    }
  }
  throw Error(ErrorCategory::convergence,
              "Perron power iteration did not converge after " +
                  std::to_string(options.max_iterations) +
                  " iterations; is the digraph strongly connected?");
}

bool is_balanced(const WeightMatrix& a, double tolerance) {
  const Vector column_sums = a.matrix().colwise().sum().transpose();
  return (column_sums.array() - 1.0).abs().maxCoeff() <= tolerance;
}

double disagreement_contraction(const WeightMatrix& a, const PerronVector& pi) {
  const auto n = static_cast<Eigen::Index>(a.size());
  const Matrix b = a.matrix() - Vector::Ones(n) * pi.pi.transpose();

  // Gelfand's formula on repeated squares: B^(2^s) = exp(log_scale) * m
  // with ||m|| = 1, so rho(B) = lim exp(log_scale / 2^s).
  double norm = b.norm();
  if (norm == 0.0) return 0.0;
  Matrix m = b / norm;
  double log_scale = std::log(norm);
  double power = 1.0;
  constexpr int kSquarings = 48;
  for (int s = 0; s < kSquarings; ++s) {
    Matrix squared = m * m;
    norm = squared.norm();
    if (norm == 0.0 || !std::isfinite(norm)) return 0.0;
    m = squared / norm;
    log_scale = 2.0 * log_scale + std::log(norm);
    power *= 2.0;
  }
  return std::exp(log_scale / power);
}

}  // namespace drfp
