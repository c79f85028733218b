#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "drfp/linalg.hpp"

namespace drfp {

struct TraceRow {
  std::size_t iter = 0;
  double consensus_residual = 0.0;
  double feasibility_violation = 0.0;
  double objective = 0.0;
};

struct StateRow {
  std::size_t iter = 0;
  std::size_t node = 0;
  Vector state;
};

/// Per-iteration metric log of a synchronous run. Metrics are taken at the
/// Perron-weighted network average theta_bar = sum_i pi_i theta_i.
struct RunTrace {
  std::vector<TraceRow> rows;
  /// Every `thinning`-th iteration, if requested.
  std::vector<StateRow> states;
  std::vector<Vector> final_states;
  Vector final_average;
  Vector weights;
  std::size_t iterations = 0;
  bool stopped_early = false;

  /// Header `iter,consensus_residual,feasibility_violation,objective`;
  /// shortest round-trip formatting for every double.
  void write_csv(std::ostream& out) const;
  /// Header `iter,node,s1,...,sd`; node is 1-based.
  void write_states_csv(std::ostream& out) const;
};

/// Appends rows to a RunTrace from the raw node states after each round.
class TraceRecorder {
 public:
  using Metric = std::function<double(const Vector&)>;

  TraceRecorder(Vector weights, Metric feasibility, Metric objective, std::size_t thinning,
                std::size_t record_stride = 1);

  Vector average(const std::vector<Vector>& states) const;
  double consensus_residual(const std::vector<Vector>& states, const Vector& average) const;

  /// Metrics of the states after round `iter`; throws on non-finite values.
  TraceRow measure(std::size_t iter, const std::vector<Vector>& states) const;
  /// Keeps the row when `iter` hits the record stride (or `force`) and the
  /// states when it hits the thinning stride.
  void store(const TraceRow& row, const std::vector<Vector>& states, bool force = false);
  RunTrace finish(std::vector<Vector> final_states, std::size_t iterations, bool stopped_early);

 private:
  Vector weights_;
  Metric feasibility_;
  Metric objective_;
  std::size_t thinning_;
  std::size_t stride_;
  RunTrace trace_;
};

/// Shortest representation that parses back to the same double.
std::string format_double(double value);

}  // namespace drfp
