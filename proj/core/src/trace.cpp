#include "drfp/trace.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <string>

#include "drfp/error.hpp"

namespace drfp {

std::string format_double(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

void RunTrace::write_csv(std::ostream& out) const {
  out << "iter,consensus_residual,feasibility_violation,objective\n";
  for (const auto& row : rows) {
    out << row.iter << ',' << format_double(row.consensus_residual) << ','
        << format_double(row.feasibility_violation) << ',' << format_double(row.objective)
        << '\n';
  }
}

void RunTrace::write_states_csv(std::ostream& out) const {
  out << "iter,node";
  const Eigen::Index dim = states.empty() ? 0 : states.front().state.size();
  for (Eigen::Index c = 0; c < dim; ++c) out << ",s" << c + 1;
  out << '\n';
  for (const auto& row : states) {
    out << row.iter << ',' << row.node + 1;
    for (Eigen::Index c = 0; c < row.state.size(); ++c) out << ',' << format_double(row.state(c));
    out << '\n';
  }
}

TraceRecorder::TraceRecorder(Vector weights, Metric feasibility, Metric objective,
                             std::size_t thinning, std::size_t record_stride)
    : weights_(std::move(weights)),
      feasibility_(std::move(feasibility)),
      objective_(std::move(objective)),
      thinning_(thinning),
      stride_(record_stride == 0 ? 1 : record_stride) {
  trace_.weights = weights_;
}

Vector TraceRecorder::average(const std::vector<Vector>& states) const {
  Vector avg = Vector::Zero(states.front().size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    avg += weights_(static_cast<Eigen::Index>(i)) * states[i];
  }
  return avg;
}

double TraceRecorder::consensus_residual(const std::vector<Vector>& states,
                                         const Vector& average) const {
  double worst = 0.0;
  for (const auto& s : states) worst = std::max(worst, (s - average).norm());
  return worst;
}

TraceRow TraceRecorder::measure(std::size_t iter, const std::vector<Vector>& states) const {
  const Vector avg = average(states);
  TraceRow row{iter, consensus_residual(states, avg), feasibility_(avg), objective_(avg)};
  if (!std::isfinite(row.consensus_residual) || !std::isfinite(row.feasibility_violation) ||
      !std::isfinite(row.objective)) {
    throw Error(ErrorCategory::divergence,
                "non-finite trace metric at iteration " + std::to_string(iter));
  }
  return row;
}

void TraceRecorder::store(const TraceRow& row, const std::vector<Vector>& states, bool force) {
  if (force || row.iter % stride_ == 0) trace_.rows.push_back(row);
  if (thinning_ > 0 && row.iter % thinning_ == 0) {
    for (std::size_t j = 0; j < states.size(); ++j) {
      trace_.states.push_back({row.iter, j, states[j]});
    }
  }
}

RunTrace TraceRecorder::finish(std::vector<Vector> final_states, std::size_t iterations,
                               bool stopped_early) {
  trace_.final_average = average(final_states);
  trace_.final_states = std::move(final_states);
  trace_.iterations = iterations;
  trace_.stopped_early = stopped_early;
  return std::move(trace_);
}

}  // namespace drfp
