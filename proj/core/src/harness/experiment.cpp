#include "drfp/harness/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "drfp/baselines.hpp"
#include "drfp/error.hpp"

namespace drfp::harness {

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::drfp:
      return "drfp";
    case Algorithm::dgd:
      return "dgd";
    case Algorithm::constrained_dgd:
      return "constrained-dgd";
    case Algorithm::distributed_polyak_random:
      return "distributed-polyak-random";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  for (Algorithm a : {Algorithm::drfp, Algorithm::dgd, Algorithm::constrained_dgd,
                      Algorithm::distributed_polyak_random}) {
    if (to_string(a) == name) return a;
  }
  throw Error(ErrorCategory::config, "unknown algorithm '" + std::string(name) + "'");
}

Problem build_problem(const ExperimentConfig& cfg) {
  if (cfg.problem_kind == ProblemKind::quadratic) {
    return quadratic_problem(cfg.quadratic.targets, cfg.quadratic.weights);
  }
  if (cfg.generator) {
    std::mt19937_64 rng(cfg.generator->seed);
    return facility_location_problem(
        generate_facility_location(cfg.generator->nodes, rng, cfg.generator->bounds));
  }
  return facility_location_problem(cfg.facility);
}

GraphSchedule build_schedule(const ExperimentConfig& cfg) {
  std::vector<WeightMatrix> matrices;
  for (const auto& g : cfg.graphs) {
    try {
      matrices.push_back(g.weights ? WeightMatrix(g.graph, *g.weights)
                                   : uniform_row_weights(g.graph));
    } catch (const Error& e) {
      throw Error(e.category(), "[graph:" + g.name + "] " + e.what());
    }
  }
  return GraphSchedule(std::move(matrices), cfg.pattern);
}

namespace {

void check_connectivity(const ExperimentConfig& cfg, const GraphSchedule& schedule) {
  if (!is_jointly_strongly_connected(schedule, cfg.window)) {
    throw Error(ErrorCategory::graph,
                schedule.is_fixed()
                    ? "digraph is not strongly connected"
                    : "schedule is not jointly strongly connected over windows of " +
                          std::to_string(cfg.window) + " rounds");
  }
}

// Feasibility of theta_bar against the original constraints, evaluated
// directly rather than read from the trace.
double direct_violation(const Problem& problem, const Vector& average, bool epigraph) {
  const auto m = static_cast<Eigen::Index>(problem.dim);
  const Vector x = average.head(m);
  double worst = problem.max_violation(x);
  if (epigraph) {
    for (std::size_t j = 0; j < problem.nodes(); ++j) {
      const double t = average(m + static_cast<Eigen::Index>(j));
      worst = std::max(worst, problem.objectives[j].eval(x) - t);
    }
  }
  return worst;
}

}  // namespace

ValidationReport validate_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const Problem problem = build_problem(cfg);
  const GraphSchedule schedule = build_schedule(cfg);
  if (schedule.size() != problem.nodes()) {
    throw Error(ErrorCategory::dimension, "graph has " + std::to_string(schedule.size()) +
                                              " nodes but the problem has " +
                                              std::to_string(problem.nodes()));
  }
  check_connectivity(cfg, schedule);
  ValidationReport report;
  report.connected = true;
  report.balanced = std::all_of(schedule.graphs().begin(), schedule.graphs().end(),
                                [](const WeightMatrix& a) { return is_balanced(a); });
  report.period = schedule.period();
  report.window = cfg.window;
  report.oracle = default_oracle(problem, cfg.oracle);
  return report;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const Problem problem = build_problem(cfg);
  const GraphSchedule schedule = build_schedule(cfg);
  if (schedule.size() != problem.nodes()) {
    throw Error(ErrorCategory::dimension, "graph has " + std::to_string(schedule.size()) +
                                              " nodes but the problem has " +
                                              std::to_string(problem.nodes()));
  }
  check_connectivity(cfg, schedule);

  ExperimentResult result;
  const bool epigraph =
      cfg.algorithm == Algorithm::drfp || cfg.algorithm == Algorithm::distributed_polyak_random;
  switch (cfg.algorithm) {
    case Algorithm::drfp:
      result.trace = run(epigraph_transform(problem), schedule, cfg.engine, cfg.seed);
      break;
    case Algorithm::distributed_polyak_random:
      result.trace = run_distributed_polyak(epigraph_transform(problem), schedule, cfg.engine,
                                            cfg.seed);
      break;
    case Algorithm::dgd:
      result.trace = run_dgd(problem, schedule, cfg.engine);
      break;
    case Algorithm::constrained_dgd:
      result.trace = run_constrained_dgd(problem, schedule, cfg.engine);
      break;
  }
  result.oracle = default_oracle(problem, cfg.oracle);

  const RunTrace& trace = result.trace;
  const TraceRow& last = trace.rows.back();
  Summary& s = result.summary;
  s.name = cfg.name;
  s.algorithm = std::string(to_string(cfg.algorithm));
  s.iterations = trace.iterations;
  s.stopped_early = trace.stopped_early;
  s.consensus_residual = last.consensus_residual;
  s.feasibility_violation = std::max(0.0, direct_violation(problem, trace.final_average, epigraph));
  s.objective = last.objective;
  s.cost_estimate = static_cast<double>(problem.nodes()) * last.objective;
  s.x_average = trace.final_average.head(static_cast<Eigen::Index>(problem.dim));
  s.cost_at_average = problem.objective(s.x_average);
  s.oracle_value = result.oracle.value;
  s.oracle_method = std::string(to_string(result.oracle.method));
  const double gap = std::abs(s.cost_estimate - s.oracle_value);
  s.relative_gap = s.oracle_value != 0.0 ? gap / std::abs(s.oracle_value) : gap;
  if (cfg.algorithm == Algorithm::dgd) {
    try {
      s.bias_prediction = dgd_bias_predictor(PerronVector{trace.weights}, problem.objectives);
    } catch (const Error& e) {
      if (e.category() != ErrorCategory::unsupported) throw;
    }
  }
  return result;
}

std::string Summary::to_json() const {
  auto vec = [](const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
  nlohmann::ordered_json j;
  j["name"] = name;
  j["algorithm"] = algorithm;
  j["iterations"] = iterations;
  j["stopped_early"] = stopped_early;
  j["consensus_residual"] = consensus_residual;
  j["feasibility_violation"] = feasibility_violation;
  j["objective"] = objective;
  j["cost_estimate"] = cost_estimate;
  j["cost_at_average"] = cost_at_average;
  j["oracle_value"] = oracle_value;
  j["oracle_method"] = oracle_method;
  j["relative_gap"] = relative_gap;
  j["x_average"] = vec(x_average);
  if (bias_prediction) j["bias_prediction"] = vec(*bias_prediction);
  return j.dump(2);
}

void write_outputs(const ExperimentConfig& cfg, const ExperimentResult& result) {
  if (cfg.output.empty()) {
    throw Error(ErrorCategory::config, "[experiment] output: required to write results");
  }
  std::error_code ec;
  std::filesystem::create_directories(cfg.output, ec);
  if (ec) throw Error(ErrorCategory::io, "cannot create " + cfg.output.string() + ": " + ec.message());

  auto open = [](const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCategory::io, "cannot write " + path.string());
    return out;
  };
  {
    auto out = open(cfg.output / "trace.csv");
    result.trace.write_csv(out);
  }
  if (!result.trace.states.empty()) {
    auto out = open(cfg.output / "states.csv");
    result.trace.write_states_csv(out);
  }
  {
    auto out = open(cfg.output / "summary.json");
    out << result.summary.to_json() << '\n';
  }
}

std::string comparison_table(const std::vector<Summary>& summaries) {
  std::ostringstream out;
  out << std::left << std::setw(24) << "name" << std::setw(28) << "algorithm" << std::right
      << std::setw(10) << "iters" << std::setw(14) << "consensus" << std::setw(14)
      << "feasibility" << std::setw(14) << "cost" << std::setw(14) << "oracle" << std::setw(12)
      << "rel_gap" << '\n';
  out << std::setprecision(6);
  for (const auto& s : summaries) {
    out << std::left << std::setw(24) << s.name << std::setw(28) << s.algorithm << std::right
        << std::setw(10) << s.iterations << std::setw(14) << s.consensus_residual
        << std::setw(14) << s.feasibility_violation << std::setw(14) << s.cost_estimate
        << std::setw(14) << s.oracle_value << std::setw(12) << s.relative_gap << '\n';
  }
  return out.str();
}

}  // namespace drfp::harness
