#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "drfp/engine.hpp"
#include "drfp/graph.hpp"
#include "drfp/harness/instances.hpp"
#include "drfp/harness/oracle.hpp"
#include "drfp/problem.hpp"
#include "drfp/trace.hpp"

namespace drfp::harness {

enum class Algorithm { drfp, dgd, constrained_dgd, distributed_polyak_random };

std::string_view to_string(Algorithm algorithm);
Algorithm parse_algorithm(std::string_view name);

struct GraphSpec {
  std::string name;
  Digraph graph{1};
  /// Exact weights; equal-neighbor weights when absent.
  std::optional<Matrix> weights;
};

struct QuadraticSpec {
  std::vector<Vector> targets;
  std::vector<double> weights;
};

struct GeneratorSpec {
  std::size_t nodes = 0;
  std::uint64_t seed = 0;
  GeometryBounds bounds;
};

enum class ProblemKind { facility_location, quadratic };

/// One experiment, as read from an INI-style file (see configs/README.md).
struct ExperimentConfig {
  std::string name;
  Algorithm algorithm = Algorithm::drfp;
  std::uint64_t seed = 0;
  EngineOptions engine;

  ProblemKind problem_kind = ProblemKind::facility_location;
  /// Explicit facility instance; ignored when `generator` is set.
  FacilitySpec facility;
  std::optional<GeneratorSpec> generator;
  QuadraticSpec quadratic;

  std::vector<GraphSpec> graphs;
  /// Indices into `graphs`, cycled from round 1.
  std::vector<std::size_t> pattern;
  std::size_t window = 1;

  GridOptions oracle;
  std::filesystem::path output;

  /// Range checks; throws ErrorCategory::config.
  void validate() const;
};

/// Parses the INI text. Relative graph file paths resolve against `base_dir`.
ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

Problem build_problem(const ExperimentConfig& cfg);
GraphSchedule build_schedule(const ExperimentConfig& cfg);

struct Summary {
  std::string name;
  std::string algorithm;
  std::size_t iterations = 0;
  bool stopped_early = false;
  double consensus_residual = 0.0;
  /// Re-evaluated at theta_bar from the original constraints, not the trace.
  double feasibility_violation = 0.0;
  /// Final trace objective (c^T theta_bar, or F(x_bar) / n in x-space).
  double objective = 0.0;
  /// Network cost implied by the trace objective, n * objective.
  double cost_estimate = 0.0;
  /// F(x_bar) evaluated directly.
  double cost_at_average = 0.0;
  double oracle_value = 0.0;
  std::string oracle_method;
  /// |cost_estimate - oracle| / |oracle| (absolute when the oracle is 0).
  double relative_gap = 0.0;
  Vector x_average;
  /// DGD only: argmin sum_i pi_i f_i.
  std::optional<Vector> bias_prediction;

  std::string to_json() const;
};

struct ExperimentResult {
  RunTrace trace;
  OracleResult oracle;
  Summary summary;
};

struct ValidationReport {
  bool connected = false;
  bool balanced = false;
  std::size_t period = 1;
  std::size_t window = 1;
  OracleResult oracle;
};

/// Connectivity plus feasibility (via the oracle). Throws on failure.
ValidationReport validate_experiment(const ExperimentConfig& cfg);

/// Builds everything, runs the selected algorithm and the oracle.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Writes trace.csv, summary.json and (with thinning) states.csv under
/// cfg.output, creating the directory.
void write_outputs(const ExperimentConfig& cfg, const ExperimentResult& result);

/// Fixed-width table, one row per summary.
std::string comparison_table(const std::vector<Summary>& summaries);

}  // namespace drfp::harness
