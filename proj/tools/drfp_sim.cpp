// drfp-sim: run, check and compare D-RFP experiments described by INI configs.

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "drfp/error.hpp"
#include "drfp/harness/experiment.hpp"

namespace {

using drfp::harness::ExperimentConfig;

constexpr int kUsageExit = 64;

void report_error(const drfp::Error& e) {
  nlohmann::ordered_json j;
  j["error"] = std::string(drfp::to_string(e.category()));
  j["message"] = e.what();
  std::cerr << j.dump() << '\n';
}

std::vector<double> to_std(const drfp::Vector& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

int cmd_run(const std::string& path, const std::string& output_override, bool quiet) {
  ExperimentConfig cfg = drfp::harness::load_config(path);
  if (!output_override.empty()) cfg.output = output_override;
  const auto result = drfp::harness::run_experiment(cfg);
  drfp::harness::write_outputs(cfg, result);
  if (!quiet) std::cout << result.summary.to_json() << '\n';
  return 0;
}

int cmd_oracle(const std::string& path) {
  const ExperimentConfig cfg = drfp::harness::load_config(path);
  const auto problem = drfp::harness::build_problem(cfg);
  const auto oracle = drfp::harness::default_oracle(problem, cfg.oracle);
  nlohmann::ordered_json j;
  j["method"] = std::string(drfp::harness::to_string(oracle.method));
  j["xstar"] = to_std(oracle.xstar);
  j["value"] = oracle.value;
  j["resolution"] = oracle.resolution;
  j["iterations"] = oracle.iterations;
  j["max_violation"] = problem.max_violation(oracle.xstar);
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_validate(const std::string& path) {
  const ExperimentConfig cfg = drfp::harness::load_config(path);
  const auto report = drfp::harness::validate_experiment(cfg);
  nlohmann::ordered_json j;
  j["config"] = path;
  j["connected"] = report.connected;
  j["balanced"] = report.balanced;
  j["period"] = report.period;
  j["window"] = report.window;
  j["feasible"] = true;
  j["oracle_value"] = report.oracle.value;
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_compare(const std::vector<std::string>& paths, const std::string& output_root) {
  std::vector<drfp::harness::Summary> summaries;
  for (const auto& path : paths) {
    ExperimentConfig cfg = drfp::harness::load_config(path);
    if (!output_root.empty()) cfg.output = std::filesystem::path(output_root) / cfg.name;
    const auto result = drfp::harness::run_experiment(cfg);
    if (!cfg.output.empty()) drfp::harness::write_outputs(cfg, result);
    summaries.push_back(result.summary);
  }
  std::cout << drfp::harness::comparison_table(summaries);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed random-fixed projected optimisation over digraphs"};
  app.require_subcommand(1);

  std::string config;
  std::string output;
  bool quiet = false;
  auto* run = app.add_subcommand("run", "Run one experiment and write trace.csv and summary.json");
  run->add_option("config", config, "Experiment config (INI)")->required();
  run->add_option("-o,--output", output, "Override the output directory");
  run->add_flag("-q,--quiet", quiet, "Do not print the summary");

  auto* oracle = app.add_subcommand("oracle", "Solve the problem centrally and print the optimum");
  oracle->add_option("config", config, "Experiment config (INI)")->required();

  auto* validate = app.add_subcommand("validate", "Check connectivity and feasibility only");
  validate->add_option("config", config, "Experiment config (INI)")->required();

  std::vector<std::string> configs;
  auto* compare = app.add_subcommand("compare", "Run several experiments and tabulate them");
  compare->add_option("configs", configs, "Experiment configs (INI)")->required();
  compare->add_option("-o,--output", output, "Write each run under DIR/<name>");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    nlohmann::ordered_json j;
    j["error"] = "usage";
    j["message"] = e.what();
    std::cerr << j.dump() << '\n';
    return kUsageExit;
  }

  try {
    if (run->parsed()) return cmd_run(config, output, quiet);
    if (oracle->parsed()) return cmd_oracle(config);
    if (validate->parsed()) return cmd_validate(config);
    if (compare->parsed()) return cmd_compare(configs, output);
  } catch (const drfp::Error& e) {
    report_error(e);
    return drfp::exit_code(e.category());
  } catch (const std::exception& e) {
    nlohmann::ordered_json j;
    j["error"] = "internal";
    j["message"] = e.what();
    std::cerr << j.dump() << '\n';
    return 1;
  }
  return 0;
}
