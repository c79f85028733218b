#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "drfp/error.hpp"
#include "drfp/harness/experiment.hpp"

namespace drfp::harness {

namespace pt = boost::property_tree;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw Error(ErrorCategory::config, where + ": " + what);
}

// Flat view of one INI section with typed accessors and unknown-key checks.
class Section {
 public:
  Section(std::string name, const pt::ptree* tree) : name_(std::move(name)), tree_(tree) {}

  bool present() const { return tree_ != nullptr; }
  bool has(const std::string& key) const {
    return tree_ != nullptr && tree_->find(key) != tree_->not_found();
  }

  std::string text(const std::string& key) const {
    if (!has(key)) fail(where(key), "missing required key");
    return tree_->get<std::string>(pt::ptree::path_type(key, '\0'));
  }
  std::string text(const std::string& key, const std::string& fallback) const {
    return has(key) ? text(key) : fallback;
  }

  double real(const std::string& key) const { return parse_real(key, text(key)); }
  double real(const std::string& key, double fallback) const {
    return has(key) ? real(key) : fallback;
  }

  std::uint64_t integer(const std::string& key) const {
    const std::string raw = text(key);
    std::size_t used = 0;
    unsigned long long value = 0;
    try {
      if (!raw.empty() && raw.front() == '-') throw std::invalid_argument("negative");
      value = std::stoull(raw, &used);
    } catch (const std::exception&) {
      fail(where(key), "expected a nonnegative integer, got '" + raw + "'");
    }
    if (used != raw.size()) fail(where(key), "expected a nonnegative integer, got '" + raw + "'");
    return value;
  }
  std::uint64_t integer(const std::string& key, std::uint64_t fallback) const {
    return has(key) ? integer(key) : fallback;
  }

  bool boolean(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string raw = text(key);
    if (raw == "true" || raw == "yes" || raw == "1") return true;
    if (raw == "false" || raw == "no" || raw == "0") return false;
    fail(where(key), "expected true or false, got '" + raw + "'");
  }

  std::vector<double> reals(const std::string& key) const {
    std::vector<double> values;
    std::istringstream in(text(key));
    std::string token;
    while (in >> token) values.push_back(parse_real(key, token));
    return values;
  }

  /// Rows separated by ';', entries by whitespace.
  std::vector<std::vector<double>> rows(const std::string& key) const {
    std::vector<std::vector<double>> result;
    std::istringstream in(text(key));
    std::string row;
    while (std::getline(in, row, ';')) {
      std::istringstream cells(row);
      std::vector<double> values;
      std::string token;
      while (cells >> token) values.push_back(parse_real(key, token));
      if (!values.empty()) result.push_back(std::move(values));
    }
    return result;
  }

  std::vector<Vector> points(const std::string& key) const {
    std::vector<Vector> result;
    for (const auto& row : rows(key)) {
      result.push_back(Eigen::Map<const Vector>(row.data(), static_cast<Eigen::Index>(row.size())));
    }
    return result;
  }

  void allow_only(const std::set<std::string>& keys) const {
    if (tree_ == nullptr) return;
    for (const auto& [key, value] : *tree_) {
      if (keys.count(key) == 0) fail(where(key), "unknown key");
    }
  }

  std::string where(const std::string& key) const { return "[" + name_ + "] " + key; }

 private:
  double parse_real(const std::string& key, const std::string& raw) const {
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(raw, &used);
    } catch (const std::exception&) {
      fail(where(key), "expected a number, got '" + raw + "'");
    }
    if (used != raw.size()) fail(where(key), "expected a number, got '" + raw + "'");
    return value;
  }

  std::string name_;
  const pt::ptree* tree_;
};

Section section(const pt::ptree& root, const std::string& name) {
  const auto it = root.find(name);
  return Section(name, it == root.not_found() ? nullptr : &it->second);
}

GraphSpec parse_graph(const Section& s, const std::string& name,
                      const std::filesystem::path& base_dir) {
  s.allow_only({"nodes", "edges", "file", "matrix"});
  GraphSpec spec;
  spec.name = name;
  if (s.has("file")) {
    if (s.has("edges")) fail(s.where("file"), "give either 'file' or 'edges', not both");
    const std::filesystem::path path = base_dir / s.text("file");
    std::ifstream in(path);
    if (!in) throw Error(ErrorCategory::io, "cannot open edge list " + path.string());
    spec.graph = Digraph::parse_edge_list(in);
    if (s.has("nodes") && s.integer("nodes") != spec.graph.size()) {
      fail(s.where("nodes"), "does not match the edge list header");
    }
  } else {
    const auto nodes = s.integer("nodes");
    if (nodes < 1) fail(s.where("nodes"), "must be at least 1");
    std::ostringstream text;
    text << "nodes " << nodes << '\n';
    if (s.has("edges")) {
      for (const auto& row : s.rows("edges")) {
        if (row.size() != 2) fail(s.where("edges"), "each edge is 'i j'");
        text << row[0] << ' ' << row[1] << '\n';
      }
    }
    try {
      spec.graph = Digraph::parse_edge_list(text.str());
    } catch (const Error& e) {
      fail(s.where("edges"), e.what());
    }
  }
  if (s.has("matrix")) {
    const auto rows = s.rows("matrix");
    const auto n = static_cast<Eigen::Index>(spec.graph.size());
    if (static_cast<Eigen::Index>(rows.size()) != n) fail(s.where("matrix"), "wrong row count");
    Matrix a(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (static_cast<Eigen::Index>(rows[i].size()) != n) {
        fail(s.where("matrix"), "wrong column count in row " + std::to_string(i + 1));
      }
      for (Eigen::Index j = 0; j < n; ++j) a(i, j) = rows[i][j];
    }
    spec.weights = std::move(a);
  }
  return spec;
}

void parse_problem(const Section& s, ExperimentConfig& cfg) {
  if (!s.present()) fail("[problem]", "section is required");
  const std::string kind = s.text("kind");
  if (kind == "quadratic") {
    s.allow_only({"kind", "targets", "weights"});
    cfg.problem_kind = ProblemKind::quadratic;
    cfg.quadratic.targets = s.points("targets");
    cfg.quadratic.weights = s.has("weights")
                                ? s.reals("weights")
                                : std::vector<double>(cfg.quadratic.targets.size(), 1.0);
    return;
  }
  if (kind != "facility-location") fail(s.where("kind"), "unknown problem kind '" + kind + "'");
  cfg.problem_kind = ProblemKind::facility_location;
  if (s.has("generate_nodes")) {
    s.allow_only({"kind", "generate_nodes", "generator_seed", "extent", "min_radius",
                  "max_radius", "anchor_extent"});
    GeneratorSpec gen;
    gen.nodes = s.integer("generate_nodes");
    gen.seed = s.integer("generator_seed");
    gen.bounds.extent = s.real("extent", gen.bounds.extent);
    gen.bounds.min_radius = s.real("min_radius", gen.bounds.min_radius);
    gen.bounds.max_radius = s.real("max_radius", gen.bounds.max_radius);
    gen.bounds.anchor_extent = s.real("anchor_extent", gen.bounds.anchor_extent);
    cfg.generator = gen;
    return;
  }
  s.allow_only({"kind", "weights", "anchors", "centers1", "radii1", "centers2", "radii2",
                "domain"});
  FacilitySpec& f = cfg.facility;
  f.anchors = s.points("anchors");
  f.weights = s.reals("weights");
  f.centers1 = s.points("centers1");
  f.radii1 = s.reals("radii1");
  f.centers2 = s.points("centers2");
  f.radii2 = s.reals("radii2");
  if (s.has("domain")) {
    const auto box = s.reals("domain");
    if (box.size() != 4) fail(s.where("domain"), "expected 'xmin ymin xmax ymax'");
    f.box = std::make_pair(Vector{{box[0], box[1]}}, Vector{{box[2], box[3]}});
  }
}

}  // namespace

ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
  pt::ptree root;
  try {
    pt::read_ini(in, root);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorCategory::config, std::string("malformed config: ") + e.what());
  }

  std::set<std::string> known{"experiment", "steps", "stopping", "problem",
                              "graph",      "schedule", "oracle"};
  for (const auto& [name, child] : root) {
    if (known.count(name) == 0 && name.rfind("graph:", 0) != 0) {
      fail("[" + name + "]", "unknown section");
    }
  }

  ExperimentConfig cfg;

  const Section exp = section(root, "experiment");
  if (!exp.present()) fail("[experiment]", "section is required");
  exp.allow_only({"name", "algorithm", "seed", "output", "beta", "max_iter", "thinning",
                  "record_stride", "crucial_evaluation", "selection", "random_projections",
                  "divergence_bound"});
  cfg.name = exp.text("name", "experiment");
  try {
    cfg.algorithm = parse_algorithm(exp.text("algorithm"));
  } catch (const Error& e) {
    fail(exp.where("algorithm"), e.what());
  }
  cfg.seed = exp.integer("seed");
  if (exp.has("output")) cfg.output = exp.text("output");
  cfg.engine.beta = exp.real("beta", 1.0);
  cfg.engine.max_iter = exp.integer("max_iter", 100000);
  cfg.engine.thinning = exp.integer("thinning", 0);
  cfg.engine.record_stride = exp.integer("record_stride", 1);
  cfg.engine.random_projections = exp.integer("random_projections", 1);
  cfg.engine.divergence_bound = exp.real("divergence_bound", 1e12);
  const std::string evaluation = exp.text("crucial_evaluation", "after-random");
  if (evaluation == "after-random") {
    cfg.engine.crucial_evaluation = CrucialEvaluation::after_random_projection;
  } else if (evaluation == "at-consensus") {
    cfg.engine.crucial_evaluation = CrucialEvaluation::at_consensus_point;
  } else {
    fail(exp.where("crucial_evaluation"), "expected after-random or at-consensus");
  }
  const std::string selection = exp.text("selection", "uniform");
  if (selection == "uniform") {
    cfg.engine.selection = SelectionRule::uniform;
  } else if (selection == "most-violated") {
    cfg.engine.selection = SelectionRule::most_violated;
  } else {
    fail(exp.where("selection"), "expected uniform or most-violated");
  }

  const Section steps = section(root, "steps");
  steps.allow_only({"scale", "shift", "power"});
  try {
    cfg.engine.steps =
        StepSchedule(steps.real("scale", 1.0), steps.real("shift", 0.0), steps.real("power", 1.0));
  } catch (const Error& e) {
    fail("[steps]", e.what());
  }

  const Section stop = section(root, "stopping");
  stop.allow_only({"enabled", "consensus", "feasibility", "patience"});
  cfg.engine.stopping.enabled = stop.boolean("enabled", stop.present());
  cfg.engine.stopping.consensus_tolerance = stop.real("consensus", 1e-6);
  cfg.engine.stopping.feasibility_tolerance = stop.real("feasibility", 1e-6);
  cfg.engine.stopping.patience = stop.integer("patience", 100);

  parse_problem(section(root, "problem"), cfg);

  const Section schedule = section(root, "schedule");
  if (schedule.present()) {
    schedule.allow_only({"sequence", "pattern", "window"});
    if (section(root, "graph").present()) {
      fail("[graph]", "use [graph:NAME] sections together with [schedule]");
    }
    std::istringstream names(schedule.text("sequence"));
    std::string name;
    while (names >> name) {
      const Section g = section(root, "graph:" + name);
      if (!g.present()) fail(schedule.where("sequence"), "no section [graph:" + name + "]");
      cfg.graphs.push_back(parse_graph(g, name, base_dir));
    }
    if (cfg.graphs.empty()) fail(schedule.where("sequence"), "lists no graphs");
    if (schedule.has("pattern")) {
      for (double idx : schedule.reals("pattern")) {
        if (idx < 1 || idx > static_cast<double>(cfg.graphs.size()) || idx != std::floor(idx)) {
          fail(schedule.where("pattern"), "entries are 1-based positions in 'sequence'");
        }
        cfg.pattern.push_back(static_cast<std::size_t>(idx) - 1);
      }
    } else {
      for (std::size_t i = 0; i < cfg.graphs.size(); ++i) cfg.pattern.push_back(i);
    }
    cfg.window = schedule.integer("window", cfg.pattern.size());
  } else {
    const Section g = section(root, "graph");
    if (!g.present()) fail("[graph]", "section is required");
    cfg.graphs.push_back(parse_graph(g, "graph", base_dir));
    cfg.pattern = {0};
    cfg.window = 1;
  }

  const Section oracle = section(root, "oracle");
  oracle.allow_only({"resolution", "refinements"});
  cfg.oracle.resolution = oracle.real("resolution", cfg.oracle.resolution);
  cfg.oracle.refinements = static_cast<int>(oracle.integer("refinements", 3));

  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCategory::io, "cannot open config " + path.string());
  try {
    ExperimentConfig cfg = parse_config(in, path.parent_path());
    if (cfg.name == "experiment") cfg.name = path.stem().string();
    return cfg;
  } catch (const Error& e) {
    throw Error(e.category(), path.string() + ": " + e.what());
  }
}

void ExperimentConfig::validate() const {
  if (!(engine.beta > 0.0 && engine.beta < 2.0)) fail("[experiment] beta", "must lie in (0, 2)");
  if (engine.max_iter < 1) fail("[experiment] max_iter", "must be at least 1");
  if (engine.random_projections < 1) fail("[experiment] random_projections", "must be at least 1");
  if (window < 1) fail("[schedule] window", "must be at least 1");
  if (graphs.empty()) fail("[graph]", "no graph given");
  if (problem_kind == ProblemKind::facility_location && !generator) {
    try {
      facility.validate();
    } catch (const Error& e) {
      fail("[problem]", e.what());
    }
  }
  if (generator && generator->nodes < 1) fail("[problem] generate_nodes", "must be at least 1");
  if (problem_kind == ProblemKind::quadratic) {
    if (quadratic.targets.empty()) fail("[problem] targets", "needs at least one target");
    if (quadratic.weights.size() != quadratic.targets.size()) {
      fail("[problem] weights", "one weight per target is required");
    }
    for (double w : quadratic.weights) {
      if (!(w >= 0.0)) fail("[problem] weights", "must be nonnegative");
    }
  }
  if (!(oracle.resolution > 0.0 && oracle.resolution < 1.0)) {
    fail("[oracle] resolution", "must lie in (0, 1)");
  }
}

}  // namespace drfp::harness
