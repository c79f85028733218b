#include "drfp/harness/instances.hpp"

#include <limits>
#include <string>

#include "drfp/baselines.hpp"
#include "drfp/error.hpp"

namespace drfp::harness {

namespace {

Vector point(double x, double y) { return Vector{{x, y}}; }

void require_planar(const std::vector<Vector>& points, const char* what) {
  for (const auto& p : points) {
    if (p.size() != 2) {
      throw Error(ErrorCategory::config, std::string(what) + " must be planar points");
    }
  }
}

}  // namespace

void FacilitySpec::validate() const {
  const std::size_t n = anchors.size();
  if (n == 0) throw Error(ErrorCategory::config, "facility instance has no nodes");
  if (weights.size() != n || centers1.size() != n || radii1.size() != n ||
      centers2.size() != n || radii2.size() != n) {
    throw Error(ErrorCategory::config, "facility parameters must have one entry per node");
  }
  require_planar(anchors, "anchors");
  require_planar(centers1, "centers1");
  require_planar(centers2, "centers2");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(weights[i] >= 0.0)) {
      throw Error(ErrorCategory::config, "weight of node " + std::to_string(i + 1) + " is negative");
    }
    if (!(radii1[i] > 0.0) || !(radii2[i] > 0.0)) {
      throw Error(ErrorCategory::config,
                  "radii of node " + std::to_string(i + 1) + " must be positive");
    }
  }
  if (box && (box->first.size() != 2 || box->second.size() != 2)) {
    throw Error(ErrorCategory::config, "facility domain box must be planar");
  }
}

std::pair<Vector, Vector> bounding_box(const FacilitySpec& spec) {
  Vector lower = Vector::Constant(2, std::numeric_limits<double>::infinity());
  Vector upper = Vector::Constant(2, -std::numeric_limits<double>::infinity());
  auto include = [&](const Vector& c, double r) {
    lower = lower.cwiseMin((c.array() - r).matrix());
    upper = upper.cwiseMax((c.array() + r).matrix());
  };
  for (std::size_t i = 0; i < spec.nodes(); ++i) {
    include(spec.centers1[i], spec.radii1[i]);
    include(spec.centers2[i], spec.radii2[i]);
  }
  return {lower, upper};
}

Problem facility_location_problem(const FacilitySpec& spec) {
  spec.validate();
  const auto [lower, upper] = spec.box ? *spec.box : bounding_box(spec);
  Problem p;
  p.dim = 2;
  p.domain = SimpleSet::box(lower, upper);
  for (std::size_t i = 0; i < spec.nodes(); ++i) {
    p.objectives.push_back(subgrad_norm_affine(spec.anchors[i], spec.weights[i]));
    p.constraints.push_back({ball_constraint(spec.centers1[i], spec.radii1[i]),
                             ball_constraint(spec.centers2[i], spec.radii2[i])});
  }
  p.validate();
  return p;
}

FacilitySpec generate_facility_location(std::size_t nodes, std::mt19937_64& rng,
                                        const GeometryBounds& bounds) {
  if (nodes < 1) throw Error(ErrorCategory::config, "generator needs at least one node");
  if (!(bounds.min_radius > 0.0) || bounds.max_radius < bounds.min_radius) {
    throw Error(ErrorCategory::config, "generator radius range is invalid");
  }
  std::uniform_real_distribution<double> centre(-bounds.extent, bounds.extent);
  std::uniform_real_distribution<double> anchor(-bounds.anchor_extent, bounds.anchor_extent);
  std::uniform_real_distribution<double> radius(bounds.min_radius, bounds.max_radius);
  std::uniform_real_distribution<double> weight(bounds.min_weight, bounds.max_weight);

  for (std::size_t attempt = 0; attempt < bounds.max_attempts; ++attempt) {
    FacilitySpec spec;
    for (std::size_t i = 0; i < nodes; ++i) {
      spec.anchors.push_back(point(anchor(rng), anchor(rng)));
      spec.weights.push_back(weight(rng));
      spec.centers1.push_back(point(centre(rng), centre(rng)));
      spec.radii1.push_back(radius(rng));
      spec.centers2.push_back(point(centre(rng), centre(rng)));
      spec.radii2.push_back(radius(rng));
    }
    const Problem candidate = facility_location_problem(spec);
    std::vector<ConvexFn> all;
    for (const auto& local : candidate.constraints) all.insert(all.end(), local.begin(), local.end());
    try {
      project_local(Vector::Zero(2), candidate.domain, all);
      return spec;
    } catch (const Error& e) {
      if (e.category() != ErrorCategory::infeasible) throw;
    }
  }
  throw Error(ErrorCategory::infeasible, "no instance with a common feasible point after " +
                                             std::to_string(bounds.max_attempts) + " attempts");
}

FacilitySpec default_facility_instance() {
  FacilitySpec spec;
  spec.anchors = {point(6, 2), point(-3, 5), point(2, -5), point(-5, -3), point(4, 6)};
  spec.weights = {1.0, 2.0, 1.5, 1.0, 0.5};
  spec.centers1 = {point(0, 0), point(2, 2), point(1, -2), point(-1, -1), point(2, 0)};
  spec.radii1 = {3.0, 3.0, 3.2, 3.5, 2.5};
  spec.centers2 = {point(3, 1), point(-1, 1), point(3, -1), point(0, 3), point(1, 3)};
  spec.radii2 = {3.0, 3.5, 3.0, 3.5, 3.2};
  return spec;
}

Problem quadratic_problem(const std::vector<Vector>& targets, const std::vector<double>& weights) {
  if (targets.empty() || targets.size() != weights.size()) {
    throw Error(ErrorCategory::config, "quadratic problem needs one weight per target");
  }
  Problem p;
  p.dim = static_cast<std::size_t>(targets.front().size());
  p.domain = SimpleSet::whole_space(p.dim);
  for (std::size_t i = 0; i < targets.size(); ++i) {
    p.objectives.push_back(ConvexFn::squared_distance(targets[i], weights[i]));
    p.constraints.emplace_back();
  }
  p.validate();
  return p;
}

Digraph unbalanced_five_node_digraph() {
  // (receiver, sender), 0-based
  return Digraph(5, {{1, 0}, {2, 1}, {3, 2}, {4, 3}, {0, 4}, {2, 0}, {3, 0}});
}

std::pair<Digraph, Digraph> switching_five_node_digraphs() {
  // Path 1 -> 2 -> 3 -> 4 -> 5, then the return edge 5 -> 1 with chords out of 1.
  Digraph path(5, {{1, 0}, {2, 1}, {3, 2}, {4, 3}});
  Digraph back(5, {{0, 4}, {2, 0}, {3, 0}, {1, 0}, {4, 3}});
  return {std::move(path), std::move(back)};
}

Digraph unbalanced_three_node_digraph() {
  // Ring 1 -> 2 -> 3 -> 1 plus the chord 1 -> 3.
  return Digraph(3, {{1, 0}, {2, 1}, {0, 2}, {2, 0}});
}

}  // namespace drfp::harness
