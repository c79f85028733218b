#pragma once

#include <cstddef>
#include <optional>
#include <random>
#include <vector>

#include "drfp/graph.hpp"
#include "drfp/linalg.hpp"
#include "drfp/problem.hpp"

namespace drfp::harness {

/// Planar facility location: minimise sum_i w_i ||x - q_i|| subject to two
/// ball constraints per node, ||x - p_i1|| <= l_i1 and ||x - p_i2|| <= l_i2.
struct FacilitySpec {
  std::vector<Vector> anchors;
  std::vector<double> weights;
  std::vector<Vector> centers1;
  std::vector<double> radii1;
  std::vector<Vector> centers2;
  std::vector<double> radii2;
  /// Box for X; defaults to the bounding box of all balls.
  std::optional<std::pair<Vector, Vector>> box;

  std::size_t nodes() const { return anchors.size(); }
  void validate() const;
};

Problem facility_location_problem(const FacilitySpec& spec);

/// Smallest axis-aligned box containing every constraint ball.
std::pair<Vector, Vector> bounding_box(const FacilitySpec& spec);

struct GeometryBounds {
  /// Ball centres uniform in [-extent, extent]^2.
  double extent = 4.0;
  double min_radius = 3.0;
  double max_radius = 6.0;
  /// Anchors uniform in [-anchor_extent, anchor_extent]^2.
  double anchor_extent = 8.0;
  double min_weight = 0.5;
  double max_weight = 2.0;
  std::size_t max_attempts = 10000;
};

/// Rejection-samples ball geometry until all 2n balls share a point.
/// Throws ErrorCategory::infeasible after `max_attempts` rejections.
FacilitySpec generate_facility_location(std::size_t nodes, std::mt19937_64& rng,
                                        const GeometryBounds& bounds = {});

/// Five-node instance used by the shipped configs and the acceptance suite.
/// The common feasible region is a lens near (1, 0.5) that cuts off the
/// unconstrained weighted median, so some ball constraints are active.
FacilitySpec default_facility_instance();

/// sum_i w_i ||x - c_i||^2 with no constraints, for the DGD bias study.
Problem quadratic_problem(const std::vector<Vector>& targets, const std::vector<double>& weights);

/// Stand-in for the five-node unbalanced digraph of the fixed-graph study:
/// a directed ring 1 -> 2 -> 3 -> 4 -> 5 -> 1 with chords 1 -> 3 and 1 -> 4.
/// Strongly connected, equal-neighbor weights are not column-stochastic.
Digraph unbalanced_five_node_digraph();

/// Two five-node digraphs, neither strongly connected, whose union is the
/// ring above (odd rounds use the first, even rounds the second).
std::pair<Digraph, Digraph> switching_five_node_digraphs();

/// Three-node unbalanced digraph for the DGD bias study.
Digraph unbalanced_three_node_digraph();

}  // namespace drfp::harness
