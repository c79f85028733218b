#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "drfp/linalg.hpp"

namespace drfp {

class SimpleSet;

/// Isotropic quadratic w * ||x - center||^2, the only shape the DGD bias
/// predictor can minimise in closed form.
struct QuadraticForm {
  Vector center;
  double weight = 1.0;
};

/// Immutable convex function with a subgradient oracle. Only convexity
/// preserving constructors are exposed, so every value is convex by
/// construction. Copies share the underlying expression.
class ConvexFn {
 public:
  /// a^T x + b.
  static ConvexFn affine(Vector a, double b);
  static ConvexFn constant(std::size_t dim, double value);
  /// w * ||x - q||; subgradient at the kink is the zero vector.
  static ConvexFn norm_distance(Vector q, double w);
  /// w * ||x - c||^2.
  static ConvexFn squared_distance(Vector c, double w);
  static ConvexFn max(ConvexFn f, ConvexFn g);
  /// Sum of w_i * f_i with w_i >= 0. All terms must share a dimension.
  static ConvexFn weighted_sum(std::vector<std::pair<double, ConvexFn>> terms);
  /// f(y) = inner(y[offset .. offset + inner.dim())) for y in R^dim.
  static ConvexFn lift(ConvexFn inner, std::size_t dim, std::size_t offset);

  std::size_t dim() const;
  double operator()(const Vector& x) const { return eval(x); }
  double eval(const Vector& x) const;
  /// One member of the subdifferential at x.
  Vector subgrad(const Vector& x) const;

  std::optional<QuadraticForm> as_quadratic() const;
  /// The set {x : f(x) <= 0} when f is recognisably affine (a halfspace) or
  /// a scaled distance minus a negative constant (a ball).
  std::optional<SimpleSet> as_simple_set() const;

  friend ConvexFn operator+(ConvexFn f, ConvexFn g);

 private:
  struct Node;
  explicit ConvexFn(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// max(0, f(x)).
double positive_part(const ConvexFn& f, const Vector& x);

struct PolyakResult {
  Vector point;
  /// f(y)_+ at the input point.
  double violation = 0.0;
  /// ||u||^2 for the subgradient used; zero when no step was taken.
  double direction_norm_sq = 0.0;
};

/// y - beta * f(y)_+ / ||u||^2 * u with u a subgradient of f at y. When
/// f(y)_+ is zero the step coefficient vanishes, so y is returned as-is
/// without consulting a fallback direction. Throws when f(y)_+ > 0 but the
/// subgradient is zero.
PolyakResult polyak_step(const Vector& y, const ConvexFn& f, double beta);

/// f(x)_+ / ||u||, the Polyak distance estimate used by the most-violated rule.
double polyak_distance(const ConvexFn& f, const Vector& x);

/// Closed-form projectable sets.
class SimpleSet {
 public:
  struct WholeSpace {
    std::size_t dim;
  };
  struct Box {
    Vector lower;
    Vector upper;
  };
  struct Ball {
    Vector center;
    double radius;
  };
  /// {x : normal^T x <= offset}
  struct Halfspace {
    Vector normal;
    double offset;
  };

  static SimpleSet whole_space(std::size_t dim);
  static SimpleSet box(Vector lower, Vector upper);
  static SimpleSet ball(Vector center, double radius);
  static SimpleSet halfspace(Vector normal, double offset);

  std::size_t dim() const;
  Vector project(const Vector& x) const;
  bool contains(const Vector& x, double tolerance = 0.0) const;
  /// Euclidean distance to the set.
  double distance(const Vector& x) const;

  const auto& variant() const { return shape_; }

 private:
  using Shape = std::variant<WholeSpace, Box, Ball, Halfspace>;
  explicit SimpleSet(Shape shape) : shape_(std::move(shape)) {}
  Shape shape_;
};

Vector project(const SimpleSet& s, const Vector& x);

/// The objective term w * ||x - q|| of the facility-location problem.
ConvexFn subgrad_norm_affine(Vector q, double w);

/// g(x) = ||x - p|| - l, so g(x) <= 0 is the ball of radius l around p.
ConvexFn ball_constraint(Vector p, double l);

}  // namespace drfp
