#include "drfp/convex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "drfp/error.hpp"

namespace drfp {

namespace {

struct Affine {
  Vector a;
  double b;
};
struct NormDistance {
  Vector q;
  double w;
};
struct SquaredDistance {
  Vector c;
  double w;
};
struct MaxOf {
  ConvexFn f;
  ConvexFn g;
};
struct Sum {
  std::vector<std::pair<double, ConvexFn>> terms;
};
struct Lift {
  ConvexFn inner;
  std::size_t offset;
};

void require_dim(std::size_t expected, const Vector& x) {
  if (static_cast<std::size_t>(x.size()) != expected) {
    throw Error(ErrorCategory::dimension, "point has dimension " + std::to_string(x.size()) +
                                              ", function expects " + std::to_string(expected));
  }
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

struct ConvexFn::Node {
  std::size_t dim;
  std::variant<Affine, NormDistance, SquaredDistance, MaxOf, Sum, Lift> shape;
};

ConvexFn ConvexFn::affine(Vector a, double b) {
  const auto dim = static_cast<std::size_t>(a.size());
  return ConvexFn(std::make_shared<const Node>(Node{dim, Affine{std::move(a), b}}));
}

ConvexFn ConvexFn::constant(std::size_t dim, double value) {
  return affine(Vector::Zero(static_cast<Eigen::Index>(dim)), value);
}

ConvexFn ConvexFn::norm_distance(Vector q, double w) {
  if (!(w >= 0.0)) throw Error(ErrorCategory::config, "norm weight must be nonnegative");
  const auto dim = static_cast<std::size_t>(q.size());
  return ConvexFn(std::make_shared<const Node>(Node{dim, NormDistance{std::move(q), w}}));
}

ConvexFn ConvexFn::squared_distance(Vector c, double w) {
  if (!(w >= 0.0)) throw Error(ErrorCategory::config, "quadratic weight must be nonnegative");
  const auto dim = static_cast<std::size_t>(c.size());
  return ConvexFn(std::make_shared<const Node>(Node{dim, SquaredDistance{std::move(c), w}}));
}

ConvexFn ConvexFn::max(ConvexFn f, ConvexFn g) {
  if (f.dim() != g.dim()) throw Error(ErrorCategory::dimension, "max of mismatched dimensions");
  const auto dim = f.dim();
  return ConvexFn(std::make_shared<const Node>(Node{dim, MaxOf{std::move(f), std::move(g)}}));
}

ConvexFn ConvexFn::weighted_sum(std::vector<std::pair<double, ConvexFn>> terms) {
  if (terms.empty()) throw Error(ErrorCategory::config, "weighted sum needs at least one term");
  const auto dim = terms.front().second.dim();
  for (const auto& [w, f] : terms) {
    if (!(w >= 0.0)) throw Error(ErrorCategory::config, "sum weights must be nonnegative");
    if (f.dim() != dim) throw Error(ErrorCategory::dimension, "sum of mismatched dimensions");
  }
  return ConvexFn(std::make_shared<const Node>(Node{dim, Sum{std::move(terms)}}));
}

ConvexFn ConvexFn::lift(ConvexFn inner, std::size_t dim, std::size_t offset) {
  if (offset + inner.dim() > dim) {
    throw Error(ErrorCategory::dimension, "lifted block does not fit the target dimension");
  }
  return ConvexFn(std::make_shared<const Node>(Node{dim, Lift{std::move(inner), offset}}));
}

ConvexFn operator+(ConvexFn f, ConvexFn g) {
  return ConvexFn::weighted_sum({{1.0, std::move(f)}, {1.0, std::move(g)}});
}

std::size_t ConvexFn::dim() const { return node_->dim; }

double ConvexFn::eval(const Vector& x) const {
  require_dim(dim(), x);
  return std::visit(
      Overloaded{
          [&](const Affine& s) { return s.a.dot(x) + s.b; },
          [&](const NormDistance& s) { return s.w * (x - s.q).norm(); },
          [&](const SquaredDistance& s) { return s.w * (x - s.c).squaredNorm(); },
          [&](const MaxOf& s) { return std::max(s.f.eval(x), s.g.eval(x)); },
          [&](const Sum& s) {
            double total = 0.0;
            for (const auto& [w, f] : s.terms) total += w * f.eval(x);
            return total;
          },
          [&](const Lift& s) {
            const auto len = static_cast<Eigen::Index>(s.inner.dim());
            return s.inner.eval(x.segment(static_cast<Eigen::Index>(s.offset), len));
          },
      },
      node_->shape);
}

Vector ConvexFn::subgrad(const Vector& x) const {
  require_dim(dim(), x);
  return std::visit(
      Overloaded{
          [&](const Affine& s) -> Vector { return s.a; },
          [&](const NormDistance& s) -> Vector {
            const Vector diff = x - s.q;
            const double norm = diff.norm();
            if (norm == 0.0) return Vector::Zero(x.size());
            return s.w / norm * diff;
          },
          [&](const SquaredDistance& s) -> Vector { return 2.0 * s.w * (x - s.c); },
          [&](const MaxOf& s) -> Vector {
            return s.f.eval(x) >= s.g.eval(x) ? s.f.subgrad(x) : s.g.subgrad(x);
          },
          [&](const Sum& s) -> Vector {
            Vector total = Vector::Zero(x.size());
            for (const auto& [w, f] : s.terms) total += w * f.subgrad(x);
            return total;
          },
          [&](const Lift& s) -> Vector {
            const auto offset = static_cast<Eigen::Index>(s.offset);
            const auto len = static_cast<Eigen::Index>(s.inner.dim());
            Vector g = Vector::Zero(x.size());
            g.segment(offset, len) = s.inner.subgrad(x.segment(offset, len));
            return g;
          },
      },
      node_->shape);
}

std::optional<QuadraticForm> ConvexFn::as_quadratic() const {
  if (const auto* q = std::get_if<SquaredDistance>(&node_->shape)) {
    return QuadraticForm{q->c, q->w};
  }
  // Sums of isotropic quadratics collapse to one, up to an additive constant.
  if (const auto* s = std::get_if<Sum>(&node_->shape)) {
    Vector weighted = Vector::Zero(static_cast<Eigen::Index>(dim()));
    double total = 0.0;
    for (const auto& [w, f] : s->terms) {
      const auto inner = f.as_quadratic();
      if (!inner) return std::nullopt;
      weighted += w * inner->weight * inner->center;
      total += w * inner->weight;
    }
    if (total <= 0.0) return std::nullopt;
    return QuadraticForm{weighted / total, total};
  }
  return std::nullopt;
}

std::optional<SimpleSet> ConvexFn::as_simple_set() const {
  if (const auto* a = std::get_if<Affine>(&node_->shape)) {
    if (a->a.squaredNorm() == 0.0) return std::nullopt;
    return SimpleSet::halfspace(a->a, -a->b);
  }
  const auto* s = std::get_if<Sum>(&node_->shape);
  if (s == nullptr) return std::nullopt;
  const NormDistance* norm = nullptr;
  double norm_scale = 0.0;
  double offset = 0.0;
  for (const auto& [w, f] : s->terms) {
    const auto& shape = f.node_->shape;
    if (const auto* d = std::get_if<NormDistance>(&shape); d != nullptr && norm == nullptr) {
      norm = d;
      norm_scale = w * d->w;
    } else if (const auto* c = std::get_if<Affine>(&shape);
               c != nullptr && c->a.squaredNorm() == 0.0) {
      offset += w * c->b;
    } else {
      return std::nullopt;
    }
  }
  if (norm == nullptr || !(norm_scale > 0.0) || !(offset < 0.0)) return std::nullopt;
  return SimpleSet::ball(norm->q, -offset / norm_scale);
}

double positive_part(const ConvexFn& f, const Vector& x) { return std::max(0.0, f.eval(x)); }

PolyakResult polyak_step(const Vector& y, const ConvexFn& f, double beta) {
  if (!(beta > 0.0 && beta < 2.0)) {
    throw Error(ErrorCategory::config, "Polyak relaxation beta must lie in (0, 2)");
  }
  const double violation = positive_part(f, y);
  if (violation == 0.0) return {y, 0.0, 0.0};
  Vector u = f.subgrad(y);
  const double norm_sq = u.squaredNorm();
  if (norm_sq == 0.0) {
    throw Error(ErrorCategory::config,
                "zero subgradient at a point where the constraint is violated");
  }
  return {y - (beta * violation / norm_sq) * u, violation, norm_sq};
}

double polyak_distance(const ConvexFn& f, const Vector& x) {
  const double violation = positive_part(f, x);
  if (violation == 0.0) return 0.0;
  const double norm = f.subgrad(x).norm();
  return norm == 0.0 ? std::numeric_limits<double>::infinity() : violation / norm;
}

SimpleSet SimpleSet::whole_space(std::size_t dim) { return SimpleSet(WholeSpace{dim}); }

SimpleSet SimpleSet::box(Vector lower, Vector upper) {
  if (lower.size() != upper.size()) {
    throw Error(ErrorCategory::dimension, "box bounds differ in dimension");
  }
  if ((lower.array() > upper.array()).any()) {
    throw Error(ErrorCategory::config, "box lower bound exceeds upper bound");
  }
  return SimpleSet(Box{std::move(lower), std::move(upper)});
}

SimpleSet SimpleSet::ball(Vector center, double radius) {
  if (!(radius > 0.0)) throw Error(ErrorCategory::config, "ball radius must be positive");
  return SimpleSet(Ball{std::move(center), radius});
}

SimpleSet SimpleSet::halfspace(Vector normal, double offset) {
  if (normal.squaredNorm() == 0.0) {
    throw Error(ErrorCategory::config, "halfspace normal must be nonzero");
  }
  return SimpleSet(Halfspace{std::move(normal), offset});
}

std::size_t SimpleSet::dim() const {
  return std::visit(Overloaded{
                        [](const WholeSpace& s) { return s.dim; },
                        [](const Box& s) { return static_cast<std::size_t>(s.lower.size()); },
                        [](const Ball& s) { return static_cast<std::size_t>(s.center.size()); },
                        [](const Halfspace& s) { return static_cast<std::size_t>(s.normal.size()); },
                    },
                    shape_);
}

Vector SimpleSet::project(const Vector& x) const {
  require_dim(dim(), x);
  return std::visit(
      Overloaded{
          [&](const WholeSpace&) -> Vector { return x; },
          [&](const Box& s) -> Vector { return x.cwiseMax(s.lower).cwiseMin(s.upper); },
          [&](const Ball& s) -> Vector {
            const Vector diff = x - s.center;
            const double norm = diff.norm();
            if (norm <= s.radius) return x;
            return s.center + (s.radius / norm) * diff;
          },
          [&](const Halfspace& s) -> Vector {
            const double excess = s.normal.dot(x) - s.offset;
            if (excess <= 0.0) return x;
            return x - (excess / s.normal.squaredNorm()) * s.normal;
          },
      },
      shape_);
}

bool SimpleSet::contains(const Vector& x, double tolerance) const {
  return distance(x) <= tolerance;
}

double SimpleSet::distance(const Vector& x) const { return (project(x) - x).norm(); }

Vector project(const SimpleSet& s, const Vector& x) { return s.project(x); }

ConvexFn subgrad_norm_affine(Vector q, double w) { return ConvexFn::norm_distance(std::move(q), w); }

ConvexFn ball_constraint(Vector p, double l) {
  if (!(l > 0.0)) throw Error(ErrorCategory::config, "ball constraint radius must be positive");
  const auto dim = static_cast<std::size_t>(p.size());
  return ConvexFn::norm_distance(std::move(p), 1.0) + ConvexFn::constant(dim, -l);
}

}  // namespace drfp
