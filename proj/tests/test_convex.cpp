#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <random>

#include "drfp/convex.hpp"
#include "drfp/error.hpp"

using namespace drfp;

namespace {

Vector v2(double a, double b) { return (Vector(2) << a, b).finished(); }
Vector v1(double a) { return (Vector(1) << a).finished(); }

Vector random_point(std::mt19937_64& rng, Eigen::Index dim, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Vector x(dim);
  for (Eigen::Index i = 0; i < dim; ++i) x(i) = u(rng);
  return x;
}

}  // namespace

TEST(PositivePart, Examples) {
  const ConvexFn f = ConvexFn::affine(v1(1.0), -1.0);
  EXPECT_DOUBLE_EQ(positive_part(f, v1(3.0)), 2.0);
  EXPECT_DOUBLE_EQ(positive_part(f, v1(0.0)), 0.0);
  EXPECT_DOUBLE_EQ(positive_part(ball_constraint(v2(1, 2), 0.5), v2(1, 2)), 0.0);
}

TEST(PolyakStep, AffineIsExactProjection) {
  const Vector a = v2(1.0, 2.0);
  const ConvexFn f = ConvexFn::affine(a, -1.0);  // a^T y <= 1
  const Vector y = v2(3.0, 4.0);
  const auto r = polyak_step(y, f, 1.0);
  const Vector oracle = SimpleSet::halfspace(a, 1.0).project(y);
  EXPECT_LT((r.point - oracle).norm(), 1e-14);
  EXPECT_NEAR(a.dot(r.point), 1.0, 1e-14);
}

TEST(PolyakStep, SatisfiedLeavesPointUnchanged) {
  const Vector y = v2(0.1, -0.2);
  const auto r = polyak_step(y, ball_constraint(Vector::Zero(2), 1.0), 1.5);
  EXPECT_EQ(r.point, y);
  EXPECT_EQ(r.violation, 0.0);
}

TEST(PolyakStep, UnitBallFromTwoZero) {
  const auto r = polyak_step(v2(2, 0), ball_constraint(Vector::Zero(2), 1.0), 1.0);
  EXPECT_LT((r.point - v2(1, 0)).norm(), 1e-15);
  EXPECT_LT((r.point - SimpleSet::ball(Vector::Zero(2), 1.0).project(v2(2, 0))).norm(), 1e-15);
}

TEST(PolyakStep, Errors) {
  const ConvexFn f = ball_constraint(Vector::Zero(2), 1.0);
  for (double beta : {0.0, 2.0, -1.0, std::nan("")}) {
    EXPECT_THROW(polyak_step(v2(2, 0), f, beta), Error);
  }
  // Violated constant: the subgradient is zero.
  try {
    polyak_step(v2(0, 0), ConvexFn::constant(2, 1.0), 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::config);
  }
}

TEST(Project, Examples) {
  EXPECT_EQ(SimpleSet::box(v2(0, 0), v2(1, 1)).project(v2(2, -1)), v2(1, 0));
  EXPECT_LT((SimpleSet::ball(Vector::Zero(2), 1.0).project(v2(3, 4)) - v2(0.6, 0.8)).norm(), 1e-15);
  EXPECT_EQ(project(SimpleSet::whole_space(2), v2(-7, 9)), v2(-7, 9));
}

TEST(Project, InvalidSets) {
  EXPECT_THROW(SimpleSet::box(v2(0, 2), v2(1, 1)), Error);
  EXPECT_THROW(SimpleSet::ball(Vector::Zero(2), 0.0), Error);
  EXPECT_THROW(SimpleSet::halfspace(Vector::Zero(2), 1.0), Error);
}

TEST(NormDistance, Examples) {
  const ConvexFn f = subgrad_norm_affine(v2(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(f.eval(v2(3, 4)), 5.0);
  EXPECT_LT((f.subgrad(v2(3, 4)) - v2(0.6, 0.8)).norm(), 1e-15);
  EXPECT_EQ(f.eval(v2(0, 0)), 0.0);
  EXPECT_EQ(f.subgrad(v2(0, 0)), Vector::Zero(2));
  const ConvexFn zero = subgrad_norm_affine(v2(1, 1), 0.0);
  EXPECT_EQ(zero.eval(v2(5, -3)), 0.0);
  EXPECT_EQ(zero.subgrad(v2(5, -3)), Vector::Zero(2));
  EXPECT_THROW(subgrad_norm_affine(v2(0, 0), -1.0), Error);
}

TEST(BallConstraint, Examples) {
  const ConvexFn g = ball_constraint(v2(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(g.eval(v2(3, 0)), 1.0);
  EXPECT_DOUBLE_EQ(g.eval(v2(0, 0)), -2.0);
  EXPECT_NEAR(g.eval(v2(std::sqrt(2.0), std::sqrt(2.0))), 0.0, 1e-15);
  EXPECT_THROW(ball_constraint(v2(0, 0), 0.0), Error);
  const auto set = g.as_simple_set();
  ASSERT_TRUE(set.has_value());
  EXPECT_TRUE(std::holds_alternative<SimpleSet::Ball>(set->variant()));
}

TEST(ConvexFn, CompositesEvaluate) {
  const ConvexFn a = ConvexFn::affine(v2(1, 0), 0.0);
  const ConvexFn b = ConvexFn::affine(v2(0, 1), 0.0);
  const ConvexFn m = ConvexFn::max(a, b);
  EXPECT_DOUBLE_EQ(m.eval(v2(1, 3)), 3.0);
  const ConvexFn s = ConvexFn::weighted_sum({{2.0, a}, {3.0, b}});
  EXPECT_DOUBLE_EQ(s.eval(v2(1, 1)), 5.0);
  EXPECT_THROW(ConvexFn::weighted_sum({{-1.0, a}}), Error);
  EXPECT_THROW(ConvexFn::max(a, ConvexFn::affine(v1(1), 0.0)), Error);
  const ConvexFn lifted = ConvexFn::lift(subgrad_norm_affine(v2(0, 0), 1.0), 4, 1);
  EXPECT_EQ(lifted.dim(), 4u);
  const Vector x = (Vector(4) << 9.0, 3.0, 4.0, -9.0).finished();
  EXPECT_DOUBLE_EQ(lifted.eval(x), 5.0);
  EXPECT_LT((lifted.subgrad(x) - (Vector(4) << 0, 0.6, 0.8, 0).finished()).norm(), 1e-15);
  EXPECT_DOUBLE_EQ((a + b).eval(v2(2, 5)), 7.0);
}

TEST(Properties, SubgradientInequality) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> pos(0.1, 3.0);
  const Eigen::Index d = 3;
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<ConvexFn> fns{
        ConvexFn::affine(random_point(rng, d, 2.0), pos(rng)),
        subgrad_norm_affine(random_point(rng, d, 2.0), pos(rng)),
        ConvexFn::squared_distance(random_point(rng, d, 2.0), pos(rng)),
        ball_constraint(random_point(rng, d, 2.0), pos(rng)),
        ConvexFn::max(subgrad_norm_affine(random_point(rng, d, 1.0), 1.0),
                      ConvexFn::affine(random_point(rng, d, 1.0), -0.5)),
        ConvexFn::weighted_sum({{pos(rng), subgrad_norm_affine(random_point(rng, d, 1.0), 1.0)},
                                {pos(rng), ConvexFn::squared_distance(random_point(rng, d, 1.0), 1.0)}}),
        ConvexFn::lift(subgrad_norm_affine(random_point(rng, 2, 1.0), 1.0), 3, 1),
    };
    for (const auto& f : fns) {
      for (int pair = 0; pair < 1000 / 20; ++pair) {
        const Vector x = random_point(rng, d, 5.0);
        const Vector y = random_point(rng, d, 5.0);
        const double lhs = f.eval(y);
        const double rhs = f.eval(x) + f.subgrad(x).dot(y - x);
        EXPECT_GE(lhs - rhs, -1e-12 * (1.0 + std::abs(lhs)));
      }
    }
  }
}

TEST(Properties, PolyakNonExpansive) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const double beta = std::array{0.5, 1.0, 1.5}[static_cast<std::size_t>(trial % 3)];
    const Vector z = random_point(rng, 2, 3.0);
    ConvexFn f = ConvexFn::constant(2, 0.0);
    if (trial % 2 == 0) {
      const Vector a = random_point(rng, 2, 1.0).normalized();
      f = ConvexFn::affine(a, -(a.dot(z) + u(rng)));  // z strictly inside
    } else {
      const Vector c = z + random_point(rng, 2, 1.0);
      f = ball_constraint(c, (z - c).norm() + 0.1 + u(rng));
    }
    ASSERT_LE(f.eval(z), 0.0);
    const Vector y = random_point(rng, 2, 10.0);
    const auto r = polyak_step(y, f, beta);
    const Vector u_dir = f.subgrad(y);
    const double violation = positive_part(f, y);
    const double bound = (y - z).squaredNorm() -
                         (violation > 0.0 ? beta * (2.0 - beta) * violation * violation / u_dir.squaredNorm() : 0.0);
    EXPECT_LE((r.point - z).squaredNorm(), bound + 1e-10);
    checked += violation > 0.0;
  }
  EXPECT_GT(checked, 300);
}

TEST(Properties, Projection) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::vector<SimpleSet> sets{
      SimpleSet::box(v2(-1, -2), v2(1, 0.5)),
      SimpleSet::ball(v2(0.5, -0.5), 1.5),
      SimpleSet::halfspace(v2(1, -1), 0.3),
      SimpleSet::whole_space(2),
  };
  auto sample_inside = [&](const SimpleSet& s) {
    for (;;) {
      Vector y = random_point(rng, 2, 3.0);
      if (s.contains(y)) return y;
    }
  };
  for (const auto& s : sets) {
    for (int trial = 0; trial < 20; ++trial) {
      const Vector inside = sample_inside(s);
      EXPECT_EQ(s.project(inside), inside);
      const Vector x = random_point(rng, 2, 6.0);
      const Vector px = s.project(x);
      EXPECT_TRUE(s.contains(px, 1e-12));
      for (int k = 0; k < 100; ++k) {
        EXPECT_LE((px - x).norm(), (sample_inside(s) - x).norm() + 1e-12);
      }
    }
  }
}
