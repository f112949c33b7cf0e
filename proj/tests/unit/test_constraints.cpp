#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "admm_ilqr/constraints.hpp"
#include "admm_ilqr/errors.hpp"
#include "oracles.hpp"

using namespace admm_ilqr;

namespace {

constexpr double kPi = std::numbers::pi;

Obstacle parked_car() {
  Obstacle o;
  o.center0 = {15, -1};
  return o;
}

Point2 rotate(const Point2& p, double angle) {
  return {std::cos(angle) * p.x() - std::sin(angle) * p.y(),
          std::sin(angle) * p.x() + std::cos(angle) * p.y()};
}

}  // namespace

TEST(EllipseShape, AxisAligned) {
  const EllipseShape s = ellipse_shape(0.0, 5.0, 2.5);
  EXPECT_NEAR(s.A(0, 0), 0.04, 1e-15);
  EXPECT_NEAR(s.A(1, 1), 0.16, 1e-15);
  EXPECT_NEAR(s.A(0, 1), 0.0, 1e-15);
}

TEST(EllipseShape, QuarterTurnSwapsDiagonal) {
  const EllipseShape s = ellipse_shape(kPi / 2, 5.0, 2.5);
  EXPECT_NEAR(s.A(0, 0), 0.16, 1e-15);
  EXPECT_NEAR(s.A(1, 1), 0.04, 1e-15);
  EXPECT_NEAR(s.A(0, 1), 0.0, 1e-15);
}

TEST(EllipseShape, HalfTurnIsTheSameEllipse) {
  EXPECT_TRUE(ellipse_shape(kPi, 5.0, 2.5).A.isApprox(ellipse_shape(0.0, 5.0, 2.5).A, 1e-14));
}

TEST(EllipseShape, EigenvaluesAreInverseSquaredAxes) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> uh(-kPi, kPi);
  for (int i = 0; i < 50; ++i) {
    const auto ev =
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(ellipse_shape(uh(rng), 4.0, 1.5).A)
            .eigenvalues();
    EXPECT_NEAR(ev(0), 1.0 / (4.0 * 4.0), 1e-14);
    EXPECT_NEAR(ev(1), 1.0 / (1.5 * 1.5), 1e-14);
  }
}

TEST(ObstacleViolation, CenterBoundaryAndOutside) {
  const Obstacle o = parked_car();
  EXPECT_DOUBLE_EQ(obstacle_violation({15, -1}, o, 0, 0.1), 1.0);
  EXPECT_NEAR(obstacle_violation({20, -1}, o, 0, 0.1), 0.0, 1e-15);
  EXPECT_NEAR(obstacle_violation({15, 2}, o, 0, 0.1), -0.44, 1e-15);
}

TEST(ObstacleViolation, BoundaryOnRotatedMajorAxis) {
  Obstacle o;
  o.heading = 0.7;
  o.center0 = {1, 2};
  const Point2 p = o.center0 + o.e_a * Point2(std::cos(0.7), std::sin(0.7));
  EXPECT_NEAR(obstacle_violation(p, o, 0, 0.1), 0.0, 1e-14);
}

TEST(ObstacleViolation, UsesTimeMatchedCenter) {
  Obstacle o;
  o.center0 = {0, 4};
  o.velocity = {6, 0};
  // After 2 s the center is at (12, 4).
  EXPECT_DOUBLE_EQ(obstacle_violation({12, 4}, o, 20, 0.1), 1.0);
  EXPECT_LT(obstacle_violation({0, 4}, o, 20, 0.1), 0.0);
}

TEST(ObstacleViolation, RotationInvariance) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  std::uniform_real_distribution<double> uh(-kPi, kPi);
  for (int i = 0; i < 500; ++i) {
    Obstacle o;
    o.center0 = {u(rng), u(rng)};
    o.heading = uh(rng);
    const Point2 p(u(rng), u(rng));
    const double phi = uh(rng);
    Obstacle turned = o;
    turned.center0 = rotate(o.center0, phi);
    turned.heading = o.heading + phi;
    EXPECT_NEAR(obstacle_violation(p, o, 0, 0.1),
                obstacle_violation(rotate(p, phi), turned, 0, 0.1), 1e-12);
  }
}

TEST(ProjectInputs, ClampsToBox) {
  const InputBounds b;
  EXPECT_EQ(project_inputs({0.9, 0}, b), (Control{0.6, 0}));
  EXPECT_EQ(project_inputs({0, -5}, b), (Control{0, -3}));
  EXPECT_EQ(project_inputs({-0.2, 1.5}, b), (Control{-0.2, 1.5}));
}

TEST(ProjectOutsideEllipse, LeavesFeasiblePointsAlone) {
  const EllipseShape s = ellipse_shape(0.0, 5.0, 2.5);
  const Point2 c(15, -1);
  const Point2 outside(30, 4);
  const Point2 boundary(20, -1);
  EXPECT_EQ(project_outside_ellipse(outside, s, c).point, outside);
  EXPECT_EQ(project_outside_ellipse(boundary, s, c).point, boundary);
}

TEST(ProjectOutsideEllipse, NearMajorAxisPointGoesToMinorSide) {
  const EllipseShape s = ellipse_shape(0.0, 5.0, 2.5);
  const Point2 c(0, 0);
  const auto samples = oracle::boundary_samples(c, 0.0, 5.0, 2.5, 1'000'000);
  // (1, 1e-3): slightly above the major axis, so the nearest boundary point
  // is on the upper side near the minor vertex.
  const Point2 p(1, 1e-3);
  const Point2 q = project_outside_ellipse(p, s, c).point;
  EXPECT_GT(q.y(), 2.0);
  EXPECT_LT((q - oracle::nearest_of(samples, p)).norm(), 1e-4);
}

TEST(ProjectOutsideEllipse, CenterIsDegenerate) {
  const EllipseShape s = ellipse_shape(0.3, 5.0, 2.5);
  const Point2 c(2, 3);
  const EllipseProjection r = project_outside_ellipse(c, s, c);
  EXPECT_TRUE(r.degenerate);
  EXPECT_NEAR((r.point - c).norm(), 2.5, 1e-12);
  EXPECT_NEAR(ellipse_violation(r.point, s, c), 0.0, 1e-12);
}

TEST(ProjectOutsideEllipse, MatchesSampledOptimumAndIsIdempotent) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> uh(-kPi, kPi);
  const Point2 c(4, -2);
  for (double heading : {0.0, 0.9, -2.3}) {
    const EllipseShape s = ellipse_shape(heading, 5.0, 2.5);
    const auto samples = oracle::boundary_samples(c, heading, 5.0, 2.5, 10'000);
    for (int i = 0; i < 100; ++i) {
      const Point2 p = oracle::random_interior_point(rng, c, heading, 5.0, 2.5);
      const Point2 q = project_outside_ellipse(p, s, c).point;
      EXPECT_LT(std::abs(ellipse_violation(q, s, c)), 1e-9);
      // No sampled boundary point is meaningfully closer.
      EXPECT_LE((q - p).norm(), (oracle::nearest_of(samples, p) - p).norm() + 1e-6);
      EXPECT_LT((project_outside_ellipse(q, s, c).point - q).norm(), 1e-9);
    }
  }
}

TEST(ProjectTimestep, IdentityWithoutObstaclesAndFeasibleInputs) {
  ConstraintSet cs;
  const Block b(3, 4, 0.2, -1);
  EXPECT_EQ(project_timestep(b, cs, 0, 0.0), b);
}

TEST(ProjectTimestep, SingleObstacleMovesPositionOnly) {
  ConstraintSet cs;
  cs.obstacles = {parked_car()};
  const Block b(14, -0.5, 0.1, 2);
  const Block out = project_timestep(b, cs, 0, 0.0);
  EXPECT_EQ(out(2), 0.1);
  EXPECT_EQ(out(3), 2.0);
  const Point2 expected =
      project_outside_ellipse({14, -0.5}, ellipse_shape(0.0, 5.0, 2.5), {15, -1}).point;
  EXPECT_LT((out.head<2>() - expected).norm(), 1e-12);
}

TEST(ProjectTimestep, InactiveSecondObstacleChangesNothing) {
  ConstraintSet one;
  one.obstacles = {parked_car()};
  ConstraintSet two = one;
  Obstacle far;
  far.center0 = {60, 10};
  two.obstacles.push_back(far);
  const Block b(16, 0, 0.9, -4);
  EXPECT_EQ(project_timestep(b, one, 3, 0.0), project_timestep(b, two, 3, 0.0));
}

TEST(ProjectTimestep, FeasibleAndIdempotentWithOverlappingObstacles) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-6.0, 6.0);
  ConstraintSet cs;
  Obstacle a;
  a.center0 = {0, 0};
  Obstacle b;
  b.center0 = {7, 1};
  b.heading = 0.4;
  cs.obstacles = {a, b};
  int projected = 0;
  for (int i = 0; i < 500; ++i) {
    const Block in(u(rng) + 3, u(rng) / 2, u(rng), u(rng));
    Block out;
    try {
      out = project_timestep(in, cs, 0, 0.0);
    } catch (const NonConvergence&) {
      continue;  // allowed where the ellipses leave no nearby exterior point
    }
    ++projected;
    EXPECT_LE(std::abs(out(2)), cs.bounds.w_max);
    EXPECT_GE(out(3), cs.bounds.a_max_dec);
    EXPECT_LE(out(3), cs.bounds.a_max_acc);
    for (const Obstacle& o : cs.obstacles) {
      EXPECT_LE(obstacle_violation(out.head<2>(), o, 0, cs.dt), 1e-6);
    }
    EXPECT_LT((project_timestep(out, cs, 0, 0.0) - out).cwiseAbs().maxCoeff(), 1e-9);
  }
  EXPECT_GT(projected, 400);
}

TEST(ProjectTimestep, EgoHeadingConventionRotatesTheEllipse) {
  ConstraintSet cs;
  cs.obstacles = {Obstacle{}};
  cs.heading_convention = HeadingConvention::kEgo;
  // With the ellipse turned a quarter, (0, 4) is inside the major axis.
  const Block out = project_timestep(Block(0, 4, 0, 0), cs, 0, kPi / 2);
  EXPECT_NEAR(out(1), 5.0, 1e-9);
  cs.heading_convention = HeadingConvention::kObstacle;
  EXPECT_EQ(project_timestep(Block(0, 4, 0, 0), cs, 0, kPi / 2), Block(0, 4, 0, 0));
}

TEST(MaxViolation, ReportsWorstConstraint) {
  ConstraintSet cs;
  cs.obstacles = {parked_car()};
  std::vector<StateVector> states{StateVector(0, 0, 0, 4), StateVector(15, -1, 0, 4)};
  std::vector<ControlVector> controls{ControlVector(0.7, 0)};
  EXPECT_DOUBLE_EQ(max_violation(states, controls, cs), 1.0);
  states[1] = StateVector(15, 2, 0, 4);
  EXPECT_NEAR(max_violation(states, controls, cs), 0.1, 1e-12);
}

TEST(ConstraintValidation, RejectsBadShapes) {
  EXPECT_THROW((InputBounds{0.0, 3, -3}).validate(), std::invalid_argument);
  EXPECT_THROW((InputBounds{0.6, 3, 1}).validate(), std::invalid_argument);
  Obstacle o;
  o.e_b = 6.0;  // semi-minor larger than semi-major
  EXPECT_THROW(o.validate(), std::invalid_argument);
}
