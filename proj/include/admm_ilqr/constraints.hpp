#pragma once

// Inequality constraints of the planning problem and the Euclidean projections
// onto them used by the consensus (z) update.
//
//   steering:      -w_max <= w <= w_max
//   acceleration:  a_min  <= a <= a_max
//   keep-out:      h(p) = 1 - (p - c)^T A (p - c) <= 0,
//                  A = R diag(1/e_a^2, 1/e_b^2) R^T

#include <span>
#include <vector>

#include <Eigen/Core>

#include "admm_ilqr/costs.hpp"

namespace admm_ilqr {

/// Consensus block (px, py, w, a): the components that constraints act on.
using Block = Eigen::Vector4d;

struct InputBounds {
  double w_max = 0.6;
  double a_max_acc = 3.0;
  double a_max_dec = -3.0;

  void validate() const;

  bool operator==(const InputBounds&) const = default;
};

struct Obstacle {
  Point2 center0 = Point2::Zero();
  Point2 velocity = Point2::Zero();
  double heading = 0.0;
  double e_a = 5.0;  // semi-major
  double e_b = 2.5;  // semi-minor

  /// Constant-velocity center at time index tau.
  Point2 center(int tau, double dt) const { return center0 + (tau * dt) * velocity; }
  void validate() const;

  bool operator==(const Obstacle&) const = default;
};

/// Which heading orients the keep-out ellipse.
enum class HeadingConvention {
  kObstacle,  // the obstacle's own fixed heading (default)
  kEgo,       // the ego vehicle's heading at the same time index
};

struct EllipseShape {
  Eigen::Matrix2d A = Eigen::Matrix2d::Identity();
  double heading = 0.0;
  double semi_major = 1.0;
  double semi_minor = 1.0;
};

EllipseShape ellipse_shape(double heading, double e_a, double e_b);

/// 1 - d^T A d; positive inside the ellipse.
double ellipse_violation(const Point2& p, const EllipseShape& shape, const Point2& center);

/// Keep-out violation against the obstacle's time-matched center, oriented by
/// the obstacle heading.
double obstacle_violation(const Point2& p, const Obstacle& obstacle, int tau, double dt);

/// Same, with the ellipse oriented by an explicit heading.
double obstacle_violation(const Point2& p, const Obstacle& obstacle, int tau, double dt,
                          double heading);

Control project_inputs(const Control& u, const InputBounds& bounds);

struct EllipseProjection {
  Point2 point = Point2::Zero();
  /// The input sat exactly at the center; the returned minor-axis vertex is
  /// one of two equally near boundary points.
  bool degenerate = false;
};

/// Nearest point on or outside the ellipse. Points already outside (or on the
/// boundary) are returned unchanged; interior points go to the nearest
/// boundary point, found by bisection on the KKT multiplier equation.
EllipseProjection project_outside_ellipse(const Point2& p, const EllipseShape& shape,
                                          const Point2& center);

struct ConstraintSet {
  InputBounds bounds;
  std::vector<Obstacle> obstacles;
  double dt = 0.1;
  HeadingConvention heading_convention = HeadingConvention::kObstacle;

  /// Heading used for the obstacle's ellipse at a given ego heading.
  double ellipse_heading(const Obstacle& obstacle, double ego_heading) const {
    return heading_convention == HeadingConvention::kEgo ? ego_heading : obstacle.heading;
  }
};

inline constexpr int kMaxProjectionSweeps = 50;

/// Violations below this are treated as satisfied by the cyclic projection.
inline constexpr double kProjectionFeasibilityTol = 1e-10;

/// Projects one (px, py, w, a) block onto the constraint set at time index
/// tau: inputs are clamped, the position is cycled through every violated
/// ellipse until all are satisfied. Throws NonConvergence after
/// kMaxProjectionSweeps sweeps.
Block project_timestep(const Block& block, const ConstraintSet& constraints, int tau,
                       double ego_heading);

/// Largest violation of the input box and keep-out constraints along a
/// trajectory (states 0..T, controls 0..T-1). Non-positive means feasible.
double max_violation(std::span<const StateVector> states, std::span<const ControlVector> controls,
                     const ConstraintSet& constraints);

}  // namespace admm_ilqr
