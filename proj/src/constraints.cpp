#include "admm_ilqr/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "admm_ilqr/errors.hpp"

namespace admm_ilqr {

namespace {

Eigen::Matrix2d rotation(double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Eigen::Matrix2d r;
  r << c, -s, s, c;
  return r;
}

// Root of F(s) = (r0 z0 / (s + r0))^2 + (z1 / (s + 1))^2 - 1 for an interior
// point (g < 0), bracketed by [z1 - 1, 0]. Bisection runs until the midpoint
// stops moving, which is full double precision.
double kkt_root(double r0, double z0, double z1, double g) {
  const double n0 = r0 * z0;
  double s0 = z1 - 1.0;
  double s1 = g < 0.0 ? 0.0 : std::hypot(n0, z1) - 1.0;
  double s = 0.0;
  for (int i = 0; i < 2200; ++i) {
    s = 0.5 * (s0 + s1);
    if (s == s0 || s == s1) {
      break;
    }
    const double ratio0 = n0 / (s + r0);
    const double ratio1 = z1 / (s + 1.0);
    const double f = ratio0 * ratio0 + ratio1 * ratio1 - 1.0;
    if (f > 0.0) {
      s0 = s;
    } else if (f < 0.0) {
      s1 = s;
    } else {
      break;
    }
  }
  return s;
}

// Nearest point on the axis-aligned ellipse (x/e0)^2 + (y/e1)^2 = 1, e0 >= e1,
// to a first-quadrant interior point (y0, y1).
Point2 nearest_on_quadrant(double e0, double e1, double y0, double y1) {
  if (y1 > 0.0) {
    if (y0 > 0.0) {
      const double z0 = y0 / e0;
      const double z1 = y1 / e1;
      const double g = z0 * z0 + z1 * z1 - 1.0;
      if (g == 0.0) {
        return {y0, y1};
      }
      const double r0 = (e0 / e1) * (e0 / e1);
      const double s = kkt_root(r0, z0, z1, g);
      return {r0 * y0 / (s + r0), y1 / (s + 1.0)};
    }
    return {0.0, e1};
  }
  // On the major axis: the nearest boundary point leaves the axis unless the
  // point is close enough to the vertex.
  const double numer0 = e0 * y0;
  const double denom0 = e0 * e0 - e1 * e1;
  if (numer0 < denom0) {
    const double xde0 = numer0 / denom0;
    return {e0 * xde0, e1 * std::sqrt(std::max(0.0, 1.0 - xde0 * xde0))};
  }
  return {e0, 0.0};
}

}  // namespace

void InputBounds::validate() const {
  if (!(w_max > 0.0) || !(a_max_dec < 0.0) || !(a_max_acc > 0.0)) {
    throw std::invalid_argument("input bounds need w_max > 0 and a_max_dec < 0 < a_max_acc");
  }
}

void Obstacle::validate() const {
  if (!(e_b > 0.0) || e_a < e_b) {
    throw std::invalid_argument("obstacle ellipse needs e_a >= e_b > 0");
  }
}

EllipseShape ellipse_shape(double heading, double e_a, double e_b) {
  EllipseShape shape;
  const Eigen::Matrix2d r = rotation(heading);
  const Eigen::Vector2d inv_sq(1.0 / (e_a * e_a), 1.0 / (e_b * e_b));
  shape.A = r * inv_sq.asDiagonal() * r.transpose();
  shape.A(1, 0) = shape.A(0, 1);
  shape.heading = heading;
  shape.semi_major = e_a;
  shape.semi_minor = e_b;
  return shape;
}

double ellipse_violation(const Point2& p, const EllipseShape& shape, const Point2& center) {
  const Point2 d = p - center;
  return 1.0 - d.dot(shape.A * d);
}

double obstacle_violation(const Point2& p, const Obstacle& obstacle, int tau, double dt) {
  return obstacle_violation(p, obstacle, tau, dt, obstacle.heading);
}

double obstacle_violation(const Point2& p, const Obstacle& obstacle, int tau, double dt,
                          double heading) {
  return ellipse_violation(p, ellipse_shape(heading, obstacle.e_a, obstacle.e_b),
                           obstacle.center(tau, dt));
}

Control project_inputs(const Control& u, const InputBounds& bounds) {
  return {std::clamp(u.w, -bounds.w_max, bounds.w_max),
          std::clamp(u.a, bounds.a_max_dec, bounds.a_max_acc)};
}

EllipseProjection project_outside_ellipse(const Point2& p, const EllipseShape& shape,
                                          const Point2& center) {
  if (ellipse_violation(p, shape, center) <= 0.0) {
    return {p, false};
  }
  const Eigen::Matrix2d r = rotation(shape.heading);
  const Point2 local = r.transpose() * (p - center);
  const double e0 = shape.semi_major;
  const double e1 = shape.semi_minor;

  if (local.x() == 0.0 && local.y() == 0.0) {
    return {center + r * Point2(0.0, e1), true};
  }

  Point2 q = nearest_on_quadrant(e0, e1, std::abs(local.x()), std::abs(local.y()));
  q.x() = std::copysign(q.x(), local.x());
  q.y() = std::copysign(q.y(), local.y());
  return {center + r * q, false};
}

Block project_timestep(const Block& block, const ConstraintSet& constraints, int tau,
                       double ego_heading) {
  Block out = block;
  const Control u = project_inputs({block(2), block(3)}, constraints.bounds);
  out(2) = u.w;
  out(3) = u.a;

  Point2 p = block.head<2>();
  const std::size_t n = constraints.obstacles.size();
  if (n == 0) {
    return out;
  }
  std::vector<EllipseShape> shapes;
  std::vector<Point2> centers;
  shapes.reserve(n);
  centers.reserve(n);
  for (const Obstacle& obs : constraints.obstacles) {
    shapes.push_back(
        ellipse_shape(constraints.ellipse_heading(obs, ego_heading), obs.e_a, obs.e_b));
    centers.push_back(obs.center(tau, constraints.dt));
  }

  for (int sweep = 0; sweep <= kMaxProjectionSweeps; ++sweep) {
    bool moved = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (ellipse_violation(p, shapes[i], centers[i]) > kProjectionFeasibilityTol) {
        if (sweep == kMaxProjectionSweeps) {
          throw NonConvergence("cyclic ellipse projection did not settle at time index " +
                               std::to_string(tau));
        }
        p = project_outside_ellipse(p, shapes[i], centers[i]).point;
        moved = true;
      }
    }
    if (!moved) {
      break;
    }
  }
  out.head<2>() = p;
  return out;
}

double max_violation(std::span<const StateVector> states, std::span<const ControlVector> controls,
                     const ConstraintSet& constraints) {
  double worst = -std::numeric_limits<double>::infinity();
  const InputBounds& b = constraints.bounds;
  for (const ControlVector& u : controls) {
    worst = std::max({worst, std::abs(u(0)) - b.w_max, u(1) - b.a_max_acc, b.a_max_dec - u(1)});
  }
  for (std::size_t tau = 0; tau < states.size(); ++tau) {
    const StateVector& x = states[tau];
    for (const Obstacle& obs : constraints.obstacles) {
      worst = std::max(worst, obstacle_violation(x.head<2>(), obs, static_cast<int>(tau),
                                                 constraints.dt,
                                                 constraints.ellipse_heading(obs, x(2))));
    }
  }
  return worst;
}

}  // namespace admm_ilqr
