#pragma once

// Tracking objective: squared distance to a reference (lateral line or
// polyline), squared speed error, and quadratic steering/acceleration effort.
//
//   l(x, u) = q1 d(p, ref)^2 + q2 (v - v_ref)^2 + r1 w^2 + r2 a^2
//   phi(x)  = terminal_scale * (q1 d(p, ref)^2 + q2 (v - v_ref)^2)

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "admm_ilqr/problem.hpp"
#include "admm_ilqr/vehicle_model.hpp"

namespace admm_ilqr {

using Point2 = Eigen::Vector2d;

struct CostWeights {
  double q1 = 1.0;  // position tracking
  double q2 = 0.5;  // speed tracking
  double r1 = 1.0;  // steering
  double r2 = 0.5;  // acceleration
  double terminal_scale = 1.0;

  void validate() const;

  bool operator==(const CostWeights&) const = default;
};

/// Either a polyline to follow or a constant lateral target py_ref, plus an
/// optional reference speed (absent disables speed tracking).
struct Reference {
  std::vector<Point2> polyline;
  std::optional<double> lateral_target;
  std::optional<double> speed;

  static Reference lateral(double py_ref, std::optional<double> v_ref);
  static Reference path(std::vector<Point2> points, std::optional<double> v_ref);

  bool is_lateral() const { return lateral_target.has_value(); }
  void validate() const;

  bool operator==(const Reference&) const = default;
};

struct PolylineProjection {
  double distance = 0.0;
  Point2 closest = Point2::Zero();
  Point2 tangent = Point2::UnitX();  // unit direction of the closest segment
  std::size_t segment = 0;
  bool interior = false;  // foot of perpendicular lies strictly inside the segment
};

/// Minimum point-to-segment distance; ties go to the lowest segment index.
PolylineProjection polyline_distance(const Point2& p, std::span<const Point2> polyline);

double stage_cost(const State& x, const Control& u, const CostWeights& weights,
                  const Reference& reference);

/// Gradients/Hessians of stage_cost. The polyline term uses the Gauss-Newton
/// Hessian 2 J^T J of the residual p - closest(p).
StageExpansion stage_expansion(const State& x, const Control& u, const CostWeights& weights,
                               const Reference& reference);

double terminal_cost(const State& x, const CostWeights& weights, const Reference& reference);

TerminalExpansion terminal_expansion(const State& x, const CostWeights& weights,
                                     const Reference& reference);

/// Matrix form over xi = [x; u]: l = xi^T C xi - 2 xi^T C r + r^T C r.
struct QuadraticCostForm {
  Eigen::Matrix<double, 6, 6> C = Eigen::Matrix<double, 6, 6>::Zero();
  Eigen::Matrix<double, 6, 1> r = Eigen::Matrix<double, 6, 1>::Zero();
};

/// Only defined for a lateral reference; throws std::invalid_argument otherwise.
QuadraticCostForm quadratic_form(const CostWeights& weights, const Reference& reference);

class TrackingObjective final : public Objective {
 public:
  TrackingObjective(CostWeights weights, Reference reference);

  double stage(int tau, const StateVector& x, const ControlVector& u) const override;
  StageExpansion stage_expansion(int tau, const StateVector& x,
                                 const ControlVector& u) const override;
  double terminal(const StateVector& x) const override;
  TerminalExpansion terminal_expansion(const StateVector& x) const override;

  const CostWeights& weights() const { return weights_; }
  const Reference& reference() const { return reference_; }

 private:
  CostWeights weights_;
  Reference reference_;
};

}  // namespace admm_ilqr
