#pragma once

/**
 * @file vehicle_model.hpp
 * @brief Exact discrete kinematic bicycle model.
 *
 * States:   (px, py, theta, v) - rear-axle midpoint [m], heading [rad],
 *           front-wheel speed [m/s]
 * Controls: (w, a)             - steering angle [rad], front-wheel
 *           acceleration [m/s^2]
 *
 * Over one sampling interval h the front wheels roll f = h v and the rear
 * wheels roll b(v, w) = d + f cos w - sqrt(d^2 - f^2 sin^2 w), where d is the
 * wheelbase. Heading advances by asin(f sin w / d).
 */

#include "admm_ilqr/problem.hpp"

namespace admm_ilqr {

struct State {
  double px = 0.0;
  double py = 0.0;
  double theta = 0.0;  // unwrapped
  double v = 0.0;

  StateVector vec() const { return {px, py, theta, v}; }
  static State from(const StateVector& x) { return {x(0), x(1), x(2), x(3)}; }

  bool operator==(const State&) const = default;
};

struct Control {
  double w = 0.0;
  double a = 0.0;

  ControlVector vec() const { return {w, a}; }
  static Control from(const ControlVector& u) { return {u(0), u(1)}; }

  bool operator==(const Control&) const = default;
};

struct VehicleParams {
  double wheelbase = 2.0;    // d [m]
  double dt = 0.1;           // h [s]
  double body_length = 3.0;  // [m]
  double body_width = 2.0;   // [m]

  /// Throws std::invalid_argument if any field is non-positive.
  void validate() const;

  bool operator==(const VehicleParams&) const = default;
};

/// Front-wheel rolling distance h*v.
double front_roll(double v, const VehicleParams& params);

/// Rear-wheel rolling distance. Throws DomainError when d^2 < f^2 sin^2 w.
double back_roll(double v, double w, const VehicleParams& params);

State step(const State& x, const Control& u, const VehicleParams& params);

/// Analytic df/dx and df/du. Requires the strict interior of the kinematic
/// domain; throws DomainError on its boundary.
Linearization jacobians(const State& x, const Control& u, const VehicleParams& params);

class BicycleDynamics final : public Dynamics {
 public:
  explicit BicycleDynamics(VehicleParams params);

  StateVector step(const StateVector& x, const ControlVector& u) const override;
  Linearization linearize(const StateVector& x, const ControlVector& u) const override;

  const VehicleParams& params() const { return params_; }

 private:
  VehicleParams params_;
};

}  // namespace admm_ilqr
