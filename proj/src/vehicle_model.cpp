#include "admm_ilqr/vehicle_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "admm_ilqr/errors.hpp"

namespace admm_ilqr {

namespace {

// sqrt(d^2 - f^2 sin^2 w); throws when the argument is negative (or, with
// strict = true, zero).
double lateral_root(double f, double w, double d, bool strict) {
  const double s = f * std::sin(w);
  const double arg = d * d - s * s;
  if (arg < 0.0 || (strict && arg <= 0.0) || !std::isfinite(arg)) {
    throw DomainError("kinematic step infeasible: |h v sin w| = " + std::to_string(std::abs(s)) +
                      " exceeds wheelbase " + std::to_string(d));
  }
  return std::sqrt(arg);
}

}  // namespace

void VehicleParams::validate() const {
  if (!(wheelbase > 0.0) || !(dt > 0.0) || !(body_length > 0.0) || !(body_width > 0.0)) {
    throw std::invalid_argument("vehicle parameters must all be positive");
  }
}

double front_roll(double v, const VehicleParams& params) { return params.dt * v; }

double back_roll(double v, double w, const VehicleParams& params) {
  const double f = front_roll(v, params);
  const double d = params.wheelbase;
  return d + f * std::cos(w) - lateral_root(f, w, d, false);
}

State step(const State& x, const Control& u, const VehicleParams& params) {
  const double f = front_roll(x.v, params);
  const double b = back_roll(x.v, u.w, params);
  // Clamp only guards the last ulp; the pre-condition already bounds it.
  const double turn = std::clamp(f * std::sin(u.w) / params.wheelbase, -1.0, 1.0);
  return {x.px + b * std::cos(x.theta), x.py + b * std::sin(x.theta), x.theta + std::asin(turn),
          x.v + params.dt * u.a};
}

Linearization jacobians(const State& x, const Control& u, const VehicleParams& params) {
  const double h = params.dt;
  const double d = params.wheelbase;
  const double f = front_roll(x.v, params);
  const double r = lateral_root(f, u.w, d, true);
  const double b = d + f * std::cos(u.w) - r;

  const double sw = std::sin(u.w);
  const double cw = std::cos(u.w);
  const double st = std::sin(x.theta);
  const double ct = std::cos(x.theta);

  const double db_dv = h * cw + f * h * sw * sw / r;
  const double db_dw = -f * sw + f * f * sw * cw / r;
  // d/dv asin(f sin w / d) = h sin w / sqrt(d^2 - f^2 sin^2 w)
  const double dtheta_dv = h * sw / r;
  const double dtheta_dw = f * cw / r;

  Linearization lin;
  lin.fx << 1.0, 0.0, -b * st, db_dv * ct,
            0.0, 1.0, b * ct, db_dv * st,
            0.0, 0.0, 1.0, dtheta_dv,
            0.0, 0.0, 0.0, 1.0;
  lin.fu << db_dw * ct, 0.0,
            db_dw * st, 0.0,
            dtheta_dw, 0.0,
            0.0, h;
  return lin;
}

BicycleDynamics::BicycleDynamics(VehicleParams params) : params_(params) { params_.validate(); }

StateVector BicycleDynamics::step(const StateVector& x, const ControlVector& u) const {
  return admm_ilqr::step(State::from(x), Control::from(u), params_).vec();
}

Linearization BicycleDynamics::linearize(const StateVector& x, const ControlVector& u) const {
  return jacobians(State::from(x), Control::from(u), params_);
}

}  // namespace admm_ilqr
