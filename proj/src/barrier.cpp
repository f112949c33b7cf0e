#include "admm_ilqr/barrier.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "admm_ilqr/errors.hpp"

namespace admm_ilqr {

namespace {

using Clock = std::chrono::steady_clock;

struct InputConstraints {
  std::array<double, 4> g;
  std::array<ControlVector, 4> grad;
};

InputConstraints input_constraints(const ControlVector& u, const InputBounds& b) {
  return {{u(0) - b.w_max, -b.w_max - u(0), u(1) - b.a_max_acc, b.a_max_dec - u(1)},
          {ControlVector(1.0, 0.0), ControlVector(-1.0, 0.0), ControlVector(0.0, 1.0),
           ControlVector(0.0, -1.0)}};
}

// Keep-out constraint value and its gradient with respect to (px, py, theta).
// The theta component is non-zero only when the ellipse follows the ego heading.
struct ObstacleConstraint {
  double g = 0.0;
  Eigen::Vector3d grad = Eigen::Vector3d::Zero();
};

ObstacleConstraint obstacle_constraint(const StateVector& x, const Obstacle& obs, int tau,
                                       const ConstraintSet& cs) {
  const double heading = cs.ellipse_heading(obs, x(2));
  const EllipseShape shape = ellipse_shape(heading, obs.e_a, obs.e_b);
  const Point2 d = x.head<2>() - obs.center(tau, cs.dt);
  ObstacleConstraint out;
  out.g = 1.0 - d.dot(shape.A * d);
  out.grad.head<2>() = -2.0 * shape.A * d;
  if (cs.heading_convention == HeadingConvention::kEgo) {
    const double c = std::cos(heading);
    const double s = std::sin(heading);
    const double e0 = c * d.x() + s * d.y();
    const double e1 = -s * d.x() + c * d.y();
    out.grad(2) = 2.0 * e0 * e1 * (1.0 / (obs.e_b * obs.e_b) - 1.0 / (obs.e_a * obs.e_a));
  }
  return out;
}

}  // namespace

void BarrierSettings::validate() const {
  if (!(t0 > 0.0) || !(kappa > 1.0) || outer_iters < 1 || !(epsilon >= 0.0)) {
    throw std::invalid_argument("invalid barrier settings");
  }
  ilqr.validate();
}

double barrier_term(double g, double epsilon) {
  if (!(g < -epsilon)) {
    return std::numeric_limits<double>::infinity();
  }
  return -std::log(-g);
}

BarrierObjective::BarrierObjective(const Objective& base, const ConstraintSet& constraints,
                                   int horizon, double weight, double epsilon)
    : base_(base),
      constraints_(constraints),
      horizon_(horizon),
      weight_(weight),
      epsilon_(epsilon) {}

double BarrierObjective::barrier_state(int tau, const StateVector& x) const {
  double sum = 0.0;
  for (const Obstacle& obs : constraints_.obstacles) {
    sum += barrier_term(obstacle_constraint(x, obs, tau, constraints_).g, epsilon_);
  }
  return weight_ * sum;
}

double BarrierObjective::barrier_stage(int tau, const StateVector& x,
                                       const ControlVector& u) const {
  const InputConstraints ic = input_constraints(u, constraints_.bounds);
  double sum = 0.0;
  for (double g : ic.g) {
    sum += barrier_term(g, epsilon_);
  }
  return weight_ * sum + barrier_state(tau, x);
}

double BarrierObjective::stage(int tau, const StateVector& x, const ControlVector& u) const {
  return base_.stage(tau, x, u) + barrier_stage(tau, x, u);
}

void BarrierObjective::add_state_expansion(int tau, const StateVector& x, StateVector& lx,
                                           StateJacobian& lxx) const {
  for (const Obstacle& obs : constraints_.obstacles) {
    const ObstacleConstraint oc = obstacle_constraint(x, obs, tau, constraints_);
    // grad of -w log(-g) is w grad(g) / (-g); Gauss-Newton drops w hess(g) / (-g).
    lx.head<3>() += weight_ * oc.grad / (-oc.g);
    lxx.topLeftCorner<3, 3>() += weight_ * oc.grad * oc.grad.transpose() / (oc.g * oc.g);
  }
}

StageExpansion BarrierObjective::stage_expansion(int tau, const StateVector& x,
                                                 const ControlVector& u) const {
  StageExpansion e = base_.stage_expansion(tau, x, u);
  const InputConstraints ic = input_constraints(u, constraints_.bounds);
  for (std::size_t i = 0; i < ic.g.size(); ++i) {
    const double g = ic.g[i];
    e.lu += weight_ * ic.grad[i] / (-g);
    e.luu += weight_ * ic.grad[i] * ic.grad[i].transpose() / (g * g);
  }
  add_state_expansion(tau, x, e.lx, e.lxx);
  return e;
}

double BarrierObjective::terminal(const StateVector& x) const {
  return base_.terminal(x) + barrier_state(horizon_, x);
}

TerminalExpansion BarrierObjective::terminal_expansion(const StateVector& x) const {
  TerminalExpansion e = base_.terminal_expansion(x);
  add_state_expansion(horizon_, x, e.lx, e.lxx);
  return e;
}

int first_barrier_violation(const Trajectory& traj, const ConstraintSet& constraints,
                            double epsilon) {
  for (int t = 0; t <= traj.horizon(); ++t) {
    if (t < traj.horizon()) {
      for (double g : input_constraints(traj.controls[t], constraints.bounds).g) {
        if (!(g < -epsilon)) {
          return t;
        }
      }
    }
    for (const Obstacle& obs : constraints.obstacles) {
      if (!(obstacle_constraint(traj.states[t], obs, t, constraints).g < -epsilon)) {
        return t;
      }
    }
  }
  return -1;
}

SolveReport barrier_solve(const StateVector& x0, const Objective& objective,
                          const Dynamics& dynamics, const ConstraintSet& constraints, int horizon,
                          const BarrierSettings& settings) {
  settings.validate();
  if (horizon < 1) {
    throw std::invalid_argument("horizon must be at least 1");
  }
  const auto start = Clock::now();
  SolveReport report;

  std::vector<ControlVector> controls(horizon, ControlVector::Zero());
  const Trajectory seed = rollout(dynamics, x0, controls);
  const int bad = first_barrier_violation(seed, constraints, settings.epsilon);
  if (bad >= 0) {
    throw BarrierDomainViolation(
        bad, "initial rollout is not strictly feasible at time index " + std::to_string(bad));
  }

  double t = settings.t0;
  ILQRResult inner;
  for (int outer = 0; outer < settings.outer_iters; ++outer, t *= settings.kappa) {
    const BarrierObjective barrier(objective, constraints, horizon, 1.0 / t, settings.epsilon);
    inner = solve(x0, barrier, dynamics, settings.ilqr, controls);
    controls = inner.trajectory.controls;

    const double violation =
        max_violation(inner.trajectory.states, inner.trajectory.controls, constraints);
    report.residual_inf.push_back(std::max(0.0, violation));
    report.residual_2.push_back(std::max(0.0, violation));
    report.cost.push_back(total_cost(inner.trajectory, objective));
    report.ilqr_iterations.push_back(inner.iterations);
    report.seconds.push_back(std::chrono::duration<double>(Clock::now() - start).count());
    report.iterates.push_back(inner.trajectory);
  }

  report.status = inner.status == ILQRStatus::kConverged ? SolveStatus::kConverged
                                                         : SolveStatus::kMaxIters;
  report.trajectory = std::move(inner.trajectory);
  report.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  report.max_violation =
      max_violation(report.trajectory.states, report.trajectory.controls, constraints);
  return report;
}

}  // namespace admm_ilqr
