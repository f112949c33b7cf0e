#pragma once

/**
 * @file ilqr.hpp
 * @brief Gauss-Newton iterative LQR.
 *
 * Each iteration linearizes the dynamics and quadraticizes the cost around the
 * nominal trajectory, runs the Riccati-like backward recursion for
 * feedforward/feedback gains, then rolls the nonlinear dynamics forward under
 *
 *   u(t) = u_hat(t) + alpha k(t) + K(t) (x(t) - x_hat(t))
 *
 * with a backtracking line search on alpha. Dynamics curvature terms are not
 * used. Levenberg damping mu is added to Q_uu.
 */

#include <span>
#include <vector>

#include "admm_ilqr/problem.hpp"

namespace admm_ilqr {

struct Trajectory {
  std::vector<StateVector> states;      // T + 1
  std::vector<ControlVector> controls;  // T

  int horizon() const { return static_cast<int>(controls.size()); }
};

/// Forward simulation of the dynamics from x0 under a control sequence.
Trajectory rollout(const Dynamics& dynamics, const StateVector& x0,
                   std::span<const ControlVector> controls);

/// Sum of stage costs plus terminal cost; +inf if any term is non-finite.
double total_cost(const Trajectory& traj, const Objective& objective);

/// True when states[t+1] == f(states[t], controls[t]) within tol for all t.
bool is_dynamically_feasible(const Trajectory& traj, const Dynamics& dynamics, double tol);

struct GainSchedule {
  std::vector<ControlVector> k;  // feedforward
  std::vector<FeedbackGain> K;   // feedback
};

struct ValueExpansion {
  StateVector Vx = StateVector::Zero();
  StateJacobian Vxx = StateJacobian::Zero();
  double dV = 0.0;
};

struct QExpansion {
  StateVector Qx;
  ControlVector Qu;
  StateJacobian Qxx;
  FeedbackGain Qux;
  Eigen::Matrix2d Quu;
};

QExpansion q_expansion(const StageExpansion& stage, const ValueExpansion& next,
                       const Linearization& lin);

struct BackwardPassResult {
  GainSchedule gains;
  /// Predicted cost change for a full step, sum of -1/2 k^T Q_uu k (<= 0).
  double expected_improvement = 0.0;
  /// Value expansion at tau = 0.
  ValueExpansion value0;
  /// Damping actually used; larger than requested when Q_uu + mu I was not
  /// positive definite somewhere.
  double mu = 0.0;
};

struct ILQRSettings {
  int max_iters = 100;
  double cost_tolerance = 1e-4;
  double mu_init = 1e-6;
  double mu_min = 1e-9;
  double mu_max = 1e10;
  double mu_growth = 10.0;
  double mu_shrink = 0.5;
  /// Line search tries alpha = 1, 1/2, ..., 2^-line_search_steps.
  int line_search_steps = 10;

  void validate() const;

  bool operator==(const ILQRSettings&) const = default;
};

/// Throws RegularizationExhausted when mu exceeds settings.mu_max without
/// obtaining a positive-definite Q_uu + mu I.
BackwardPassResult backward_pass(const Trajectory& traj, const Objective& objective,
                                 const Dynamics& dynamics, double mu,
                                 const ILQRSettings& settings = {});

/// Closed-loop rollout from traj.states[0]. Propagates DomainError.
Trajectory forward_pass(const Trajectory& traj, const GainSchedule& gains, double alpha,
                        const Dynamics& dynamics);

enum class ILQRStatus { kConverged, kMaxIters };

struct ILQRResult {
  Trajectory trajectory;
  /// Initial cost followed by the cost after each accepted iteration.
  std::vector<double> cost_history;
  int iterations = 0;
  ILQRStatus status = ILQRStatus::kMaxIters;
};

/// Iterates backward/forward passes until the accepted cost decrease falls
/// below cost_tolerance or max_iters is reached.
ILQRResult solve(const StateVector& x0, const Objective& objective, const Dynamics& dynamics,
                 const ILQRSettings& settings, std::span<const ControlVector> initial_controls);

}  // namespace admm_ilqr
