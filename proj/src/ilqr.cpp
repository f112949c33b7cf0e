#include "admm_ilqr/ilqr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Cholesky>

#include "admm_ilqr/errors.hpp"

namespace admm_ilqr {

Trajectory rollout(const Dynamics& dynamics, const StateVector& x0,
                   std::span<const ControlVector> controls) {
  Trajectory traj;
  traj.controls.assign(controls.begin(), controls.end());
  traj.states.reserve(controls.size() + 1);
  traj.states.push_back(x0);
  for (const ControlVector& u : controls) {
    traj.states.push_back(dynamics.step(traj.states.back(), u));
  }
  return traj;
}

double total_cost(const Trajectory& traj, const Objective& objective) {
  double cost = 0.0;
  for (int t = 0; t < traj.horizon(); ++t) {
    cost += objective.stage(t, traj.states[t], traj.controls[t]);
  }
  cost += objective.terminal(traj.states.back());
  return std::isfinite(cost) ? cost : std::numeric_limits<double>::infinity();
}

bool is_dynamically_feasible(const Trajectory& traj, const Dynamics& dynamics, double tol) {
  if (traj.states.size() != traj.controls.size() + 1) {
    return false;
  }
  for (int t = 0; t < traj.horizon(); ++t) {
    const StateVector next = dynamics.step(traj.states[t], traj.controls[t]);
    if ((next - traj.states[t + 1]).cwiseAbs().maxCoeff() > tol) {
      return false;
    }
  }
  return true;
}

void ILQRSettings::validate() const {
  if (max_iters < 1 || !(cost_tolerance > 0.0) || mu_init < 0.0 || !(mu_max > 0.0) ||
      !(mu_growth > 1.0) || !(mu_shrink > 0.0 && mu_shrink < 1.0) || line_search_steps < 0) {
    throw std::invalid_argument("invalid iLQR settings");
  }
}

QExpansion q_expansion(const StageExpansion& stage, const ValueExpansion& next,
                       const Linearization& lin) {
  QExpansion q;
  q.Qx = stage.lx + lin.fx.transpose() * next.Vx;
  q.Qu = stage.lu + lin.fu.transpose() * next.Vx;
  q.Qxx = stage.lxx + lin.fx.transpose() * next.Vxx * lin.fx;
  q.Qux = stage.lux + lin.fu.transpose() * next.Vxx * lin.fx;
  q.Quu = stage.luu + lin.fu.transpose() * next.Vxx * lin.fu;
  return q;
}

namespace {

struct StagePoint {
  StageExpansion cost;
  Linearization lin;
};

// Returns false if Q_uu + mu I is not positive definite at some stage.
bool try_backward(const std::vector<StagePoint>& points, const TerminalExpansion& terminal,
                  double mu, BackwardPassResult& out) {
  const int horizon = static_cast<int>(points.size());
  out.gains.k.assign(horizon, ControlVector::Zero());
  out.gains.K.assign(horizon, FeedbackGain::Zero());
  out.expected_improvement = 0.0;

  ValueExpansion value;
  value.Vx = terminal.lx;
  value.Vxx = terminal.lxx;

  for (int t = horizon - 1; t >= 0; --t) {
    const QExpansion q = q_expansion(points[t].cost, value, points[t].lin);
    const Eigen::Matrix2d quu_reg = q.Quu + mu * Eigen::Matrix2d::Identity();
    const Eigen::LLT<Eigen::Matrix2d> llt(quu_reg);
    if (llt.info() != Eigen::Success) {
      return false;
    }
    const ControlVector k = -llt.solve(q.Qu);
    const FeedbackGain K = -llt.solve(q.Qux);
    if (!k.allFinite() || !K.allFinite()) {
      return false;
    }
    out.gains.k[t] = k;
    out.gains.K[t] = K;

    const double dv = -0.5 * k.dot(q.Quu * k);
    out.expected_improvement += dv;
    // General form; reduces to V_x = Q_x - K^T Q_uu k when mu = 0.
    value.Vx = q.Qx + K.transpose() * q.Quu * k + K.transpose() * q.Qu + q.Qux.transpose() * k;
    value.Vxx = q.Qxx + K.transpose() * q.Quu * K + K.transpose() * q.Qux + q.Qux.transpose() * K;
    value.Vxx = 0.5 * (value.Vxx + value.Vxx.transpose()).eval();
    value.dV += dv;
  }
  out.value0 = value;
  return true;
}

}  // namespace

BackwardPassResult backward_pass(const Trajectory& traj, const Objective& objective,
                                 const Dynamics& dynamics, double mu,
                                 const ILQRSettings& settings) {
  const int horizon = traj.horizon();
  std::vector<StagePoint> points(horizon);
  for (int t = 0; t < horizon; ++t) {
    points[t].cost = objective.stage_expansion(t, traj.states[t], traj.controls[t]);
    points[t].lin = dynamics.linearize(traj.states[t], traj.controls[t]);
  }
  const TerminalExpansion terminal = objective.terminal_expansion(traj.states.back());

  BackwardPassResult result;
  double damping = mu;
  while (!try_backward(points, terminal, damping, result)) {
    damping = std::max(damping * settings.mu_growth, settings.mu_init > 0 ? settings.mu_init : 1e-6);
    if (damping > settings.mu_max) {
      throw RegularizationExhausted("Q_uu not positive definite with damping up to " +
                                    std::to_string(settings.mu_max));
    }
  }
  result.mu = damping;
  return result;
}

Trajectory forward_pass(const Trajectory& traj, const GainSchedule& gains, double alpha,
                        const Dynamics& dynamics) {
  const int horizon = traj.horizon();
  Trajectory out;
  out.states.resize(horizon + 1);
  out.controls.resize(horizon);
  out.states[0] = traj.states[0];
  for (int t = 0; t < horizon; ++t) {
    out.controls[t] = traj.controls[t] + alpha * gains.k[t] +
                      gains.K[t] * (out.states[t] - traj.states[t]);
    out.states[t + 1] = dynamics.step(out.states[t], out.controls[t]);
  }
  return out;
}

ILQRResult solve(const StateVector& x0, const Objective& objective, const Dynamics& dynamics,
                 const ILQRSettings& settings, std::span<const ControlVector> initial_controls) {
  settings.validate();
  ILQRResult result;
  result.trajectory = rollout(dynamics, x0, initial_controls);
  double cost = total_cost(result.trajectory, objective);
  if (!std::isfinite(cost)) {
    throw DomainError("initial trajectory has non-finite cost");
  }
  result.cost_history.push_back(cost);

  double mu = settings.mu_init;
  for (int iter = 1; iter <= settings.max_iters; ++iter) {
    result.iterations = iter;
    const BackwardPassResult back = backward_pass(result.trajectory, objective, dynamics, mu,
                                                  settings);
    mu = back.mu;

    bool accepted = false;
    double alpha = 1.0;
    for (int ls = 0; ls <= settings.line_search_steps; ++ls, alpha *= 0.5) {
      Trajectory candidate;
      try {
        candidate = forward_pass(result.trajectory, back.gains, alpha, dynamics);
      } catch (const DomainError&) {
        continue;
      }
      const double candidate_cost = total_cost(candidate, objective);
      if (candidate_cost < cost) {
        const double decrease = cost - candidate_cost;
        result.trajectory = std::move(candidate);
        cost = candidate_cost;
        result.cost_history.push_back(cost);
        accepted = true;
        // A tiny decrease from a heavily shortened step is not convergence
        // unless the model also predicts little left to gain.
        if (decrease < settings.cost_tolerance &&
            (ls == 0 || -back.expected_improvement < settings.cost_tolerance)) {
          result.status = ILQRStatus::kConverged;
          return result;
        }
        break;
      }
    }

    if (accepted) {
      mu = std::max(mu * settings.mu_shrink, settings.mu_min);
      continue;
    }
    // No step decreased the cost: either nothing is left to gain, or the
    // quadratic model is poor and needs more damping.
    if (-back.expected_improvement < settings.cost_tolerance) {
      result.status = ILQRStatus::kConverged;
      return result;
    }
    mu = std::max(mu * settings.mu_growth, settings.mu_init > 0 ? settings.mu_init : 1e-6);
    if (mu > settings.mu_max) {
      throw RegularizationExhausted("line search failed with damping above " +
                                    std::to_string(settings.mu_max));
    }
  }
  result.status = ILQRStatus::kMaxIters;
  return result;
}

}  // namespace admm_ilqr
