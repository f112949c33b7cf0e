#include "admm_ilqr/admm.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "admm_ilqr/errors.hpp"
#include "admm_ilqr/projection_kernels.hpp"

namespace admm_ilqr {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

void ConsensusState::validate() const {
  if (!(sigma > 0.0)) {
    throw std::invalid_argument("ADMM penalty must be positive");
  }
  if (z.size() != lambda.size() || z.empty()) {
    throw std::invalid_argument("consensus z and lambda must have T + 1 blocks");
  }
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (!z[i].allFinite() || !lambda[i].allFinite()) {
      throw std::invalid_argument("consensus state has non-finite entries");
    }
  }
}

void ADMMSettings::validate() const {
  if (!(sigma > 0.0) || max_admm_iters < 1 || !(primal_tolerance > 0.0)) {
    throw std::invalid_argument("invalid ADMM settings");
  }
  ilqr.validate();
}

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kConverged:
      return "converged";
    case SolveStatus::kMaxIters:
      return "max_iters";
    case SolveStatus::kFailed:
      return "failed";
  }
  return "unknown";
}

std::vector<Block> select(const Trajectory& y) {
  const int horizon = y.horizon();
  std::vector<Block> blocks(horizon + 1);
  for (int t = 0; t <= horizon; ++t) {
    const StateVector& x = y.states[t];
    const ControlVector u = t < horizon ? y.controls[t] : ControlVector::Zero();
    blocks[t] << x(0), x(1), u(0), u(1);
  }
  return blocks;
}

PrimalResidual primal_residual(const Trajectory& y, const std::vector<Block>& z) {
  const std::vector<Block> selected = select(y);
  if (selected.size() != z.size()) {
    throw std::invalid_argument("primal residual: block counts differ");
  }
  PrimalResidual res;
  double sum_sq = 0.0;
  for (std::size_t t = 0; t < z.size(); ++t) {
    Block diff = selected[t] - z[t];
    if (t + 1 == z.size()) {
      diff.tail<2>().setZero();
    }
    res.inf_norm = std::max(res.inf_norm, diff.cwiseAbs().maxCoeff());
    sum_sq += diff.squaredNorm();
  }
  res.two_norm = std::sqrt(sum_sq);
  return res;
}

PenalizedObjective::PenalizedObjective(const Objective& base, const ConsensusState& consensus)
    : base_(base), consensus_(consensus) {
  consensus_.validate();
}

Block PenalizedObjective::offset(int tau) const {
  return consensus_.z[tau] - consensus_.lambda[tau] / consensus_.sigma;
}

double PenalizedObjective::penalty(int tau, const Block& selected) const {
  return 0.5 * consensus_.sigma * (selected - offset(tau)).squaredNorm();
}

double PenalizedObjective::stage(int tau, const StateVector& x, const ControlVector& u) const {
  const Block selected(x(0), x(1), u(0), u(1));
  return base_.stage(tau, x, u) + penalty(tau, selected);
}

StageExpansion PenalizedObjective::stage_expansion(int tau, const StateVector& x,
                                                   const ControlVector& u) const {
  StageExpansion e = base_.stage_expansion(tau, x, u);
  const double sigma = consensus_.sigma;
  const Block r = Block(x(0), x(1), u(0), u(1)) - offset(tau);
  e.lx.head<2>() += sigma * r.head<2>();
  e.lu += sigma * r.tail<2>();
  e.lxx(0, 0) += sigma;
  e.lxx(1, 1) += sigma;
  e.luu.diagonal().array() += sigma;
  return e;
}

double PenalizedObjective::terminal(const StateVector& x) const {
  const int last = static_cast<int>(consensus_.z.size()) - 1;
  const Point2 r = x.head<2>() - offset(last).head<2>();
  return base_.terminal(x) + 0.5 * consensus_.sigma * r.squaredNorm();
}

TerminalExpansion PenalizedObjective::terminal_expansion(const StateVector& x) const {
  const int last = static_cast<int>(consensus_.z.size()) - 1;
  TerminalExpansion e = base_.terminal_expansion(x);
  const Point2 r = x.head<2>() - offset(last).head<2>();
  e.lx.head<2>() += consensus_.sigma * r;
  e.lxx(0, 0) += consensus_.sigma;
  e.lxx(1, 1) += consensus_.sigma;
  return e;
}

SolveReport admm_solve(const StateVector& x0, const Objective& objective,
                       const Dynamics& dynamics, const ConstraintSet& constraints, int horizon,
                       const ADMMSettings& settings, const ADMMObserver& observer) {
  settings.validate();
  if (horizon < 1) {
    throw std::invalid_argument("horizon must be at least 1");
  }
  const auto start = Clock::now();
  SolveReport report;

  const std::vector<ControlVector> zero_controls(horizon, ControlVector::Zero());
  Trajectory y = rollout(dynamics, x0, zero_controls);

  ConsensusState consensus;
  consensus.sigma = settings.sigma;
  consensus.z = select(y);
  consensus.lambda.assign(horizon + 1, Block::Zero());

  std::vector<Block> targets(horizon + 1);
  std::vector<double> headings(horizon + 1);
  report.status = SolveStatus::kMaxIters;
  try {
    for (int iter = 1; iter <= settings.max_admm_iters; ++iter) {
      // y-update
      ILQRResult inner;
      if (iter == 1) {
        inner = solve(x0, objective, dynamics, settings.ilqr, y.controls);
      } else {
        const PenalizedObjective penalized(objective, consensus);
        inner = solve(x0, penalized, dynamics, settings.ilqr, y.controls);
      }
      y = std::move(inner.trajectory);

      // z-update: independent projection per time index.
      const std::vector<Block> selected = select(y);
      for (int t = 0; t <= horizon; ++t) {
        targets[t] = selected[t] + consensus.lambda[t] / consensus.sigma;
        headings[t] = y.states[t](2);
      }
      ConsensusState next;
      next.sigma = consensus.sigma;
      next.z = settings.parallel_projection
                   ? project_blocks_parallel(targets, headings, constraints)
                   : project_blocks_serial(targets, headings, constraints);
      next.z[horizon].tail<2>().setZero();

      // multiplier update
      next.lambda = consensus.lambda;
      for (int t = 0; t <= horizon; ++t) {
        next.lambda[t] += consensus.sigma * (selected[t] - next.z[t]);
      }
      next.lambda[horizon].tail<2>().setZero();

      if (observer) {
        observer(iter, consensus, next, y);
      }
      consensus = std::move(next);

      const PrimalResidual res = primal_residual(y, consensus.z);
      report.residual_inf.push_back(res.inf_norm);
      report.residual_2.push_back(res.two_norm);
      report.cost.push_back(total_cost(y, objective));
      report.ilqr_iterations.push_back(inner.iterations);
      report.seconds.push_back(seconds_since(start));
      report.iterates.push_back(y);

      if (res.inf_norm < settings.primal_tolerance) {
        report.status = SolveStatus::kConverged;
        break;
      }
    }
  } catch (const RegularizationExhausted& e) {
    report.status = SolveStatus::kFailed;
    report.failure = e.what();
  } catch (const NonConvergence& e) {
    report.status = SolveStatus::kFailed;
    report.failure = e.what();
  } catch (const DomainError& e) {
    report.status = SolveStatus::kFailed;
    report.failure = e.what();
  }

  report.trajectory = std::move(y);
  report.wall_seconds = seconds_since(start);
  report.max_violation =
      max_violation(report.trajectory.states, report.trajectory.controls, constraints);
  return report;
}

}  // namespace admm_ilqr
