#pragma once

// Log-barrier constrained iLQR, the comparison baseline. Every inequality
// g_i <= 0 contributes -(1/t) log(-g_i) to the cost; an outer loop multiplies
// t by kappa and re-solves warm-started. Iterates must stay strictly feasible,
// so the method needs a strictly feasible initial rollout.

#include "admm_ilqr/admm.hpp"
#include "admm_ilqr/constraints.hpp"
#include "admm_ilqr/ilqr.hpp"

namespace admm_ilqr {

struct BarrierSettings {
  double t0 = 1.0;
  double kappa = 5.0;
  int outer_iters = 5;
  double epsilon = 1e-6;  // g_i >= -epsilon counts as leaving the domain
  ILQRSettings ilqr;

  void validate() const;

  bool operator==(const BarrierSettings&) const = default;
};

/// -log(-g), or +inf once g >= -epsilon.
double barrier_term(double g, double epsilon);

class BarrierObjective final : public Objective {
 public:
  BarrierObjective(const Objective& base, const ConstraintSet& constraints, int horizon,
                   double weight, double epsilon);

  double stage(int tau, const StateVector& x, const ControlVector& u) const override;
  StageExpansion stage_expansion(int tau, const StateVector& x,
                                 const ControlVector& u) const override;
  double terminal(const StateVector& x) const override;
  TerminalExpansion terminal_expansion(const StateVector& x) const override;

  /// Barrier part only, without the base objective.
  double barrier_stage(int tau, const StateVector& x, const ControlVector& u) const;
  double barrier_state(int tau, const StateVector& x) const;

 private:
  void add_state_expansion(int tau, const StateVector& x, StateVector& lx,
                           StateJacobian& lxx) const;

  const Objective& base_;
  const ConstraintSet& constraints_;
  int horizon_;
  double weight_;  // 1/t
  double epsilon_;
};

/// Index of the first time step at which the trajectory is not strictly
/// inside the barrier domain, or -1 when it is.
int first_barrier_violation(const Trajectory& traj, const ConstraintSet& constraints,
                            double epsilon);

/// Throws BarrierDomainViolation (with the offending time index) when the
/// zero-control rollout is not strictly feasible. RegularizationExhausted
/// propagates from the inner solves.
SolveReport barrier_solve(const StateVector& x0, const Objective& objective,
                          const Dynamics& dynamics, const ConstraintSet& constraints, int horizon,
                          const BarrierSettings& settings);

}  // namespace admm_ilqr
