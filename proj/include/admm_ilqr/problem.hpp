#pragma once

// Abstract optimal-control problem consumed by the iLQR engine. The state is
// 4-dimensional and the control 2-dimensional; everything in this project
// (bicycle model, LQR test instances) fits that shape.

#include <Eigen/Core>

namespace admm_ilqr {

inline constexpr int kStateDim = 4;
inline constexpr int kControlDim = 2;

using StateVector = Eigen::Matrix<double, kStateDim, 1>;
using ControlVector = Eigen::Matrix<double, kControlDim, 1>;
using StateJacobian = Eigen::Matrix<double, kStateDim, kStateDim>;
using ControlJacobian = Eigen::Matrix<double, kStateDim, kControlDim>;
using FeedbackGain = Eigen::Matrix<double, kControlDim, kStateDim>;

struct Linearization {
  StateJacobian fx = StateJacobian::Zero();
  ControlJacobian fu = ControlJacobian::Zero();
};

/// Second-order model of a stage cost around (x, u).
struct StageExpansion {
  StateVector lx = StateVector::Zero();
  ControlVector lu = ControlVector::Zero();
  StateJacobian lxx = StateJacobian::Zero();
  FeedbackGain lux = FeedbackGain::Zero();
  Eigen::Matrix2d luu = Eigen::Matrix2d::Zero();
};

struct TerminalExpansion {
  StateVector lx = StateVector::Zero();
  StateJacobian lxx = StateJacobian::Zero();
};

/// Discrete dynamics x' = f(x, u). Implementations throw DomainError outside
/// their domain of definition.
class Dynamics {
 public:
  virtual ~Dynamics() = default;
  virtual StateVector step(const StateVector& x, const ControlVector& u) const = 0;
  virtual Linearization linearize(const StateVector& x, const ControlVector& u) const = 0;
};

/// Time-indexed stage costs plus a terminal cost. A stage or terminal value of
/// +infinity marks (x, u) as inadmissible; expansions are only requested at
/// admissible points.
class Objective {
 public:
  virtual ~Objective() = default;
  virtual double stage(int tau, const StateVector& x, const ControlVector& u) const = 0;
  virtual StageExpansion stage_expansion(int tau, const StateVector& x,
                                         const ControlVector& u) const = 0;
  virtual double terminal(const StateVector& x) const = 0;
  virtual TerminalExpansion terminal_expansion(const StateVector& x) const = 0;
};

}  // namespace admm_ilqr
