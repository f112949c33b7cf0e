#pragma once

/**
 * @file admm.hpp
 * @brief Consensus ADMM around iLQR for constrained motion planning.
 *
 * The trajectory y is split from a consensus copy z of its constrained
 * components (px, py, w, a per time index). Each outer iteration
 *
 *   1. solves the dynamics-only problem with the augmented penalty
 *      (sigma/2) |select(y) - z + lambda/sigma|^2 by iLQR, warm-started;
 *   2. projects select(y) + lambda/sigma onto the constraints, one
 *      independent problem per time index;
 *   3. updates lambda += sigma (select(y) - z).
 *
 * Iteration stops when |select(y) - z|_inf drops below the primal tolerance.
 */

#include <functional>
#include <string>
#include <vector>

#include "admm_ilqr/constraints.hpp"
#include "admm_ilqr/ilqr.hpp"

namespace admm_ilqr {

struct ConsensusState {
  std::vector<Block> z;       // T + 1 blocks
  std::vector<Block> lambda;  // T + 1 blocks
  double sigma = 10.0;

  void validate() const;
};

struct ADMMSettings {
  double sigma = 10.0;
  int max_admm_iters = 20;
  double primal_tolerance = 1e-3;
  bool parallel_projection = true;
  ILQRSettings ilqr;

  void validate() const;

  bool operator==(const ADMMSettings&) const = default;
};

enum class SolveStatus { kConverged, kMaxIters, kFailed };

const char* to_string(SolveStatus status);

/// Outcome of a constrained solve (ADMM or barrier); one history entry per
/// completed outer iteration.
struct SolveReport {
  Trajectory trajectory;
  std::vector<double> residual_inf;
  std::vector<double> residual_2;
  std::vector<double> cost;  // base objective of the iterate
  std::vector<int> ilqr_iterations;
  std::vector<double> seconds;  // cumulative wall-clock at the end of each iteration
  std::vector<Trajectory> iterates;
  double wall_seconds = 0.0;
  SolveStatus status = SolveStatus::kFailed;
  std::string failure;
  /// Worst constraint violation of the returned trajectory (<= 0: feasible).
  double max_violation = 0.0;

  int iterations() const { return static_cast<int>(residual_inf.size()); }
};

/// Block tau = (px, py, w, a) at tau < T; the final block carries zero controls.
std::vector<Block> select(const Trajectory& y);

struct PrimalResidual {
  double inf_norm = 0.0;
  double two_norm = 0.0;
};

/// |select(y) - z| over all blocks, excluding the unused control slot of the
/// final block.
PrimalResidual primal_residual(const Trajectory& y, const std::vector<Block>& z);

/// Base objective plus the per-stage augmented-Lagrangian penalty.
class PenalizedObjective final : public Objective {
 public:
  PenalizedObjective(const Objective& base, const ConsensusState& consensus);

  double stage(int tau, const StateVector& x, const ControlVector& u) const override;
  StageExpansion stage_expansion(int tau, const StateVector& x,
                                 const ControlVector& u) const override;
  double terminal(const StateVector& x) const override;
  TerminalExpansion terminal_expansion(const StateVector& x) const override;

  /// (sigma/2) |select - z + lambda/sigma|^2 for one block.
  double penalty(int tau, const Block& selected) const;

 private:
  Block offset(int tau) const;  // z - lambda / sigma

  const Objective& base_;
  const ConsensusState& consensus_;
};

/// Called after every multiplier update with the consensus state before and
/// after the iteration and the iterate y it was computed from.
using ADMMObserver = std::function<void(int iteration, const ConsensusState& before,
                                        const ConsensusState& after, const Trajectory& y)>;

/// Runs consensus ADMM from the zero-control rollout with lambda = 0. The
/// first y-update has no consensus target yet and solves the unpenalized
/// problem; every later one is warm-started from the previous y. Solver
/// errors (RegularizationExhausted, NonConvergence, DomainError) end the run
/// with status kFailed and a partial report.
SolveReport admm_solve(const StateVector& x0, const Objective& objective,
                       const Dynamics& dynamics, const ConstraintSet& constraints, int horizon,
                       const ADMMSettings& settings, const ADMMObserver& observer = {});

}  // namespace admm_ilqr
