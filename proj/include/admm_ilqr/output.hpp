#pragma once

// CSV artifacts written by the harness. Numbers use the shortest
// representation that round-trips, so identical runs give identical bytes.
//
//   traj_iter_NNN.csv  tau,t,px,py,theta,v,w,a   (controls blank on row T)
//   residuals.csv      iter,residual_inf,residual_2,cost,ilqr_iters,seconds
//   trials.csv         method,scenario,trial,seconds,status,final_cost,max_violation
//   compare.csv        scenario,trial,admm_seconds,admm_status,barrier_seconds,barrier_status

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "admm_ilqr/admm.hpp"
#include "admm_ilqr/ilqr.hpp"

namespace admm_ilqr {

enum class SnapshotPolicy {
  kAll,            // every outer iteration
  kFirstSecondLast,
};

/// 1-based iteration numbers to snapshot out of `completed` iterations,
/// ascending and without duplicates.
std::vector<int> snapshot_iterations(SnapshotPolicy policy, int completed);

/// Throws std::invalid_argument unless text is "all" or "1,2,last".
SnapshotPolicy parse_snapshot_policy(const std::string& text);

/// Dynamics residual allowed on a written trajectory row.
inline constexpr double kTrajectoryRecheckTol = 1e-8;

/// Writes T + 1 rows after re-checking every transition against the
/// dynamics; throws std::logic_error if one is off by more than
/// kTrajectoryRecheckTol, IoError if the file cannot be written.
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj, double dt,
                          const Dynamics& dynamics);

/// One row per completed outer iteration. The seconds column stays empty
/// unless include_seconds is set, since timing differs between runs.
void write_residuals_csv(const std::filesystem::path& path, const SolveReport& report,
                         bool include_seconds);

struct TrialRecord {
  std::string method;  // "admm" or "barrier"
  int scenario = 0;
  int trial = 0;
  double seconds = 0.0;
  std::string status;  // converged | max_iters | failed
  std::optional<double> final_cost;     // absent when the solve failed
  std::optional<double> max_violation;  // absent when the solve failed
};

void write_trials_csv(const std::filesystem::path& path, const std::vector<TrialRecord>& trials);

/// Side-by-side timing table, one row per trial plus a "mean" row averaging
/// the trials that did not fail.
void write_compare_csv(const std::filesystem::path& path, const std::vector<TrialRecord>& admm,
                       const std::vector<TrialRecord>& barrier);

/// Trajectory snapshots selected by the policy plus residuals.csv, into dir.
/// Returns the paths written.
std::vector<std::filesystem::path> emit_iterates(const SolveReport& report,
                                                 const std::filesystem::path& dir, double dt,
                                                 const Dynamics& dynamics, SnapshotPolicy policy,
                                                 bool include_seconds = false);

/// Shortest round-trip decimal form of a double.
std::string format_number(double value);

}  // namespace admm_ilqr
