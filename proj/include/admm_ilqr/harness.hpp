#pragma once

// Benchmark trials and artifact emission for the `plan` tool.

#include <filesystem>
#include <string>
#include <vector>

#include "admm_ilqr/output.hpp"
#include "admm_ilqr/scenario.hpp"

namespace admm_ilqr {

enum class Method { kADMM, kBarrier };

const char* to_string(Method method);

/// Throws std::invalid_argument unless text is "admm" or "barrier".
Method parse_method(const std::string& text);

/// Solves the scenario once with the given method. BarrierDomainViolation
/// and the other solver errors propagate.
SolveReport solve_scenario(const ScenarioConfig& config, Method method);

struct RunOptions {
  SnapshotPolicy snapshots = SnapshotPolicy::kFirstSecondLast;
  bool iteration_times = false;  // fill the seconds column of residuals.csv
  bool parallel_trials = false;  // timings are then not meaningful
};

struct RunOutcome {
  std::vector<TrialRecord> trials;
  bool any_failed = false;
};

/// Runs `trials` identical solves and writes into out_dir: config.json,
/// trials.csv, and the snapshots plus residuals.csv of the first trial that
/// produced any iterates. Trial failures are recorded, not thrown; IoError
/// is thrown for file problems.
RunOutcome run(const ScenarioConfig& config, Method method, int trials,
               const std::filesystem::path& out_dir, const RunOptions& options = {});

struct CompareOutcome {
  RunOutcome admm;
  RunOutcome barrier;
};

/// Both methods, each into its own subdirectory, plus compare.csv in out_dir.
CompareOutcome run_compare(const ScenarioConfig& config, int trials,
                           const std::filesystem::path& out_dir, const RunOptions& options = {});

}  // namespace admm_ilqr
