#include "admm_ilqr/harness.hpp"

#include <chrono>
#include <exception>
#include <optional>
#include <stdexcept>
#include <system_error>

#include "admm_ilqr/config_io.hpp"
#include "admm_ilqr/errors.hpp"

namespace admm_ilqr {

namespace {

using Clock = std::chrono::steady_clock;

struct TrialResult {
  TrialRecord record;
  std::optional<SolveReport> report;
};

TrialResult run_trial(const ScenarioConfig& config, Method method, int index) {
  TrialResult out;
  out.record.method = to_string(method);
  out.record.scenario = config.id;
  out.record.trial = index;
  const auto start = Clock::now();
  try {
    SolveReport report = solve_scenario(config, method);
    out.record.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    out.record.status = to_string(report.status);
    if (report.status != SolveStatus::kFailed) {
      out.record.final_cost = report.cost.empty() ? 0.0 : report.cost.back();
      out.record.max_violation = report.max_violation;
    }
    out.report = std::move(report);
  } catch (const BarrierDomainViolation&) {
    out.record.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    out.record.status = "failed";
  } catch (const RegularizationExhausted&) {
    out.record.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    out.record.status = "failed";
  } catch (const NonConvergence&) {
    out.record.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    out.record.status = "failed";
  } catch (const DomainError&) {
    out.record.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    out.record.status = "failed";
  }
  return out;
}

void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoError("cannot create output directory " + dir.string() +
                  (ec ? ": " + ec.message() : std::string()));
  }
}

}  // namespace

const char* to_string(Method method) {
  return method == Method::kADMM ? "admm" : "barrier";
}

Method parse_method(const std::string& text) {
  if (text == "admm") {
    return Method::kADMM;
  }
  if (text == "barrier") {
    return Method::kBarrier;
  }
  throw std::invalid_argument("method must be 'admm' or 'barrier', got '" + text + "'");
}

SolveReport solve_scenario(const ScenarioConfig& config, Method method) {
  config.validate();
  const BicycleDynamics dynamics(config.vehicle);
  const TrackingObjective objective(config.weights, config.reference);
  const ConstraintSet constraints = config.constraints();
  const StateVector x0 = config.initial.vec();
  if (method == Method::kADMM) {
    return admm_solve(x0, objective, dynamics, constraints, config.horizon, config.admm);
  }
  return barrier_solve(x0, objective, dynamics, constraints, config.horizon, config.barrier);
}

RunOutcome run(const ScenarioConfig& config, Method method, int trials,
               const std::filesystem::path& out_dir, const RunOptions& options) {
  if (trials < 1) {
    throw std::invalid_argument("trials must be at least 1");
  }
  config.validate();
  ensure_directory(out_dir);
  save_config(config, out_dir / "config.json");

  std::vector<TrialResult> results(trials);
  if (options.parallel_trials) {
    std::vector<std::exception_ptr> errors(trials);
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < trials; ++i) {
      try {
        results[i] = run_trial(config, method, i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
    for (const auto& e : errors) {
      if (e) {
        std::rethrow_exception(e);
      }
    }
  } else {
    for (int i = 0; i < trials; ++i) {
      results[i] = run_trial(config, method, i);
    }
  }

  RunOutcome outcome;
  const SolveReport* emitted = nullptr;
  for (const TrialResult& r : results) {
    outcome.trials.push_back(r.record);
    outcome.any_failed = outcome.any_failed || r.record.status == "failed";
    if (!emitted && r.report && !r.report->iterates.empty()) {
      emitted = &*r.report;
    }
  }
  write_trials_csv(out_dir / "trials.csv", outcome.trials);
  if (emitted) {
    const BicycleDynamics dynamics(config.vehicle);
    emit_iterates(*emitted, out_dir, config.vehicle.dt, dynamics, options.snapshots,
                  options.iteration_times);
  }
  return outcome;
}

CompareOutcome run_compare(const ScenarioConfig& config, int trials,
                           const std::filesystem::path& out_dir, const RunOptions& options) {
  CompareOutcome outcome;
  outcome.admm = run(config, Method::kADMM, trials, out_dir / "admm", options);
  outcome.barrier = run(config, Method::kBarrier, trials, out_dir / "barrier", options);
  write_compare_csv(out_dir / "compare.csv", outcome.admm.trials, outcome.barrier.trials);
  return outcome;
}

}  // namespace admm_ilqr
