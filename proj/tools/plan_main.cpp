// plan: run the constrained planner on a built-in or user scenario and write
// CSV artifacts.
//
// Exit codes: 0 success, 2 config/usage error, 3 solver failure, 4 I/O error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "admm_ilqr/config_io.hpp"
#include "admm_ilqr/errors.hpp"
#include "admm_ilqr/harness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitIo = 4;

void print_summary(const admm_ilqr::RunOutcome& outcome) {
  double total = 0.0;
  for (const auto& t : outcome.trials) {
    std::cout << t.method << " trial " << t.trial << ": " << t.status << ", "
              << admm_ilqr::format_number(t.seconds) << " s\n";
    total += t.seconds;
  }
  if (!outcome.trials.empty()) {
    std::cout << "mean " << admm_ilqr::format_number(total / outcome.trials.size()) << " s\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ADMM-iLQR constrained trajectory planner"};

  std::optional<int> scenario;
  std::optional<std::string> config_path;
  std::string method_name = "admm";
  int trials = 1;
  std::string out_dir = "plan_out";
  std::optional<int> max_admm;
  std::optional<double> sigma;
  std::optional<double> v0;
  std::string snapshots = "1,2,last";
  bool compare = false;
  bool iteration_times = false;
  bool parallel_trials = false;
  std::optional<int> export_id;

  auto* scenario_opt = app.add_option("--scenario", scenario, "Built-in scenario (1 or 2)");
  auto* config_opt = app.add_option("--config", config_path, "Scenario JSON file");
  scenario_opt->excludes(config_opt);
  app.add_option("--method", method_name, "admm or barrier")->capture_default_str();
  app.add_option("--trials", trials, "Number of identical solves")->capture_default_str();
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();
  app.add_option("--max-admm", max_admm, "Override the ADMM iteration cap");
  app.add_option("--sigma", sigma, "Override the ADMM penalty");
  app.add_option("--v0", v0, "Override the initial speed [m/s]");
  app.add_option("--snapshots", snapshots, "all or 1,2,last")->capture_default_str();
  app.add_flag("--compare", compare, "Run both methods and write compare.csv");
  app.add_flag("--iteration-times", iteration_times,
               "Fill the seconds column of residuals.csv (not reproducible)");
  app.add_flag("--parallel-trials", parallel_trials, "Run trials concurrently");
  app.add_option("--export-scenario", export_id, "Print a built-in scenario as JSON and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  using namespace admm_ilqr;
  try {
    if (export_id) {
      std::cout << to_json_text(builtin_scenario(*export_id));
      return kExitOk;
    }
    if (!scenario && !config_path) {
      std::cerr << "error: one of --scenario or --config is required\n";
      return kExitConfig;
    }

    ScenarioConfig config = scenario ? builtin_scenario(*scenario) : load_config(*config_path);
    if (max_admm) {
      config.admm.max_admm_iters = *max_admm;
    }
    if (sigma) {
      config.admm.sigma = *sigma;
    }
    if (v0) {
      config.initial.v = *v0;
    }
    config.validate();

    RunOptions options;
    options.snapshots = parse_snapshot_policy(snapshots);
    options.iteration_times = iteration_times;
    options.parallel_trials = parallel_trials;
    if (trials < 1) {
      throw ConfigError("--trials must be at least 1");
    }

    bool failed = false;
    if (compare) {
      const CompareOutcome outcome = run_compare(config, trials, out_dir, options);
      print_summary(outcome.admm);
      print_summary(outcome.barrier);
      failed = outcome.admm.any_failed || outcome.barrier.any_failed;
    } else {
      const RunOutcome outcome = run(config, parse_method(method_name), trials, out_dir, options);
      print_summary(outcome);
      failed = outcome.any_failed;
    }
    return failed ? kExitSolver : kExitOk;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    // UnknownScenario and bad option values
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
}
