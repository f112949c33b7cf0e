#include "admm_ilqr/output.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <stdexcept>

#include <fmt/format.h>

#include "admm_ilqr/errors.hpp"

namespace admm_ilqr {

namespace {

class CsvFile {
 public:
  explicit CsvFile(const std::filesystem::path& path)
      : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) {
      throw IoError("cannot open " + path.string() + " for writing");
    }
  }

  void line(const std::string& text) {
    out_ << text << '\n';
    if (!out_) {
      throw IoError("write failed on " + path_.string());
    }
  }

  void close() {
    out_.close();
    if (!out_) {
      throw IoError("cannot finish writing " + path_.string());
    }
  }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

std::string optional_number(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string();
}

struct MeanAccumulator {
  double sum = 0.0;
  int count = 0;
  void add(const TrialRecord& r) {
    if (r.status != "failed") {
      sum += r.seconds;
      ++count;
    }
  }
  std::string text() const { return count ? format_number(sum / count) : std::string(); }
};

}  // namespace

std::string format_number(double value) { return fmt::format("{}", value); }

std::vector<int> snapshot_iterations(SnapshotPolicy policy, int completed) {
  std::vector<int> out;
  if (completed <= 0) {
    return out;
  }
  if (policy == SnapshotPolicy::kAll) {
    for (int i = 1; i <= completed; ++i) {
      out.push_back(i);
    }
    return out;
  }
  const std::set<int> picked{1, std::min(2, completed), completed};
  return {picked.begin(), picked.end()};
}

SnapshotPolicy parse_snapshot_policy(const std::string& text) {
  if (text == "all") {
    return SnapshotPolicy::kAll;
  }
  if (text == "1,2,last") {
    return SnapshotPolicy::kFirstSecondLast;
  }
  throw std::invalid_argument("snapshot policy must be 'all' or '1,2,last', got '" + text + "'");
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj, double dt,
                          const Dynamics& dynamics) {
  const int horizon = traj.horizon();
  if (static_cast<int>(traj.states.size()) != horizon + 1) {
    throw std::logic_error("trajectory must have T + 1 states");
  }
  for (int t = 0; t < horizon; ++t) {
    const StateVector next = dynamics.step(traj.states[t], traj.controls[t]);
    const double err = (next - traj.states[t + 1]).cwiseAbs().maxCoeff();
    if (!(err <= kTrajectoryRecheckTol)) {
      throw std::logic_error(fmt::format("{}: row {} violates the dynamics by {}", path.string(),
                                         t + 1, err));
    }
  }

  CsvFile csv(path);
  csv.line("tau,t,px,py,theta,v,w,a");
  for (int t = 0; t <= horizon; ++t) {
    const StateVector& x = traj.states[t];
    std::string row = fmt::format("{},{},{},{},{},{}", t, format_number(t * dt),
                                  format_number(x(0)), format_number(x(1)),
                                  format_number(x(2)), format_number(x(3)));
    if (t < horizon) {
      row += fmt::format(",{},{}", format_number(traj.controls[t](0)),
                         format_number(traj.controls[t](1)));
    } else {
      row += ",,";
    }
    csv.line(row);
  }
  csv.close();
}

void write_residuals_csv(const std::filesystem::path& path, const SolveReport& report,
                         bool include_seconds) {
  CsvFile csv(path);
  csv.line("iter,residual_inf,residual_2,cost,ilqr_iters,seconds");
  for (int i = 0; i < report.iterations(); ++i) {
    csv.line(fmt::format("{},{},{},{},{},{}", i + 1, format_number(report.residual_inf[i]),
                         format_number(report.residual_2[i]), format_number(report.cost[i]),
                         report.ilqr_iterations[i],
                         include_seconds ? format_number(report.seconds[i]) : std::string()));
  }
  csv.close();
}

void write_trials_csv(const std::filesystem::path& path, const std::vector<TrialRecord>& trials) {
  CsvFile csv(path);
  csv.line("method,scenario,trial,seconds,status,final_cost,max_violation");
  for (const TrialRecord& r : trials) {
    csv.line(fmt::format("{},{},{},{},{},{},{}", r.method, r.scenario, r.trial,
                         format_number(r.seconds), r.status, optional_number(r.final_cost),
                         optional_number(r.max_violation)));
  }
  csv.close();
}

void write_compare_csv(const std::filesystem::path& path, const std::vector<TrialRecord>& admm,
                       const std::vector<TrialRecord>& barrier) {
  if (admm.size() != barrier.size()) {
    throw std::invalid_argument("compare table needs the same number of trials per method");
  }
  const int scenario = admm.empty() ? 0 : admm.front().scenario;
  CsvFile csv(path);
  csv.line("scenario,trial,admm_seconds,admm_status,barrier_seconds,barrier_status");
  MeanAccumulator admm_mean;
  MeanAccumulator barrier_mean;
  for (std::size_t i = 0; i < admm.size(); ++i) {
    csv.line(fmt::format("{},{},{},{},{},{}", scenario, admm[i].trial,
                         format_number(admm[i].seconds), admm[i].status,
                         format_number(barrier[i].seconds), barrier[i].status));
    admm_mean.add(admm[i]);
    barrier_mean.add(barrier[i]);
  }
  csv.line(fmt::format("{},mean,{},,{},", scenario, admm_mean.text(), barrier_mean.text()));
  csv.close();
}

std::vector<std::filesystem::path> emit_iterates(const SolveReport& report,
                                                 const std::filesystem::path& dir, double dt,
                                                 const Dynamics& dynamics, SnapshotPolicy policy,
                                                 bool include_seconds) {
  std::vector<std::filesystem::path> written;
  for (int iter : snapshot_iterations(policy, static_cast<int>(report.iterates.size()))) {
    const auto path = dir / fmt::format("traj_iter_{:03d}.csv", iter);
    write_trajectory_csv(path, report.iterates[iter - 1], dt, dynamics);
    written.push_back(path);
  }
  const auto residuals = dir / "residuals.csv";
  write_residuals_csv(residuals, report, include_seconds);
  written.push_back(residuals);
  return written;
}

}  // namespace admm_ilqr
