// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "admm_ilqr/admm.hpp"
#include "admm_ilqr/barrier.hpp"
#include "admm_ilqr/errors.hpp"
#include "admm_ilqr/harness.hpp"
#include "admm_ilqr/ilqr.hpp"
#include "admm_ilqr/scenario.hpp"
#include "oracles.hpp"

using namespace admm_ilqr;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

bool strictly_inside(const ConstraintSet& cs, int tau, const StateVector& x,
                     const ControlVector& u, double margin) {
  const InputBounds& b = cs.bounds;
  if (std::abs(u(0)) > b.w_max - margin || u(1) > b.a_max_acc - margin ||
      u(1) < b.a_max_dec + margin) {
    return false;
  }
  for (const Obstacle& obs : cs.obstacles) {
    const double heading = cs.ellipse_heading(obs, x(2));
    if (obstacle_violation(x.head<2>(), obs, tau, cs.dt, heading) > -margin) {
      return false;
    }
  }
  return true;
}

ScenarioConfig with_speed(int id, double v0) {
  ScenarioConfig c = builtin_scenario(id);
  c.initial.v = v0;
  return c;
}

// ---------------------------------------------------------------------------

Verdict lqr_oracle() {
  std::mt19937_64 rng(20240601);
  double worst_err = 0.0;
  double worst_time = 0.0;
  for (int i = 0; i < 20; ++i) {
    const oracle::LqrInstance p = oracle::random_lqr(rng, 60);
    const oracle::LinearDynamics dyn(p);
    const oracle::QuadraticObjective obj(p);
    const std::vector<ControlVector> u0(60, ControlVector::Zero());
    const auto start = Clock::now();
    const ILQRResult r = solve(p.x0, obj, dyn, {}, u0);
    worst_time = std::max(worst_time, seconds_since(start));
    const double ref = oracle::riccati_cost(p);
    worst_err = std::max(worst_err, std::abs(r.cost_history.back() - ref) / std::abs(ref));
  }
  return {worst_err < 1e-8 && worst_time < 0.05,
          fmt::format("max rel err {:.2e}, slowest {:.2f} ms", worst_err, 1e3 * worst_time)};
}

Verdict derivative_suite() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> upos(-30.0, 60.0);
  std::uniform_real_distribution<double> uy(-4.0, 8.0);
  std::uniform_real_distribution<double> uth(-std::numbers::pi, std::numbers::pi);
  std::uniform_real_distribution<double> uv(0.0, 15.0);
  std::uniform_real_distribution<double> uw(-0.6, 0.6);
  std::uniform_real_distribution<double> ua(-3.0, 3.0);
  std::uniform_real_distribution<double> us(0.5, 20.0);
  std::uniform_int_distribution<int> utau(0, 59);

  const ScenarioConfig s1 = builtin_scenario(1);
  const ScenarioConfig s2 = builtin_scenario(2);
  const BicycleDynamics dyn(s1.vehicle);
  const TrackingObjective lateral(s1.weights, s1.reference);
  const TrackingObjective path(
      s1.weights, Reference::path({{0, 0}, {15, 1}, {30, -2}, {45, 4}, {60, 0}}, 8.0));
  const ConstraintSet cs2 = s2.constraints();
  const TrackingObjective base2(s2.weights, s2.reference);
  const BarrierObjective barrier(base2, cs2, 60, 0.2, 1e-6);

  double worst_dyn = 0.0;
  double worst_cost = 0.0;
  int barrier_points = 0;
  for (int i = 0; i < 1000; ++i) {
    const StateVector x(upos(rng), uy(rng), uth(rng), uv(rng));
    const ControlVector u(uw(rng), ua(rng));
    Eigen::VectorXd xu(6);
    xu << x, u;

    const Linearization lin = dyn.linearize(x, u);
    const auto fx = oracle::jacobian([&](const Eigen::VectorXd& v) {
      return Eigen::VectorXd(dyn.step(v, u));
    }, x);
    const auto fu = oracle::jacobian([&](const Eigen::VectorXd& v) {
      return Eigen::VectorXd(dyn.step(x, v));
    }, u);
    worst_dyn = std::max({worst_dyn, max_abs(fx - lin.fx), max_abs(fu - lin.fu)});

    // Stage and terminal expansions of every objective the solvers use.
    std::vector<Block> z(61), lambda(61);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int t = 0; t <= 60; ++t) {
      z[t] = Block(n(rng), n(rng), n(rng), n(rng));
      lambda[t] = Block(n(rng), n(rng), n(rng), n(rng));
    }
    const ConsensusState consensus{z, lambda, us(rng)};
    const PenalizedObjective penalized(lateral, consensus);

    const int tau = utau(rng);
    std::vector<const Objective*> objectives{&lateral, &path, &penalized};
    // The barrier is only differentiable strictly inside its domain; keep the
    // difference stencil well away from every constraint boundary.
    if (strictly_inside(cs2, tau, x, u, 1e-2) && strictly_inside(cs2, 60, x, u, 1e-2)) {
      objectives.push_back(&barrier);
      ++barrier_points;
    }
    for (const Objective* obj : objectives) {
      const StageExpansion e = obj->stage_expansion(tau, x, u);
      const Eigen::VectorXd g = oracle::gradient(
          [&](const Eigen::VectorXd& v) { return obj->stage(tau, v.head<4>(), v.tail<2>()); },
          xu);
      worst_cost = std::max({worst_cost, max_abs(g.head<4>() - e.lx), max_abs(g.tail<2>() - e.lu)});
      const TerminalExpansion te = obj->terminal_expansion(x);
      const Eigen::VectorXd gt =
          oracle::gradient([&](const Eigen::VectorXd& v) { return obj->terminal(v); }, x);
      worst_cost = std::max(worst_cost, max_abs(gt - te.lx));
    }
    // Exact Hessians where the cost is quadratic.
    for (const Objective* obj : {static_cast<const Objective*>(&lateral),
                                 static_cast<const Objective*>(&penalized)}) {
      const StageExpansion e = obj->stage_expansion(tau, x, u);
      const Eigen::MatrixXd H = oracle::jacobian(
          [&](const Eigen::VectorXd& v) {
            const StageExpansion ev = obj->stage_expansion(tau, v.head<4>(), v.tail<2>());
            Eigen::VectorXd out(6);
            out << ev.lx, ev.lu;
            return out;
          },
          xu);
      worst_cost = std::max({worst_cost, max_abs(H.topLeftCorner(4, 4) - e.lxx),
                             max_abs(H.bottomLeftCorner(2, 4) - e.lux),
                             max_abs(H.bottomRightCorner(2, 2) - e.luu)});
    }
  }
  return {worst_dyn < 1e-5 && worst_cost < 1e-5,
          fmt::format("dynamics {:.2e}, costs {:.2e} ({} barrier points)", worst_dyn,
                      worst_cost, barrier_points)};
}

Verdict projection_oracle() {
  std::mt19937_64 rng(99);
  const Point2 center(15, -1);
  const double heading = 0.35;
  const EllipseShape shape = ellipse_shape(heading, 5.0, 2.5);
  const auto samples = oracle::boundary_samples(center, heading, 5.0, 2.5, 1'000'000);
  double worst_match = 0.0;
  double worst_idem = 0.0;
  for (int i = 0; i < 200; ++i) {
    const Point2 p = oracle::random_interior_point(rng, center, heading, 5.0, 2.5);
    const Point2 q = project_outside_ellipse(p, shape, center).point;
    worst_match = std::max(worst_match, (q - oracle::nearest_of(samples, p)).norm());
    worst_idem = std::max(worst_idem, (project_outside_ellipse(q, shape, center).point - q).norm());
  }
  return {worst_match < 1e-4 && worst_idem < 1e-9,
          fmt::format("max distance to sampled optimum {:.2e}, idempotence {:.2e}", worst_match,
                      worst_idem)};
}

Verdict scenario1() {
  const ScenarioConfig cfg = builtin_scenario(1);
  const auto start = Clock::now();
  const SolveReport r = solve_scenario(cfg, Method::kADMM);
  const double elapsed = seconds_since(start);
  if (r.status == SolveStatus::kFailed) {
    return {false, "solver failed: " + r.failure};
  }
  const Trajectory& y = r.trajectory;
  double worst_w = 0.0;
  double a_lo = 0.0;
  double a_hi = 0.0;
  for (const ControlVector& u : y.controls) {
    worst_w = std::max(worst_w, std::abs(u(0)));
    a_lo = std::min(a_lo, u(1));
    a_hi = std::max(a_hi, u(1));
  }
  Obstacle parked;
  parked.center0 = {15, -1};
  double worst_h = -1e300;
  for (int t = 0; t <= cfg.horizon; ++t) {
    worst_h = std::max(worst_h, obstacle_violation(y.states[t].head<2>(), parked, t, 0.1));
  }
  const double vT = y.states.back()(3);
  const double decay = r.residual_inf.back() / r.residual_inf.front();
  const bool pass = r.status == SolveStatus::kConverged && r.iterations() <= 20 &&
                    worst_w <= 0.6 && a_lo >= -3.0 && a_hi <= 3.0 && worst_h <= 1e-3 &&
                    std::abs(vT - 8.0) <= 0.5 && decay < 0.01 && elapsed < 1.0;
  return {pass, fmt::format("{} after {} iterations, max|w| {:.3f}, a in [{:.2f}, {:.2f}], "
                            "max h {:.2e}, v(T) {:.3f}, final/first residual {:.2e}, {:.3f} s",
                            to_string(r.status), r.iterations(), worst_w, a_lo, a_hi, worst_h,
                            vT, decay, elapsed)};
}

Verdict scenario2() {
  const ScenarioConfig cfg = builtin_scenario(2);
  const auto start = Clock::now();
  const SolveReport r = solve_scenario(cfg, Method::kADMM);
  const double elapsed = seconds_since(start);
  if (r.status == SolveStatus::kFailed) {
    return {false, "solver failed: " + r.failure};
  }
  // Recomputed here against each obstacle's position at the same stamp.
  const Trajectory& y = r.trajectory;
  double worst = -1e300;
  for (int t = 0; t <= cfg.horizon; ++t) {
    for (const Obstacle& o : cfg.obstacles) {
      const Point2 c = o.center0 + (t * cfg.vehicle.dt) * o.velocity;
      const Point2 d = y.states[t].head<2>() - c;
      worst = std::max(worst, 1.0 - d.x() * d.x() / 25.0 - d.y() * d.y() / 6.25);
    }
    if (t < cfg.horizon) {
      const ControlVector& u = y.controls[t];
      worst = std::max({worst, std::abs(u(0)) - 0.6, u(1) - 3.0, -3.0 - u(1)});
    }
  }
  const double vT = y.states.back()(3);
  const double pyT = y.states.back()(1);
  const bool pass = worst <= 0.0 && vT >= 7.5 && vT <= 8.7 && std::abs(pyT - 4.0) <= 0.2 &&
                    elapsed < 1.0;
  return {pass, fmt::format("{} after {} iterations, max violation {:.2e}, v(T) {:.3f}, "
                            "py(T) {:.3f}, {:.3f} s",
                            to_string(r.status), r.iterations(), worst, vT, pyT, elapsed)};
}

Verdict infeasible_seed_contrast() {
  std::string detail;
  bool pass = true;
  for (const auto& [id, v0] : {std::pair{1, 4.0}, std::pair{2, 8.0}}) {
    const ScenarioConfig cfg = with_speed(id, v0);
    std::string barrier_outcome;
    try {
      solve_scenario(cfg, Method::kBarrier);
      barrier_outcome = "barrier solved";
      pass = false;
    } catch (const BarrierDomainViolation& e) {
      barrier_outcome = fmt::format("barrier domain violation at tau {}", e.time_index());
    }
    const SolveReport admm = solve_scenario(cfg, Method::kADMM);
    pass = pass && admm.status == SolveStatus::kConverged;
    detail += fmt::format("{}S{} v0={}: {}, admm {}", detail.empty() ? "" : "; ", id, v0,
                          barrier_outcome, to_string(admm.status));
  }
  return {pass, detail};
}

Verdict relative_speed() {
  bool pass = true;
  std::string detail;
  for (const auto& [id, v0] : {std::pair{1, 0.0}, std::pair{2, 4.0}}) {
    const ScenarioConfig cfg = with_speed(id, v0);
    double admm_total = 0.0;
    double barrier_total = 0.0;
    bool ok = true;
    for (int trial = 0; trial < 5; ++trial) {
      auto start = Clock::now();
      const SolveReport a = solve_scenario(cfg, Method::kADMM);
      admm_total += seconds_since(start);
      start = Clock::now();
      const SolveReport b = solve_scenario(cfg, Method::kBarrier);
      barrier_total += seconds_since(start);
      ok = ok && a.status != SolveStatus::kFailed && b.status != SolveStatus::kFailed;
    }
    const double ratio = barrier_total / admm_total;
    pass = pass && ok && admm_total < barrier_total && ratio >= 1.5;
    detail += fmt::format("{}S{} v0={}: admm {:.2f} ms, barrier {:.2f} ms, ratio {:.2f}",
                          detail.empty() ? "" : "; ", id, v0, 1e3 * admm_total / 5,
                          1e3 * barrier_total / 5, ratio);
  }
  return {pass, detail};
}

Verdict inactive_splitting() {
  bool pass = true;
  std::string detail;
  for (int id : {1, 2}) {
    ScenarioConfig cfg = builtin_scenario(id);
    cfg.obstacles.clear();
    cfg.bounds = {1e9, 1e9, -1e9};
    const SolveReport admm = solve_scenario(cfg, Method::kADMM);
    const BicycleDynamics dyn(cfg.vehicle);
    const TrackingObjective obj(cfg.weights, cfg.reference);
    const ILQRResult plain = solve(cfg.initial.vec(), obj, dyn, cfg.admm.ilqr,
                                   std::vector<ControlVector>(cfg.horizon, ControlVector::Zero()));
    const double ref = plain.cost_history.back();
    const double rel = std::abs(total_cost(admm.trajectory, obj) - ref) / std::abs(ref);
    pass = pass && admm.status != SolveStatus::kFailed && rel < 1e-6;
    detail += fmt::format("{}S{} rel diff {:.2e}", detail.empty() ? "" : "; ", id, rel);
  }
  return {pass, detail};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Verdict determinism() {
  const fs::path root = fs::temp_directory_path() / "admm_ilqr_acceptance_determinism";
  fs::remove_all(root);
  for (const char* run : {"a", "b"}) {
    const std::string cmd = fmt::format("{} --scenario 1 --method admm --out {} > /dev/null 2>&1",
                                        PLAN_EXECUTABLE, (root / run).string());
    const int status = std::system(cmd.c_str());
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
      return {false, fmt::format("plan exited with status {}", status)};
    }
  }
  int compared = 0;
  std::vector<std::string> differing;
  for (const auto& entry : fs::directory_iterator(root / "a")) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("traj_iter_", 0) != 0 && name != "residuals.csv") {
      continue;
    }
    ++compared;
    if (!fs::exists(root / "b" / name) || slurp(entry.path()) != slurp(root / "b" / name)) {
      differing.push_back(name);
    }
  }
  fs::remove_all(root);
  return {compared >= 2 && differing.empty(),
          fmt::format("{} files compared, {} differ", compared, differing.size())};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"LQR oracle equivalence", lqr_oracle},
      {"Jacobian and gradient suite", derivative_suite},
      {"ellipse projection oracle", projection_oracle},
      {"scenario 1 reproduction", scenario1},
      {"scenario 2 reproduction", scenario2},
      {"infeasible-seed contrast", infeasible_seed_contrast},
      {"relative speed", relative_speed},
      {"inactive-splitting identity", inactive_splitting},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failures += v.pass ? 0 : 1;
    std::cout << (v.pass ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first << ": "
              << v.detail << std::endl;
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failures == 0 ? 0 : 1;
}
