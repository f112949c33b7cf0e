// Serial vs OpenMP consensus projection, plus end-to-end solves of both
// methods on the configurations where both can run.

#include <random>
#include <vector>

#include <benchmark/benchmark.h>
#include <omp.h>

#include "admm_ilqr/harness.hpp"
#include "admm_ilqr/projection_kernels.hpp"

using namespace admm_ilqr;

namespace {

// Lane-change obstacles with a long horizon so the per-block work is visible.
struct ProjectionInput {
  ConstraintSet constraints;
  std::vector<Block> targets;
  std::vector<double> headings;

  explicit ProjectionInput(int blocks) {
    constraints = builtin_scenario(2).constraints();
    // One obstacle only: random targets inside two overlapping ellipses can
    // leave the cyclic projection unsettled.
    constraints.obstacles.resize(1);
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int t = 0; t < blocks; ++t) {
      // Near obstacle A's path so most blocks need an ellipse projection.
      const double x = 20.0 + 0.3 * t + n(rng);
      targets.emplace_back(x, 0.5 * n(rng), n(rng), 3.0 * n(rng));
      headings.push_back(0.0);
    }
  }
};

void BM_ProjectSerial(benchmark::State& state) {
  const ProjectionInput in(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(project_blocks_serial(in.targets, in.headings, in.constraints));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_ProjectParallel(benchmark::State& state) {
  const ProjectionInput in(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(project_blocks_parallel(in.targets, in.headings, in.constraints));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
  state.counters["threads"] = omp_get_max_threads();
}

void BM_Solve(benchmark::State& state, int scenario, double v0, Method method) {
  ScenarioConfig cfg = builtin_scenario(scenario);
  cfg.initial.v = v0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_scenario(cfg, method));
  }
}

}  // namespace

BENCHMARK(BM_ProjectSerial)->Arg(61)->Arg(601)->Arg(6001);
BENCHMARK(BM_ProjectParallel)->Arg(61)->Arg(601)->Arg(6001);
BENCHMARK_CAPTURE(BM_Solve, s1_v0_admm, 1, 0.0, Method::kADMM)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Solve, s1_v0_barrier, 1, 0.0, Method::kBarrier)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Solve, s2_v4_admm, 2, 4.0, Method::kADMM)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Solve, s2_v4_barrier, 2, 4.0, Method::kBarrier)
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
