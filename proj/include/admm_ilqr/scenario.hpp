#pragma once

// Planning scenario: everything needed to pose and solve one open-loop
// problem with either method.

#include <cstdint>
#include <string>
#include <vector>

#include "admm_ilqr/admm.hpp"
#include "admm_ilqr/barrier.hpp"
#include "admm_ilqr/constraints.hpp"
#include "admm_ilqr/costs.hpp"
#include "admm_ilqr/vehicle_model.hpp"

namespace admm_ilqr {

struct ScenarioConfig {
  int id = 0;  // 0 for user-defined scenarios
  std::string name;
  State initial;
  VehicleParams vehicle;
  CostWeights weights;
  Reference reference;
  InputBounds bounds;
  std::vector<Obstacle> obstacles;
  HeadingConvention heading_convention = HeadingConvention::kObstacle;
  int horizon = 60;
  ADMMSettings admm;
  BarrierSettings barrier;
  std::uint64_t seed = 0;  // reserved; the solvers are deterministic

  /// Throws ConfigError describing the first violated invariant.
  void validate() const;

  ConstraintSet constraints() const;

  bool operator==(const ScenarioConfig&) const = default;
};

/// Static parked car (id 1) or lane change between two moving cars (id 2).
/// Throws UnknownScenario for any other id.
ScenarioConfig builtin_scenario(int id);

}  // namespace admm_ilqr
