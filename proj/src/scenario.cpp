#include "admm_ilqr/scenario.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "admm_ilqr/errors.hpp"

namespace admm_ilqr {

void ScenarioConfig::validate() const {
  try {
    if (horizon < 1) {
      throw std::invalid_argument("horizon must be at least 1");
    }
    const StateVector x0 = initial.vec();
    if (!x0.allFinite()) {
      throw std::invalid_argument("initial state must be finite");
    }
    vehicle.validate();
    weights.validate();
    reference.validate();
    bounds.validate();
    for (const Obstacle& obs : obstacles) {
      obs.validate();
    }
    admm.validate();
    barrier.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid scenario: ") + e.what());
  }
}

ConstraintSet ScenarioConfig::constraints() const {
  ConstraintSet cs;
  cs.bounds = bounds;
  cs.obstacles = obstacles;
  cs.dt = vehicle.dt;
  cs.heading_convention = heading_convention;
  return cs;
}

ScenarioConfig builtin_scenario(int id) {
  ScenarioConfig cfg;
  cfg.id = id;
  cfg.horizon = 60;
  cfg.vehicle.dt = 0.1;
  cfg.bounds = {0.6, 3.0, -3.0};
  cfg.admm.sigma = 10.0;
  cfg.admm.max_admm_iters = 20;
  cfg.admm.ilqr.max_iters = 100;
  cfg.barrier.ilqr.max_iters = 100;
  // Weak position tracking against a stiff steering penalty keeps the
  // sigma = 10 splitting well conditioned; see docs/tuning.md.
  cfg.weights = {0.002, 0.05, 0.5, 0.2, 5.0};

  switch (id) {
    case 1: {
      cfg.name = "static_obstacle";
      cfg.initial = {0.0, 0.0, 0.0, 4.0};
      cfg.reference = Reference::lateral(0.0, 8.0);
      Obstacle parked;
      parked.center0 = {15.0, -1.0};
      cfg.obstacles = {parked};
      break;
    }
    case 2: {
      cfg.name = "lane_change";
      cfg.initial = {0.0, 0.0, 0.0, 8.0};
      cfg.reference = Reference::lateral(4.0, std::nullopt);
      Obstacle front;
      front.center0 = {20.0, 0.0};
      front.velocity = {3.0, 0.0};
      Obstacle target_lane;
      target_lane.center0 = {0.0, 4.0};
      target_lane.velocity = {6.0, 0.0};
      cfg.obstacles = {front, target_lane};
      break;
    }
    default:
      throw UnknownScenario("unknown built-in scenario " + std::to_string(id) +
                            " (expected 1 or 2)");
  }
  return cfg;
}

}  // namespace admm_ilqr
