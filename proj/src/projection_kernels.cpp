#include "admm_ilqr/projection_kernels.hpp"

#include <exception>
#include <stdexcept>

namespace admm_ilqr {

namespace {

void check_sizes(std::span<const Block> targets, std::span<const double> ego_headings) {
  if (targets.size() != ego_headings.size()) {
    throw std::invalid_argument("projection targets and headings differ in length");
  }
}

}  // namespace

std::vector<Block> project_blocks_serial(std::span<const Block> targets,
                                         std::span<const double> ego_headings,
                                         const ConstraintSet& constraints) {
  check_sizes(targets, ego_headings);
  std::vector<Block> out(targets.size());
  for (std::size_t tau = 0; tau < targets.size(); ++tau) {
    out[tau] = project_timestep(targets[tau], constraints, static_cast<int>(tau), ego_headings[tau]);
  }
  return out;
}

std::vector<Block> project_blocks_parallel(std::span<const Block> targets,
                                           std::span<const double> ego_headings,
                                           const ConstraintSet& constraints) {
  check_sizes(targets, ego_headings);
  const int n = static_cast<int>(targets.size());
  std::vector<Block> out(targets.size());
  std::vector<std::exception_ptr> errors(targets.size());

#pragma omp parallel for schedule(static)
  for (int tau = 0; tau < n; ++tau) {
    try {
      out[tau] = project_timestep(targets[tau], constraints, tau, ego_headings[tau]);
    } catch (...) {
      errors[tau] = std::current_exception();
    }
  }

  for (const auto& err : errors) {
    if (err) {
      std::rethrow_exception(err);
    }
  }
  return out;
}

}  // namespace admm_ilqr
