#pragma once

// Batched per-timestep projections for the consensus update. Block tau is
// projected against the constraints at time index tau; blocks are independent.
// The serial version is the reference the OpenMP version is tested against.

#include <span>
#include <vector>

#include "admm_ilqr/constraints.hpp"

namespace admm_ilqr {

std::vector<Block> project_blocks_serial(std::span<const Block> targets,
                                         std::span<const double> ego_headings,
                                         const ConstraintSet& constraints);

/// OpenMP version. Results are gathered by time index, so output is
/// bit-identical to the serial kernel. If any block throws, the exception of
/// the lowest failing index is rethrown after the parallel region.
std::vector<Block> project_blocks_parallel(std::span<const Block> targets,
                                           std::span<const double> ego_headings,
                                           const ConstraintSet& constraints);

}  // namespace admm_ilqr
