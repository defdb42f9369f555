#pragma once

#include "degenheat/linalg.hpp"
#include "degenheat/problem.hpp"

namespace degenheat {

// Backward Euler for du/dt - Lap u + lambda a u = f on the interior nodes,
// potential evaluated at the new time level, each layer solved by CG warm
// started from the previous one. Layer 0 is the sampled initial profile.
Trajectory solve_penalized(const ProblemSpec& ps, const CgOptions& cg = {});

// Limit scheme: per layer, the heat equation restricted to the active set
// (nodes interior to the vanishing region) with zero values elsewhere.
// Newly activated nodes carry value 0 into the step. Requires active sets
// nondecreasing in time and initial data vanishing at inactive nodes where
// a(., 0) > 0; violations are config_error, never silently projected.
Trajectory solve_limit(const ProblemSpec& ps, const CgOptions& cg = {});

}  // namespace degenheat
