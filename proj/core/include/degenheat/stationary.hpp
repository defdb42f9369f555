#pragma once

#include <span>

#include "degenheat/linalg.hpp"
#include "degenheat/problem.hpp"

namespace degenheat {

struct StationarySpec {
    Grid grid;
    PotentialSpec potential;  // evaluated at t = 0
    double lambda = 0.0;
    Profile forcing;
};

// -Lap u + lambda a u = f with zero Dirichlet data.
Field solve_stationary_penalized(const StationarySpec& ss,
                                 const CgOptions& cg = {});

// -Lap u = f on the active set of a(., 0), zero elsewhere. Errors when the
// active set is empty.
Field solve_stationary_limit(const StationarySpec& ss, const CgOptions& cg = {});

// E(v) = h1semi(v)^2 + lambda * int a v^2
double stationary_energy(const StationarySpec& ss, std::span<const double> v);

// J(v) = E(v) - 2 int f v; the penalized solve minimizes this over nodal
// fields, so J at the solution equals -int f u.
double stationary_objective(const StationarySpec& ss, std::span<const double> v);

}  // namespace degenheat
