#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "degenheat/grid.hpp"

namespace degenheat {

// Nonnegative degenerate potentials a(x,t) whose vanishing region is a tube
// around center with radius r(t) = radius + growth * t:
//   cylindrical_slab  a = amplitude * max(0, |x1 - c1| - radius)
//   expanding_slab    a = amplitude * max(0, |x1 - c1| - r(t))
//   expanding_disk    a = amplitude * max(0, |x - c|_2 - r(t))
//   distance_to_set   a = amplitude * space-time distance to the closed tube
//   grid_sampled      nodal samples, multilinear in space, linear in time
enum class PotentialFamily {
    cylindrical_slab,
    expanding_slab,
    expanding_disk,
    distance_to_set,
    grid_sampled,
};

struct PotentialSpec {
    PotentialFamily family = PotentialFamily::cylindrical_slab;
    std::array<double, 2> center{0.5, 0.5};
    double radius = 0.0;
    double growth = 0.0;
    double amplitude = 1.0;
    double horizon = 1.0;  // tube lives on [0, horizon]; used by distance_to_set

    // grid_sampled payload: time_layers blocks of grid.size() values,
    // layer k sampled at t = horizon * k / (time_layers - 1).
    std::vector<double> samples;
    int time_layers = 0;

    // True when a(x, .) is nonincreasing for every x (growth >= 0 for the
    // tube families; checked layer by layer for grid_sampled).
    bool time_monotone() const;
};

double eval_potential(const PotentialSpec& p, const Grid& g,
                      std::span<const double> x, double t);

// 1 at nodes interior to the vanishing region at time t: tube families use
// the strict inequality, grid_sampled requires the node and its lattice
// neighbors to read below 1e-14. An identically zero potential activates
// every node.
std::vector<std::uint8_t> active_mask(const PotentialSpec& p, const Grid& g,
                                      double t);

// Space-time geometry for weighted decay integrals. margin is the Euclidean
// distance from (x_i, t_k) to the vanishing tube; cutoff ramps linearly from
// 0 to 1 as margin goes from eps to 2 eps; weight is
// sqrt(floor_value / 2) * max(0, margin - 2 eps). floor_value is the minimum
// of the potential over margin > eps, rate_coeff is eps times its minimum
// over margin > eps/2. All per-(layer, node) arrays are layer-major. With
// tg.steps = 0 the geometry collapses to the single layer t = 0.
struct DecayGeometry {
    double eps = 0.0;
    double floor_value = 0.0;
    double rate_coeff = 0.0;
    std::vector<double> margin;
    std::vector<double> cutoff;
    std::vector<double> weight;
    std::vector<std::uint8_t> outer;          // margin > eps
    std::vector<std::uint8_t> outer_tripled;  // margin > 3 eps
};

// Throws geometry_error when the region beyond eps (or 3 eps) contains no
// samples, or the potential floor over it is not strictly positive.
DecayGeometry build_decay_geometry(const PotentialSpec& p, const Grid& g,
                                   const TimeGrid& tg, double eps);

}  // namespace degenheat
