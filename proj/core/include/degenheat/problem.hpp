#pragma once

#include <array>
#include <span>

#include "degenheat/grid.hpp"
#include "degenheat/potential.hpp"

namespace degenheat {

enum class ProfileFamily { zero, constant, mode, bump };

// Time-independent scalar profiles.
//   constant: amplitude
//   mode:     amplitude * prod_j sin(pi k_j x_j / L_j)
//   bump:     amplitude * exp(1 - 1/(1 - r^2)) for r = |x - c|/width < 1,
//             0 outside (smooth, compactly supported)
struct Profile {
    ProfileFamily family = ProfileFamily::zero;
    double amplitude = 0.0;
    std::array<int, 2> mode{1, 1};
    std::array<double, 2> center{0.5, 0.5};
    double width = 0.1;
};

double eval_profile(const Profile& p, const Grid& g, std::span<const double> x);
Field sample_profile(const Profile& p, const Grid& g);

struct ProblemSpec {
    Grid grid;
    TimeGrid time;
    PotentialSpec potential;
    double lambda = 0.0;
    Profile forcing;
    Profile initial;

    // Declared hypotheses. validate_problem checks each declared one and the
    // solvers rely on them; data is never projected to fit.
    bool monotone_potential = false;    // a(x, .) nonincreasing
    bool forcing_in_vanishing = false;  // f = 0 at nodes where a > 0
    bool initial_in_vanishing = false;  // g = 0 at nodes where a(., 0) > 0
};

// Size/sign validation plus every declared hypothesis; throws config_error
// naming the violated hypothesis.
void validate_problem(const ProblemSpec& ps);

}  // namespace degenheat
