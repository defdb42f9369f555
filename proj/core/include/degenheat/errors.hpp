#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace degenheat {

// Invalid user input: malformed config, bad dimensions, violated hypothesis.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Decay-region construction failed (empty region, degenerate fit data).
struct geometry_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An iterative solve stopped short of tolerance. Carries the best iterate so
// callers can inspect how far it got.
struct solver_failure : std::runtime_error {
    solver_failure(const std::string& what, std::vector<double> best,
                   double rel_residual, int iterations)
        : std::runtime_error(what),
          best_iterate(std::move(best)),
          rel_residual(rel_residual),
          iterations(iterations) {}

    std::vector<double> best_iterate;
    double rel_residual;
    int iterations;
};

}  // namespace degenheat
