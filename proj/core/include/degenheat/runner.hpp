#pragma once

#include <iosfwd>

#include "degenheat/config.hpp"

namespace degenheat {

// Executes one configured run: validates, solves, writes the CSV outputs
// under cfg.output_prefix and prints a short summary. Nothing is written
// before validation passes. Returns 0; errors propagate as exceptions.
int run(const RunConfig& cfg, std::ostream& out);

// Full command line: subcommand + --config/--out/--lambda overrides. Maps
// config_error -> 2, solver_failure -> 3, geometry_error -> 4.
int main_entry(int argc, char** argv);

}  // namespace degenheat
