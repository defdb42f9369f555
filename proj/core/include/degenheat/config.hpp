#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "degenheat/diagnostics.hpp"
#include "degenheat/linalg.hpp"
#include "degenheat/problem.hpp"

namespace degenheat {

enum class RunMode { solve, limit, stationary, sweep, decay, check };

struct RunConfig {
    RunMode mode = RunMode::solve;
    ProblemSpec problem;              // time unused in stationary mode
    std::vector<double> lambda_list;  // sweep and decay modes
    double eps = 0.0;                 // decay mode
    CgOptions cg;
    EnergyOptions energy;             // check mode
    bool include_limit = false;       // check mode: add the energyInf record
    std::string output_prefix = "out";
};

// Strict JSON loader: unknown keys, wrong types and out-of-range values are
// config_error with the offending key in the message. forced_mode (from a
// CLI subcommand) overrides any "mode" key.
RunConfig load_config(const std::filesystem::path& file,
                      std::optional<RunMode> forced_mode = {});

RunMode parse_mode(const std::string& name);
std::string mode_name(RunMode m);

// Worker cap for sweeps: min(jobs, DEGENHEAT_THREADS or hardware size).
// A set but non-positive-integer DEGENHEAT_THREADS is a config_error.
int thread_budget(int jobs);

}  // namespace degenheat
