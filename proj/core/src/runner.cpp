#include "degenheat/runner.hpp"

#include <iostream>
#include <ostream>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "degenheat/errors.hpp"
#include "degenheat/report_io.hpp"

namespace degenheat {

namespace {

std::filesystem::path out_path(const RunConfig& cfg, const char* kind) {
    return std::filesystem::path(cfg.output_prefix + "_" + kind + ".csv");
}

void announce(std::ostream& out, const std::filesystem::path& p) {
    out << "wrote: " << p.string() << "\n";
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out) {
    out << "mode: " << mode_name(cfg.mode) << "\n";
    switch (cfg.mode) {
        case RunMode::solve:
        case RunMode::limit: {
            out << "lambda: " << format_double(cfg.problem.lambda) << "\n";
            const Trajectory tr = cfg.mode == RunMode::solve
                                      ? solve_penalized(cfg.problem, cfg.cg)
                                      : solve_limit(cfg.problem, cfg.cg);
            const auto path = out_path(cfg, "trajectory");
            write_trajectory_csv(path, cfg.problem.grid, tr);
            announce(out, path);
            break;
        }
        case RunMode::stationary: {
            out << "lambda: " << format_double(cfg.problem.lambda) << "\n";
            StationarySpec ss;
            ss.grid = cfg.problem.grid;
            ss.potential = cfg.problem.potential;
            ss.lambda = cfg.problem.lambda;
            ss.forcing = cfg.problem.forcing;
            const Field pen = solve_stationary_penalized(ss, cfg.cg);
            const Field lim = solve_stationary_limit(ss, cfg.cg);
            const auto path = out_path(cfg, "stationary");
            write_stationary_csv(path, ss.grid, pen, lim);
            announce(out, path);
            break;
        }
        case RunMode::sweep: {
            const int workers = thread_budget(int(cfg.lambda_list.size()));
            const SweepReport rep =
                convergence_sweep(cfg.problem, cfg.lambda_list, cfg.cg, workers);
            const auto path = out_path(cfg, "sweep");
            write_sweep_csv(path, rep);
            out << "err_monotone: " << (rep.err_monotone ? 1 : 0) << "\n";
            announce(out, path);
            break;
        }
        case RunMode::decay: {
            const int workers = thread_budget(int(cfg.lambda_list.size()));
            const DecayReport rep = decay_sweep(cfg.problem, cfg.lambda_list,
                                                cfg.eps, cfg.cg, workers);
            const auto path = out_path(cfg, "decay");
            write_decay_csv(path, rep);
            out << "slope: " << format_double(rep.slope) << "\n";
            out << "weighted_growth: " << format_double(rep.weighted_growth)
                << "\n";
            announce(out, path);
            break;
        }
        case RunMode::check: {
            out << "lambda: " << format_double(cfg.problem.lambda) << "\n";
            const Trajectory pen = solve_penalized(cfg.problem, cfg.cg);
            Trajectory lim;
            const Trajectory* limp = nullptr;
            if (cfg.include_limit) {
                lim = solve_limit(cfg.problem, cfg.cg);
                limp = &lim;
            }
            const EnergyReport rep =
                check_energy_bounds(cfg.problem, pen, limp, cfg.energy);
            for (const EnergyRecord& rec : rep.records)
                out << rec.name << " lhs " << format_double(rec.lhs) << " rhs "
                    << format_double(rec.rhs) << " ratio "
                    << format_double(rec.ratio)
                    << (rec.satisfied ? " PASS" : " FAIL") << "\n";
            const auto path = out_path(cfg, "energy");
            write_energy_csv(path, rep);
            announce(out, path);
            break;
        }
    }
    return 0;
}

int main_entry(int argc, char** argv) {
    CLI::App app{"degenerate-potential heat equation toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_prefix;
    double lambda_override = 0.0;
    static const std::pair<const char*, const char*> kSubs[] = {
        {"solve", "penalized backward Euler run, writes a trajectory CSV"},
        {"limit", "masked scheme on the vanishing region, writes a trajectory CSV"},
        {"stationary", "penalized and restricted stationary solves"},
        {"sweep", "penalized-to-limit convergence sweep over lambda_list"},
        {"decay", "exponential decay sweep outside the vanishing tube"},
        {"check", "energy-bound report for one penalized run"},
    };
    std::vector<CLI::App*> cmds;
    for (const auto& [name, desc] : kSubs) {
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->add_option("--config", config_path, "JSON run configuration")
            ->required();
        sub->add_option("--out", out_prefix, "output file prefix");
        sub->add_option("--lambda", lambda_override,
                        "override the penalty strength from the config");
        cmds.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    RunMode mode = RunMode::solve;
    const CLI::App* selected = nullptr;
    for (std::size_t i = 0; i < cmds.size(); ++i)
        if (cmds[i]->parsed()) {
            selected = cmds[i];
            mode = RunMode(int(i));
        }

    try {
        RunConfig cfg = load_config(config_path, mode);
        if (selected && selected->count("--out") > 0)
            cfg.output_prefix = out_prefix;
        if (selected && selected->count("--lambda") > 0)
            cfg.problem.lambda = lambda_override;
        return run(cfg, std::cout);
    } catch (const config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const solver_failure& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return 3;
    } catch (const geometry_error& e) {
        std::cerr << "geometry error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace degenheat
