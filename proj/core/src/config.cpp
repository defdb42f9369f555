#include "degenheat/config.hpp"

#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <thread>

#include "degenheat/errors.hpp"
#include "json.hpp"

namespace degenheat {

namespace {

using nlohmann::json;

void require_keys(const json& obj, const std::string& context,
                  std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) {
                known = true;
                break;
            }
        if (!known)
            throw config_error("unknown key '" + it.key() + "' in " + context);
    }
}

const json* find_member(const json& obj, const char* key) {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

const json& get_member(const json& obj, const std::string& context,
                       const char* key) {
    const json* v = find_member(obj, key);
    if (!v)
        throw config_error("missing '" + std::string(key) + "' in " + context);
    return *v;
}

double as_number(const json& v, const std::string& context, const char* key) {
    if (!v.is_number())
        throw config_error("'" + std::string(key) + "' in " + context +
                           " must be a number");
    return v.get<double>();
}

int as_int(const json& v, const std::string& context, const char* key) {
    if (!v.is_number_integer())
        throw config_error("'" + std::string(key) + "' in " + context +
                           " must be an integer");
    return v.get<int>();
}

bool as_bool(const json& v, const std::string& context, const char* key) {
    if (!v.is_boolean())
        throw config_error("'" + std::string(key) + "' in " + context +
                           " must be a boolean");
    return v.get<bool>();
}

std::string as_string(const json& v, const std::string& context,
                      const char* key) {
    if (!v.is_string())
        throw config_error("'" + std::string(key) + "' in " + context +
                           " must be a string");
    return v.get<std::string>();
}

double opt_number(const json& obj, const std::string& context, const char* key,
                  double fallback) {
    const json* v = find_member(obj, key);
    return v ? as_number(*v, context, key) : fallback;
}

int opt_int(const json& obj, const std::string& context, const char* key,
            int fallback) {
    const json* v = find_member(obj, key);
    return v ? as_int(*v, context, key) : fallback;
}

bool opt_bool(const json& obj, const std::string& context, const char* key,
              bool fallback) {
    const json* v = find_member(obj, key);
    return v ? as_bool(*v, context, key) : fallback;
}

std::vector<double> as_number_list(const json& v, const std::string& context,
                                   const char* key) {
    if (!v.is_array())
        throw config_error("'" + std::string(key) + "' in " + context +
                           " must be an array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (const json& e : v) out.push_back(as_number(e, context, key));
    return out;
}

std::vector<int> as_int_list(const json& v, const std::string& context,
                             const char* key) {
    if (!v.is_array())
        throw config_error("'" + std::string(key) + "' in " + context +
                           " must be an array of integers");
    std::vector<int> out;
    out.reserve(v.size());
    for (const json& e : v) out.push_back(as_int(e, context, key));
    return out;
}

std::array<double, 2> as_point(const json& v, const std::string& context,
                               const char* key) {
    const auto list = as_number_list(v, context, key);
    if (list.empty() || list.size() > 2)
        throw config_error("'" + std::string(key) + "' in " + context +
                           " must have 1 or 2 entries");
    std::array<double, 2> p{list[0], list.size() > 1 ? list[1] : 0.5};
    return p;
}

Grid parse_grid(const json& j) {
    const std::string ctx = "the grid block";
    if (!j.is_object()) throw config_error(ctx + " must be an object");
    require_keys(j, ctx, {"extents", "interior_counts"});
    const auto extents =
        as_number_list(get_member(j, ctx, "extents"), ctx, "extents");
    const auto counts =
        as_int_list(get_member(j, ctx, "interior_counts"), ctx, "interior_counts");
    return build_grid(extents, counts);
}

TimeGrid parse_time(const json& j) {
    const std::string ctx = "the time block";
    if (!j.is_object()) throw config_error(ctx + " must be an object");
    require_keys(j, ctx, {"horizon", "steps"});
    TimeGrid tg;
    tg.horizon = as_number(get_member(j, ctx, "horizon"), ctx, "horizon");
    tg.steps = as_int(get_member(j, ctx, "steps"), ctx, "steps");
    return tg;
}

PotentialSpec parse_potential(const json& j, bool& monotone_flag) {
    const std::string ctx = "the potential block";
    if (!j.is_object()) throw config_error(ctx + " must be an object");
    require_keys(j, ctx,
                 {"family", "center", "radius", "growth", "amplitude",
                  "monotone", "samples", "time_layers"});
    PotentialSpec p;
    const std::string family =
        as_string(get_member(j, ctx, "family"), ctx, "family");
    if (family == "cylindrical_slab")
        p.family = PotentialFamily::cylindrical_slab;
    else if (family == "expanding_slab")
        p.family = PotentialFamily::expanding_slab;
    else if (family == "expanding_disk")
        p.family = PotentialFamily::expanding_disk;
    else if (family == "distance_to_set")
        p.family = PotentialFamily::distance_to_set;
    else if (family == "grid_sampled")
        p.family = PotentialFamily::grid_sampled;
    else
        throw config_error("unknown potential family '" + family + "'");
    if (const json* v = find_member(j, "center"))
        p.center = as_point(*v, ctx, "center");
    p.radius = opt_number(j, ctx, "radius", p.radius);
    p.growth = opt_number(j, ctx, "growth", p.growth);
    p.amplitude = opt_number(j, ctx, "amplitude", p.amplitude);
    monotone_flag = opt_bool(j, ctx, "monotone", false);
    if (const json* v = find_member(j, "samples"))
        p.samples = as_number_list(*v, ctx, "samples");
    p.time_layers = opt_int(j, ctx, "time_layers", p.time_layers);
    return p;
}

Profile parse_profile(const json& j, const std::string& ctx,
                      bool& support_flag) {
    if (!j.is_object()) throw config_error(ctx + " must be an object");
    require_keys(j, ctx,
                 {"family", "amplitude", "mode", "center", "width",
                  "support_in_vanishing"});
    Profile p;
    const std::string family =
        as_string(get_member(j, ctx, "family"), ctx, "family");
    if (family == "zero")
        p.family = ProfileFamily::zero;
    else if (family == "constant")
        p.family = ProfileFamily::constant;
    else if (family == "mode")
        p.family = ProfileFamily::mode;
    else if (family == "bump")
        p.family = ProfileFamily::bump;
    else
        throw config_error("unknown profile family '" + family + "' in " + ctx);
    p.amplitude = opt_number(j, ctx, "amplitude", 1.0);
    if (const json* v = find_member(j, "mode")) {
        const auto list = as_int_list(*v, ctx, "mode");
        if (list.empty() || list.size() > 2)
            throw config_error("'mode' in " + ctx + " must have 1 or 2 entries");
        p.mode = {list[0], list.size() > 1 ? list[1] : 1};
    }
    if (const json* v = find_member(j, "center"))
        p.center = as_point(*v, ctx, "center");
    p.width = opt_number(j, ctx, "width", p.width);
    support_flag = opt_bool(j, ctx, "support_in_vanishing", false);
    return p;
}

}  // namespace

RunMode parse_mode(const std::string& name) {
    if (name == "solve") return RunMode::solve;
    if (name == "limit") return RunMode::limit;
    if (name == "stationary") return RunMode::stationary;
    if (name == "sweep") return RunMode::sweep;
    if (name == "decay") return RunMode::decay;
    if (name == "check") return RunMode::check;
    throw config_error("unknown mode '" + name + "'");
}

std::string mode_name(RunMode m) {
    switch (m) {
        case RunMode::solve: return "solve";
        case RunMode::limit: return "limit";
        case RunMode::stationary: return "stationary";
        case RunMode::sweep: return "sweep";
        case RunMode::decay: return "decay";
        case RunMode::check: return "check";
    }
    return "solve";
}

RunConfig load_config(const std::filesystem::path& file,
                      std::optional<RunMode> forced_mode) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw config_error("cannot open config file " + file.string());
    json root;
    try {
        root = json::parse(in);
    } catch (const json::exception& e) {
        throw config_error("config parse error in " + file.string() + ": " +
                           e.what());
    }
    if (!root.is_object())
        throw config_error("the config root must be an object");
    const std::string ctx = "the config root";
    require_keys(root, ctx,
                 {"mode", "grid", "time", "potential", "forcing", "initial",
                  "lambda", "lambda_list", "epsilon", "solver", "check",
                  "output_prefix"});

    RunConfig cfg;
    if (forced_mode)
        cfg.mode = *forced_mode;  // the subcommand wins; any "mode" key is ignored
    else
        cfg.mode = parse_mode(
            as_string(get_member(root, ctx, "mode"), ctx, "mode"));

    cfg.problem.grid = parse_grid(get_member(root, ctx, "grid"));

    const bool stationary = cfg.mode == RunMode::stationary;
    const json* time_block = find_member(root, "time");
    if (stationary && time_block)
        throw config_error(
            "stationary mode does not accept a time block; remove the 'time' "
            "key");
    if (!stationary) {
        if (!time_block)
            throw config_error("missing 'time' block for mode " +
                               mode_name(cfg.mode));
        cfg.problem.time = parse_time(*time_block);
    }

    cfg.problem.potential = parse_potential(get_member(root, ctx, "potential"),
                                            cfg.problem.monotone_potential);
    if (!stationary)
        cfg.problem.potential.horizon = cfg.problem.time.horizon;

    if (const json* v = find_member(root, "forcing"))
        cfg.problem.forcing =
            parse_profile(*v, "the forcing block", cfg.problem.forcing_in_vanishing);
    if (const json* v = find_member(root, "initial"))
        cfg.problem.initial =
            parse_profile(*v, "the initial block", cfg.problem.initial_in_vanishing);

    cfg.problem.lambda = opt_number(root, ctx, "lambda", cfg.problem.lambda);
    if (const json* v = find_member(root, "lambda_list"))
        cfg.lambda_list = as_number_list(*v, ctx, "lambda_list");
    cfg.eps = opt_number(root, ctx, "epsilon", cfg.eps);

    if (const json* v = find_member(root, "solver")) {
        const std::string sctx = "the solver block";
        if (!v->is_object()) throw config_error(sctx + " must be an object");
        require_keys(*v, sctx, {"tol", "max_iter"});
        cfg.cg.tol = opt_number(*v, sctx, "tol", cfg.cg.tol);
        cfg.cg.max_iter = opt_int(*v, sctx, "max_iter", cfg.cg.max_iter);
    }

    if (const json* v = find_member(root, "check")) {
        const std::string cctx = "the check block";
        if (!v->is_object()) throw config_error(cctx + " must be an object");
        require_keys(*v, cctx, {"slack", "derivative_bound", "include_limit"});
        cfg.energy.slack = opt_number(*v, cctx, "slack", cfg.energy.slack);
        if (const json* d = find_member(*v, "derivative_bound")) {
            const std::string sel = as_string(*d, cctx, "derivative_bound");
            if (sel == "auto")
                cfg.energy.derivative_bound = BoundSelect::automatic;
            else if (sel == "on")
                cfg.energy.derivative_bound = BoundSelect::required;
            else if (sel == "off")
                cfg.energy.derivative_bound = BoundSelect::skipped;
            else
                throw config_error(
                    "'derivative_bound' in " + cctx +
                    " must be \"auto\", \"on\" or \"off\"");
        }
        cfg.include_limit = opt_bool(*v, cctx, "include_limit", false);
    }

    if (const json* v = find_member(root, "output_prefix"))
        cfg.output_prefix = as_string(*v, ctx, "output_prefix");

    if (cfg.mode == RunMode::sweep || cfg.mode == RunMode::decay) {
        if (!find_member(root, "lambda_list"))
            throw config_error(mode_name(cfg.mode) +
                               " mode requires a lambda_list");
    }
    if (cfg.mode == RunMode::decay && !find_member(root, "epsilon"))
        throw config_error("decay mode requires an epsilon");

    return cfg;
}

int thread_budget(int jobs) {
    if (jobs < 1) jobs = 1;
    int cap = 0;
    if (const char* env = std::getenv("DEGENHEAT_THREADS")) {
        const std::string s(env);
        bool digits = !s.empty();
        for (char c : s)
            if (c < '0' || c > '9') digits = false;
        long v = digits ? std::strtol(s.c_str(), nullptr, 10) : 0;
        if (!digits || v < 1)
            throw config_error(
                "DEGENHEAT_THREADS must be a positive integer, got '" + s + "'");
        cap = int(std::min<long>(v, 1 << 20));
    } else {
        cap = int(std::thread::hardware_concurrency());
        if (cap < 1) cap = 1;
    }
    return std::min(jobs, cap);
}

}  // namespace degenheat
