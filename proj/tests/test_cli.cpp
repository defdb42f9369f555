#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <string>

#include "degenheat/report_io.hpp"
#include "support/run_tool.hpp"

using testtool::run_tool;
using testtool::write_file;
namespace fs = std::filesystem;

namespace {

struct Scratch {
    fs::path dir;
    explicit Scratch(const std::string& name) : dir(fs::path("cli_scratch") / name) {
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    std::string file(const std::string& leaf) const { return (dir / leaf).string(); }
};

const char* kSolveConfig = R"({
  "mode": "solve",
  "grid": {"extents": [1.0], "interior_counts": [29]},
  "time": {"horizon": 0.5, "steps": 12},
  "potential": {"family": "expanding_slab", "center": [0.5],
                "radius": 0.2, "growth": 0.1, "amplitude": 1.0},
  "forcing": {"family": "bump", "center": [0.5], "width": 0.15, "amplitude": 1.0},
  "initial": {"family": "bump", "center": [0.5], "width": 0.15, "amplitude": 0.05},
  "lambda": 100.0,
  "solver": {"tol": 1e-10, "max_iter": 0}
})";

std::size_t line_count(const std::string& s) {
    std::size_t n = 0;
    for (char c : s)
        if (c == '\n') ++n;
    return n;
}

}  // namespace

TEST_CASE("help exits cleanly and lists the subcommands") {
    auto r = run_tool("--help");
    CHECK(r.exit_code == 0);
    for (const char* sub : {"solve", "limit", "stationary", "sweep", "decay", "check"})
        CHECK(r.out.find(sub) != std::string::npos);
}

TEST_CASE("a subcommand is required") {
    auto r = run_tool("");
    CHECK(r.exit_code == 2);
}

TEST_CASE("solve writes a well-formed trajectory") {
    Scratch s("solve");
    write_file(s.file("cfg.json"), kSolveConfig);
    auto r = run_tool("solve --config " + s.file("cfg.json") + " --out " + s.file("run"));
    CAPTURE(r.err);
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("solve") != std::string::npos);
    CHECK(r.out.find("wrote") != std::string::npos);

    const std::string csv = s.file("run") + "_trajectory.csv";
    REQUIRE(fs::exists(csv));
    const std::string body = testtool::read_file(csv);
    CHECK(body.rfind("t,x,u\n", 0) == 0);
    CHECK(line_count(body) == 1 + 13 * 29);  // header + (m+1)*n rows

    auto parsed = degenheat::parse_trajectory_csv(csv);
    REQUIRE(parsed.t.size() == 13 * 29);
    CHECK(parsed.y.empty());
    CHECK(parsed.t.front() == 0.0);
    CHECK(parsed.t.back() == 0.5);
}

TEST_CASE("missing config file exits 2 and writes nothing") {
    Scratch s("missing");
    auto r = run_tool("solve --config " + s.file("nope.json") + " --out " + s.file("run"));
    CHECK(r.exit_code == 2);
    CHECK(!fs::exists(s.file("run") + "_trajectory.csv"));
}

TEST_CASE("unknown keys are rejected by name") {
    Scratch s("unknown");
    std::string cfg = kSolveConfig;
    cfg.insert(cfg.rfind('}'), R"(, "extra_knob": 3)");
    write_file(s.file("cfg.json"), cfg);
    auto r = run_tool("solve --config " + s.file("cfg.json"));
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("extra_knob") != std::string::npos);
}

TEST_CASE("malformed json exits 2") {
    Scratch s("badjson");
    write_file(s.file("cfg.json"), "{ not json");
    auto r = run_tool("solve --config " + s.file("cfg.json"));
    CHECK(r.exit_code == 2);
}

TEST_CASE("the subcommand forces the mode and its requirements") {
    // same config, different subcommand: sweep needs a lambda_list
    Scratch s("conflict");
    write_file(s.file("cfg.json"), kSolveConfig);
    auto r = run_tool("sweep --config " + s.file("cfg.json"));
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("lambda_list") != std::string::npos);
}

TEST_CASE("violated scheme hypotheses exit 2 with a named hypothesis") {
    Scratch s("hypo");
    std::string cfg = kSolveConfig;
    auto pos = cfg.find("\"solve\"");
    cfg.replace(pos, 7, "\"limit\"");
    pos = cfg.find("\"growth\": 0.1");
    cfg.replace(pos, 13, "\"growth\": -0.1");
    write_file(s.file("cfg.json"), cfg);
    auto r = run_tool("limit --config " + s.file("cfg.json"));
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("nondecreasing") != std::string::npos);
}

TEST_CASE("decay lambda below 4 exits 2") {
    Scratch s("lowlam");
    std::string cfg = R"({
      "mode": "decay",
      "grid": {"extents": [1.0], "interior_counts": [49]},
      "time": {"horizon": 1.0, "steps": 20},
      "potential": {"family": "cylindrical_slab", "center": [0.5],
                    "radius": 0.1, "amplitude": 1.0},
      "forcing": {"family": "bump", "center": [0.5], "width": 0.08, "amplitude": 1.0},
      "epsilon": 0.1,
      "lambda_list": [2.0, 16.0]
    })";
    write_file(s.file("cfg.json"), cfg);
    auto r = run_tool("decay --config " + s.file("cfg.json") + " --out " + s.file("d"));
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("4") != std::string::npos);
}

TEST_CASE("empty decay region exits 4") {
    Scratch s("geom");
    std::string cfg = R"({
      "mode": "decay",
      "grid": {"extents": [1.0], "interior_counts": [49]},
      "time": {"horizon": 1.0, "steps": 20},
      "potential": {"family": "cylindrical_slab", "center": [0.5],
                    "radius": 0.1, "amplitude": 1.0},
      "forcing": {"family": "bump", "center": [0.5], "width": 0.08, "amplitude": 1.0},
      "epsilon": 0.6,
      "lambda_list": [4.0, 16.0]
    })";
    write_file(s.file("cfg.json"), cfg);
    auto r = run_tool("decay --config " + s.file("cfg.json") + " --out " + s.file("d"));
    CHECK(r.exit_code == 4);
}

TEST_CASE("starved solver budget exits 3") {
    Scratch s("budget");
    std::string cfg = kSolveConfig;
    auto pos = cfg.find("\"max_iter\": 0");
    cfg.replace(pos, 13, "\"max_iter\": 1");
    write_file(s.file("cfg.json"), cfg);
    auto r = run_tool("solve --config " + s.file("cfg.json") + " --out " + s.file("run"));
    CHECK(r.exit_code == 3);
}

TEST_CASE("check mode emits a parsable energy report") {
    Scratch s("check");
    std::string cfg = R"({
      "mode": "check",
      "grid": {"extents": [1.0], "interior_counts": [49]},
      "time": {"horizon": 1.0, "steps": 30},
      "potential": {"family": "expanding_slab", "center": [0.5],
                    "radius": 0.2, "growth": 0.1, "amplitude": 1.0,
                    "monotone": true},
      "forcing": {"family": "bump", "center": [0.5], "width": 0.15,
                  "amplitude": 1.0, "support_in_vanishing": true},
      "initial": {"family": "bump", "center": [0.5], "width": 0.15,
                  "amplitude": 0.05, "support_in_vanishing": true},
      "lambda": 100.0,
      "check": {"slack": 0.05, "derivative_bound": "auto", "include_limit": true}
    })";
    write_file(s.file("cfg.json"), cfg);
    auto r = run_tool("check --config " + s.file("cfg.json") + " --out " + s.file("c"));
    CAPTURE(r.err);
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("bound2") != std::string::npos);
    CHECK(r.out.find("PASS") != std::string::npos);

    const std::string csv = s.file("c") + "_energy.csv";
    REQUIRE(fs::exists(csv));
    CHECK(testtool::read_file(csv).rfind("name,lhs,rhs,ratio,satisfied\n", 0) == 0);
    auto rep = degenheat::parse_energy_csv(csv);
    bool has_b2 = false, has_inf = false;
    for (const auto& rec : rep.records) {
        if (rec.name == "bound2") has_b2 = true;
        if (rec.name == "energyInf") has_inf = true;
    }
    CHECK(has_b2);
    CHECK(has_inf);
}

TEST_CASE("sweep output is byte-stable across runs") {
    Scratch s("sweep");
    std::string cfg = R"({
      "mode": "sweep",
      "grid": {"extents": [1.0], "interior_counts": [33]},
      "time": {"horizon": 1.0, "steps": 16},
      "potential": {"family": "expanding_slab", "center": [0.5],
                    "radius": 0.2, "growth": 0.1, "amplitude": 1.0},
      "forcing": {"family": "bump", "center": [0.5], "width": 0.15, "amplitude": 1.0},
      "initial": {"family": "bump", "center": [0.5], "width": 0.15, "amplitude": 0.05},
      "lambda_list": [100.0, 10000.0, 1000000.0]
    })";
    write_file(s.file("cfg.json"), cfg);
    auto r1 = run_tool("sweep --config " + s.file("cfg.json") + " --out " + s.file("a"));
    CAPTURE(r1.err);
    REQUIRE(r1.exit_code == 0);
    auto r2 = run_tool("sweep --config " + s.file("cfg.json") + " --out " + s.file("b"));
    REQUIRE(r2.exit_code == 0);

    const std::string f1 = testtool::read_file(s.file("a") + "_sweep.csv");
    const std::string f2 = testtool::read_file(s.file("b") + "_sweep.csv");
    CHECK(!f1.empty());
    CHECK(f1 == f2);
    CHECK(f1.rfind("lambda,err_l2h1,err_supl2,pen_mass\n", 0) == 0);
    CHECK(line_count(f1) == 4);

    auto rep = degenheat::parse_sweep_csv(s.file("a") + "_sweep.csv");
    REQUIRE(rep.records.size() == 3);
    CHECK(rep.records[0].lambda == 100.0);
    CHECK(rep.records[2].lambda == 1000000.0);
}

TEST_CASE("decay output has one sorted row per lambda") {
    Scratch s("decay");
    std::string cfg = R"({
      "mode": "decay",
      "grid": {"extents": [1.0], "interior_counts": [79]},
      "time": {"horizon": 1.0, "steps": 30},
      "potential": {"family": "cylindrical_slab", "center": [0.5],
                    "radius": 0.1, "amplitude": 1.0},
      "forcing": {"family": "bump", "center": [0.5], "width": 0.08, "amplitude": 1.0},
      "epsilon": 0.1,
      "lambda_list": [4.0, 16.0, 64.0]
    })";
    write_file(s.file("cfg.json"), cfg);
    auto r = run_tool("decay --config " + s.file("cfg.json") + " --out " + s.file("d"));
    CAPTURE(r.err);
    REQUIRE(r.exit_code == 0);
    const std::string csv = s.file("d") + "_decay.csv";
    const std::string body = testtool::read_file(csv);
    CHECK(body.rfind("lambda,I_eps,W,scaled,slope_fit,residual\n", 0) == 0);
    CHECK(line_count(body) == 4);
    auto rep = degenheat::parse_decay_csv(csv);
    REQUIRE(rep.records.size() == 3);
    CHECK(rep.records[0].lambda < rep.records[1].lambda);
    CHECK(rep.records[1].lambda < rep.records[2].lambda);
}

TEST_CASE("stationary mode emits both solutions and rejects a time block") {
    Scratch s("stationary");
    std::string cfg = R"({
      "mode": "stationary",
      "grid": {"extents": [1.0], "interior_counts": [63]},
      "potential": {"family": "cylindrical_slab", "center": [0.5],
                    "radius": 0.2, "amplitude": 1.0},
      "forcing": {"family": "constant", "amplitude": 1.0},
      "lambda": 1000.0
    })";
    write_file(s.file("cfg.json"), cfg);
    auto r = run_tool("stationary --config " + s.file("cfg.json") + " --out " + s.file("st"));
    CAPTURE(r.err);
    REQUIRE(r.exit_code == 0);
    const std::string csv = s.file("st") + "_stationary.csv";
    const std::string body = testtool::read_file(csv);
    CHECK(body.rfind("x,u_penalized,u_limit\n", 0) == 0);
    CHECK(line_count(body) == 64);
    auto parsed = degenheat::parse_stationary_csv(csv);
    REQUIRE(parsed.x.size() == 63);
    CHECK(parsed.u_penalized[31] > 0.0);
    CHECK(parsed.u_limit[31] > 0.0);

    std::string with_time = cfg;
    with_time.insert(with_time.rfind('}'),
                     R"(, "time": {"horizon": 1.0, "steps": 4})");
    write_file(s.file("cfg2.json"), with_time);
    auto r2 = run_tool("stationary --config " + s.file("cfg2.json"));
    CHECK(r2.exit_code == 2);
    CHECK(r2.err.find("time") != std::string::npos);
}

TEST_CASE("thread cap environment variable is validated") {
    Scratch s("threads");
    std::string cfg = R"({
      "mode": "sweep",
      "grid": {"extents": [1.0], "interior_counts": [21]},
      "time": {"horizon": 0.5, "steps": 8},
      "potential": {"family": "expanding_slab", "center": [0.5],
                    "radius": 0.2, "growth": 0.1, "amplitude": 1.0},
      "initial": {"family": "bump", "center": [0.5], "width": 0.15, "amplitude": 0.1},
      "lambda_list": [10.0, 100.0]
    })";
    write_file(s.file("cfg.json"), cfg);
    const std::string base = "sweep --config " + s.file("cfg.json") + " --out " + s.file("t");
    CHECK(run_tool(base, {{"DEGENHEAT_THREADS", "abc"}}).exit_code == 2);
    CHECK(run_tool(base, {{"DEGENHEAT_THREADS", "0"}}).exit_code == 2);
    CHECK(run_tool(base, {{"DEGENHEAT_THREADS", "-3"}}).exit_code == 2);
    CHECK(run_tool(base, {{"DEGENHEAT_THREADS", "2"}}).exit_code == 0);
}

TEST_CASE("lambda can be overridden from the command line") {
    Scratch s("override");
    write_file(s.file("cfg.json"), kSolveConfig);
    auto r = run_tool("solve --config " + s.file("cfg.json") + " --out " + s.file("o") +
                      " --lambda 42");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("42") != std::string::npos);
}

TEST_CASE("limit subcommand writes a trajectory too") {
    Scratch s("limit");
    write_file(s.file("cfg.json"), kSolveConfig);
    auto r = run_tool("limit --config " + s.file("cfg.json") + " --out " + s.file("l"));
    CAPTURE(r.err);
    REQUIRE(r.exit_code == 0);
    CHECK(fs::exists(s.file("l") + "_trajectory.csv"));
}
