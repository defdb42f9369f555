#include <benchmark/benchmark.h>

#include <random>

#include "degenheat/diagnostics.hpp"
#include "degenheat/parabolic.hpp"

using namespace degenheat;

namespace {

Grid unit_grid(int n) {
    const double L[] = {1.0};
    const int c[] = {n};
    return build_grid(L, c);
}

PotentialSpec slab(double radius, double growth, double horizon) {
    PotentialSpec p;
    p.family = growth == 0.0 ? PotentialFamily::cylindrical_slab
                             : PotentialFamily::expanding_slab;
    p.center = {0.5, 0.5};
    p.radius = radius;
    p.growth = growth;
    p.amplitude = 1.0;
    p.horizon = horizon;
    return p;
}

ProblemSpec reference(int n, int m) {
    ProblemSpec ps;
    ps.grid = unit_grid(n);
    ps.time = TimeGrid{1.0, m};
    ps.potential = slab(0.2, 0.1, 1.0);
    ps.lambda = 1e4;
    ps.forcing.family = ProfileFamily::bump;
    ps.forcing.center = {0.5, 0.5};
    ps.forcing.width = 0.15;
    ps.forcing.amplitude = 1.0;
    ps.initial = ps.forcing;
    ps.initial.amplitude = 0.05;
    return ps;
}

void bm_cg_solve(benchmark::State& state) {
    const int n = int(state.range(0));
    Grid g = unit_grid(n);
    SparseOperator A = assemble_dirichlet_laplacian(g);
    std::vector<double> shift(A.n, 5.0);
    add_diagonal(A, shift);
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> b(A.n);
    for (auto& v : b) v = dist(rng);
    std::vector<double> x(A.n);
    for (auto _ : state) {
        std::fill(x.begin(), x.end(), 0.0);
        cg_solve(A, b, x, {1e-10, 0});
        benchmark::DoNotOptimize(x.data());
    }
    state.SetComplexityN(n);
}
BENCHMARK(bm_cg_solve)->Arg(199)->Arg(799)->Arg(3199)->Complexity();

void bm_penalized_solve(benchmark::State& state) {
    ProblemSpec ps = reference(int(state.range(0)), 50);
    for (auto _ : state) {
        Trajectory tr = solve_penalized(ps, {1e-10, 0});
        benchmark::DoNotOptimize(tr.layers.back().data());
    }
}
BENCHMARK(bm_penalized_solve)->Arg(99)->Arg(199)->Arg(399);

void bm_limit_solve(benchmark::State& state) {
    ProblemSpec ps = reference(int(state.range(0)), 50);
    for (auto _ : state) {
        Trajectory tr = solve_limit(ps, {1e-10, 0});
        benchmark::DoNotOptimize(tr.layers.back().data());
    }
}
BENCHMARK(bm_limit_solve)->Arg(99)->Arg(199)->Arg(399);

void bm_decay_geometry(benchmark::State& state) {
    Grid g = unit_grid(int(state.range(0)));
    TimeGrid tg{1.0, 100};
    PotentialSpec p = slab(0.1, 0.0, 1.0);
    for (auto _ : state) {
        DecayGeometry geom = build_decay_geometry(p, g, tg, 0.1);
        benchmark::DoNotOptimize(geom.weight.data());
    }
}
BENCHMARK(bm_decay_geometry)->Arg(199)->Arg(399);

void bm_trajectory_norms(benchmark::State& state) {
    ProblemSpec ps = reference(int(state.range(0)), 100);
    Trajectory tr = solve_penalized(ps, {1e-10, 0});
    for (auto _ : state) {
        double n = trajectory_norm(ps.grid, tr, TrajectoryNorm::l2_h1semi);
        benchmark::DoNotOptimize(n);
    }
}
BENCHMARK(bm_trajectory_norms)->Arg(199)->Arg(399);

}  // namespace

BENCHMARK_MAIN();
