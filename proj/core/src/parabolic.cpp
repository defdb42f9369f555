#include "degenheat/parabolic.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "degenheat/errors.hpp"

namespace degenheat {

double eval_profile(const Profile& p, const Grid& g, std::span<const double> x) {
    if (x.size() != std::size_t(g.dim))
        throw config_error("eval_profile: point dimension does not match the grid");
    switch (p.family) {
        case ProfileFamily::zero:
            return 0.0;
        case ProfileFamily::constant:
            return p.amplitude;
        case ProfileFamily::mode: {
            double v = p.amplitude;
            for (int j = 0; j < g.dim; ++j) {
                if (p.mode[j] < 1)
                    throw config_error("profile: mode indices must be at least 1");
                v *= std::sin(std::numbers::pi * p.mode[j] * x[j] / g.extent[j]);
            }
            return v;
        }
        case ProfileFamily::bump: {
            if (!(p.width > 0.0))
                throw config_error("profile: bump width must be positive");
            double r2 = 0.0;
            for (int j = 0; j < g.dim; ++j) {
                const double d = (x[j] - p.center[j]) / p.width;
                r2 += d * d;
            }
            if (r2 >= 1.0) return 0.0;
            return p.amplitude * std::exp(1.0 - 1.0 / (1.0 - r2));
        }
    }
    throw config_error("profile: unknown family");
}

Field sample_profile(const Profile& p, const Grid& g) {
    Field v(g.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto c = g.coords(i);
        const double x[2] = {c[0], c[1]};
        v[i] = eval_profile(p, g, std::span<const double>(x, g.dim));
    }
    return v;
}

namespace {

void validate_grid(const Grid& g) {
    if (g.dim < 1 || g.dim > 2) throw config_error("grid: 1 or 2 axes required");
    for (int j = 0; j < g.dim; ++j) {
        if (g.count[j] < 1)
            throw config_error("grid: interior_counts must be at least 1");
        if (!(g.extent[j] > 0.0))
            throw config_error("grid: extents must be positive");
    }
}

void validate_potential(const PotentialSpec& p, const Grid& g) {
    if (p.amplitude < 0.0)
        throw config_error("potential: amplitude must be nonnegative");
    if (p.radius < 0.0) throw config_error("potential: radius must be nonnegative");
    if (p.family == PotentialFamily::grid_sampled) {
        if (p.time_layers < 1)
            throw config_error("potential: time_layers must be at least 1");
        if (p.samples.size() != std::size_t(p.time_layers) * g.size())
            throw config_error("potential: samples must hold time_layers blocks "
                               "of one value per grid node");
        for (double v : p.samples)
            if (v < 0.0)
                throw config_error("potential: samples must be nonnegative");
    }
}

void validate_profile(const Profile& p, const char* who) {
    if (p.family == ProfileFamily::bump && !(p.width > 0.0))
        throw config_error(std::string(who) + ": bump width must be positive");
    if (p.family == ProfileFamily::mode && (p.mode[0] < 1 || p.mode[1] < 1))
        throw config_error(std::string(who) + ": mode indices must be at least 1");
}

double node_potential(const ProblemSpec& ps, std::size_t i, double t) {
    const auto c = ps.grid.coords(i);
    const double x[2] = {c[0], c[1]};
    return eval_potential(ps.potential, ps.grid,
                          std::span<const double>(x, ps.grid.dim), t);
}

}  // namespace

void validate_problem(const ProblemSpec& ps) {
    validate_grid(ps.grid);
    if (ps.time.steps < 1)
        throw config_error("time: steps must be at least 1");
    if (!(ps.time.horizon > 0.0))
        throw config_error("time: horizon must be positive");
    if (ps.lambda < 0.0) throw config_error("lambda must be nonnegative");
    validate_potential(ps.potential, ps.grid);
    validate_profile(ps.forcing, "forcing");
    validate_profile(ps.initial, "initial");

    if (ps.monotone_potential && !ps.potential.time_monotone())
        throw config_error(
            "potential declared monotone, but it is not nonincreasing in time");

    if (ps.forcing_in_vanishing) {
        const Field f = sample_profile(ps.forcing, ps.grid);
        for (int k = 0; k <= ps.time.steps; ++k) {
            const double t = ps.time.time(k);
            for (std::size_t i = 0; i < f.size(); ++i)
                if (f[i] != 0.0 && node_potential(ps, i, t) > 0.0)
                    throw config_error(
                        "forcing declared supported in the vanishing region, "
                        "but it is nonzero where the potential is positive");
        }
    }
    if (ps.initial_in_vanishing) {
        const Field g0 = sample_profile(ps.initial, ps.grid);
        for (std::size_t i = 0; i < g0.size(); ++i)
            if (g0[i] != 0.0 && node_potential(ps, i, 0.0) > 0.0)
                throw config_error(
                    "initial data declared supported in the vanishing region, "
                    "but it is nonzero where the potential is positive");
    }
}

Trajectory solve_penalized(const ProblemSpec& ps, const CgOptions& cg) {
    validate_problem(ps);
    const std::size_t N = ps.grid.size();
    const double dt = ps.time.dt();

    SparseOperator M = assemble_dirichlet_laplacian(ps.grid);
    const std::vector<double> base_vals = M.vals;
    std::vector<int> diag_pos(N);
    for (std::size_t i = 0; i < N; ++i) {
        diag_pos[i] = -1;
        for (int p = M.row_offsets[i]; p < M.row_offsets[i + 1]; ++p)
            if (M.cols[p] == int(i)) diag_pos[i] = p;
    }

    const Field f = sample_profile(ps.forcing, ps.grid);
    Trajectory tr;
    tr.time = ps.time;
    tr.layers.reserve(ps.time.steps + 1);
    tr.layers.push_back(sample_profile(ps.initial, ps.grid));

    Field u = tr.layers.front();
    Field b(N);
    for (int k = 1; k <= ps.time.steps; ++k) {
        const double t = ps.time.time(k);
        M.vals = base_vals;
        for (std::size_t i = 0; i < N; ++i)
            M.vals[diag_pos[i]] += 1.0 / dt + ps.lambda * node_potential(ps, i, t);
        for (std::size_t i = 0; i < N; ++i) b[i] = f[i] + u[i] / dt;
        cg_solve(M, b, u, cg);
        tr.layers.push_back(u);
    }
    return tr;
}

Trajectory solve_limit(const ProblemSpec& ps, const CgOptions& cg) {
    validate_problem(ps);
    const std::size_t N = ps.grid.size();
    const double dt = ps.time.dt();

    std::vector<std::vector<std::uint8_t>> masks;
    masks.reserve(ps.time.steps + 1);
    for (int k = 0; k <= ps.time.steps; ++k)
        masks.push_back(active_mask(ps.potential, ps.grid, ps.time.time(k)));
    for (int k = 1; k <= ps.time.steps; ++k)
        for (std::size_t i = 0; i < N; ++i)
            if (masks[k - 1][i] && !masks[k][i])
                throw config_error(
                    "the vanishing region must be nondecreasing in time for "
                    "the limit scheme; node " + std::to_string(i) +
                    " deactivates between layers " + std::to_string(k - 1) +
                    " and " + std::to_string(k));

    const Field g0 = sample_profile(ps.initial, ps.grid);
    for (std::size_t i = 0; i < N; ++i)
        if (g0[i] != 0.0 && node_potential(ps, i, 0.0) > 0.0)
            throw config_error(
                "initial data must vanish where the potential is positive at "
                "the starting time for the limit scheme");

    const SparseOperator A = assemble_dirichlet_laplacian(ps.grid);
    const Field f = sample_profile(ps.forcing, ps.grid);
    Trajectory tr;
    tr.time = ps.time;
    tr.layers.reserve(ps.time.steps + 1);
    tr.layers.push_back(g0);

    Field prev = g0;
    for (int k = 1; k <= ps.time.steps; ++k) {
        const auto& mask = masks[k];
        Field layer(N, 0.0);
        RestrictedOperator R = restrict_to_mask(A, mask);
        if (R.op.n > 0) {
            std::vector<double> shift(R.op.n, 1.0 / dt);
            SparseOperator M = add_diagonal(R.op, shift);
            std::vector<double> b(R.op.n), x(R.op.n);
            for (int j = 0; j < R.op.n; ++j) {
                const std::size_t i = std::size_t(R.index[j]);
                // newly activated nodes enter the step carrying value zero
                const double carried = masks[k - 1][i] ? prev[i] : 0.0;
                b[j] = f[i] + carried / dt;
                x[j] = carried;
            }
            cg_solve(M, b, x, cg);
            for (int j = 0; j < R.op.n; ++j) layer[std::size_t(R.index[j])] = x[j];
        }
        prev = layer;
        tr.layers.push_back(std::move(layer));
    }
    return tr;
}

}  // namespace degenheat
