#include "degenheat/stationary.hpp"

#include <cmath>

#include "degenheat/errors.hpp"

namespace degenheat {

namespace {

void validate_stationary(const StationarySpec& ss) {
    if (ss.grid.dim < 1 || ss.grid.dim > 2)
        throw config_error("grid: 1 or 2 axes required");
    for (int j = 0; j < ss.grid.dim; ++j)
        if (ss.grid.count[j] < 1 || !(ss.grid.extent[j] > 0.0))
            throw config_error("grid: invalid axis");
    if (ss.lambda < 0.0) throw config_error("lambda must be nonnegative");
    if (ss.potential.amplitude < 0.0)
        throw config_error("potential: amplitude must be nonnegative");
    if (ss.potential.radius < 0.0)
        throw config_error("potential: radius must be nonnegative");
    if (ss.forcing.family == ProfileFamily::bump && !(ss.forcing.width > 0.0))
        throw config_error("forcing: bump width must be positive");
}

Field potential_at_zero(const StationarySpec& ss) {
    Field a(ss.grid.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto c = ss.grid.coords(i);
        const double x[2] = {c[0], c[1]};
        a[i] = eval_potential(ss.potential, ss.grid,
                              std::span<const double>(x, ss.grid.dim), 0.0);
    }
    return a;
}

}  // namespace

Field solve_stationary_penalized(const StationarySpec& ss, const CgOptions& cg) {
    validate_stationary(ss);
    const Field a = potential_at_zero(ss);
    Field shift(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) shift[i] = ss.lambda * a[i];
    const SparseOperator M =
        add_diagonal(assemble_dirichlet_laplacian(ss.grid), shift);
    const Field b = sample_profile(ss.forcing, ss.grid);
    Field u(a.size(), 0.0);
    cg_solve(M, b, u, cg);
    return u;
}

Field solve_stationary_limit(const StationarySpec& ss, const CgOptions& cg) {
    validate_stationary(ss);
    const auto mask = active_mask(ss.potential, ss.grid, 0.0);
    const SparseOperator A = assemble_dirichlet_laplacian(ss.grid);
    RestrictedOperator R = restrict_to_mask(A, mask);
    if (R.op.n == 0)
        throw geometry_error(
            "the vanishing region contains no interior grid node; the limit "
            "problem is empty");
    const Field f = sample_profile(ss.forcing, ss.grid);
    std::vector<double> b(R.op.n), x(R.op.n, 0.0);
    for (int j = 0; j < R.op.n; ++j) b[j] = f[std::size_t(R.index[j])];
    cg_solve(R.op, b, x, cg);
    Field u(ss.grid.size(), 0.0);
    for (int j = 0; j < R.op.n; ++j) u[std::size_t(R.index[j])] = x[j];
    return u;
}

double stationary_energy(const StationarySpec& ss, std::span<const double> v) {
    if (v.size() != ss.grid.size())
        throw config_error("stationary_energy: field length does not match the grid");
    const double s = field_norm(ss.grid, v, FieldNorm::h1semi);
    const Field a = potential_at_zero(ss);
    double pen = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) pen += a[i] * v[i] * v[i];
    return s * s + ss.lambda * pen * ss.grid.cell_volume();
}

double stationary_objective(const StationarySpec& ss, std::span<const double> v) {
    const Field f = sample_profile(ss.forcing, ss.grid);
    return stationary_energy(ss, v) - 2.0 * field_inner(ss.grid, f, v);
}

}  // namespace degenheat
