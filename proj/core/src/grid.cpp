#include "degenheat/grid.hpp"

#include <cmath>

#include "degenheat/errors.hpp"

namespace degenheat {

std::array<double, 2> Grid::coords(std::size_t node) const {
    if (dim == 1) return {double(node + 1) * spacing[0], 0.0};
    const std::size_t ix = node % std::size_t(count[0]);
    const std::size_t iy = node / std::size_t(count[0]);
    return {double(ix + 1) * spacing[0], double(iy + 1) * spacing[1]};
}

Grid build_grid(std::span<const double> extents, std::span<const int> counts) {
    if (extents.size() != counts.size())
        throw config_error("grid: extents and interior_counts must have the same length");
    if (extents.empty() || extents.size() > 2)
        throw config_error("grid: 1 or 2 axes required");
    Grid g;
    g.dim = int(extents.size());
    for (std::size_t j = 0; j < extents.size(); ++j) {
        if (!(extents[j] > 0.0) || !std::isfinite(extents[j]))
            throw config_error("grid: extents must be positive");
        if (counts[j] < 1)
            throw config_error("grid: interior_counts must be at least 1");
        g.extent[j] = extents[j];
        g.count[j] = counts[j];
        g.spacing[j] = extents[j] / (counts[j] + 1);
    }
    return g;
}

SparseOperator assemble_dirichlet_laplacian(const Grid& g) {
    SparseOperator A;
    A.n = int(g.size());
    A.row_offsets.reserve(A.n + 1);
    A.row_offsets.push_back(0);

    if (g.dim == 1) {
        const int n = g.count[0];
        const double w = 1.0 / (g.spacing[0] * g.spacing[0]);
        for (int i = 0; i < n; ++i) {
            if (i > 0) {
                A.cols.push_back(i - 1);
                A.vals.push_back(-w);
            }
            A.cols.push_back(i);
            A.vals.push_back(2.0 * w);
            if (i + 1 < n) {
                A.cols.push_back(i + 1);
                A.vals.push_back(-w);
            }
            A.row_offsets.push_back(int(A.cols.size()));
        }
        return A;
    }

    const int nx = g.count[0], ny = g.count[1];
    const double wx = 1.0 / (g.spacing[0] * g.spacing[0]);
    const double wy = 1.0 / (g.spacing[1] * g.spacing[1]);
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix) {
            const int i = iy * nx + ix;
            if (iy > 0) {
                A.cols.push_back(i - nx);
                A.vals.push_back(-wy);
            }
            if (ix > 0) {
                A.cols.push_back(i - 1);
                A.vals.push_back(-wx);
            }
            A.cols.push_back(i);
            A.vals.push_back(2.0 * wx + 2.0 * wy);
            if (ix + 1 < nx) {
                A.cols.push_back(i + 1);
                A.vals.push_back(-wx);
            }
            if (iy + 1 < ny) {
                A.cols.push_back(i + nx);
                A.vals.push_back(-wy);
            }
            A.row_offsets.push_back(int(A.cols.size()));
        }
    return A;
}

namespace {

void require_size(const Grid& g, std::span<const double> v, const char* who) {
    if (v.size() != g.size())
        throw config_error(std::string(who) + ": field length does not match the grid");
}

// Sum of squared ghost-zero forward differences along every axis, scaled so
// the total times cell_volume equals <Av, v> * cell_volume.
double grad_square_sum(const Grid& g, std::span<const double> v) {
    double acc = 0.0;
    if (g.dim == 1) {
        const int n = g.count[0];
        const double inv_h2 = 1.0 / (g.spacing[0] * g.spacing[0]);
        for (int f = 0; f <= n; ++f) {
            const double left = f > 0 ? v[f - 1] : 0.0;
            const double right = f < n ? v[f] : 0.0;
            const double d = right - left;
            acc += d * d * inv_h2;
        }
        return acc;
    }
    const int nx = g.count[0], ny = g.count[1];
    const double inv_hx2 = 1.0 / (g.spacing[0] * g.spacing[0]);
    const double inv_hy2 = 1.0 / (g.spacing[1] * g.spacing[1]);
    for (int iy = 0; iy < ny; ++iy)
        for (int f = 0; f <= nx; ++f) {
            const double left = f > 0 ? v[std::size_t(iy) * nx + f - 1] : 0.0;
            const double right = f < nx ? v[std::size_t(iy) * nx + f] : 0.0;
            const double d = right - left;
            acc += d * d * inv_hx2;
        }
    for (int ix = 0; ix < nx; ++ix)
        for (int f = 0; f <= ny; ++f) {
            const double left = f > 0 ? v[std::size_t(f - 1) * nx + ix] : 0.0;
            const double right = f < ny ? v[std::size_t(f) * nx + ix] : 0.0;
            const double d = right - left;
            acc += d * d * inv_hy2;
        }
    return acc;
}

}  // namespace

double field_norm(const Grid& g, std::span<const double> v, FieldNorm kind) {
    require_size(g, v, "field_norm");
    switch (kind) {
        case FieldNorm::l2: {
            double acc = 0.0;
            for (double x : v) acc += x * x;
            return std::sqrt(acc * g.cell_volume());
        }
        case FieldNorm::h1semi:
            return std::sqrt(grad_square_sum(g, v) * g.cell_volume());
        case FieldNorm::max: {
            double m = 0.0;
            for (double x : v) m = std::max(m, std::fabs(x));
            return m;
        }
    }
    throw config_error("field_norm: unknown kind");
}

double field_inner(const Grid& g, std::span<const double> u,
                   std::span<const double> v) {
    require_size(g, u, "field_inner");
    require_size(g, v, "field_inner");
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) acc += u[i] * v[i];
    return acc * g.cell_volume();
}

double trajectory_norm(const Grid& g, const Trajectory& tr, TrajectoryNorm kind) {
    if (tr.layers.size() != std::size_t(tr.time.steps) + 1)
        throw config_error("trajectory_norm: layer count does not match the time grid");
    switch (kind) {
        case TrajectoryNorm::sup_l2: {
            double m = 0.0;
            for (const Field& layer : tr.layers)
                m = std::max(m, field_norm(g, layer, FieldNorm::l2));
            return m;
        }
        case TrajectoryNorm::l2_l2: {
            double acc = 0.0;
            for (std::size_t k = 1; k < tr.layers.size(); ++k) {
                const double l2 = field_norm(g, tr.layers[k], FieldNorm::l2);
                acc += l2 * l2;
            }
            return std::sqrt(acc * tr.time.dt());
        }
        case TrajectoryNorm::l2_h1semi: {
            double acc = 0.0;
            for (std::size_t k = 1; k < tr.layers.size(); ++k) {
                const double s = field_norm(g, tr.layers[k], FieldNorm::h1semi);
                acc += s * s;
            }
            return std::sqrt(acc * tr.time.dt());
        }
    }
    throw config_error("trajectory_norm: unknown kind");
}

}  // namespace degenheat
