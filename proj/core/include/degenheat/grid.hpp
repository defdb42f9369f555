#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "degenheat/linalg.hpp"

namespace degenheat {

// Uniform tensor grid of interior nodes on (0,L1) or (0,L1)x(0,L2). Axis j
// has count[j] interior nodes at (i+1)*spacing[j], spacing[j] = L_j/(n_j+1).
// Boundary values are implicit zeros. Lexicographic node order, first axis
// fastest.
struct Grid {
    int dim = 1;
    std::array<double, 2> extent{1.0, 1.0};
    std::array<int, 2> count{1, 1};
    std::array<double, 2> spacing{0.5, 0.5};

    std::size_t size() const {
        return dim == 1 ? std::size_t(count[0])
                        : std::size_t(count[0]) * std::size_t(count[1]);
    }
    double cell_volume() const {
        return dim == 1 ? spacing[0] : spacing[0] * spacing[1];
    }
    std::array<double, 2> coords(std::size_t node) const;
};

// Validates extents > 0, counts >= 1, 1 or 2 axes.
Grid build_grid(std::span<const double> extents, std::span<const int> counts);

struct TimeGrid {
    double horizon = 1.0;
    int steps = 1;
    double dt() const { return horizon / steps; }
    double time(int k) const { return steps ? horizon * k / steps : 0.0; }
};

using Field = std::vector<double>;

// Layers 0..time.steps of a nodal field.
struct Trajectory {
    TimeGrid time;
    std::vector<Field> layers;
};

// 3-point (1D) or 5-point (2D) Dirichlet Laplacian, entries scaled by 1/h^2.
SparseOperator assemble_dirichlet_laplacian(const Grid& g);

enum class FieldNorm { l2, h1semi, max };

// l2: sqrt(h^N sum v_i^2). h1semi: forward differences including the two
// boundary jumps per axis (ghost zeros), so h1semi(v)^2 equals the Laplacian
// quadratic form h^N <Av, v> exactly. max: plain max |v_i|.
double field_norm(const Grid& g, std::span<const double> v, FieldNorm kind);

// h^N-weighted inner product of nodal fields.
double field_inner(const Grid& g, std::span<const double> u,
                   std::span<const double> v);

enum class TrajectoryNorm { sup_l2, l2_l2, l2_h1semi };

// sup_l2 ranges over layers 0..m; the time-integrated kinds use the
// rectangle rule over layers 1..m with weight dt.
double trajectory_norm(const Grid& g, const Trajectory& tr, TrajectoryNorm kind);

}  // namespace degenheat
