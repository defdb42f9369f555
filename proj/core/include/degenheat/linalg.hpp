#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace degenheat {

// Square sparse matrix, CSR. Invariants: columns sorted within each row, no
// explicitly stored zeros, structurally symmetric.
struct SparseOperator {
    int n = 0;
    std::vector<int> row_offsets;  // size n + 1
    std::vector<int> cols;
    std::vector<double> vals;

    void matvec(std::span<const double> x, std::span<double> y) const;
    // x^T A x, accumulated row by row in index order.
    double quadratic_form(std::span<const double> x) const;
    std::vector<double> diagonal() const;
};

// A + diag(d). d must be nonnegative entrywise and every diagonal entry of A
// must already be stored; violating either is a config_error.
SparseOperator add_diagonal(const SparseOperator& A, std::span<const double> d);

// Submatrix on the rows/columns with keep[i] != 0, renumbered consecutively.
// index maps restricted indices back to original ones.
struct RestrictedOperator {
    SparseOperator op;
    std::vector<int> index;
};
RestrictedOperator restrict_to_mask(const SparseOperator& A,
                                    std::span<const std::uint8_t> keep);

struct SolveStats {
    int iterations = 0;
    double rel_residual = 0.0;
    bool converged = false;
};

struct CgOptions {
    double tol = 1e-10;  // relative to ||b||; absolute when b = 0
    int max_iter = 0;    // 0 means 10 * n
};

// Jacobi-preconditioned conjugate gradients. x holds the initial guess on
// entry and the solution on exit. All reductions run in fixed index order so
// repeated calls are bitwise reproducible. Throws solver_failure (carrying
// the best iterate) when tolerance is not reached within the budget.
SolveStats cg_solve(const SparseOperator& A, std::span<const double> b,
                    std::span<double> x, const CgOptions& opts = {});

}  // namespace degenheat
