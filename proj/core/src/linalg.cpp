#include "degenheat/linalg.hpp"

#include <cmath>
#include <string>

#include "degenheat/errors.hpp"

namespace degenheat {

void SparseOperator::matvec(std::span<const double> x, std::span<double> y) const {
    if (x.size() != std::size_t(n) || y.size() != std::size_t(n))
        throw config_error("matvec: vector length does not match the operator");
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int p = row_offsets[i]; p < row_offsets[i + 1]; ++p)
            acc += vals[p] * x[cols[p]];
        y[i] = acc;
    }
}

double SparseOperator::quadratic_form(std::span<const double> x) const {
    if (x.size() != std::size_t(n))
        throw config_error("quadratic_form: vector length does not match the operator");
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int p = row_offsets[i]; p < row_offsets[i + 1]; ++p)
            row += vals[p] * x[cols[p]];
        total += x[i] * row;
    }
    return total;
}

std::vector<double> SparseOperator::diagonal() const {
    std::vector<double> d(n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int p = row_offsets[i]; p < row_offsets[i + 1]; ++p)
            if (cols[p] == i) d[i] = vals[p];
    return d;
}

SparseOperator add_diagonal(const SparseOperator& A, std::span<const double> d) {
    if (d.size() != std::size_t(A.n))
        throw config_error("add_diagonal: shift length does not match the operator");
    for (double v : d)
        if (v < 0.0) throw config_error("add_diagonal: shift entries must be nonnegative");
    SparseOperator B = A;
    for (int i = 0; i < B.n; ++i) {
        bool found = false;
        for (int p = B.row_offsets[i]; p < B.row_offsets[i + 1]; ++p)
            if (B.cols[p] == i) {
                B.vals[p] += d[i];
                found = true;
                break;
            }
        if (!found)
            throw config_error("add_diagonal: row " + std::to_string(i) +
                               " stores no diagonal entry");
    }
    return B;
}

RestrictedOperator restrict_to_mask(const SparseOperator& A,
                                    std::span<const std::uint8_t> keep) {
    if (keep.size() != std::size_t(A.n))
        throw config_error("restrict_to_mask: mask length does not match the operator");
    RestrictedOperator R;
    std::vector<int> renum(A.n, -1);
    for (int i = 0; i < A.n; ++i)
        if (keep[i]) {
            renum[i] = int(R.index.size());
            R.index.push_back(i);
        }
    R.op.n = int(R.index.size());
    R.op.row_offsets.reserve(R.op.n + 1);
    R.op.row_offsets.push_back(0);
    for (int i : R.index) {
        for (int p = A.row_offsets[i]; p < A.row_offsets[i + 1]; ++p) {
            const int j = renum[A.cols[p]];
            if (j < 0) continue;
            R.op.cols.push_back(j);
            R.op.vals.push_back(A.vals[p]);
        }
        R.op.row_offsets.push_back(int(R.op.cols.size()));
    }
    return R;
}

SolveStats cg_solve(const SparseOperator& A, std::span<const double> b,
                    std::span<double> x, const CgOptions& opts) {
    const int n = A.n;
    if (b.size() != std::size_t(n) || x.size() != std::size_t(n))
        throw config_error("cg: vector length does not match the operator");
    const int budget = opts.max_iter > 0 ? opts.max_iter : 10 * n;

    std::vector<double> invd = A.diagonal();
    for (double& v : invd) v = v != 0.0 ? 1.0 / v : 1.0;

    double bnorm2 = 0.0;
    for (double v : b) bnorm2 += v * v;
    const double bnorm = std::sqrt(bnorm2);
    const double threshold = bnorm > 0.0 ? opts.tol * bnorm : opts.tol;
    const double scale = bnorm > 0.0 ? bnorm : 1.0;

    std::vector<double> r(n), z(n), p(n), q(n);
    A.matvec(x, r);
    for (int i = 0; i < n; ++i) r[i] = b[i] - r[i];
    double rnorm2 = 0.0;
    for (double v : r) rnorm2 += v * v;
    double rnorm = std::sqrt(rnorm2);

    SolveStats st;
    if (rnorm <= threshold) {
        st.converged = true;
        st.rel_residual = rnorm / scale;
        return st;
    }

    double rz = 0.0;
    for (int i = 0; i < n; ++i) {
        z[i] = invd[i] * r[i];
        rz += r[i] * z[i];
    }
    p.assign(z.begin(), z.end());

    for (int it = 1; it <= budget; ++it) {
        A.matvec(p, q);
        double pq = 0.0;
        for (int i = 0; i < n; ++i) pq += p[i] * q[i];
        if (pq <= 0.0)
            throw solver_failure("cg: curvature breakdown (operator not positive "
                                 "definite on the search direction)",
                                 std::vector<double>(x.begin(), x.end()),
                                 rnorm / scale, it - 1);
        const double alpha = rz / pq;
        for (int i = 0; i < n; ++i) x[i] += alpha * p[i];
        for (int i = 0; i < n; ++i) r[i] -= alpha * q[i];
        rnorm2 = 0.0;
        for (double v : r) rnorm2 += v * v;
        rnorm = std::sqrt(rnorm2);
        if (rnorm <= threshold) {
            st.converged = true;
            st.iterations = it;
            st.rel_residual = rnorm / scale;
            return st;
        }
        double rz_next = 0.0;
        for (int i = 0; i < n; ++i) {
            z[i] = invd[i] * r[i];
            rz_next += r[i] * z[i];
        }
        const double beta = rz_next / rz;
        rz = rz_next;
        for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }

    throw solver_failure("cg: tolerance not reached within " +
                             std::to_string(budget) + " iterations",
                         std::vector<double>(x.begin(), x.end()), rnorm / scale,
                         budget);
}

}  // namespace degenheat
