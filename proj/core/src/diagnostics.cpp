#include "degenheat/diagnostics.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <string>
#include <thread>

#include "degenheat/errors.hpp"

namespace degenheat {

namespace {

double node_potential(const ProblemSpec& ps, std::size_t i, double t) {
    const auto c = ps.grid.coords(i);
    const double x[2] = {c[0], c[1]};
    return eval_potential(ps.potential, ps.grid,
                          std::span<const double>(x, ps.grid.dim), t);
}

void require_trajectory(const ProblemSpec& ps, const Trajectory& tr,
                        const char* who) {
    if (tr.layers.size() != std::size_t(ps.time.steps) + 1)
        throw config_error(std::string(who) +
                           ": layer count does not match the time grid");
    for (const Field& layer : tr.layers)
        if (layer.size() != ps.grid.size())
            throw config_error(std::string(who) +
                               ": layer length does not match the grid");
}

EnergyRecord make_record(const char* name, double lhs, double rhs, double slack) {
    EnergyRecord r;
    r.name = name;
    r.lhs = lhs;
    r.rhs = rhs;
    if (rhs > 0.0)
        r.ratio = lhs / rhs;
    else
        r.ratio = lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    r.satisfied = lhs <= (1.0 + slack) * rhs;
    return r;
}

// lambda * sum_k dt int a(., t_k) (u^k)^2, layers 1..m.
double penalty_mass(const ProblemSpec& ps, const Trajectory& tr, double lambda) {
    const double dt = ps.time.dt(), vol = ps.grid.cell_volume();
    double acc = 0.0;
    for (int k = 1; k <= ps.time.steps; ++k) {
        const double t = ps.time.time(k);
        double layer = 0.0;
        for (std::size_t i = 0; i < ps.grid.size(); ++i) {
            const double u = tr.layers[k][i];
            layer += node_potential(ps, i, t) * u * u;
        }
        acc += dt * vol * layer;
    }
    return lambda * acc;
}

void validate_lambda_list(std::span<const double> lambdas) {
    if (lambdas.empty()) throw config_error("lambda_list must not be empty");
    for (std::size_t j = 0; j < lambdas.size(); ++j) {
        if (!(lambdas[j] > 0.0))
            throw config_error("lambda_list entries must be positive");
        if (j > 0 && !(lambdas[j] > lambdas[j - 1]))
            throw config_error(
                "lambda_list must be strictly ascending without duplicates");
    }
}

// Runs fn(0..jobs-1); with more than one worker the jobs are pulled from a
// shared counter, each writing only its own slot, so results are identical
// to the serial order.
void run_jobs(std::size_t jobs, int max_threads,
              const std::function<void(std::size_t)>& fn) {
    int workers = std::min<int>(max_threads, int(jobs));
    if (workers <= 1) {
        for (std::size_t j = 0; j < jobs; ++j) fn(j);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t j = next.fetch_add(1);
            if (j >= jobs) return;
            try {
                fn(j);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace

EnergyReport check_energy_bounds(const ProblemSpec& ps, const Trajectory& pen,
                                 const Trajectory* limit,
                                 const EnergyOptions& opts) {
    validate_problem(ps);
    require_trajectory(ps, pen, "check_energy_bounds");
    if (limit) require_trajectory(ps, *limit, "check_energy_bounds");

    const bool monotone = ps.potential.time_monotone();
    bool include_der = false;
    switch (opts.derivative_bound) {
        case BoundSelect::automatic:
            include_der = monotone;
            break;
        case BoundSelect::required:
            if (!monotone)
                throw config_error(
                    "the derbound record requires a potential nonincreasing "
                    "in time");
            include_der = true;
            break;
        case BoundSelect::skipped:
            break;
    }

    const Field f = sample_profile(ps.forcing, ps.grid);
    const Field g0 = sample_profile(ps.initial, ps.grid);
    const double T = ps.time.horizon, dt = ps.time.dt();
    const double vol = ps.grid.cell_volume();

    const double fn = field_norm(ps.grid, f, FieldNorm::l2);
    const double gn = field_norm(ps.grid, g0, FieldNorm::l2);
    const double fnorm2 = fn * fn, gnorm2 = gn * gn;

    double sup_u2 = 0.0, grad_int = 0.0, sup_grad2 = 0.0, der_int = 0.0;
    for (int k = 0; k <= ps.time.steps; ++k) {
        const double l2 = field_norm(ps.grid, pen.layers[k], FieldNorm::l2);
        sup_u2 = std::max(sup_u2, l2 * l2);
        const double s = field_norm(ps.grid, pen.layers[k], FieldNorm::h1semi);
        sup_grad2 = std::max(sup_grad2, s * s);
        if (k >= 1) {
            grad_int += dt * s * s;
            double d2 = 0.0;
            for (std::size_t i = 0; i < ps.grid.size(); ++i) {
                const double d = (pen.layers[k][i] - pen.layers[k - 1][i]) / dt;
                d2 += d * d;
            }
            der_int += dt * vol * d2;
        }
    }

    const double mass = penalty_mass(ps, pen, ps.lambda);

    EnergyReport rep;
    const double data_rhs = gnorm2 + T * fnorm2;
    rep.records.push_back(make_record(
        "bound2", 0.25 * sup_u2 + grad_int + mass, data_rhs, opts.slack));
    rep.records.push_back(make_record("standardBound", mass, data_rhs, opts.slack));

    if (include_der) {
        double pen0 = 0.0;
        for (std::size_t i = 0; i < ps.grid.size(); ++i)
            pen0 += node_potential(ps, i, 0.0) * g0[i] * g0[i];
        const double gs = field_norm(ps.grid, g0, FieldNorm::h1semi);
        const double der_rhs = fnorm2 + gs * gs + ps.lambda * vol * pen0;
        rep.records.push_back(
            make_record("derbound", der_int + sup_grad2, der_rhs, opts.slack));
    }

    if (limit) {
        double sup_v2 = 0.0, grad_v = 0.0;
        for (int k = 0; k <= ps.time.steps; ++k) {
            const double l2 = field_norm(ps.grid, limit->layers[k], FieldNorm::l2);
            sup_v2 = std::max(sup_v2, l2 * l2);
            if (k >= 1) {
                const double s =
                    field_norm(ps.grid, limit->layers[k], FieldNorm::h1semi);
                grad_v += dt * s * s;
            }
        }
        rep.records.push_back(make_record("energyInf", 0.25 * sup_v2 + grad_v,
                                          0.5 * gnorm2 + T * fnorm2, opts.slack));
    }
    return rep;
}

SweepReport convergence_sweep(const ProblemSpec& base,
                              std::span<const double> lambdas,
                              const CgOptions& cg, int max_threads) {
    validate_lambda_list(lambdas);
    validate_problem(base);
    const Trajectory lim = solve_limit(base, cg);

    SweepReport rep;
    rep.records.resize(lambdas.size());
    run_jobs(lambdas.size(), max_threads, [&](std::size_t j) {
        ProblemSpec ps = base;
        ps.lambda = lambdas[j];
        const Trajectory pen = solve_penalized(ps, cg);

        const double dt = ps.time.dt();
        Field diff(ps.grid.size());
        double grad_int = 0.0, sup_l2 = 0.0;
        for (int k = 0; k <= ps.time.steps; ++k) {
            for (std::size_t i = 0; i < diff.size(); ++i)
                diff[i] = pen.layers[k][i] - lim.layers[k][i];
            sup_l2 = std::max(sup_l2, field_norm(ps.grid, diff, FieldNorm::l2));
            if (k >= 1) {
                const double s = field_norm(ps.grid, diff, FieldNorm::h1semi);
                grad_int += dt * s * s;
            }
        }
        SweepRecord& rec = rep.records[j];
        rec.lambda = lambdas[j];
        rec.err_l2h1 = std::sqrt(grad_int);
        rec.err_supl2 = sup_l2;
        rec.pen_mass = penalty_mass(ps, pen, ps.lambda);
    });

    int soft = 0;
    bool hard = false;
    for (std::size_t j = 1; j < rep.records.size(); ++j) {
        const double prev = rep.records[j - 1].err_l2h1;
        const double cur = rep.records[j].err_l2h1;
        if (cur <= prev) continue;
        if (cur <= 1.01 * prev)
            ++soft;
        else
            hard = true;
    }
    rep.err_monotone = !hard && soft <= 1;
    return rep;
}

double weighted_decay_integral(const DecayGeometry& geom, const Grid& g,
                               const Trajectory& tr, double lambda,
                               const Field& f) {
    const std::size_t N = g.size();
    if (f.size() != N)
        throw config_error("weighted_decay_integral: forcing length mismatch");
    if (geom.margin.size() != (tr.layers.size()) * N)
        throw config_error(
            "weighted_decay_integral: geometry was built for a different "
            "grid or time grid");
    const double c = lambda * geom.floor_value / 4.0;
    const double dt = tr.time.dt(), vol = g.cell_volume();
    const double root = std::sqrt(lambda);
    double acc = 0.0;
    for (std::size_t k = 1; k < tr.layers.size(); ++k)
        for (std::size_t i = 0; i < N; ++i) {
            const std::size_t id = k * N + i;
            const double eta = geom.cutoff[id];
            if (eta == 0.0) continue;
            const double u = tr.layers[k][i];
            acc += dt * vol * std::exp(2.0 * root * geom.weight[id]) * eta * eta *
                   u * (c * u - f[i]);
        }
    return acc;
}

double weighted_decay_integral(const DecayGeometry& geom, const Grid& g,
                               const Field& u, double lambda, const Field& f) {
    const std::size_t N = g.size();
    if (u.size() != N || f.size() != N)
        throw config_error("weighted_decay_integral: field length mismatch");
    if (geom.margin.size() != N)
        throw config_error(
            "weighted_decay_integral: geometry was built for a different grid");
    const double c = lambda * geom.floor_value / 2.0;
    const double vol = g.cell_volume();
    const double root = std::sqrt(lambda);
    double acc = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        const double eta = geom.cutoff[i];
        if (eta == 0.0) continue;
        acc += vol * std::exp(2.0 * root * geom.weight[i]) * eta * eta * u[i] *
               (c * u[i] - f[i]);
    }
    return acc;
}

DecayReport decay_sweep(const ProblemSpec& base, std::span<const double> lambdas,
                        double eps, const CgOptions& cg, int max_threads) {
    validate_lambda_list(lambdas);
    for (double lam : lambdas)
        if (lam < 4.0)
            throw config_error(
                "every lambda in the decay sweep must be at least 4, so that "
                "lambda - sqrt(lambda) >= lambda / 2");
    validate_problem(base);
    const DecayGeometry geom =
        build_decay_geometry(base.potential, base.grid, base.time, eps);
    if (lambdas.size() < 3)
        throw config_error(
            "the decay sweep needs at least 3 lambda values for a slope fit");

    const Field f = sample_profile(base.forcing, base.grid);
    const std::size_t N = base.grid.size();
    const double dt = base.time.dt(), vol = base.grid.cell_volume();

    DecayReport rep;
    rep.records.resize(lambdas.size());
    std::vector<double> tripled_mass(lambdas.size(), 0.0);
    run_jobs(lambdas.size(), max_threads, [&](std::size_t j) {
        ProblemSpec ps = base;
        ps.lambda = lambdas[j];
        const Trajectory pen = solve_penalized(ps, cg);

        double i_eps = 0.0, i_3eps = 0.0;
        for (int k = 1; k <= ps.time.steps; ++k)
            for (std::size_t i = 0; i < N; ++i) {
                const std::size_t id = std::size_t(k) * N + i;
                const double u2 =
                    pen.layers[k][i] * pen.layers[k][i] * dt * vol;
                if (geom.outer[id]) i_eps += u2;
                if (geom.outer_tripled[id]) i_3eps += u2;
            }

        DecayRecord& rec = rep.records[j];
        rec.lambda = lambdas[j];
        rec.I_eps = i_eps;
        rec.W = weighted_decay_integral(geom, base.grid, pen, ps.lambda, f);
        rec.scaled =
            ps.lambda * std::exp(geom.rate_coeff * std::sqrt(ps.lambda)) * i_eps;
        tripled_mass[j] = i_3eps;
    });

    // least squares of log I_3eps against sqrt(lambda)
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double count = double(lambdas.size());
    for (std::size_t j = 0; j < lambdas.size(); ++j) {
        if (!(tripled_mass[j] > 0.0))
            throw geometry_error(
                "the slope fit degenerates: the mass beyond three margins is "
                "not strictly positive at lambda " +
                std::to_string(lambdas[j]));
        const double x = std::sqrt(lambdas[j]);
        const double y = std::log(tripled_mass[j]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = count * sxx - sx * sx;
    rep.slope = (count * sxy - sx * sy) / denom;
    rep.intercept = (sy - rep.slope * sx) / count;
    double rss = 0.0;
    for (std::size_t j = 0; j < lambdas.size(); ++j) {
        const double r = std::log(tripled_mass[j]) -
                         (rep.slope * std::sqrt(lambdas[j]) + rep.intercept);
        rss += r * r;
    }
    rep.residual = std::sqrt(rss / count);

    double w_max = -std::numeric_limits<double>::infinity();
    for (const DecayRecord& rec : rep.records) w_max = std::max(w_max, rec.W);
    rep.weighted_growth = w_max / rep.records.front().W;
    rep.weighted_bounded = rep.weighted_growth <= 50.0;
    return rep;
}

PairingResult distributional_pairing(const ProblemSpec& ps,
                                     const Trajectory& tr, const Profile& phi) {
    validate_problem(ps);
    require_trajectory(ps, tr, "distributional_pairing");

    const Field test = sample_profile(phi, ps.grid);
    const Field f = sample_profile(ps.forcing, ps.grid);
    const SparseOperator A = assemble_dirichlet_laplacian(ps.grid);
    const std::size_t N = ps.grid.size();
    const double dt = ps.time.dt(), vol = ps.grid.cell_volume();

    double pen_term = 0.0, f_term = 0.0, a_term = 0.0, d_term = 0.0;
    Field Au(N);
    for (int k = 1; k <= ps.time.steps; ++k) {
        const double t = ps.time.time(k);
        A.matvec(tr.layers[k], Au);
        double pen_k = 0.0, f_k = 0.0, a_k = 0.0, d_k = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double u = tr.layers[k][i];
            pen_k += node_potential(ps, i, t) * u * test[i];
            f_k += f[i] * test[i];
            a_k += Au[i] * test[i];
            d_k += (u - tr.layers[k - 1][i]) / dt * test[i];
        }
        pen_term += dt * vol * pen_k;
        f_term += dt * vol * f_k;
        a_term += dt * vol * a_k;
        d_term += dt * vol * d_k;
    }

    PairingResult pr;
    pr.penalty_side = ps.lambda * pen_term;
    pr.weak_side = f_term - a_term - d_term;
    const double den =
        std::max({std::fabs(f_term), std::fabs(a_term), std::fabs(d_term),
                  std::fabs(pr.penalty_side), 1e-30});
    pr.agreement = std::fabs(pr.penalty_side - pr.weak_side) / den;
    return pr;
}

}  // namespace degenheat
