#pragma once

#include <span>
#include <string>
#include <vector>

#include "degenheat/parabolic.hpp"
#include "degenheat/stationary.hpp"

namespace degenheat {

struct EnergyRecord {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;  // lhs / rhs, finite whenever rhs > 0
    bool satisfied = false;
};

struct EnergyReport {
    std::vector<EnergyRecord> records;
};

enum class BoundSelect { automatic, required, skipped };

struct EnergyOptions {
    double slack = 0.05;  // a bound passes when lhs <= (1 + slack) * rhs
    BoundSelect derivative_bound = BoundSelect::automatic;
};

// Discrete energy inequalities on a penalized trajectory and optionally the
// limit one. Records, in order:
//   bound2        quarter sup ||u||^2 + time-integrated gradient and
//                 penalty terms vs ||g||^2 + T ||f||^2_{L2L2}
//   standardBound time-integrated penalty mass vs the same right side
//   derbound      time derivative + sup gradient vs ||f||^2_{L2L2}
//                 + h1semi(g)^2 + lambda int a(.,0) g^2; needs the
//                 time-monotone potential hypothesis
//   energyInf     limit trajectory: quarter sup ||u||^2 + gradient integral
//                 vs half ||g||^2 + T ||f||^2_{L2L2}
// derivative_bound = required on a non-monotone potential is a config_error;
// automatic includes derbound only when the potential is monotone.
EnergyReport check_energy_bounds(const ProblemSpec& ps, const Trajectory& pen,
                                 const Trajectory* limit,
                                 const EnergyOptions& opts = {});

struct SweepRecord {
    double lambda = 0.0;
    double err_l2h1 = 0.0;   // L2-in-time h1semi distance to the limit
    double err_supl2 = 0.0;  // sup-in-time l2 distance to the limit
    double pen_mass = 0.0;   // lambda * int a u^2 over space-time
};

struct SweepReport {
    std::vector<SweepRecord> records;
    bool err_monotone = false;  // err_l2h1 nonincreasing along the list
};

// Solves the limit problem once and the penalized problem per lambda
// (independently warm-started, optionally in parallel; results are slotted
// by index so the report does not depend on scheduling).
SweepReport convergence_sweep(const ProblemSpec& base,
                              std::span<const double> lambdas,
                              const CgOptions& cg = {}, int max_threads = 0);

struct DecayRecord {
    double lambda = 0.0;
    double I_eps = 0.0;   // space-time mass of u^2 beyond margin eps
    double W = 0.0;       // weighted decay integral, one-sided: <= 0 up to
                          // quadrature and solver noise means the predicted
                          // exponential envelope holds
    double scaled = 0.0;  // lambda * exp(rate_coeff sqrt(lambda)) * I_eps
};

struct DecayReport {
    std::vector<DecayRecord> records;
    double slope = 0.0;      // least-squares slope of log I_3eps vs sqrt(lambda)
    double intercept = 0.0;
    double residual = 0.0;   // rms residual of that fit
    double weighted_growth = 0.0;  // max W over the sweep / W at smallest lambda
    bool weighted_bounded = false;  // weighted_growth <= 50
};

// Requires every lambda >= 4 (so lambda - sqrt(lambda) >= lambda / 2) and a
// usable decay geometry. Throws geometry_error if the fit data degenerates
// (I_3eps not strictly positive).
DecayReport decay_sweep(const ProblemSpec& base, std::span<const double> lambdas,
                        double eps, const CgOptions& cg = {},
                        int max_threads = 0);

// W = sum_k dt sum_i h^N e^{2 sqrt(lambda) weight_ki} cutoff_ki^2
//     * u_ki (c u_ki - f_i) with c = lambda * floor_value / 4. The
// stationary overload drops the time sum and uses c = lambda * floor_value/2.
double weighted_decay_integral(const DecayGeometry& geom, const Grid& g,
                               const Trajectory& tr, double lambda,
                               const Field& f);
double weighted_decay_integral(const DecayGeometry& geom, const Grid& g,
                               const Field& u, double lambda, const Field& f);

struct PairingResult {
    double penalty_side = 0.0;  // lambda sum_k dt <a(., t_k) u^k, phi>
    double weak_side = 0.0;     // sum_k dt (<f, phi> - <A u^k, phi>
                                //           - <(u^k - u^{k-1})/dt, phi>)
    double agreement = 0.0;     // |difference| relative to the largest term
};

// phi is sampled on the grid (zero boundary trace by construction). The two
// sides agree up to CG residuals; agreement uses an absolute floor so an
// exactly vanishing pairing reports 0.
PairingResult distributional_pairing(const ProblemSpec& ps,
                                     const Trajectory& tr, const Profile& phi);

}  // namespace degenheat
