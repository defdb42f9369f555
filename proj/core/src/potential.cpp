#include "degenheat/potential.hpp"

#include <algorithm>
#include <cmath>

#include "degenheat/errors.hpp"

namespace degenheat {

namespace {

// Distance from x to the tube center, matching the family's notion of radius:
// slab families measure along the first axis, disk families euclidean.
double center_distance(const PotentialSpec& p, const Grid& g,
                       std::span<const double> x) {
    if (p.family == PotentialFamily::cylindrical_slab ||
        p.family == PotentialFamily::expanding_slab)
        return std::fabs(x[0] - p.center[0]);
    if (g.dim == 1) return std::fabs(x[0] - p.center[0]);
    return std::hypot(x[0] - p.center[0], x[1] - p.center[1]);
}

// Euclidean distance in (xi, t) from the point (xi, t) to the convex region
// { (y, s) : y <= r0 + rdot * s, 0 <= s <= T }. Exact for every sign of rdot.
double spacetime_tube_distance(double xi, double t, double r0, double rdot,
                               double T) {
    if (t > T) {
        const double dy = std::max(0.0, xi - (r0 + rdot * T));
        return std::hypot(dy, t - T);
    }
    if (t < 0.0) {
        const double dy = std::max(0.0, xi - r0);
        return std::hypot(dy, -t);
    }
    if (xi <= r0 + rdot * t) return 0.0;
    // foot of the perpendicular onto the slanted boundary y = r0 + rdot s
    const double s = (t + rdot * (xi - r0)) / (1.0 + rdot * rdot);
    if (s < 0.0) return std::hypot(xi - r0, t);
    if (s > T) return std::hypot(xi - (r0 + rdot * T), T - t);
    return (xi - r0 - rdot * t) / std::sqrt(1.0 + rdot * rdot);
}

std::size_t sample_block(const PotentialSpec& p, const Grid& g) {
    if (p.time_layers < 1)
        throw config_error("potential: time_layers must be at least 1");
    if (p.samples.size() != std::size_t(p.time_layers) * g.size())
        throw config_error("potential: samples must hold time_layers blocks of "
                           "one value per grid node");
    return g.size();
}

// Nodal value of a grid_sampled potential at time t (linear blend between the
// two enclosing layers, clamped to [0, horizon]).
double sampled_node_value(const PotentialSpec& p, std::size_t block,
                          std::size_t node, double t) {
    if (p.time_layers == 1) return p.samples[node];
    double tau = p.horizon > 0.0 ? t / p.horizon : 0.0;
    tau = std::clamp(tau, 0.0, 1.0) * (p.time_layers - 1);
    int k0 = int(tau);
    if (k0 > p.time_layers - 2) k0 = p.time_layers - 2;
    const double w = tau - k0;
    const double lo = p.samples[std::size_t(k0) * block + node];
    const double hi = p.samples[std::size_t(k0 + 1) * block + node];
    return (1.0 - w) * lo + w * hi;
}

double sampled_eval(const PotentialSpec& p, const Grid& g,
                    std::span<const double> x, double t) {
    const std::size_t block = sample_block(p, g);
    auto node_at = [&](int i0, int i1) {
        return g.dim == 1 ? std::size_t(i0)
                          : std::size_t(i1) * g.count[0] + std::size_t(i0);
    };
    // multilinear interpolation over the interior-node lattice, clamped
    double s0 = x[0] / g.spacing[0] - 1.0;
    s0 = std::clamp(s0, 0.0, double(g.count[0] - 1));
    int i0 = std::min(int(s0), g.count[0] - 2);
    if (i0 < 0) i0 = 0;
    const double w0 = g.count[0] > 1 ? s0 - i0 : 0.0;

    if (g.dim == 1) {
        const double lo = sampled_node_value(p, block, node_at(i0, 0), t);
        const double hi = g.count[0] > 1
                              ? sampled_node_value(p, block, node_at(i0 + 1, 0), t)
                              : lo;
        return ((1.0 - w0) * lo + w0 * hi) * p.amplitude;
    }

    double s1 = x[1] / g.spacing[1] - 1.0;
    s1 = std::clamp(s1, 0.0, double(g.count[1] - 1));
    int i1 = std::min(int(s1), g.count[1] - 2);
    if (i1 < 0) i1 = 0;
    const double w1 = g.count[1] > 1 ? s1 - i1 : 0.0;

    auto at = [&](int a, int b) {
        const int ca = std::min(a, g.count[0] - 1);
        const int cb = std::min(b, g.count[1] - 1);
        return sampled_node_value(p, block, node_at(ca, cb), t);
    };
    const double v00 = at(i0, i1), v10 = at(i0 + 1, i1);
    const double v01 = at(i0, i1 + 1), v11 = at(i0 + 1, i1 + 1);
    return ((1.0 - w1) * ((1.0 - w0) * v00 + w0 * v10) +
            w1 * ((1.0 - w0) * v01 + w0 * v11)) *
           p.amplitude;
}

}  // namespace

bool PotentialSpec::time_monotone() const {
    switch (family) {
        case PotentialFamily::cylindrical_slab:
            return true;
        case PotentialFamily::expanding_slab:
        case PotentialFamily::expanding_disk:
        case PotentialFamily::distance_to_set:
            return growth >= 0.0;
        case PotentialFamily::grid_sampled: {
            if (time_layers <= 1) return true;
            if (samples.size() % std::size_t(time_layers) != 0) return false;
            const std::size_t block = samples.size() / std::size_t(time_layers);
            for (int k = 0; k + 1 < time_layers; ++k)
                for (std::size_t i = 0; i < block; ++i)
                    if (samples[std::size_t(k + 1) * block + i] >
                        samples[std::size_t(k) * block + i])
                        return false;
            return true;
        }
    }
    return false;
}

double eval_potential(const PotentialSpec& p, const Grid& g,
                      std::span<const double> x, double t) {
    if (x.size() != std::size_t(g.dim))
        throw config_error("eval_potential: point dimension does not match the grid");
    switch (p.family) {
        case PotentialFamily::cylindrical_slab:
            return p.amplitude *
                   std::max(0.0, center_distance(p, g, x) - p.radius);
        case PotentialFamily::expanding_slab:
        case PotentialFamily::expanding_disk:
            return p.amplitude *
                   std::max(0.0, center_distance(p, g, x) -
                                     (p.radius + p.growth * t));
        case PotentialFamily::distance_to_set:
            return p.amplitude *
                   spacetime_tube_distance(center_distance(p, g, x), t, p.radius,
                                           p.growth, p.horizon);
        case PotentialFamily::grid_sampled:
            return sampled_eval(p, g, x, t);
    }
    throw config_error("eval_potential: unknown potential family");
}

std::vector<std::uint8_t> active_mask(const PotentialSpec& p, const Grid& g,
                                      double t) {
    const std::size_t N = g.size();
    std::vector<std::uint8_t> mask(N, 0);
    if (p.amplitude == 0.0) {
        std::fill(mask.begin(), mask.end(), std::uint8_t(1));
        return mask;
    }

    if (p.family == PotentialFamily::grid_sampled) {
        const std::size_t block = sample_block(p, g);
        std::vector<double> value(N);
        for (std::size_t i = 0; i < N; ++i)
            value[i] = sampled_node_value(p, block, i, t) * p.amplitude;
        auto vanishes = [&](std::size_t i) { return value[i] < 1e-14; };
        const int nx = g.count[0];
        for (std::size_t i = 0; i < N; ++i) {
            if (!vanishes(i)) continue;
            const int ix = int(i % std::size_t(nx));
            const int iy = int(i / std::size_t(nx));
            bool ok = true;
            if (ix > 0 && !vanishes(i - 1)) ok = false;
            if (ix + 1 < nx && !vanishes(i + 1)) ok = false;
            if (g.dim == 2) {
                if (iy > 0 && !vanishes(i - nx)) ok = false;
                if (iy + 1 < g.count[1] && !vanishes(i + nx)) ok = false;
            }
            mask[i] = ok ? 1 : 0;
        }
        return mask;
    }

    const double r = p.family == PotentialFamily::cylindrical_slab
                         ? p.radius
                         : p.radius + p.growth * t;
    for (std::size_t i = 0; i < N; ++i) {
        const auto c = g.coords(i);
        const double xv[2] = {c[0], c[1]};
        const double xi =
            center_distance(p, g, std::span<const double>(xv, g.dim));
        mask[i] = xi < r ? 1 : 0;
    }
    return mask;
}

DecayGeometry build_decay_geometry(const PotentialSpec& p, const Grid& g,
                                   const TimeGrid& tg, double eps) {
    if (!(eps > 0.0)) throw config_error("epsilon must be positive");
    if (p.family == PotentialFamily::grid_sampled)
        throw geometry_error(
            "grid_sampled potentials carry no closed-form vanishing tube; "
            "decay geometry needs one of the tube families");
    if (p.amplitude == 0.0)
        throw geometry_error(
            "the potential vanishes identically; no positive floor exists "
            "beyond the margin");

    const double rdot =
        p.family == PotentialFamily::cylindrical_slab ? 0.0 : p.growth;
    const std::size_t N = g.size();
    const std::size_t layers = std::size_t(tg.steps) + 1;

    DecayGeometry geom;
    geom.eps = eps;
    geom.margin.resize(layers * N);
    geom.cutoff.resize(layers * N);
    geom.weight.resize(layers * N);
    geom.outer.resize(layers * N);
    geom.outer_tripled.resize(layers * N);

    for (std::size_t k = 0; k < layers; ++k) {
        const double t = tg.time(int(k));
        for (std::size_t i = 0; i < N; ++i) {
            const auto c = g.coords(i);
            const double xv[2] = {c[0], c[1]};
            const double xi =
                center_distance(p, g, std::span<const double>(xv, g.dim));
            const double m =
                spacetime_tube_distance(xi, t, p.radius, rdot, tg.horizon);
            const std::size_t id = k * N + i;
            geom.margin[id] = m;
            geom.outer[id] = m > eps ? 1 : 0;
            geom.outer_tripled[id] = m > 3.0 * eps ? 1 : 0;
            geom.cutoff[id] = std::clamp((m - eps) / eps, 0.0, 1.0);
        }
    }

    double floor_v = 1e300, floor_half = 1e300;
    std::size_t outer_count = 0, tripled_count = 0;
    for (std::size_t k = 0; k < layers; ++k) {
        const double t = tg.time(int(k));
        for (std::size_t i = 0; i < N; ++i) {
            const std::size_t id = k * N + i;
            const double m = geom.margin[id];
            if (m <= 0.5 * eps) continue;
            const auto c = g.coords(i);
            const double xv[2] = {c[0], c[1]};
            const double a =
                eval_potential(p, g, std::span<const double>(xv, g.dim), t);
            floor_half = std::min(floor_half, a);
            if (m > eps) {
                floor_v = std::min(floor_v, a);
                ++outer_count;
                tripled_count += geom.outer_tripled[id];
            }
        }
    }

    if (outer_count == 0)
        throw geometry_error(
            "no grid sample lies beyond the margin; epsilon is too large for "
            "this grid");
    if (tripled_count == 0)
        throw geometry_error(
            "no grid sample lies beyond three margins; epsilon is too large "
            "for the slope fit");
    if (!(floor_v > 0.0))
        throw geometry_error(
            "the potential floor beyond the margin is not strictly positive");
    if (!(floor_half > 0.0))
        throw geometry_error(
            "the potential floor beyond half the margin is not strictly "
            "positive");

    geom.floor_value = floor_v;
    geom.rate_coeff = eps * floor_half;

    const double slope = std::sqrt(floor_v / 2.0);
    for (std::size_t id = 0; id < layers * N; ++id)
        geom.weight[id] = slope * std::max(0.0, geom.margin[id] - 2.0 * eps);

    return geom;
}

}  // namespace degenheat
