#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "ocs/probe.hpp"
#include "ocs/spectral.hpp"

namespace ocs {

enum class TwoTransitionKind { band_pass, band_stop, step_up, step_down, all_zero, all_one };

inline const char* to_string(TwoTransitionKind k) {
    switch (k) {
        case TwoTransitionKind::band_pass: return "band-pass";
        case TwoTransitionKind::band_stop: return "band-stop";
        case TwoTransitionKind::step_up: return "step-up";
        case TwoTransitionKind::step_down: return "step-down";
        case TwoTransitionKind::all_zero: return "all-zero";
        default: return "all-one";
    }
}

/// Best curve with at most two transitions along a ray.
///
/// Band-pass: rho = 0 on [0,i), alpha at i, 1 on (i,j), beta at j, 0 on (j,n).
/// Band-stop is the complement structure. alpha/beta store the actual
/// reflectance values at bins i and j. For all-zero / all-one, i = j = -1.
struct TwoTransitionSolution {
    TwoTransitionKind kind = TwoTransitionKind::all_zero;
    int i = -1;
    int j = -1;
    double alpha = 0.0;
    double beta = 0.0;
    double c = 0.0;
    Tristimulus xyz;
    bool band_stop_family = false;  // complement structure used for reconstruction
};

inline Reflectance reconstruct(const TwoTransitionSolution& s, const WavelengthGrid& grid) {
    Reflectance r;
    r.grid = grid;
    double base = s.band_stop_family ? 1.0 : 0.0;
    r.values.assign(grid.count, base);
    if (s.i >= 0) {
        r.values[s.i] = s.alpha;
        r.values[s.j] = s.j == s.i ? s.alpha : s.beta;
        for (int k = s.i + 1; k < s.j; ++k) r.values[k] = 1.0 - base;
    }
    return r;
}

namespace detail {

using Vec3 = std::array<double, 3>;

inline Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline double dot3(const Vec3& a, const Vec3& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline Vec3 cross3(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline double norm3(const Vec3& a) { return std::sqrt(dot3(a, a)); }

// Cramer solve of [c0 c1 c2] u = r with one refinement step.
// Returns false when the system is singular relative to its column norms.
inline bool solve3(const Vec3& c0, const Vec3& c1, const Vec3& c2, const Vec3& r, Vec3& u) {
    Vec3 c12 = cross3(c1, c2);
    double det = dot3(c0, c12);
    double scale = norm3(c0) * norm3(c1) * norm3(c2);
    if (std::abs(det) < 1e-14 * std::max(scale, 1e-300)) return false;
    Vec3 c02 = cross3(c0, c2), c01 = cross3(c0, c1);
    double inv = 1.0 / det;
    u = {dot3(r, c12) * inv, -dot3(r, c02) * inv, dot3(r, c01) * inv};
    // one step of iterative refinement
    Vec3 resid = {r[0] - (c0[0] * u[0] + c1[0] * u[1] + c2[0] * u[2]),
                  r[1] - (c0[1] * u[0] + c1[1] * u[1] + c2[1] * u[2]),
                  r[2] - (c0[2] * u[0] + c1[2] * u[1] + c2[2] * u[2])};
    Vec3 corr = {dot3(resid, c12) * inv, -dot3(resid, c02) * inv, dot3(resid, c01) * inv};
    u = {u[0] + corr[0], u[1] + corr[1], u[2] + corr[2]};
    return true;
}

// Least-squares solve of the 3x2 system [c0 c1] u = r via normal equations.
// Fills the residual infinity norm.
inline bool solve32(const Vec3& c0, const Vec3& c1, const Vec3& r, double& u0, double& u1,
                    double& resid_inf) {
    double a = dot3(c0, c0), b = dot3(c0, c1), d = dot3(c1, c1);
    double det = a * d - b * b;
    double scale = std::max(a * d, 1e-300);
    if (std::abs(det) < 1e-14 * scale) return false;
    double r0 = dot3(c0, r), r1 = dot3(c1, r);
    u0 = (d * r0 - b * r1) / det;
    u1 = (a * r1 - b * r0) / det;
    resid_inf = 0.0;
    for (int k = 0; k < 3; ++k)
        resid_inf = std::max(resid_inf, std::abs(r[k] - c0[k] * u0 - c1[k] * u1));
    return true;
}

}  // namespace detail

/// Exhaustive enumeration of the optimal two-transition color along the ray
/// from gray50 through xyz_targ.
///
/// For every band-pass/band-stop bin pair i < j the three ray-membership
/// equations pin (alpha, beta, c) exactly; feasible candidates keep
/// alpha, beta in [0,1] and the maximal c wins (ties: band-pass before
/// band-stop, then smallest (i, j)). Single-bin pulses/notches (i = j) and
/// the constant curves are overdetermined and accepted only when their
/// least-squares residual is negligible. Step curves arise as bin pairs with
/// an endpoint value pinned at a bound, so they need no separate branch.
inline TwoTransitionSolution two_transition_optimal(const WeightedCmf& wcmf,
                                                    const Tristimulus& xyz_targ) {
    using detail::Vec3;
    const int n = wcmf.grid.count;
    const Vec3 g = {wcmf.gray50.X, wcmf.gray50.Y, wcmf.gray50.Z};
    const Vec3 d = {xyz_targ.X - g[0], xyz_targ.Y - g[1], xyz_targ.Z - g[2]};
    if (std::max({std::abs(d[0]), std::abs(d[1]), std::abs(d[2])}) < 1e-12)
        throw argument_error("two-transition target coincides with gray50");

    // prefix[k] = sum of weighted CMF rows [0, k)
    std::vector<Vec3> prefix(n + 1, Vec3{0, 0, 0});
    for (int k = 0; k < n; ++k)
        prefix[k + 1] = {prefix[k][0] + wcmf.values[k][0], prefix[k][1] + wcmf.values[k][1],
                         prefix[k][2] + wcmf.values[k][2]};

    const double feas = 1e-9;
    TwoTransitionSolution best;
    bool have = false;
    double best_c = -lp_inf;

    auto consider = [&](double c, bool stop_family, int i, int j, double a_raw, double b_raw) {
        if (have && !(c > best_c)) return;
        best_c = c;
        have = true;
        best.band_stop_family = stop_family;
        best.i = i;
        best.j = j;
        best.c = c;
        if (i >= 0) {
            best.alpha = std::clamp(stop_family ? 1.0 - a_raw : a_raw, 0.0, 1.0);
            best.beta = std::clamp(stop_family ? 1.0 - b_raw : b_raw, 0.0, 1.0);
        } else {
            best.alpha = best.beta = stop_family ? 1.0 : 0.0;
        }
    };

    // pair enumeration: band-pass uses columns [a_i, a_j, -d], band-stop
    // [a_i, a_j, +d]; both share rhs = g - interior sum.
    for (int pass = 0; pass < 2; ++pass) {
        const bool stop_family = pass == 1;
        const double sgn = stop_family ? 1.0 : -1.0;
        for (int i = 0; i < n; ++i) {
            const Vec3 ai = {wcmf.values[i][0], wcmf.values[i][1], wcmf.values[i][2]};
            for (int j = i + 1; j < n; ++j) {
                const Vec3 aj = {wcmf.values[j][0], wcmf.values[j][1], wcmf.values[j][2]};
                const Vec3 rhs = {g[0] - (prefix[j][0] - prefix[i + 1][0]),
                                  g[1] - (prefix[j][1] - prefix[i + 1][1]),
                                  g[2] - (prefix[j][2] - prefix[i + 1][2])};
                Vec3 u;
                if (!detail::solve3(ai, aj, {sgn * d[0], sgn * d[1], sgn * d[2]}, rhs, u)) continue;
                if (u[0] < -feas || u[0] > 1.0 + feas || u[1] < -feas || u[1] > 1.0 + feas) continue;
                consider(u[2], stop_family, i, j, u[0], u[1]);
            }
        }
    }
    // single fractional bin (i = j): pulse on zeros / notch on ones
    for (int pass = 0; pass < 2; ++pass) {
        const bool stop_family = pass == 1;
        const double sgn = stop_family ? 1.0 : -1.0;
        for (int i = 0; i < n; ++i) {
            const Vec3 ai = {wcmf.values[i][0], wcmf.values[i][1], wcmf.values[i][2]};
            double gamma, c, resid;
            if (!detail::solve32(ai, {sgn * d[0], sgn * d[1], sgn * d[2]}, g, gamma, c, resid))
                continue;
            if (resid > 1e-9) continue;
            if (gamma < -feas || gamma > 1.0 + feas) continue;
            consider(c, stop_family, i, i, gamma, gamma);
        }
    }
    // constant curves: all-zero needs g + c d = 0, all-one needs g = c d
    {
        double dd = detail::dot3(d, d);
        double c0 = -detail::dot3(g, d) / dd;
        double r0 = 0.0, r1 = 0.0;
        double c1 = detail::dot3(g, d) / dd;
        for (int k = 0; k < 3; ++k) {
            r0 = std::max(r0, std::abs(g[k] + c0 * d[k]));
            r1 = std::max(r1, std::abs(g[k] - c1 * d[k]));
        }
        if (r0 <= 1e-9) consider(c0, false, -1, -1, 0.0, 0.0);
        if (r1 <= 1e-9) consider(c1, true, -1, -1, 0.0, 0.0);
    }
    if (!have) throw error("two-transition enumeration found no feasible candidate");

    Reflectance rho = reconstruct(best, wcmf.grid);
    best.xyz = tristimulus(wcmf, rho.values);

    // classify by the reconstructed curve
    TransitionProfile prof = count_transitions(rho);
    if (prof.count == 0) {
        best.kind = best.band_stop_family ? TwoTransitionKind::all_one : TwoTransitionKind::all_zero;
        if (best.i >= 0) {
            bool all_one = true, all_zero = true;
            for (double v : rho.values) {
                all_one = all_one && v >= 1.0 - 1e-6;
                all_zero = all_zero && v <= 1e-6;
            }
            if (all_one) best.kind = TwoTransitionKind::all_one;
            else if (all_zero) best.kind = TwoTransitionKind::all_zero;
        }
    } else if (prof.count == 1) {
        best.kind = prof.kind == ProfileKind::type_i_like ? TwoTransitionKind::step_up
                                                          : TwoTransitionKind::step_down;
    } else {
        best.kind = prof.kind == ProfileKind::type_i_like ? TwoTransitionKind::band_pass
                                                          : TwoTransitionKind::band_stop;
    }
    return best;
}

/// LP optimum vs. two-transition optimum along one ray.
struct ComparisonRecord {
    SphericalDirection direction;
    double c_lp = 0.0;
    double c_two = 0.0;
    double delta_distance = 0.0;  // (c_lp - c_two) * |xyz_targ - gray50|, XYZ units
    int lp_transitions = 0;
    LpStatus solver_status = LpStatus::iteration_limit;
};

inline ComparisonRecord compare_direction(const WeightedCmf& wcmf, const SphericalDirection& dir,
                                          const SolverConfig& config = {}) {
    Tristimulus targ = direction_to_target(wcmf, dir);
    RayProbe lp = probe_ray(wcmf, targ, config);
    TwoTransitionSolution two = two_transition_optimal(wcmf, targ);
    ComparisonRecord rec;
    rec.direction = dir;
    rec.c_lp = lp.scale;
    rec.c_two = two.c;
    rec.delta_distance = (lp.scale - two.c) * norm(targ - wcmf.gray50);
    rec.lp_transitions = lp.profile.count;
    rec.solver_status = lp.solver_status;
    return rec;
}

}  // namespace ocs
