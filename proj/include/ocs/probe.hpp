#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "ocs/lp.hpp"
#include "ocs/spectral.hpp"

namespace ocs {

inline constexpr double pi = std::numbers::pi_v<double>;

/// Direction from the 50% gray point: phi is the inclination from the +Z'
/// axis in [0, pi], theta the azimuth from the +X' axis in [0, 2pi).
struct SphericalDirection {
    double theta = 0.0;
    double phi = 0.0;
};

inline SphericalDirection antipode(const SphericalDirection& d) {
    double t = d.theta + pi;
    if (t >= 2.0 * pi) t -= 2.0 * pi;
    return {t, pi - d.phi};
}

inline Tristimulus unit_offset(const SphericalDirection& d) {
    return {std::sin(d.phi) * std::cos(d.theta), std::sin(d.phi) * std::sin(d.theta),
            std::cos(d.phi)};
}

inline SphericalDirection direction_of(const Tristimulus& offset) {
    double r = norm(offset);
    if (r <= 0.0) return {0.0, 0.0};
    double phi = std::acos(std::clamp(offset.Z / r, -1.0, 1.0));
    double theta = std::atan2(offset.Y, offset.X);
    if (theta < 0) theta += 2.0 * pi;
    return {theta, phi};
}

/// XYZ_targ = gray50 + unit offset in the given direction.
inline Tristimulus direction_to_target(const WeightedCmf& wcmf, const SphericalDirection& dir) {
    return wcmf.gray50 + unit_offset(dir);
}

struct Reflectance {
    WavelengthGrid grid;
    std::vector<double> values;
};

inline Reflectance complement(const Reflectance& rho) {
    Reflectance out;
    out.grid = rho.grid;
    out.values.reserve(rho.values.size());
    for (double v : rho.values) out.values.push_back(1.0 - v);
    return out;
}

enum class ProfileKind { type_i_like, type_ii_like, constant };

inline const char* to_string(ProfileKind k) {
    switch (k) {
        case ProfileKind::type_i_like: return "type-I-like";
        case ProfileKind::type_ii_like: return "type-II-like";
        default: return "constant";
    }
}

struct TransitionProfile {
    int count = 0;
    std::vector<int> transition_bins;
    ProfileKind kind = ProfileKind::constant;
    std::vector<std::pair<int, double>> fractional_bins;
};

/// Counts transitions of a near-rectangular reflectance.
///
/// Bins classify as 0 (<= zero_eps), 1 (>= 1 - one_eps) or fractional. A
/// fractional cluster between runs of levels a and b contributes the number
/// of monotone segments of the sequence [a, v..., b]: 1 when monotone between
/// unequal levels, 2 for a pulse/notch between equal levels, plus 2 per
/// non-monotone reversal. A cluster at either end of the spectrum uses the
/// adjacent run's level for the missing side, which keeps the count's parity
/// consistent with the first/last run levels.
inline TransitionProfile count_transitions(const Reflectance& rho, double zero_eps = 1e-6,
                                           double one_eps = 1e-6) {
    TransitionProfile out;
    const int n = static_cast<int>(rho.values.size());
    std::vector<int> sym(n);
    for (int i = 0; i < n; ++i) {
        double v = rho.values[i];
        sym[i] = v <= zero_eps ? 0 : (v >= 1.0 - one_eps ? 1 : 2);
        if (sym[i] == 2) out.fractional_bins.emplace_back(i, v);
    }
    struct Run {
        int level, begin, end;
    };
    std::vector<Run> runs;
    for (int i = 0; i < n;) {
        int j = i;
        while (j < n && sym[j] == sym[i]) ++j;
        runs.push_back({sym[i], i, j});
        i = j;
    }
    int first_level = -1;
    for (const auto& r : runs) {
        if (r.level != 2) {
            first_level = r.level;
            break;
        }
    }
    if (first_level < 0) {
        out.kind = ProfileKind::constant;  // no definite runs at all
        return out;
    }
    const int nr = static_cast<int>(runs.size());
    for (int k = 0; k < nr; ++k) {
        if (runs[k].level == 2) {
            int a = k > 0 ? runs[k - 1].level : -1;
            int b = k + 1 < nr ? runs[k + 1].level : -1;
            if (a < 0) a = b;
            if (b < 0) b = a;
            std::vector<double> w;
            w.push_back(static_cast<double>(a));
            for (int i = runs[k].begin; i < runs[k].end; ++i) w.push_back(rho.values[i]);
            w.push_back(static_cast<double>(b));
            int segments = 0, last_sign = 0;
            for (std::size_t t = 0; t + 1 < w.size(); ++t) {
                double d = w[t + 1] - w[t];
                if (std::abs(d) <= 1e-12) continue;
                int s = d > 0 ? 1 : -1;
                if (s != last_sign) {
                    ++segments;
                    last_sign = s;
                }
            }
            out.count += segments;
            for (int t = 0; t < segments; ++t) out.transition_bins.push_back(runs[k].begin);
        } else if (k + 1 < nr && runs[k + 1].level != 2 && runs[k + 1].level != runs[k].level) {
            ++out.count;
            out.transition_bins.push_back(runs[k + 1].begin);
        }
    }
    out.kind = out.count == 0 ? ProfileKind::constant
                              : (first_level == 0 ? ProfileKind::type_i_like
                                                  : ProfileKind::type_ii_like);
    return out;
}

/// Result of one ray-maximization solve.
struct RayProbe {
    SphericalDirection direction;
    Tristimulus xyz_target;
    double scale = 0.0;  // c along the ray
    Reflectance rho;
    Tristimulus xyz_opt;
    TransitionProfile profile;
    LpStatus solver_status = LpStatus::iteration_limit;
    int iterations = 0;
    double max_violation = 0.0;
};

/// Assembles the ray LP: variables (rho, c), minimize -c, subject to
/// [Aw' | origin - target] (rho, c)' = origin, 0 <= rho <= 1, c free.
inline void build_ray_problem(const WeightedCmf& wcmf, const Tristimulus& origin,
                              const Tristimulus& target, LpProblem& p) {
    const int n = wcmf.grid.count;
    p.num_rows = 3;
    p.num_vars = n + 1;
    p.objective.assign(n + 1, 0.0);
    p.objective[n] = -1.0;
    p.columns.resize(static_cast<std::size_t>(n + 1) * 3);
    for (int j = 0; j < n; ++j)
        for (int r = 0; r < 3; ++r) p.columns[static_cast<std::size_t>(j) * 3 + r] = wcmf.values[j][r];
    for (int r = 0; r < 3; ++r)
        p.columns[static_cast<std::size_t>(n) * 3 + r] = origin[r] - target[r];
    p.rhs = {origin.X, origin.Y, origin.Z};
    p.lower.assign(n + 1, 0.0);
    p.upper.assign(n + 1, 1.0);
    p.lower[n] = -lp_inf;
    p.upper[n] = lp_inf;
}

/// Bins where the illuminant carries no power leave their reflectance value
/// completely unconstrained (zero LP column). Extending the nearest live
/// neighbor picks a canonical optimal vertex whose transition structure
/// reflects only wavelengths that carry light.
inline void fill_dead_bins(const WeightedCmf& wcmf, std::vector<double>& rho) {
    const int n = static_cast<int>(rho.size());
    int last_live = -1;
    for (int i = 0; i < n; ++i) {
        const auto& r = wcmf.values[i];
        bool live = r[0] != 0.0 || r[1] != 0.0 || r[2] != 0.0;
        if (live) {
            if (last_live < 0)
                for (int j = 0; j < i; ++j) rho[j] = rho[i];
            last_live = i;
        } else if (last_live >= 0) {
            rho[i] = rho[last_live];
        }
    }
}

/// Ray probe from an arbitrary interior origin (the atlas slice operation
/// anchors rays away from gray50; everything else probes from gray50).
inline RayProbe probe_ray_from(const WeightedCmf& wcmf, const Tristimulus& origin,
                               const Tristimulus& target, const SolverConfig& config = {}) {
    if (max_abs(target - origin) < 1e-12)
        throw argument_error("probe target coincides with the ray origin");
    LpProblem p;
    build_ray_problem(wcmf, origin, target, p);
    BoundedSimplex solver(config);
    LpSolution sol = solver.solve(p);

    RayProbe out;
    out.xyz_target = target;
    out.direction = direction_of(target - wcmf.gray50);
    out.solver_status = sol.status;
    out.iterations = sol.iterations;
    const int n = wcmf.grid.count;
    out.rho.grid = wcmf.grid;
    out.rho.values.assign(sol.x.begin(), sol.x.begin() + n);
    fill_dead_bins(wcmf, out.rho.values);
    out.scale = sol.x[n];
    out.xyz_opt = tristimulus(wcmf, out.rho.values);
    Tristimulus ray_point = origin + (target - origin) * out.scale;
    out.max_violation = std::max(sol.max_constraint_violation, max_abs(out.xyz_opt - ray_point));
    out.profile = count_transitions(out.rho);
    return out;
}

/// Solves the ray-maximization LP from gray50 through xyz_targ.
inline RayProbe probe_ray(const WeightedCmf& wcmf, const Tristimulus& xyz_targ,
                          const SolverConfig& config = {}) {
    return probe_ray_from(wcmf, wcmf.gray50, xyz_targ, config);
}

inline RayProbe probe_direction(const WeightedCmf& wcmf, const SphericalDirection& dir,
                                const SolverConfig& config = {}) {
    return probe_ray(wcmf, direction_to_target(wcmf, dir), config);
}

}  // namespace ocs
