#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "ocs/spectral.hpp"

namespace ocs {

struct ChromaticityPoint {
    double x = 0.0;
    double y = 0.0;
    double wavelength_nm = 0.0;
};

struct ChromaticityResult {
    std::vector<ChromaticityPoint> points;
    std::vector<int> skipped_rows;  // rows with zero sum, excluded from points
};

/// Chromaticity coordinates of each CMF row: (x, y) = (X, Y) / (X+Y+Z).
/// Rows with zero sum are skipped and reported in skipped_rows.
inline ChromaticityResult chromaticity(const CmfSet& cmf) {
    ChromaticityResult out;
    out.points.reserve(cmf.values.size());
    for (int i = 0; i < cmf.grid.count; ++i) {
        double s = cmf.values[i][0] + cmf.values[i][1] + cmf.values[i][2];
        if (!(s > 0.0)) {
            out.skipped_rows.push_back(i);
            continue;
        }
        out.points.push_back({cmf.values[i][0] / s, cmf.values[i][1] / s, cmf.grid.wavelength(i)});
    }
    return out;
}

/// Convex-hull classification of a planar point set.
///
/// hull_indices lists hull vertices in counterclockwise order (not closed);
/// every other point is interior, with its perpendicular distance to the
/// nearest hull edge in gaps. nonconvex_ranges merges consecutive interior
/// wavelengths into [lo, hi] intervals.
struct HullReport {
    std::vector<int> hull_indices;
    std::vector<int> interior_indices;
    std::vector<double> gaps;  // parallel to interior_indices
    std::vector<std::pair<double, double>> nonconvex_ranges;
    double max_gap = 0.0;
};

namespace detail {

inline double cross2(const ChromaticityPoint& o, const ChromaticityPoint& a,
                     const ChromaticityPoint& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

inline double segment_distance(const ChromaticityPoint& p, const ChromaticityPoint& a,
                               const ChromaticityPoint& b) {
    double abx = b.x - a.x, aby = b.y - a.y;
    double nn = abx * abx + aby * aby;
    double t = nn > 0.0 ? ((p.x - a.x) * abx + (p.y - a.y) * aby) / nn : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    double dx = p.x - (a.x + t * abx), dy = p.y - (a.y + t * aby);
    return std::sqrt(dx * dx + dy * dy);
}

}  // namespace detail

/// Andrew's monotone chain. A candidate vertex is popped when the turn it
/// makes is not strictly left: cross <= collinearity_eps. The default of 0
/// keeps exactly the strict vertices, which is what reproduces the published
/// vertex count on the 1 nm locus; the epsilon stays configurable because
/// that count is sensitive to it.
inline HullReport convex_hull(const std::vector<ChromaticityPoint>& points,
                              double collinearity_eps = 0.0) {
    const int n = static_cast<int>(points.size());
    if (n < 3) throw geometry_error("convex hull needs at least 3 points");
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (points[a].x != points[b].x) return points[a].x < points[b].x;
        return points[a].y < points[b].y;
    });
    auto build = [&](bool upper) {
        std::vector<int> h;
        for (int k = 0; k < n; ++k) {
            int i = order[upper ? n - 1 - k : k];
            while (h.size() >= 2 &&
                   detail::cross2(points[h[h.size() - 2]], points[h.back()], points[i]) <=
                       collinearity_eps)
                h.pop_back();
            h.push_back(i);
        }
        return h;
    };
    std::vector<int> lower = build(false), upper = build(true);
    HullReport rep;
    rep.hull_indices.assign(lower.begin(), lower.end() - 1);
    rep.hull_indices.insert(rep.hull_indices.end(), upper.begin(), upper.end() - 1);
    if (rep.hull_indices.size() < 3) throw geometry_error("all points are collinear");

    std::vector<char> on_hull(n, 0);
    for (int i : rep.hull_indices) on_hull[i] = 1;
    const int h = static_cast<int>(rep.hull_indices.size());
    std::vector<double> interior_wl;
    for (int i = 0; i < n; ++i) {
        if (on_hull[i]) continue;
        double d = std::numeric_limits<double>::infinity();
        for (int k = 0; k < h; ++k) {
            d = std::min(d, detail::segment_distance(points[i], points[rep.hull_indices[k]],
                                                     points[rep.hull_indices[(k + 1) % h]]));
        }
        rep.interior_indices.push_back(i);
        rep.gaps.push_back(d);
        rep.max_gap = std::max(rep.max_gap, d);
        interior_wl.push_back(points[i].wavelength_nm);
    }

    // merge consecutive interior wavelengths (within one grid step) into ranges
    if (!interior_wl.empty()) {
        std::sort(interior_wl.begin(), interior_wl.end());
        double step = std::numeric_limits<double>::infinity();
        std::vector<double> all_wl;
        all_wl.reserve(n);
        for (const auto& p : points) all_wl.push_back(p.wavelength_nm);
        std::sort(all_wl.begin(), all_wl.end());
        for (std::size_t i = 1; i < all_wl.size(); ++i) {
            double d = all_wl[i] - all_wl[i - 1];
            if (d > 0) step = std::min(step, d);
        }
        if (!std::isfinite(step)) step = 1.0;
        double lo = interior_wl[0], hi = interior_wl[0];
        for (std::size_t i = 1; i < interior_wl.size(); ++i) {
            if (interior_wl[i] - hi <= step * 1.5) {
                hi = interior_wl[i];
            } else {
                rep.nonconvex_ranges.emplace_back(lo, hi);
                lo = hi = interior_wl[i];
            }
        }
        rep.nonconvex_ranges.emplace_back(lo, hi);
    }
    return rep;
}

/// chromaticity + convex_hull in one step; rows skipped by chromaticity are
/// reported separately and never classified.
struct NonconvexityReport {
    ChromaticityResult chroma;
    HullReport hull;
};

inline NonconvexityReport nonconvexity_report(const CmfSet& cmf, double collinearity_eps = 0.0) {
    NonconvexityReport out;
    out.chroma = chromaticity(cmf);
    out.hull = convex_hull(out.chroma.points, collinearity_eps);
    return out;
}

}  // namespace ocs
