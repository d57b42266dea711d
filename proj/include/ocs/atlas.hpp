#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ocs/hull.hpp"
#include "ocs/image.hpp"
#include "ocs/parallel.hpp"
#include "ocs/probe.hpp"
#include "ocs/schrodinger.hpp"

namespace ocs {

enum class Hemisphere { upper, lower };

inline const char* to_string(Hemisphere h) { return h == Hemisphere::upper ? "upper" : "lower"; }

/// Square raster over the unit disk seen from gray50 along +-Z'. Pixel radius
/// r in [0,1] maps to inclination phi (upper: r*pi/2, lower: pi - r*pi/2);
/// azimuth theta comes from atan2 with the X' axis to the right. Pixels with
/// r > 1 are outside the disk and carry the sentinel in derived maps.
struct PolarRaster {
    Hemisphere hemisphere = Hemisphere::upper;
    int size = 0;

    bool pixel_direction(int row, int col, SphericalDirection& dir) const {
        double px = (col + 0.5) / size * 2.0 - 1.0;
        double py = 1.0 - (row + 0.5) / size * 2.0;
        double r = std::hypot(px, py);
        if (r > 1.0) return false;
        double theta = std::atan2(py, px);
        if (theta < 0) theta += 2.0 * pi;
        dir.theta = theta;
        dir.phi = hemisphere == Hemisphere::upper ? r * (pi / 2.0) : pi - r * (pi / 2.0);
        return true;
    }

    bool direction_pixel(const SphericalDirection& dir, int& row, int& col) const {
        double r = hemisphere == Hemisphere::upper ? dir.phi / (pi / 2.0)
                                                   : (pi - dir.phi) / (pi / 2.0);
        if (r < 0.0 || r > 1.0) return false;
        double px = r * std::cos(dir.theta);
        double py = r * std::sin(dir.theta);
        col = static_cast<int>(std::lround((px + 1.0) / 2.0 * size - 0.5));
        row = static_cast<int>(std::lround((1.0 - py) / 2.0 * size - 0.5));
        return row >= 0 && row < size && col >= 0 && col < size;
    }
};

constexpr int map_sentinel = -1;

/// Per-pixel transition counts over a hemisphere raster; deltas optionally
/// carry the LP-vs-two-transition distance difference for difference maps.
struct TransitionMap {
    PolarRaster raster;
    std::vector<int> counts;            // size*size, map_sentinel outside/failed
    std::vector<double> deltas;         // empty, or size*size with NaN sentinel
    std::vector<std::int8_t> kinds;     // -1 none, 0 type-I-like, 1 type-II-like, 2 constant
    int in_disk = 0;
    int failures = 0;
    double elapsed_seconds = 0.0;
};

namespace detail {

inline void check_failures(const TransitionMap& map) {
    if (map.in_disk > 0 && map.failures > map.in_disk / 100)
        throw error("atlas: solver failure ratio above 1% (" + std::to_string(map.failures) +
                    "/" + std::to_string(map.in_disk) + "), check solver configuration");
}

}  // namespace detail

/// Probes every in-disk pixel and records the transition count of the
/// optimal reflectance. Throws when more than 1% of the solves fail.
inline TransitionMap build_transition_map(const WeightedCmf& wcmf, Hemisphere hemisphere, int size,
                                          const SolverConfig& config = {}, unsigned threads = 1) {
    if (size < 16) throw argument_error("raster size must be at least 16");
    TransitionMap map;
    map.raster = {hemisphere, size};
    map.counts.assign(static_cast<std::size_t>(size) * size, map_sentinel);
    map.kinds.assign(static_cast<std::size_t>(size) * size, -1);
    std::atomic<int> in_disk{0}, failures{0};
    auto t0 = std::chrono::steady_clock::now();
    parallel_for(static_cast<std::size_t>(size) * size, threads, [&](std::size_t k) {
        int row = static_cast<int>(k) / size, col = static_cast<int>(k) % size;
        SphericalDirection dir;
        if (!map.raster.pixel_direction(row, col, dir)) return;
        in_disk.fetch_add(1, std::memory_order_relaxed);
        RayProbe pr = probe_direction(wcmf, dir, config);
        if (pr.solver_status != LpStatus::optimal) {
            failures.fetch_add(1, std::memory_order_relaxed);
            return;
        }
        map.counts[k] = pr.profile.count;
        map.kinds[k] = static_cast<std::int8_t>(pr.profile.kind);
    });
    map.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    map.in_disk = in_disk.load();
    map.failures = failures.load();
    detail::check_failures(map);
    return map;
}

/// Same sweep with compare_direction per pixel; fills deltas.
inline TransitionMap build_difference_map(const WeightedCmf& wcmf, Hemisphere hemisphere, int size,
                                          const SolverConfig& config = {}, unsigned threads = 1) {
    if (size < 16) throw argument_error("raster size must be at least 16");
    TransitionMap map;
    map.raster = {hemisphere, size};
    map.counts.assign(static_cast<std::size_t>(size) * size, map_sentinel);
    map.kinds.assign(static_cast<std::size_t>(size) * size, -1);
    map.deltas.assign(static_cast<std::size_t>(size) * size,
                      std::numeric_limits<double>::quiet_NaN());
    std::atomic<int> in_disk{0}, failures{0};
    auto t0 = std::chrono::steady_clock::now();
    parallel_for(static_cast<std::size_t>(size) * size, threads, [&](std::size_t k) {
        int row = static_cast<int>(k) / size, col = static_cast<int>(k) % size;
        SphericalDirection dir;
        if (!map.raster.pixel_direction(row, col, dir)) return;
        in_disk.fetch_add(1, std::memory_order_relaxed);
        ComparisonRecord rec = compare_direction(wcmf, dir, config);
        if (rec.solver_status != LpStatus::optimal) {
            failures.fetch_add(1, std::memory_order_relaxed);
            return;
        }
        map.counts[k] = rec.lp_transitions;
        map.deltas[k] = rec.delta_distance;
    });
    map.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    map.in_disk = in_disk.load();
    map.failures = failures.load();
    detail::check_failures(map);
    return map;
}

/// One optimal color with more than two transitions, projected to the
/// chromaticity plane.
struct RegionPoint {
    double x = 0.0;
    double y = 0.0;
    int count = 0;
    ProfileKind kind = ProfileKind::constant;
    SphericalDirection direction;
    Hemisphere hemisphere = Hemisphere::upper;
};

struct RegionsResult {
    std::vector<RegionPoint> points;   // counts > 2 only
    double illuminant_x = 0.0;         // chromaticity marker of the white point
    double illuminant_y = 0.0;
    int in_disk = 0;
    int failures = 0;
};

/// Sweeps both hemispheres and projects every high-transition optimal color
/// to the chromaticity diagram.
inline RegionsResult chromaticity_regions(const WeightedCmf& wcmf, int size,
                                          const SolverConfig& config = {}, unsigned threads = 1) {
    if (size < 16) throw argument_error("raster size must be at least 16");
    RegionsResult out;
    double s = wcmf.white_point.X + wcmf.white_point.Y + wcmf.white_point.Z;
    out.illuminant_x = wcmf.white_point.X / s;
    out.illuminant_y = wcmf.white_point.Y / s;
    std::vector<RegionPoint> buffer(static_cast<std::size_t>(size) * size * 2);
    std::vector<char> valid(buffer.size(), 0);
    std::atomic<int> in_disk{0}, failures{0};
    for (Hemisphere hemi : {Hemisphere::upper, Hemisphere::lower}) {
        PolarRaster raster{hemi, size};
        std::size_t base = hemi == Hemisphere::upper ? 0 : buffer.size() / 2;
        parallel_for(static_cast<std::size_t>(size) * size, threads, [&, base](std::size_t k) {
            int row = static_cast<int>(k) / size, col = static_cast<int>(k) % size;
            SphericalDirection dir;
            if (!raster.pixel_direction(row, col, dir)) return;
            in_disk.fetch_add(1, std::memory_order_relaxed);
            RayProbe pr = probe_direction(wcmf, dir, config);
            if (pr.solver_status != LpStatus::optimal) {
                failures.fetch_add(1, std::memory_order_relaxed);
                return;
            }
            if (pr.profile.count <= 2) return;
            double ssum = pr.xyz_opt.X + pr.xyz_opt.Y + pr.xyz_opt.Z;
            if (!(ssum > 0.0)) return;
            RegionPoint rp;
            rp.x = pr.xyz_opt.X / ssum;
            rp.y = pr.xyz_opt.Y / ssum;
            rp.count = pr.profile.count;
            rp.kind = pr.profile.kind;
            rp.direction = dir;
            rp.hemisphere = hemi;
            buffer[base + k] = rp;
            valid[base + k] = 1;
        });
    }
    out.in_disk = in_disk.load();
    out.failures = failures.load();
    for (std::size_t k = 0; k < buffer.size(); ++k)
        if (valid[k]) out.points.push_back(buffer[k]);
    TransitionMap fake;
    fake.in_disk = out.in_disk;
    fake.failures = out.failures;
    detail::check_failures(fake);
    return out;
}

enum class Axis { X = 0, Y = 1, Z = 2 };

inline const char* to_string(Axis a) { return a == Axis::X ? "X" : (a == Axis::Y ? "Y" : "Z"); }

struct SliceSample {
    double angle = 0.0;
    Tristimulus xyz;
    double c = 0.0;
    Reflectance rho;
    int transitions = 0;
    LpStatus solver_status = LpStatus::iteration_limit;
};

struct SliceResult {
    Axis axis = Axis::Y;
    double level = 0.0;
    Tristimulus origin;
    std::vector<SliceSample> samples;
};

/// Cross-section of the OCS at a fixed X, Y or Z: anchors the ray origin at
/// the gray-line point with that coordinate and sweeps in-plane directions.
/// The fixed-axis row of the ray system is exactly the plane constraint, so
/// the 3-row LP already confines the solution to the slice plane.
inline SliceResult ocs_slice(const WeightedCmf& wcmf, Axis axis, double level, int sample_count,
                             const SolverConfig& config = {}, unsigned threads = 1) {
    int ax = static_cast<int>(axis);
    double wp_axis = wcmf.white_point[ax];
    if (!(level > 0.0) || !(level < wp_axis))
        throw argument_error("slice level must be strictly between 0 and the white point coordinate");
    if (sample_count < 3) throw argument_error("slice needs at least 3 samples");
    SliceResult out;
    out.axis = axis;
    out.level = level;
    out.origin = wcmf.white_point * (level / wp_axis);
    int u = ax == 0 ? 1 : 0;           // the two in-plane axes
    int v = ax == 2 ? 1 : 2;
    out.samples.resize(sample_count);
    parallel_for(static_cast<std::size_t>(sample_count), threads, [&](std::size_t k) {
        double angle = 2.0 * pi * static_cast<double>(k) / sample_count;
        Tristimulus dir{0, 0, 0};
        dir[u] = std::cos(angle);
        dir[v] = std::sin(angle);
        RayProbe pr = probe_ray_from(wcmf, out.origin, out.origin + dir, config);
        SliceSample& s = out.samples[k];
        s.angle = angle;
        s.xyz = pr.xyz_opt;
        s.c = pr.scale;
        s.rho = std::move(pr.rho);
        s.transitions = pr.profile.count;
        s.solver_status = pr.solver_status;
    });
    return out;
}

/// Writes a transition/difference map as PPM image + CSV grid + JSON sidecar
/// (palette, config echo, failure count). out_prefix gets .ppm/.csv/.json.
inline void render_map(const TransitionMap& map, const CountPalette& palette,
                       const std::string& out_prefix, const nlohmann::json& config_echo = {}) {
    const int size = map.raster.size;
    const bool delta_mode = !map.deltas.empty();
    std::vector<Rgb> pixels(static_cast<std::size_t>(size) * size);
    double max_delta = 0.0;
    if (delta_mode) {
        for (double d : map.deltas)
            if (std::isfinite(d)) max_delta = std::max(max_delta, d);
    }
    for (std::size_t k = 0; k < pixels.size(); ++k) {
        if (delta_mode) {
            double d = map.deltas[k];
            pixels[k] = std::isfinite(d) ? gray_ramp(max_delta > 0 ? d / max_delta : 0.0)
                                         : palette.sentinel;
        } else {
            pixels[k] = palette.map(map.counts[k]);
        }
    }
    std::string stamp = config_echo.contains("cmf_hash")
                            ? "cmf_fnv1a64=" + config_echo["cmf_hash"].get<std::string>()
                            : "";
    write_ppm(out_prefix + ".ppm", size, size, pixels, stamp);

    std::ofstream csv(out_prefix + ".csv");
    if (!csv) throw error("cannot write " + out_prefix + ".csv");
    if (!stamp.empty()) csv << "# " << stamp << "\n";
    char buf[64];
    for (int r = 0; r < size; ++r) {
        for (int c = 0; c < size; ++c) {
            std::size_t k = static_cast<std::size_t>(r) * size + c;
            if (c) csv << ",";
            if (delta_mode) {
                double d = map.deltas[k];
                if (std::isfinite(d)) {
                    std::snprintf(buf, sizeof buf, "%.17g", d);
                    csv << buf;
                } else {
                    csv << "nan";
                }
            } else {
                csv << map.counts[k];
            }
        }
        csv << "\n";
    }

    nlohmann::json side;
    side["config"] = config_echo;
    side["hemisphere"] = to_string(map.raster.hemisphere);
    side["size"] = size;
    side["in_disk"] = map.in_disk;
    side["failures"] = map.failures;
    side["elapsed_seconds"] = map.elapsed_seconds;
    side["mode"] = delta_mode ? "delta" : "count";
    if (delta_mode) side["max_delta"] = max_delta;
    auto rgb = [](const Rgb& c) { return nlohmann::json{c[0], c[1], c[2]}; };
    side["palette"] = {{"0", rgb(palette.count0)},       {"2", rgb(palette.count2)},
                       {"4", rgb(palette.count4)},       {"6", rgb(palette.count6)},
                       {"8", rgb(palette.count8)},       {">=10", rgb(palette.count10_plus)},
                       {"odd", rgb(palette.odd)},        {"sentinel", rgb(palette.sentinel)}};
    std::ofstream js(out_prefix + ".json");
    if (!js) throw error("cannot write " + out_prefix + ".json");
    js << side.dump(2) << "\n";
}

}  // namespace ocs
