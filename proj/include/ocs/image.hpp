#pragma once

#include <array>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "ocs/core.hpp"

namespace ocs {

using Rgb = std::array<std::uint8_t, 3>;

/// Fixed transition-count palette. Sentinel (outside disk / failed solve)
/// renders white; odd counts get their own hue so they stand out.
struct CountPalette {
    Rgb count0{0, 0, 0};
    Rgb count2{128, 128, 128};
    Rgb count4{230, 159, 0};    // orange
    Rgb count6{0, 158, 115};    // green
    Rgb count8{0, 114, 178};    // blue
    Rgb count10_plus{204, 121, 167};  // purple
    Rgb odd{213, 94, 0};        // vermilion, flags odd counts
    Rgb sentinel{255, 255, 255};

    Rgb map(int count) const {
        if (count < 0) return sentinel;
        if (count % 2 == 1) return odd;
        if (count == 0) return count0;
        if (count == 2) return count2;
        if (count == 4) return count4;
        if (count == 6) return count6;
        if (count == 8) return count8;
        return count10_plus;
    }
};

/// Binary PPM (P6). A single '#' comment line after the magic carries the
/// reproducibility stamp.
inline void write_ppm(const std::string& path, int width, int height,
                      const std::vector<Rgb>& pixels, const std::string& comment = "") {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw error("cannot write " + path);
    out << "P6\n";
    if (!comment.empty()) out << "# " << comment << "\n";
    out << width << " " << height << "\n255\n";
    for (const auto& p : pixels) out.write(reinterpret_cast<const char*>(p.data()), 3);
    if (!out) throw error("write failed: " + path);
}

/// Grayscale ramp for difference maps: relative value in [0,1] -> black..white.
inline Rgb gray_ramp(double t) {
    if (t < 0.0) t = 0.0;
    if (t > 1.0) t = 1.0;
    auto v = static_cast<std::uint8_t>(t * 255.0 + 0.5);
    return {v, v, v};
}

}  // namespace ocs
