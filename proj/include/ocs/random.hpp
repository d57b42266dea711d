#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "ocs/probe.hpp"

namespace ocs {

/// Converts the top 53 bits of a 64-bit draw to a double in [0, 1).
/// Hand-rolled so that seeded sequences are identical across standard
/// library implementations.
inline double unit_double(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform direction on the sphere (area-uniform).
inline SphericalDirection random_direction(std::mt19937_64& rng) {
    double z = 2.0 * unit_double(rng) - 1.0;
    double theta = 2.0 * pi * unit_double(rng);
    return {theta, std::acos(z)};
}

}  // namespace ocs
