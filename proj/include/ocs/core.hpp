#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace ocs {

/// Base class for all library errors.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input file (bad row, non-uniform spacing, ...).
struct format_error : error {
    using error::error;
};

/// Well-formed file with invalid data (negative CMF value, ...).
struct data_error : error {
    using error::error;
};

/// Wavelength grids of two datasets do not match.
struct grid_error : error {
    using error::error;
};

/// Invalid argument to an operation.
struct argument_error : error {
    using error::error;
};

/// Degenerate geometry (collinear point set, singular system).
struct geometry_error : error {
    using error::error;
};

/// Illuminant-referenced tristimulus triplet.
struct Tristimulus {
    double X = 0.0;
    double Y = 0.0;
    double Z = 0.0;

    double operator[](int i) const { return i == 0 ? X : (i == 1 ? Y : Z); }
    double& operator[](int i) { return i == 0 ? X : (i == 1 ? Y : Z); }

    Tristimulus operator+(const Tristimulus& o) const { return {X + o.X, Y + o.Y, Z + o.Z}; }
    Tristimulus operator-(const Tristimulus& o) const { return {X - o.X, Y - o.Y, Z - o.Z}; }
    Tristimulus operator*(double s) const { return {X * s, Y * s, Z * s}; }
    Tristimulus operator/(double s) const { return {X / s, Y / s, Z / s}; }
};

inline double dot(const Tristimulus& a, const Tristimulus& b) {
    return a.X * b.X + a.Y * b.Y + a.Z * b.Z;
}

inline double norm(const Tristimulus& a) { return std::sqrt(dot(a, a)); }

inline double max_abs(const Tristimulus& a) {
    return std::max(std::abs(a.X), std::max(std::abs(a.Y), std::abs(a.Z)));
}

inline bool finite(const Tristimulus& a) {
    return std::isfinite(a.X) && std::isfinite(a.Y) && std::isfinite(a.Z);
}

/// Uniform wavelength axis: wavelength(i) = start_nm + i * step_nm.
struct WavelengthGrid {
    double start_nm = 0.0;
    double step_nm = 0.0;
    int count = 0;

    double wavelength(int i) const { return start_nm + i * step_nm; }

    bool matches(const WavelengthGrid& o, double tol_nm = 1e-9) const {
        return count == o.count && std::abs(start_nm - o.start_nm) <= tol_nm &&
               std::abs(step_nm - o.step_nm) <= tol_nm;
    }
};

/// FNV-1a 64-bit, used to stamp artifacts with the content hash of their inputs.
inline std::uint64_t fnv1a64(const void* data, std::size_t size) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 1469598103934665603ull;
    for (std::size_t i = 0; i < size; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string to_hex(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[i] = digits[v & 0xf];
        v >>= 4;
    }
    return s;
}

}  // namespace ocs
