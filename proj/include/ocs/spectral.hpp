#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ocs/core.hpp"

namespace ocs {

/// Color-matching functions sampled on a uniform wavelength grid.
/// values[i] = (xbar, ybar, zbar) at grid.wavelength(i).
struct CmfSet {
    WavelengthGrid grid;
    std::vector<std::array<double, 3>> values;
};

/// Relative spectral power of an illuminant on the same grid as its CMF set.
struct Illuminant {
    WavelengthGrid grid;
    std::vector<double> power;
};

/// Illuminant-weighted CMFs: values[i][j] = power[i] * cmf[i][j].
/// white_point is the column sum (tristimulus of the perfect reflector),
/// gray50 is exactly half of it.
struct WeightedCmf {
    WavelengthGrid grid;
    std::vector<std::array<double, 3>> values;
    Tristimulus white_point;
    Tristimulus gray50;
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (char ch : line) {
        if (ch == '"') {
            quoted = !quoted;
        } else if (ch == ',' && !quoted) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(trim(cur));
    return out;
}

inline bool parse_double(const std::string& s, double& v) {
    try {
        std::size_t pos = 0;
        v = std::stod(s, &pos);
        return pos == s.size();
    } catch (...) {
        return false;
    }
}

// Reads a numeric CSV table, skipping blank lines, '#' comments and an
// optional header row (detected by a non-numeric first token).
inline std::vector<std::vector<double>> read_numeric_csv(const std::string& path,
                                                         std::vector<std::string>* header = nullptr) {
    std::ifstream in(path);
    if (!in) throw format_error("cannot open file: " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    bool first_content = true;
    std::size_t width = 0;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto fields = split_csv(t);
        double v0;
        if (first_content && !parse_double(fields[0], v0)) {
            if (header) *header = fields;
            first_content = false;
            continue;
        }
        first_content = false;
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto& f : fields) {
            double v;
            if (!parse_double(f, v))
                throw format_error(path + ":" + std::to_string(lineno) + ": not a number: '" + f + "'");
            row.push_back(v);
        }
        if (width == 0) width = row.size();
        if (row.size() != width)
            throw format_error(path + ":" + std::to_string(lineno) + ": inconsistent column count");
        rows.push_back(std::move(row));
    }
    return rows;
}

inline WavelengthGrid infer_grid(const std::vector<std::vector<double>>& rows, const std::string& path,
                                 double tol_nm = 1e-9) {
    if (rows.size() < 3) throw format_error(path + ": need at least 3 data rows");
    WavelengthGrid g;
    g.start_nm = rows[0][0];
    g.step_nm = rows[1][0] - rows[0][0];
    g.count = static_cast<int>(rows.size());
    if (!(g.step_nm > 0)) throw format_error(path + ": wavelengths not strictly ascending");
    for (int i = 0; i < g.count; ++i) {
        if (std::abs(rows[i][0] - g.wavelength(i)) > tol_nm)
            throw format_error(path + ": non-uniform wavelength spacing at row " + std::to_string(i));
    }
    return g;
}

}  // namespace detail

/// Loads a 4-column CSV (wavelength, xbar, ybar, zbar). Header optional.
inline CmfSet load_cmf(const std::string& path,
                       std::optional<WavelengthGrid> expected_grid = std::nullopt) {
    auto rows = detail::read_numeric_csv(path);
    if (!rows.empty() && rows[0].size() != 4)
        throw format_error(path + ": expected 4 columns (wavelength, xbar, ybar, zbar)");
    CmfSet cmf;
    cmf.grid = detail::infer_grid(rows, path);
    cmf.values.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (int j = 1; j <= 3; ++j) {
            if (rows[i][j] < 0.0)
                throw data_error(path + ": negative CMF value at row " + std::to_string(i));
        }
        cmf.values.push_back({rows[i][1], rows[i][2], rows[i][3]});
    }
    if (expected_grid && !cmf.grid.matches(*expected_grid))
        throw grid_error(path + ": wavelength grid does not match the expected grid");
    return cmf;
}

/// Loads a 2-column CSV (wavelength, power). Header optional.
inline Illuminant load_illuminant(const std::string& path,
                                  std::optional<WavelengthGrid> expected_grid = std::nullopt) {
    auto rows = detail::read_numeric_csv(path);
    if (!rows.empty() && rows[0].size() != 2)
        throw format_error(path + ": expected 2 columns (wavelength, power)");
    Illuminant il;
    il.grid = detail::infer_grid(rows, path);
    il.power.reserve(rows.size());
    for (const auto& r : rows) il.power.push_back(r[1]);
    if (expected_grid && !il.grid.matches(*expected_grid))
        throw grid_error(path + ": wavelength grid does not match the expected grid");
    return il;
}

/// Loads a multi-column spectra CSV whose header names each column
/// (wavelength, "name 1", "name 2", ...).
struct NamedSpectra {
    WavelengthGrid grid;
    std::vector<std::string> names;                // excluding the wavelength column
    std::map<std::string, std::vector<double>> columns;
};

inline NamedSpectra load_named_spectra(const std::string& path) {
    std::vector<std::string> header;
    auto rows = detail::read_numeric_csv(path, &header);
    if (header.size() < 2)
        throw format_error(path + ": expected a header row naming the spectra columns");
    NamedSpectra out;
    out.grid = detail::infer_grid(rows, path);
    for (std::size_t c = 1; c < header.size(); ++c) {
        std::vector<double> col(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) col[i] = rows[i][c];
        out.names.push_back(header[c]);
        out.columns[header[c]] = std::move(col);
    }
    return out;
}

/// Decimates a CMF set to a coarser step by keeping every k-th row
/// starting at row 0. new_step must be a positive integer multiple of
/// the current step.
inline CmfSet resample_cmf(const CmfSet& cmf, double new_step_nm) {
    double ratio = new_step_nm / cmf.grid.step_nm;
    double rr = std::round(ratio);
    if (!(new_step_nm > 0) || std::abs(ratio - rr) > 1e-9 || rr < 1.0)
        throw argument_error("resample step must be a positive integer multiple of the grid step");
    int k = static_cast<int>(rr);
    CmfSet out;
    out.grid.start_nm = cmf.grid.start_nm;
    out.grid.step_nm = cmf.grid.step_nm * k;
    out.grid.count = (cmf.grid.count + k - 1) / k;
    out.values.reserve(out.grid.count);
    for (int i = 0; i < cmf.grid.count; i += k) out.values.push_back(cmf.values[i]);
    return out;
}

/// Scales the illuminant so that dot(ybar, power) = 100.
inline Illuminant normalize_illuminant(const Illuminant& illum, const CmfSet& cmf) {
    if (!illum.grid.matches(cmf.grid)) throw grid_error("illuminant/CMF wavelength grids differ");
    double s = 0.0;
    for (int i = 0; i < cmf.grid.count; ++i) s += cmf.values[i][1] * illum.power[i];
    if (!(s > 0.0)) throw data_error("degenerate illuminant: ybar-weighted power sum is not positive");
    Illuminant out = illum;
    double scale = 100.0 / s;
    for (double& p : out.power) p *= scale;
    return out;
}

/// Builds the illuminant-weighted CMF matrix together with the white point
/// and 50% gray landmarks. The illuminant must already be normalized.
inline WeightedCmf weight_cmf(const CmfSet& cmf, const Illuminant& illum) {
    if (!illum.grid.matches(cmf.grid)) throw grid_error("illuminant/CMF wavelength grids differ");
    double s = 0.0;
    for (int i = 0; i < cmf.grid.count; ++i) s += cmf.values[i][1] * illum.power[i];
    if (std::abs(s - 100.0) > 1e-9 * 100.0)
        throw argument_error("illuminant is not normalized (ybar'W = " + std::to_string(s) + ")");
    WeightedCmf out;
    out.grid = cmf.grid;
    out.values.resize(cmf.values.size());
    double sx = 0.0, sy = 0.0, sz = 0.0;
    for (std::size_t i = 0; i < cmf.values.size(); ++i) {
        double w = illum.power[i];
        out.values[i] = {w * cmf.values[i][0], w * cmf.values[i][1], w * cmf.values[i][2]};
        sx += out.values[i][0];
        sy += out.values[i][1];
        sz += out.values[i][2];
    }
    out.white_point = {sx, sy, sz};
    out.gray50 = {sx / 2.0, sy / 2.0, sz / 2.0};
    return out;
}

/// Equal-energy illuminant, already normalized against the given CMF set.
inline Illuminant equal_energy_illuminant(const CmfSet& cmf) {
    Illuminant il;
    il.grid = cmf.grid;
    il.power.assign(cmf.grid.count, 1.0);
    return normalize_illuminant(il, cmf);
}

/// Tristimulus of a reflectance vector under a weighted CMF set.
inline Tristimulus tristimulus(const WeightedCmf& wcmf, const std::vector<double>& rho) {
    Tristimulus t;
    for (std::size_t i = 0; i < wcmf.values.size(); ++i) {
        t.X += wcmf.values[i][0] * rho[i];
        t.Y += wcmf.values[i][1] * rho[i];
        t.Z += wcmf.values[i][2] * rho[i];
    }
    return t;
}

/// Content hash of a file, for artifact reproducibility stamps.
inline std::string file_hash_hex(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw format_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    std::string data = ss.str();
    return to_hex(fnv1a64(data.data(), data.size()));
}

}  // namespace ocs
