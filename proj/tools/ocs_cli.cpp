// Command-line front end: hull analysis, ray probes, two-transition
// references, hemisphere maps, chromaticity regions, OCS slices, illuminant
// synthesis and the reproduction checklist.
//
// Exit codes: 0 success, 1 verification/solver failure, 2 usage error,
// 3 data error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "ocs/atlas.hpp"
#include "ocs/hull.hpp"
#include "ocs/illuminant_synth.hpp"
#include "ocs/lp.hpp"
#include "ocs/parallel.hpp"
#include "ocs/probe.hpp"
#include "ocs/random.hpp"
#include "ocs/schrodinger.hpp"
#include "ocs/spectral.hpp"

using nlohmann::json;

namespace {

std::string default_data_dir() {
    if (const char* env = std::getenv("OCS_DATA_DIR")) return env;
#ifdef OCS_SOURCE_DATA_DIR
    return OCS_SOURCE_DATA_DIR;
#else
    return "data";
#endif
}

struct GlobalOptions {
    std::string cmf_path;
    std::string illuminant_spec = "EE";
    std::string munsell_data;
    double step_nm = 0.0;  // 0 = native grid
    double opt_tol = 1e-9;
    double cons_tol = 3e-9;
    unsigned threads = 0;  // 0 = hardware
    std::uint64_t seed = 1;
    bool allow_negative = false;
};

struct Session {
    GlobalOptions opt;
    ocs::CmfSet cmf;
    ocs::Illuminant illuminant;
    ocs::WeightedCmf wcmf;
    ocs::SolverConfig solver;
    std::string cmf_hash;
    unsigned threads = 1;
    json illuminant_info;
};

ocs::Illuminant resolve_illuminant(const GlobalOptions& opt, const ocs::CmfSet& cmf, json& info) {
    info["spec"] = opt.illuminant_spec;
    if (opt.illuminant_spec == "EE") return ocs::equal_energy_illuminant(cmf);
    if (opt.illuminant_spec.rfind("munsell:", 0) == 0) {
        std::string name = opt.illuminant_spec.substr(8);
        std::string path = opt.munsell_data.empty()
                               ? default_data_dir() + "/munsell_reflectance_1nm.csv"
                               : opt.munsell_data;
        ocs::NamedSpectra spectra = ocs::load_named_spectra(path);
        if (!spectra.columns.count(name))
            throw ocs::data_error("munsell sample '" + name + "' not found in " + path);
        // chromaticity of the sample under EE on the sample's native grid
        ocs::CmfSet base = ocs::load_cmf(opt.cmf_path, spectra.grid);
        ocs::WeightedCmf ee = ocs::weight_cmf(base, ocs::equal_energy_illuminant(base));
        ocs::ChromaticityTarget target =
            ocs::chromaticity_of_sample(ee, spectra.columns.at(name), name);
        info["munsell_data"] = path;
        info["target_x"] = target.x;
        info["target_y"] = target.y;
        ocs::SmoothestResult synth = opt.allow_negative ? ocs::smoothest_spectrum(base, target)
                                                        : ocs::smoothest_spectrum_nonneg(base, target);
        info["min_power"] = synth.min_power;
        info["nonneg_active_set"] = synth.nonneg_active_set;
        if (synth.min_power < -1e-6)
            std::fprintf(stderr, "warning: synthesized illuminant dips negative (min %.6g)\n",
                         synth.min_power);
        ocs::Illuminant il = synth.illuminant;
        if (cmf.grid.matches(il.grid)) return il;
        // decimate the synthesized spectrum onto the working grid
        int k = static_cast<int>(std::lround(cmf.grid.step_nm / il.grid.step_nm));
        ocs::Illuminant out;
        out.grid = cmf.grid;
        for (int i = 0; i < cmf.grid.count; ++i) out.power.push_back(il.power[i * k]);
        return out;
    }
    info["path"] = opt.illuminant_spec;
    ocs::Illuminant il = ocs::load_illuminant(opt.illuminant_spec);
    if (il.grid.matches(cmf.grid)) return il;
    // a finer-grid illuminant decimates onto the working grid
    double ratio = cmf.grid.step_nm / il.grid.step_nm;
    if (std::abs(il.grid.start_nm - cmf.grid.start_nm) <= 1e-9 &&
        std::abs(ratio - std::round(ratio)) <= 1e-9 && ratio >= 1.0 &&
        (cmf.grid.count - 1) * static_cast<int>(std::lround(ratio)) < il.grid.count) {
        int k = static_cast<int>(std::lround(ratio));
        ocs::Illuminant out;
        out.grid = cmf.grid;
        for (int i = 0; i < cmf.grid.count; ++i) out.power.push_back(il.power[i * k]);
        return out;
    }
    throw ocs::grid_error(opt.illuminant_spec + ": wavelength grid does not match the working grid");
}

Session open_session(const GlobalOptions& opt) {
    Session s;
    s.opt = opt;
    ocs::CmfSet base = ocs::load_cmf(opt.cmf_path);
    s.cmf = opt.step_nm > 0.0 ? ocs::resample_cmf(base, opt.step_nm) : base;
    s.illuminant =
        ocs::normalize_illuminant(resolve_illuminant(opt, s.cmf, s.illuminant_info), s.cmf);
    s.wcmf = ocs::weight_cmf(s.cmf, s.illuminant);
    s.solver.optimality_tol = opt.opt_tol;
    s.solver.constraint_tol = opt.cons_tol;
    s.cmf_hash = ocs::file_hash_hex(opt.cmf_path);
    s.threads = opt.threads == 0 ? ocs::default_threads() : opt.threads;
    return s;
}

json config_echo(const Session& s, const std::string& command) {
    json j;
    j["command"] = command;
    j["cmf"] = s.opt.cmf_path;
    j["cmf_hash"] = s.cmf_hash;
    j["illuminant"] = s.illuminant_info;
    j["grid"] = {{"start_nm", s.cmf.grid.start_nm},
                 {"step_nm", s.cmf.grid.step_nm},
                 {"count", s.cmf.grid.count}};
    j["optimality_tol"] = s.solver.optimality_tol;
    j["constraint_tol"] = s.solver.constraint_tol;
    j["threads"] = s.threads;
    j["seed"] = s.opt.seed;
    return j;
}

void write_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw ocs::error("cannot write " + path);
    out << j.dump(2) << "\n";
}

void write_rho_csv(const std::string& path, const ocs::Reflectance& rho, const std::string& stamp) {
    std::ofstream out(path);
    if (!out) throw ocs::error("cannot write " + path);
    out << "# " << stamp << "\n";
    out << "wavelength_nm,reflectance\n";
    char buf[64];
    for (int i = 0; i < rho.grid.count; ++i) {
        std::snprintf(buf, sizeof buf, "%g,%.17g\n", rho.grid.wavelength(i), rho.values[i]);
        out << buf;
    }
}

json profile_json(const ocs::TransitionProfile& p) {
    json j;
    j["count"] = p.count;
    j["kind"] = ocs::to_string(p.kind);
    j["transition_bins"] = p.transition_bins;
    json fb = json::array();
    for (auto [i, v] : p.fractional_bins) fb.push_back({{"bin", i}, {"value", v}});
    j["fractional_bins"] = fb;
    return j;
}

json xyz_json(const ocs::Tristimulus& t) { return json{t.X, t.Y, t.Z}; }

std::optional<ocs::Tristimulus> parse_triplet(const std::string& s) {
    double a, b, c;
    if (std::sscanf(s.c_str(), "%lf,%lf,%lf", &a, &b, &c) != 3) return std::nullopt;
    return ocs::Tristimulus{a, b, c};
}

std::optional<ocs::SphericalDirection> parse_direction(const std::string& s) {
    double t, p;
    if (std::sscanf(s.c_str(), "%lf,%lf", &t, &p) != 2) return std::nullopt;
    return ocs::SphericalDirection{t, p};
}

void dump_lp_debug(const ocs::WeightedCmf& wcmf, const ocs::Tristimulus& target,
                   const ocs::SolverConfig& config, const std::string& path) {
    ocs::LpProblem p;
    ocs::build_ray_problem(wcmf, wcmf.gray50, target, p);
    ocs::LpSolution sol = ocs::solve_lp(p, config);
    json j;
    j["num_rows"] = p.num_rows;
    j["num_vars"] = p.num_vars;
    j["objective"] = p.objective;
    j["columns"] = p.columns;
    j["rhs"] = p.rhs;
    json lo = json::array(), hi = json::array();
    for (double v : p.lower) lo.push_back(std::isfinite(v) ? json(v) : json());
    for (double v : p.upper) hi.push_back(std::isfinite(v) ? json(v) : json());
    j["lower"] = lo;
    j["upper"] = hi;
    j["solution"] = {{"x", sol.x},
                     {"objective_value", sol.objective_value},
                     {"status", ocs::to_string(sol.status)},
                     {"iterations", sol.iterations},
                     {"max_constraint_violation", sol.max_constraint_violation},
                     {"basis", sol.basis}};
    write_json(path, j);
}

int run_repro(const Session& s) {
    int failures = 0;
    auto report = [&](const char* name, bool ok, const std::string& detail) {
        std::printf("%-34s %s  %s\n", name, ok ? "PASS" : "FAIL", detail.c_str());
        if (!ok) ++failures;
    };
    char buf[256];

    ocs::NonconvexityReport hull = ocs::nonconvexity_report(s.cmf, 0.0);
    std::size_t nh = hull.hull.hull_indices.size();
    std::snprintf(buf, sizeof buf, "hull vertices = %zu (expect 161 +/- 2)", nh);
    report("hull count", nh >= 159 && nh <= 163, buf);
    std::snprintf(buf, sizeof buf, "max gap = %.3g (expect [2e-5, 2e-4])", hull.hull.max_gap);
    report("hull gap magnitude", hull.hull.max_gap >= 2e-5 && hull.hull.max_gap <= 2e-4, buf);

    ocs::RayProbe left = ocs::probe_ray(s.wcmf, {10.0, 40.0, 30.0}, s.solver);
    std::snprintf(buf, sizeof buf, "target (10,40,30): count = %d (expect 2)", left.profile.count);
    report("band-pass reflectance",
           left.solver_status == ocs::LpStatus::optimal && left.profile.count == 2, buf);
    ocs::RayProbe right = ocs::probe_ray(s.wcmf, {49.1, 40.3, 25.0}, s.solver);
    std::snprintf(buf, sizeof buf, "target (49.1,40.3,25.0): count = %d (expect 4)",
                  right.profile.count);
    report("four-transition reflectance",
           right.solver_status == ocs::LpStatus::optimal && right.profile.count == 4, buf);

    ocs::SphericalDirection dir{1.478858, 0.371322};
    ocs::Tristimulus targ = ocs::direction_to_target(s.wcmf, dir);
    bool targ_ok = std::abs(targ.X - 50.03731) <= 1e-4 && std::abs(targ.Y - 50.36132) <= 1e-4 &&
                   std::abs(targ.Z - 50.94838) <= 1e-4;
    std::snprintf(buf, sizeof buf, "XYZ_targ = (%.5f, %.5f, %.5f)", targ.X, targ.Y, targ.Z);
    report("checkpoint target", targ_ok, buf);

    ocs::RayProbe lp = ocs::probe_ray(s.wcmf, targ, s.solver);
    bool lp_ok = lp.solver_status == ocs::LpStatus::optimal &&
                 std::abs(lp.xyz_opt.X - 51.79069) <= 1e-3 &&
                 std::abs(lp.xyz_opt.Y - 69.37875) <= 1e-3 &&
                 std::abs(lp.xyz_opt.Z - 99.99523) <= 1e-3;
    std::snprintf(buf, sizeof buf, "xyz_opt = (%.5f, %.5f, %.5f)", lp.xyz_opt.X, lp.xyz_opt.Y,
                  lp.xyz_opt.Z);
    report("checkpoint LP solution", lp_ok, buf);

    ocs::TwoTransitionSolution two = ocs::two_transition_optimal(s.wcmf, targ);
    bool two_ok = std::abs(two.xyz.X - 51.79066) <= 1e-3 &&
                  std::abs(two.xyz.Y - 69.37828) <= 1e-3 && std::abs(two.xyz.Z - 99.99402) <= 1e-3;
    std::snprintf(buf, sizeof buf, "xyz_two = (%.5f, %.5f, %.5f)", two.xyz.X, two.xyz.Y, two.xyz.Z);
    report("checkpoint two-transition", two_ok, buf);

    double delta = (lp.scale - two.c) * ocs::norm(targ - s.wcmf.gray50);
    bool delta_ok = delta >= 1.29e-3 * 0.95 && delta <= 1.29e-3 * 1.05;
    std::snprintf(buf, sizeof buf, "delta distance = %.5g (expect 1.29e-3 +/- 5%%)", delta);
    report("checkpoint distance difference", delta_ok, buf);

    std::printf("%s\n", failures == 0 ? "repro: all checks passed" : "repro: FAILURES");
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optimal object colors on the object color solid"};
    app.require_subcommand(1);

    GlobalOptions opt;
    opt.cmf_path = default_data_dir() + "/cie1931_2deg_1nm.csv";
    app.add_option("--cmf", opt.cmf_path, "CMF table CSV (wavelength, xbar, ybar, zbar)");
    app.add_option("--illuminant", opt.illuminant_spec,
                   "EE | <illuminant.csv> | munsell:<name>  (default EE)");
    app.add_option("--munsell-data", opt.munsell_data, "Munsell reflectance CSV");
    app.add_option("--step", opt.step_nm, "resample the CMF grid to this step (nm)");
    app.add_option("--opt-tol", opt.opt_tol, "LP optimality tolerance");
    app.add_option("--cons-tol", opt.cons_tol, "LP constraint tolerance");
    app.add_option("--threads", opt.threads, "worker threads (0 = hardware)");
    app.add_option("--seed", opt.seed, "seed echoed into artifacts");
    app.add_flag("--allow-negative", opt.allow_negative,
                 "keep negative power in synthesized illuminants");

    auto* c_hull = app.add_subcommand("hull", "convex hull / non-convexity report");
    double hull_eps = 0.0;
    std::string hull_out = "hull_report.json";
    c_hull->add_option("--eps", hull_eps, "collinearity epsilon for the strict-turn test");
    c_hull->add_option("--out", hull_out, "output JSON path");

    auto* c_probe = app.add_subcommand("probe", "solve the ray LP for one target/direction");
    std::string probe_target, probe_dir, probe_out = "probe.json", probe_debug_lp;
    c_probe->add_option("--target", probe_target, "X,Y,Z target");
    c_probe->add_option("--dir", probe_dir, "theta,phi direction (radians)");
    c_probe->add_option("--out", probe_out, "output JSON path");
    c_probe->add_option("--debug-lp", probe_debug_lp, "dump the LP problem/solution JSON here");

    auto* c_two = app.add_subcommand("two-trans", "best two-transition color along a ray");
    std::string two_target, two_dir, two_out = "twotrans.json";
    c_two->add_option("--target", two_target, "X,Y,Z target");
    c_two->add_option("--dir", two_dir, "theta,phi direction (radians)");
    c_two->add_option("--out", two_out, "output JSON path");

    auto* c_cmp = app.add_subcommand("compare", "LP vs two-transition along one ray");
    std::string cmp_dir, cmp_out = "compare.json";
    c_cmp->add_option("--dir", cmp_dir, "theta,phi direction (radians)")->required();
    c_cmp->add_option("--out", cmp_out, "output JSON path");

    auto* c_map = app.add_subcommand("map", "transition-count map of one hemisphere");
    auto* c_diff = app.add_subcommand("diff-map", "LP vs two-transition distance map");
    std::string map_hemi = "upper", map_out = "map";
    int map_size = 256;
    for (CLI::App* c : {c_map, c_diff}) {
        c->add_option("--hemisphere", map_hemi, "upper | lower");
        c->add_option("--size", map_size, "raster size in pixels");
        c->add_option("--out", map_out, "output prefix (.ppm/.csv/.json)");
    }

    auto* c_reg = app.add_subcommand("regions", "high-transition regions on the chromaticity plane");
    int reg_size = 128;
    std::string reg_out = "regions";
    c_reg->add_option("--size", reg_size, "raster size per hemisphere");
    c_reg->add_option("--out", reg_out, "output prefix (.csv/.json)");

    auto* c_slice = app.add_subcommand("slice", "OCS cross-section at fixed X, Y or Z");
    std::string slice_axis = "Y", slice_out = "slice";
    double slice_level = 50.0;
    int slice_samples = 360;
    c_slice->add_option("--axis", slice_axis, "X | Y | Z");
    c_slice->add_option("--level", slice_level, "fixed tristimulus value");
    c_slice->add_option("--samples", slice_samples, "ray count around the circle");
    c_slice->add_option("--out", slice_out, "output prefix (.csv/.json)");

    auto* c_mk = app.add_subcommand("make-illuminant", "smoothest spectrum at a chromaticity");
    double mk_x = 0.0, mk_y = 0.0;
    std::string mk_label, mk_munsell, mk_out = "illuminant.csv";
    c_mk->add_option("--x", mk_x, "target chromaticity x");
    c_mk->add_option("--y", mk_y, "target chromaticity y");
    c_mk->add_option("--label", mk_label, "label recorded in the output");
    c_mk->add_option("--munsell", mk_munsell, "Munsell sample name (e.g. '5Y 8/16')");
    c_mk->add_option("--out", mk_out, "output CSV path");

    app.add_subcommand("repro", "run the reproduction checklist");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        std::cerr << app.help() << "\n";
        return 2;
    }

    try {
        Session s = open_session(opt);

        if (c_hull->parsed()) {
            ocs::NonconvexityReport rep = ocs::nonconvexity_report(s.cmf, hull_eps);
            json j;
            j["config"] = config_echo(s, "hull");
            j["collinearity_eps"] = hull_eps;
            j["hull_indices"] = rep.hull.hull_indices;
            json interior = json::array();
            for (std::size_t k = 0; k < rep.hull.interior_indices.size(); ++k) {
                int idx = rep.hull.interior_indices[k];
                interior.push_back({{"index", idx},
                                    {"wavelength_nm", rep.chroma.points[idx].wavelength_nm},
                                    {"gap", rep.hull.gaps[k]}});
            }
            j["interior"] = interior;
            j["skipped_rows"] = rep.chroma.skipped_rows;
            j["max_gap"] = rep.hull.max_gap;
            json ranges = json::array();
            for (auto [lo, hi] : rep.hull.nonconvex_ranges) ranges.push_back({lo, hi});
            j["nonconvex_ranges_nm"] = ranges;
            j["hull_count"] = rep.hull.hull_indices.size();
            j["interior_count"] = rep.hull.interior_indices.size();
            write_json(hull_out, j);
            std::printf("hull: %zu vertices, %zu interior, max gap %.4g -> %s\n",
                        rep.hull.hull_indices.size(), rep.hull.interior_indices.size(),
                        rep.hull.max_gap, hull_out.c_str());
            return 0;
        }

        if (c_probe->parsed() || c_two->parsed()) {
            bool is_probe = c_probe->parsed();
            const std::string& targ_s = is_probe ? probe_target : two_target;
            const std::string& dir_s = is_probe ? probe_dir : two_dir;
            const std::string& out = is_probe ? probe_out : two_out;
            ocs::Tristimulus target;
            if (!targ_s.empty()) {
                auto t = parse_triplet(targ_s);
                if (!t) throw CLI::ValidationError("--target expects X,Y,Z");
                target = *t;
            } else if (!dir_s.empty()) {
                auto d = parse_direction(dir_s);
                if (!d) throw CLI::ValidationError("--dir expects theta,phi");
                target = ocs::direction_to_target(s.wcmf, *d);
            } else {
                throw CLI::ValidationError("need --target or --dir");
            }
            std::string stamp = "cmf_fnv1a64=" + s.cmf_hash;
            std::string base = out.rfind('.') == std::string::npos
                                   ? out
                                   : out.substr(0, out.rfind('.'));
            std::string rho_csv = base + ".rho.csv";
            if (is_probe) {
                if (!probe_debug_lp.empty()) dump_lp_debug(s.wcmf, target, s.solver, probe_debug_lp);
                ocs::RayProbe pr = ocs::probe_ray(s.wcmf, target, s.solver);
                json j;
                j["config"] = config_echo(s, "probe");
                j["direction"] = {{"theta", pr.direction.theta}, {"phi", pr.direction.phi}};
                j["xyz_target"] = xyz_json(pr.xyz_target);
                j["c"] = pr.scale;
                j["xyz_opt"] = xyz_json(pr.xyz_opt);
                j["status"] = ocs::to_string(pr.solver_status);
                j["iterations"] = pr.iterations;
                j["max_violation"] = pr.max_violation;
                j["profile"] = profile_json(pr.profile);
                j["rho_csv"] = rho_csv;
                write_json(out, j);
                write_rho_csv(rho_csv, pr.rho, stamp);
                std::printf("probe: c = %.9g, %d transitions (%s) -> %s\n", pr.scale,
                            pr.profile.count, ocs::to_string(pr.profile.kind), out.c_str());
                return pr.solver_status == ocs::LpStatus::optimal ? 0 : 1;
            }
            ocs::TwoTransitionSolution two = ocs::two_transition_optimal(s.wcmf, target);
            ocs::Reflectance rho = ocs::reconstruct(two, s.wcmf.grid);
            json j;
            j["config"] = config_echo(s, "two-trans");
            j["xyz_target"] = xyz_json(target);
            j["kind"] = ocs::to_string(two.kind);
            j["i"] = two.i;
            j["j"] = two.j;
            j["alpha"] = two.alpha;
            j["beta"] = two.beta;
            j["c"] = two.c;
            j["xyz"] = xyz_json(two.xyz);
            j["rho_csv"] = rho_csv;
            write_json(out, j);
            write_rho_csv(rho_csv, rho, stamp);
            std::printf("two-trans: c = %.9g, kind %s -> %s\n", two.c, ocs::to_string(two.kind),
                        out.c_str());
            return 0;
        }

        if (c_cmp->parsed()) {
            auto d = parse_direction(cmp_dir);
            if (!d) throw CLI::ValidationError("--dir expects theta,phi");
            ocs::ComparisonRecord rec = ocs::compare_direction(s.wcmf, *d, s.solver);
            json j;
            j["config"] = config_echo(s, "compare");
            j["direction"] = {{"theta", rec.direction.theta}, {"phi", rec.direction.phi}};
            j["c_lp"] = rec.c_lp;
            j["c_two"] = rec.c_two;
            j["delta_distance"] = rec.delta_distance;
            j["lp_transitions"] = rec.lp_transitions;
            j["status"] = ocs::to_string(rec.solver_status);
            write_json(cmp_out, j);
            std::printf("compare: c_lp = %.9g, c_two = %.9g, delta = %.6g (%d transitions)\n",
                        rec.c_lp, rec.c_two, rec.delta_distance, rec.lp_transitions);
            return rec.solver_status == ocs::LpStatus::optimal ? 0 : 1;
        }

        if (c_map->parsed() || c_diff->parsed()) {
            ocs::Hemisphere hemi;
            if (map_hemi == "upper")
                hemi = ocs::Hemisphere::upper;
            else if (map_hemi == "lower")
                hemi = ocs::Hemisphere::lower;
            else
                throw CLI::ValidationError("--hemisphere expects upper|lower");
            ocs::TransitionMap map =
                c_map->parsed()
                    ? ocs::build_transition_map(s.wcmf, hemi, map_size, s.solver, s.threads)
                    : ocs::build_difference_map(s.wcmf, hemi, map_size, s.solver, s.threads);
            json echo = config_echo(s, c_map->parsed() ? "map" : "diff-map");
            ocs::render_map(map, ocs::CountPalette{}, map_out, echo);
            std::printf("%s: %d in-disk pixels, %d failures -> %s.{ppm,csv,json}\n",
                        c_map->parsed() ? "map" : "diff-map", map.in_disk, map.failures,
                        map_out.c_str());
            return 0;
        }

        if (c_reg->parsed()) {
            ocs::RegionsResult regions =
                ocs::chromaticity_regions(s.wcmf, reg_size, s.solver, s.threads);
            std::ofstream csv(reg_out + ".csv");
            if (!csv) throw ocs::error("cannot write " + reg_out + ".csv");
            csv << "# cmf_fnv1a64=" << s.cmf_hash << "\n";
            csv << "x,y,count,kind,theta,phi,hemisphere\n";
            char buf[160];
            for (const auto& p : regions.points) {
                std::snprintf(buf, sizeof buf, "%.9f,%.9f,%d,%s,%.9f,%.9f,%s\n", p.x, p.y, p.count,
                              ocs::to_string(p.kind), p.direction.theta, p.direction.phi,
                              ocs::to_string(p.hemisphere));
                csv << buf;
            }
            json j;
            j["config"] = config_echo(s, "regions");
            j["illuminant_xy"] = {regions.illuminant_x, regions.illuminant_y};
            j["high_count_points"] = regions.points.size();
            j["in_disk"] = regions.in_disk;
            j["failures"] = regions.failures;
            write_json(reg_out + ".json", j);
            std::printf("regions: %zu high-transition points of %d probes -> %s.{csv,json}\n",
                        regions.points.size(), regions.in_disk, reg_out.c_str());
            return 0;
        }

        if (c_slice->parsed()) {
            ocs::Axis axis;
            if (slice_axis == "X")
                axis = ocs::Axis::X;
            else if (slice_axis == "Y")
                axis = ocs::Axis::Y;
            else if (slice_axis == "Z")
                axis = ocs::Axis::Z;
            else
                throw CLI::ValidationError("--axis expects X|Y|Z");
            ocs::SliceResult slice =
                ocs::ocs_slice(s.wcmf, axis, slice_level, slice_samples, s.solver, s.threads);
            std::ofstream csv(slice_out + ".csv");
            if (!csv) throw ocs::error("cannot write " + slice_out + ".csv");
            csv << "# cmf_fnv1a64=" << s.cmf_hash << "\n";
            csv << "angle_rad,X,Y,Z,c,transitions\n";
            char buf[200];
            int bad = 0;
            for (const auto& sm : slice.samples) {
                if (sm.solver_status != ocs::LpStatus::optimal) ++bad;
                std::snprintf(buf, sizeof buf, "%.9f,%.9f,%.9f,%.9f,%.9f,%d\n", sm.angle, sm.xyz.X,
                              sm.xyz.Y, sm.xyz.Z, sm.c, sm.transitions);
                csv << buf;
            }
            json j;
            j["config"] = config_echo(s, "slice");
            j["axis"] = ocs::to_string(axis);
            j["level"] = slice_level;
            j["origin"] = xyz_json(slice.origin);
            j["samples"] = slice.samples.size();
            j["failed"] = bad;
            write_json(slice_out + ".json", j);
            std::printf("slice %s = %g: %zu samples, %d failed -> %s.{csv,json}\n",
                        ocs::to_string(axis), slice_level, slice.samples.size(), bad,
                        slice_out.c_str());
            return bad == 0 ? 0 : 1;
        }

        if (c_mk->parsed()) {
            ocs::ChromaticityTarget target;
            if (!mk_munsell.empty()) {
                std::string path = opt.munsell_data.empty()
                                       ? default_data_dir() + "/munsell_reflectance_1nm.csv"
                                       : opt.munsell_data;
                ocs::NamedSpectra spectra = ocs::load_named_spectra(path);
                if (!spectra.columns.count(mk_munsell))
                    throw ocs::data_error("munsell sample '" + mk_munsell + "' not found");
                ocs::CmfSet base = ocs::load_cmf(opt.cmf_path, spectra.grid);
                ocs::WeightedCmf ee = ocs::weight_cmf(base, ocs::equal_energy_illuminant(base));
                target = ocs::chromaticity_of_sample(ee, spectra.columns.at(mk_munsell), mk_munsell);
            } else {
                if (!(mk_x > 0.0) || !(mk_y > 0.0))
                    throw CLI::ValidationError("need --x/--y or --munsell");
                target = {mk_x, mk_y, mk_label};
            }
            ocs::SmoothestResult synth = opt.allow_negative
                                             ? ocs::smoothest_spectrum(s.cmf, target)
                                             : ocs::smoothest_spectrum_nonneg(s.cmf, target);
            if (synth.min_power < -1e-6)
                std::fprintf(stderr, "warning: spectrum dips negative (min %.6g)\n",
                             synth.min_power);
            std::ofstream out(mk_out);
            if (!out) throw ocs::error("cannot write " + mk_out);
            out << "# cmf_fnv1a64=" << s.cmf_hash << " target_x=" << target.x
                << " target_y=" << target.y;
            if (!target.label.empty()) out << " label=\"" << target.label << "\"";
            out << " min_power=" << synth.min_power << "\n";
            out << "wavelength_nm,power\n";
            char buf[64];
            for (int i = 0; i < synth.illuminant.grid.count; ++i) {
                std::snprintf(buf, sizeof buf, "%g,%.12g\n", synth.illuminant.grid.wavelength(i),
                              synth.illuminant.power[i]);
                out << buf;
            }
            std::printf("make-illuminant: target (%.6f, %.6f), min power %.4g -> %s\n", target.x,
                        target.y, synth.min_power, mk_out.c_str());
            return 0;
        }

        return run_repro(s);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const ocs::format_error& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const ocs::data_error& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const ocs::grid_error& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const ocs::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
