#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "ocs/probe.hpp"
#include "ocs/random.hpp"
#include "test_util.hpp"

namespace {

ocs::Reflectance make_rho(std::vector<double> v) {
    ocs::Reflectance r;
    r.grid = {360.0, 1.0, static_cast<int>(v.size())};
    r.values = std::move(v);
    return r;
}

// independent count on a constructed rectangular curve
struct BuiltCurve {
    ocs::Reflectance rho;
    int transitions;
};

// builds a 0/1 curve with the requested number of transitions, then dresses
// some transitions with a monotone fractional shoulder bin
BuiltCurve build_curve(std::mt19937_64& rng, int transitions, int n) {
    std::vector<double> v;
    int level = ocs::unit_double(rng) < 0.5 ? 0 : 1;
    int runs = transitions + 1;
    std::vector<int> lens(runs);
    int total = 0;
    for (int& l : lens) {
        l = 2 + static_cast<int>(ocs::unit_double(rng) * (n / (runs * 2)));
        total += l;
    }
    for (int r = 0; r < runs; ++r) {
        bool dress = r > 0 && ocs::unit_double(rng) < 0.5 && lens[r] > 2;
        if (dress) {
            // fractional bin localizes the transition inside it
            double prev = static_cast<double>(1 - level % 2);
            double next = static_cast<double>(level % 2);
            v.push_back(prev + (next - prev) * (0.2 + 0.6 * ocs::unit_double(rng)));
            for (int i = 1; i < lens[r]; ++i) v.push_back(next);
        } else {
            for (int i = 0; i < lens[r]; ++i) v.push_back(static_cast<double>(level % 2));
        }
        level ^= 1;
    }
    return {make_rho(std::move(v)), transitions};
}

}  // namespace

TEST_CASE("direction_to_target special directions") {
    const ocs::WeightedCmf& w = testutil::wcmf_ee_1nm();
    ocs::Tristimulus up = ocs::direction_to_target(w, {0.0, 0.0});
    CHECK(up.X == Catch::Approx(w.gray50.X).margin(1e-12));
    CHECK(up.Y == Catch::Approx(w.gray50.Y).margin(1e-12));
    CHECK(up.Z == Catch::Approx(w.gray50.Z + 1.0).margin(1e-12));

    ocs::Tristimulus ydir = ocs::direction_to_target(w, {ocs::pi / 2.0, ocs::pi / 2.0});
    CHECK(ydir.X == Catch::Approx(w.gray50.X).margin(1e-12));
    CHECK(ydir.Y == Catch::Approx(w.gray50.Y + 1.0).margin(1e-12));
    CHECK(ydir.Z == Catch::Approx(w.gray50.Z).margin(1e-12));
}

TEST_CASE("direction_to_target matches the published checkpoint") {
    const ocs::WeightedCmf& w = testutil::wcmf_ee_1nm();
    ocs::Tristimulus t = ocs::direction_to_target(w, {1.478858, 0.371322});
    CHECK(std::abs(t.X - 50.03731) <= 1e-4);
    CHECK(std::abs(t.Y - 50.36132) <= 1e-4);
    CHECK(std::abs(t.Z - 50.94838) <= 1e-4);
}

TEST_CASE("white-point ray returns the perfect reflector with c = 1") {
    const ocs::WeightedCmf& w = testutil::wcmf_ee_1nm();
    ocs::RayProbe pr = ocs::probe_ray(w, w.white_point);
    REQUIRE(pr.solver_status == ocs::LpStatus::optimal);
    CHECK(pr.scale == Catch::Approx(1.0).margin(1e-9));
    CHECK(pr.profile.count == 0);
    for (double v : pr.rho.values) CHECK(v >= 1.0 - 1e-6);
    CHECK(ocs::max_abs(pr.xyz_opt - w.white_point) <= 1e-6);
}

TEST_CASE("published targets: band-pass and four-transition curves") {
    const ocs::WeightedCmf& w = testutil::wcmf_ee_1nm();
    ocs::RayProbe left = ocs::probe_ray(w, {10.0, 40.0, 30.0});
    REQUIRE(left.solver_status == ocs::LpStatus::optimal);
    CHECK(left.profile.count == 2);
    CHECK(left.profile.kind == ocs::ProfileKind::type_i_like);

    ocs::RayProbe right = ocs::probe_ray(w, {49.1, 40.3, 25.0});
    REQUIRE(right.solver_status == ocs::LpStatus::optimal);
    CHECK(right.profile.count == 4);
}

TEST_CASE("probe invariants: tristimulus match and ray membership") {
    const ocs::WeightedCmf& w = testutil::wcmf_ee_1nm();
    std::mt19937_64 rng(5150);
    for (int k = 0; k < 10; ++k) {
        ocs::SphericalDirection dir = ocs::random_direction(rng);
        ocs::RayProbe pr = ocs::probe_direction(w, dir);
        REQUIRE(pr.solver_status == ocs::LpStatus::optimal);
        CHECK(pr.max_violation <= 3e-9 * 100.0);
        CHECK(pr.scale > 0.0);
        // structural sparsity from the 3-row basis
        CHECK(pr.profile.fractional_bins.size() <= 3);
        // bounds within tolerance
        for (double v : pr.rho.values) {
            CHECK(v >= -3e-9);
            CHECK(v <= 1.0 + 3e-9);
        }
    }
}

TEST_CASE("scaling the target leaves the surface point unchanged") {
    const ocs::WeightedCmf& w = testutil::wcmf_ee_1nm();
    ocs::Tristimulus targ = ocs::direction_to_target(w, {2.1, 1.0});
    ocs::RayProbe a = ocs::probe_ray(w, targ);
    ocs::Tristimulus scaled = w.gray50 + (targ - w.gray50) * 4.0;
    ocs::RayProbe b = ocs::probe_ray(w, scaled);
    REQUIRE(a.solver_status == ocs::LpStatus::optimal);
    REQUIRE(b.solver_status == ocs::LpStatus::optimal);
    CHECK(b.scale == Catch::Approx(a.scale / 4.0).epsilon(1e-9));
    CHECK(ocs::max_abs(a.xyz_opt - b.xyz_opt) <= 1e-6);
}

TEST_CASE("degenerate probe target is rejected") {
    const ocs::WeightedCmf& w = testutil::wcmf_ee_1nm();
    CHECK_THROWS_AS(ocs::probe_ray(w, w.gray50), ocs::argument_error);
}

TEST_CASE("count_transitions on the named examples") {
    CHECK(ocs::count_transitions(make_rho({1, 1, 1, 1})).count == 0);
    CHECK(ocs::count_transitions(make_rho({1, 1, 1, 1})).kind == ocs::ProfileKind::constant);

    ocs::TransitionProfile band = ocs::count_transitions(make_rho({0, 0, 0.4, 1, 1, 0.7, 0, 0}));
    CHECK(band.count == 2);
    CHECK(band.kind == ocs::ProfileKind::type_i_like);
    CHECK(band.fractional_bins.size() == 2);

    ocs::TransitionProfile dip = ocs::count_transitions(make_rho({1, 1, 0.3, 1, 1}));
    CHECK(dip.count == 2);
    CHECK(dip.kind == ocs::ProfileKind::type_ii_like);

    ocs::TransitionProfile four = ocs::count_transitions(make_rho({0, 0, 1, 1, 0, 0.6, 1, 0, 0}));
    CHECK(four.count == 4);
}

TEST_CASE("count_transitions edge and cluster conventions") {
    // leading fractional bin mirrors the adjacent run level: still 2 transitions
    CHECK(ocs::count_transitions(make_rho({0.5, 1, 1, 1})).count == 2);
    // non-monotone fractional cluster between unequal runs adds a reversal
    CHECK(ocs::count_transitions(make_rho({0, 0, 0.4, 0.2, 1, 1})).count == 3);
    // monotone consecutive fractional bins collapse to one transition
    CHECK(ocs::count_transitions(make_rho({0, 0, 0.3, 0.7, 1, 1})).count == 1);
    // all-fractional input degenerates to constant
    CHECK(ocs::count_transitions(make_rho({0.5, 0.4, 0.6})).kind == ocs::ProfileKind::constant);
}

TEST_CASE("count_transitions matches constructed ground truth") {
    std::mt19937_64 rng(31337);
    for (int trial = 0; trial < 200; ++trial) {
        int want = static_cast<int>(ocs::unit_double(rng) * 6);
        BuiltCurve built = build_curve(rng, want, 80);
        ocs::TransitionProfile prof = ocs::count_transitions(built.rho);
        CHECK(prof.count == built.transitions);
    }
}

TEST_CASE("parity invariant: equal end levels give even counts") {
    std::mt19937_64 rng(8080);
    for (int trial = 0; trial < 100; ++trial) {
        BuiltCurve built = build_curve(rng, static_cast<int>(ocs::unit_double(rng) * 5), 60);
        ocs::TransitionProfile prof = ocs::count_transitions(built.rho);
        // recover first/last definite levels
        int first = -1, last = -1;
        for (double v : built.rho.values) {
            if (v <= 1e-6 || v >= 1 - 1e-6) {
                if (first < 0) first = v >= 0.5;
                last = v >= 0.5;
            }
        }
        if (first >= 0) {
            CHECK((prof.count % 2 == 0) == (first == last));
        }
    }
}

TEST_CASE("zero-power illuminant bins never add transitions") {
    // synthetic grid whose illuminant is dark below 420 nm: the reflectance
    // there is unconstrained and must extend the first live bin
    ocs::CmfSet cmf;
    cmf.grid = {400.0, 10.0, 8};
    cmf.values = {{0.2, 0.1, 0.9}, {0.3, 0.2, 0.8}, {0.4, 0.5, 0.4}, {0.5, 0.7, 0.2},
                  {0.6, 0.8, 0.1}, {0.5, 0.6, 0.05}, {0.3, 0.3, 0.0}, {0.1, 0.1, 0.0}};
    ocs::Illuminant il;
    il.grid = cmf.grid;
    il.power = {0.0, 0.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
    ocs::WeightedCmf w = ocs::weight_cmf(cmf, ocs::normalize_illuminant(il, cmf));
    std::mt19937_64 rng(17);
    for (int k = 0; k < 20; ++k) {
        ocs::RayProbe pr = ocs::probe_direction(w, ocs::random_direction(rng));
        if (pr.solver_status != ocs::LpStatus::optimal) continue;
        CHECK(pr.rho.values[0] == pr.rho.values[2]);
        CHECK(pr.rho.values[1] == pr.rho.values[2]);
    }
}

TEST_CASE("complement flips kind and preserves count") {
    std::mt19937_64 rng(606);
    for (int trial = 0; trial < 50; ++trial) {
        BuiltCurve built = build_curve(rng, static_cast<int>(ocs::unit_double(rng) * 5), 60);
        ocs::TransitionProfile a = ocs::count_transitions(built.rho);
        ocs::Reflectance comp = ocs::complement(built.rho);
        ocs::TransitionProfile b = ocs::count_transitions(comp);
        CHECK(a.count == b.count);
        if (a.kind == ocs::ProfileKind::type_i_like) CHECK(b.kind == ocs::ProfileKind::type_ii_like);
        if (a.kind == ocs::ProfileKind::type_ii_like) CHECK(b.kind == ocs::ProfileKind::type_i_like);
    }
    // involution
    ocs::Reflectance r = make_rho({0.1, 0.9, 0.5});
    ocs::Reflectance rr = ocs::complement(ocs::complement(r));
    for (std::size_t i = 0; i < r.values.size(); ++i)
        CHECK(rr.values[i] == Catch::Approx(r.values[i]).margin(1e-15));
}
