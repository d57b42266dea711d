#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "ocs/lp.hpp"
#include "ocs/random.hpp"
#include "oracles.hpp"

namespace {

ocs::LpProblem make_problem(int rows, int vars) {
    ocs::LpProblem p;
    p.num_rows = rows;
    p.num_vars = vars;
    p.objective.assign(vars, 0.0);
    p.columns.assign(static_cast<std::size_t>(rows) * vars, 0.0);
    p.rhs.assign(rows, 0.0);
    p.lower.assign(vars, 0.0);
    p.upper.assign(vars, 1.0);
    return p;
}

}  // namespace

TEST_CASE("fully determined single variable") {
    // minimize -x s.t. x = 0.5, 0 <= x <= 1
    ocs::LpProblem p = make_problem(1, 1);
    p.objective[0] = -1.0;
    p.columns[0] = 1.0;
    p.rhs[0] = 0.5;
    ocs::LpSolution s = ocs::solve_lp(p);
    REQUIRE(s.status == ocs::LpStatus::optimal);
    CHECK(s.x[0] == Catch::Approx(0.5).margin(1e-12));
    CHECK(s.objective_value == Catch::Approx(-0.5).margin(1e-12));
}

TEST_CASE("two variables on a budget line") {
    // minimize -(x+y) s.t. x + y = 1, box [0,1]^2 -> objective -1
    ocs::LpProblem p = make_problem(1, 2);
    p.objective = {-1.0, -1.0};
    p.columns = {1.0, 1.0};
    p.rhs[0] = 1.0;
    ocs::LpSolution s = ocs::solve_lp(p);
    REQUIRE(s.status == ocs::LpStatus::optimal);
    CHECK(s.objective_value == Catch::Approx(-1.0).margin(1e-12));
    CHECK(s.max_constraint_violation <= 3e-9);
}

TEST_CASE("infeasible and unbounded problems are reported") {
    ocs::LpProblem p = make_problem(1, 2);
    p.objective = {1.0, 1.0};
    p.columns = {1.0, 1.0};
    p.rhs[0] = 5.0;  // x + y = 5 impossible in [0,1]^2
    CHECK(ocs::solve_lp(p).status == ocs::LpStatus::infeasible);

    ocs::LpProblem q = make_problem(1, 2);
    q.objective = {0.0, -1.0};           // push y up
    q.columns = {1.0, 0.0};              // constraint only pins x
    q.rhs[0] = 0.5;
    q.upper[1] = ocs::lp_inf;            // y unbounded above
    CHECK(ocs::solve_lp(q).status == ocs::LpStatus::unbounded);
}

TEST_CASE("free variables and bound flips") {
    // minimize c subject to x - c = 0.3, x in [0,1], c free -> c = -0.3 + ... :
    // optimum pushes x to 0, c = -0.3
    ocs::LpProblem p = make_problem(1, 2);
    p.objective = {0.0, 1.0};
    p.columns = {1.0, -1.0};
    p.rhs[0] = 0.3;
    p.lower[1] = -ocs::lp_inf;
    p.upper[1] = ocs::lp_inf;
    ocs::LpSolution s = ocs::solve_lp(p);
    REQUIRE(s.status == ocs::LpStatus::optimal);
    CHECK(s.x[0] == Catch::Approx(0.0).margin(1e-12));
    CHECK(s.x[1] == Catch::Approx(-0.3).margin(1e-12));
}

TEST_CASE("agrees exactly with exhaustive vertex enumeration on random 3x6 boxes") {
    std::mt19937_64 rng(20210514);
    int compared = 0;
    for (int trial = 0; trial < 100; ++trial) {
        ocs::LpProblem p = make_problem(3, 6);
        for (auto& v : p.columns) v = 2.0 * ocs::unit_double(rng) - 1.0;
        for (auto& v : p.objective) v = 2.0 * ocs::unit_double(rng) - 1.0;
        for (int j = 0; j < 6; ++j) {
            p.lower[j] = -ocs::unit_double(rng);
            p.upper[j] = p.lower[j] + 0.2 + 1.5 * ocs::unit_double(rng);
        }
        // rhs from an interior point, so the problem is feasible
        for (int r = 0; r < 3; ++r) {
            double s = 0.0;
            for (int j = 0; j < 6; ++j) {
                double mid = 0.5 * (p.lower[j] + p.upper[j]);
                s += p.col(j, r) * mid;
            }
            p.rhs[r] = s;
        }
        oracle::EnumResult ref = oracle::enumerate_vertices(p);
        ocs::LpSolution got = ocs::solve_lp(p);
        REQUIRE(ref.feasible);
        REQUIRE(got.status == ocs::LpStatus::optimal);
        CHECK(std::abs(got.objective_value - ref.objective) <= 1e-10);
        ++compared;
    }
    CHECK(compared == 100);
}

TEST_CASE("basic solution structure: at most num_rows variables off their bounds") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 25; ++trial) {
        ocs::LpProblem p = make_problem(3, 40);
        for (auto& v : p.columns) v = 2.0 * ocs::unit_double(rng) - 1.0;
        for (auto& v : p.objective) v = 2.0 * ocs::unit_double(rng) - 1.0;
        for (int r = 0; r < 3; ++r) {
            double s = 0.0;
            for (int j = 0; j < 40; ++j) s += p.col(j, r) * 0.5;
            p.rhs[r] = s;
        }
        ocs::LpSolution s = ocs::solve_lp(p);
        REQUIRE(s.status == ocs::LpStatus::optimal);
        int inside = 0;
        for (int j = 0; j < 40; ++j) {
            if (s.x[j] > p.lower[j] + 3e-9 && s.x[j] < p.upper[j] - 3e-9) ++inside;
        }
        CHECK(inside <= 3);
        CHECK(s.max_constraint_violation <= 3e-9);
    }
}

TEST_CASE("reduced costs certify optimality") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 25; ++trial) {
        ocs::LpProblem p = make_problem(3, 30);
        for (auto& v : p.columns) v = 2.0 * ocs::unit_double(rng) - 1.0;
        for (auto& v : p.objective) v = 2.0 * ocs::unit_double(rng) - 1.0;
        for (int r = 0; r < 3; ++r) {
            double s = 0.0;
            for (int j = 0; j < 30; ++j) s += p.col(j, r) * 0.5;
            p.rhs[r] = s;
        }
        ocs::LpSolution s = ocs::solve_lp(p);
        REQUIRE(s.status == ocs::LpStatus::optimal);
        REQUIRE(s.reduced_costs.size() == 30);
        for (int j = 0; j < 30; ++j) {
            bool at_lower = std::abs(s.x[j] - p.lower[j]) <= 3e-9;
            bool at_upper = std::abs(s.x[j] - p.upper[j]) <= 3e-9;
            if (at_lower && !at_upper) CHECK(s.reduced_costs[j] >= -1e-9);
            if (at_upper && !at_lower) CHECK(s.reduced_costs[j] <= 1e-9);
        }
    }
}

TEST_CASE("determinism: identical problems give identical solutions") {
    std::mt19937_64 rng(1234);
    ocs::LpProblem p = make_problem(3, 50);
    for (auto& v : p.columns) v = 2.0 * ocs::unit_double(rng) - 1.0;
    for (auto& v : p.objective) v = 2.0 * ocs::unit_double(rng) - 1.0;
    for (int r = 0; r < 3; ++r) {
        double s = 0.0;
        for (int j = 0; j < 50; ++j) s += p.col(j, r) * 0.5;
        p.rhs[r] = s;
    }
    ocs::LpSolution a = ocs::solve_lp(p);
    ocs::LpSolution b = ocs::solve_lp(p);
    REQUIRE(a.status == b.status);
    CHECK(a.iterations == b.iterations);
    CHECK(a.x == b.x);
}

TEST_CASE("degenerate problems terminate") {
    // many variables, rhs forcing lots of ties
    ocs::LpProblem p = make_problem(3, 20);
    for (int j = 0; j < 20; ++j)
        for (int r = 0; r < 3; ++r) p.columns[static_cast<std::size_t>(j) * 3 + r] = (j + r) % 2;
    p.objective.assign(20, -1.0);
    p.rhs = {0.0, 0.0, 0.0};
    ocs::LpSolution s = ocs::solve_lp(p);
    CHECK((s.status == ocs::LpStatus::optimal || s.status == ocs::LpStatus::infeasible));
}
