#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "ocs/core.hpp"

namespace ocs {

constexpr double lp_inf = std::numeric_limits<double>::infinity();

/// minimize objective'x  subject to  columns x = rhs,  lower <= x <= upper.
/// Dense, column-major; built for problems with very few equality rows and
/// many box-bounded variables.
struct LpProblem {
    int num_rows = 0;
    int num_vars = 0;
    std::vector<double> objective;  // num_vars
    std::vector<double> columns;    // num_vars * num_rows, column j at [j*num_rows]
    std::vector<double> rhs;        // num_rows
    std::vector<double> lower;      // num_vars, -inf allowed
    std::vector<double> upper;      // num_vars, +inf allowed

    double col(int j, int r) const { return columns[static_cast<std::size_t>(j) * num_rows + r]; }
};

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

inline const char* to_string(LpStatus s) {
    switch (s) {
        case LpStatus::optimal: return "optimal";
        case LpStatus::infeasible: return "infeasible";
        case LpStatus::unbounded: return "unbounded";
        default: return "iteration-limit";
    }
}

struct LpSolution {
    std::vector<double> x;
    double objective_value = 0.0;
    LpStatus status = LpStatus::iteration_limit;
    int iterations = 0;
    double max_constraint_violation = 0.0;
    // diagnostics beyond the basic contract
    std::vector<int> basis;            // variable index per equality row
    std::vector<double> reduced_costs; // per variable, valid when optimal
};

struct SolverConfig {
    double optimality_tol = 1e-9;
    double constraint_tol = 3e-9;
    int max_iterations = 0;  // 0 = 10 * num_vars
};

/// Revised simplex with explicit lower/upper bound handling.
///
/// Variables are nonbasic at a finite bound (or at zero when free); the basis
/// is num_rows wide and its inverse is recomputed from scratch every pivot,
/// which for the 3x3/4x4 bases of this problem family is both cheap and the
/// most numerically conservative choice. Dantzig pricing with a Bland's-rule
/// fallback after 50 degenerate pivots guarantees termination. Ratio-test
/// ties break to the smallest variable index.
class BoundedSimplex {
public:
    explicit BoundedSimplex(SolverConfig config = {}) : cfg_(config) {}

    LpSolution solve(const LpProblem& p) {
        const int m = p.num_rows;
        const int n = p.num_vars;
        LpSolution out;
        if (m <= 0 || n <= 0 || static_cast<int>(p.columns.size()) != m * n ||
            static_cast<int>(p.rhs.size()) != m)
            throw argument_error("LpProblem dimensions are inconsistent");
        for (int j = 0; j < n; ++j)
            if (p.lower[j] > p.upper[j]) throw argument_error("LpProblem has lower > upper bound");

        init(p);
        max_iter_ = cfg_.max_iterations > 0 ? cfg_.max_iterations : 10 * (n + m);

        bool feasible = try_crash(p);
        if (!feasible) {
            setup_artificial_basis(p);
            RunResult r1 = run(p, /*phase1=*/true);
            if (r1 == RunResult::iteration_limit) return finish(p, out, LpStatus::iteration_limit);
            double infeas = phase1_objective(p);
            if (infeas > cfg_.constraint_tol * std::max(1.0, rhs_scale_))
                return finish(p, out, LpStatus::infeasible);
            expel_artificials(p);
        }
        // fix artificials at zero for phase 2
        for (int j = n; j < n + m; ++j) {
            lo_[j] = 0.0;
            up_[j] = 0.0;
        }
        RunResult r2 = run(p, /*phase1=*/false);
        if (r2 == RunResult::iteration_limit) return finish(p, out, LpStatus::iteration_limit);
        if (r2 == RunResult::unbounded) return finish(p, out, LpStatus::unbounded);
        return finish(p, out, LpStatus::optimal);
    }

private:
    enum class Loc : unsigned char { at_lower, at_upper, basic, free_zero };
    enum class RunResult { optimal, unbounded, iteration_limit };

    SolverConfig cfg_;
    int m_ = 0, n_ = 0, total_ = 0, max_iter_ = 0, iters_ = 0;
    double rhs_scale_ = 1.0;
    std::vector<Loc> loc_;
    std::vector<int> basis_;
    std::vector<double> art_cols_;  // m artificial columns (diagonal sign), art j has col sign_[j]*e_j
    std::vector<double> art_sign_;
    std::vector<double> binv_;      // m*m row-major
    std::vector<double> xb_, y_, w_, cost_;

    double column(const LpProblem& p, int j, int r) const {
        return j < n_ ? p.col(j, r) : (j - n_ == r ? art_sign_[j - n_] : 0.0);
    }

    double bound_value(int j) const {
        switch (loc_[j]) {
            case Loc::at_lower: return lo_[j];
            case Loc::at_upper: return up_[j];
            default: return 0.0;
        }
    }

    std::vector<double> lo_, up_;

    void init(const LpProblem& p) {
        m_ = p.num_rows;
        n_ = p.num_vars;
        total_ = n_ + m_;
        iters_ = 0;
        loc_.assign(total_, Loc::at_lower);
        lo_.assign(total_, 0.0);
        up_.assign(total_, lp_inf);
        for (int j = 0; j < n_; ++j) {
            lo_[j] = p.lower[j];
            up_[j] = p.upper[j];
            bool lf = std::isfinite(lo_[j]), uf = std::isfinite(up_[j]);
            if (!lf && !uf)
                loc_[j] = Loc::free_zero;
            else if (lf && (!uf || std::abs(lo_[j]) <= std::abs(up_[j])))
                loc_[j] = Loc::at_lower;
            else
                loc_[j] = Loc::at_upper;
        }
        art_sign_.assign(m_, 1.0);
        basis_.clear();
        rhs_scale_ = 0.0;
        for (int r = 0; r < m_; ++r) rhs_scale_ = std::max(rhs_scale_, std::abs(p.rhs[r]));
        xb_.assign(m_, 0.0);
        y_.assign(m_, 0.0);
        w_.assign(m_, 0.0);
    }

    // Residual of the equality rows at the current nonbasic values.
    void nonbasic_residual(const LpProblem& p, std::vector<double>& r) const {
        r.assign(m_, 0.0);
        for (int rr = 0; rr < m_; ++rr) r[rr] = p.rhs[rr];
        for (int j = 0; j < total_; ++j) {
            if (loc_[j] == Loc::basic) continue;
            double v = bound_value(j);
            if (v == 0.0) continue;
            for (int rr = 0; rr < m_; ++rr) r[rr] -= column(p, j, rr) * v;
        }
    }

    // Gauss-Jordan inverse of the current basis. Returns false when singular.
    bool refactorize(const LpProblem& p) {
        std::vector<double> a(static_cast<std::size_t>(m_) * m_);
        binv_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
        for (int c = 0; c < m_; ++c)
            for (int r = 0; r < m_; ++r) a[r * m_ + c] = column(p, basis_[c], r);
        for (int r = 0; r < m_; ++r) binv_[r * m_ + r] = 1.0;
        for (int c = 0; c < m_; ++c) {
            int piv = c;
            for (int r = c + 1; r < m_; ++r)
                if (std::abs(a[r * m_ + c]) > std::abs(a[piv * m_ + c])) piv = r;
            if (std::abs(a[piv * m_ + c]) < 1e-13) return false;
            if (piv != c)
                for (int k = 0; k < m_; ++k) {
                    std::swap(a[piv * m_ + k], a[c * m_ + k]);
                    std::swap(binv_[piv * m_ + k], binv_[c * m_ + k]);
                }
            double inv = 1.0 / a[c * m_ + c];
            for (int k = 0; k < m_; ++k) {
                a[c * m_ + k] *= inv;
                binv_[c * m_ + k] *= inv;
            }
            for (int r = 0; r < m_; ++r) {
                if (r == c) continue;
                double f = a[r * m_ + c];
                if (f == 0.0) continue;
                for (int k = 0; k < m_; ++k) {
                    a[r * m_ + k] -= f * a[c * m_ + k];
                    binv_[r * m_ + k] -= f * binv_[c * m_ + k];
                }
            }
        }
        return true;
    }

    void compute_xb(const LpProblem& p) {
        std::vector<double> r;
        nonbasic_residual(p, r);
        for (int i = 0; i < m_; ++i) {
            double s = 0.0;
            for (int k = 0; k < m_; ++k) s += binv_[i * m_ + k] * r[k];
            xb_[i] = s;
        }
    }

    // Crash: greedily pick well-conditioned columns (free variables first) and
    // accept the basis only if the implied basic values are within bounds.
    bool try_crash(const LpProblem& p) {
        std::vector<int> cand;
        for (int j = 0; j < n_; ++j)
            if (loc_[j] == Loc::free_zero) cand.push_back(j);
        std::vector<std::vector<double>> span;
        std::vector<int> chosen;
        auto residual_norm = [&](int j, std::vector<double>& res) {
            res.resize(m_);
            for (int r = 0; r < m_; ++r) res[r] = column(p, j, r);
            for (const auto& s : span) {
                double d = 0.0, nn = 0.0;
                for (int r = 0; r < m_; ++r) {
                    d += res[r] * s[r];
                    nn += s[r] * s[r];
                }
                if (nn > 0) {
                    double f = d / nn;
                    for (int r = 0; r < m_; ++r) res[r] -= f * s[r];
                }
            }
            double sq = 0.0;
            for (int r = 0; r < m_; ++r) sq += res[r] * res[r];
            return std::sqrt(sq);
        };
        std::vector<double> res;
        for (int j : cand) {
            if (static_cast<int>(chosen.size()) == m_) break;
            if (residual_norm(j, res) > 1e-8) {
                chosen.push_back(j);
                span.push_back(res);
            }
        }
        for (int pass = 0; pass < m_ && static_cast<int>(chosen.size()) < m_; ++pass) {
            int best = -1;
            double best_r = 1e-8;
            std::vector<double> best_res;
            for (int j = 0; j < n_; ++j) {
                if (std::find(chosen.begin(), chosen.end(), j) != chosen.end()) continue;
                double rn = residual_norm(j, res);
                if (rn > best_r) {
                    best_r = rn;
                    best = j;
                    best_res = res;
                }
            }
            if (best < 0) break;
            chosen.push_back(best);
            span.push_back(best_res);
        }
        if (static_cast<int>(chosen.size()) != m_) return false;
        basis_ = chosen;
        for (int j : chosen) loc_[j] = Loc::basic;
        if (!refactorize(p)) {
            revert_crash();
            return false;
        }
        compute_xb(p);
        for (int i = 0; i < m_; ++i) {
            int b = basis_[i];
            double slack = cfg_.constraint_tol * std::max(1.0, rhs_scale_);
            if (xb_[i] < lo_[b] - slack || xb_[i] > up_[b] + slack) {
                revert_crash();
                return false;
            }
        }
        return true;
    }

    void revert_crash() {
        for (int j : basis_) {
            bool lf = std::isfinite(lo_[j]), uf = std::isfinite(up_[j]);
            if (!lf && !uf)
                loc_[j] = Loc::free_zero;
            else if (lf && (!uf || std::abs(lo_[j]) <= std::abs(up_[j])))
                loc_[j] = Loc::at_lower;
            else
                loc_[j] = Loc::at_upper;
        }
        basis_.clear();
    }

    void setup_artificial_basis(const LpProblem& p) {
        std::vector<double> r;
        basis_.clear();
        nonbasic_residual(p, r);
        for (int i = 0; i < m_; ++i) {
            art_sign_[i] = (r[i] >= 0.0) ? 1.0 : -1.0;
            basis_.push_back(n_ + i);
            loc_[n_ + i] = Loc::basic;
            lo_[n_ + i] = 0.0;
            up_[n_ + i] = lp_inf;
        }
    }

    double phase1_objective(const LpProblem& p) {
        refactorize(p);
        compute_xb(p);
        double s = 0.0;
        for (int i = 0; i < m_; ++i)
            if (basis_[i] >= n_) s += std::abs(xb_[i]);
        return s;
    }

    // Pivot zero-valued artificials out of the basis where a structural
    // column can replace them; rows with no candidate are redundant and the
    // artificial stays pinned at zero.
    void expel_artificials(const LpProblem& p) {
        for (int i = 0; i < m_; ++i) {
            if (basis_[i] < n_) continue;
            refactorize(p);
            int pick = -1;
            double best = 1e-7;
            for (int j = 0; j < n_; ++j) {
                if (loc_[j] == Loc::basic) continue;
                double wr = 0.0;
                for (int k = 0; k < m_; ++k) wr += binv_[i * m_ + k] * column(p, j, k);
                if (std::abs(wr) > best) {
                    best = std::abs(wr);
                    pick = j;
                }
            }
            if (pick < 0) continue;
            int art = basis_[i];
            basis_[i] = pick;
            loc_[pick] = Loc::basic;
            loc_[art] = Loc::at_lower;
        }
    }

    void build_cost(const LpProblem& p, bool phase1) {
        cost_.assign(total_, 0.0);
        if (phase1) {
            for (int j = n_; j < total_; ++j) cost_[j] = 1.0;
        } else {
            for (int j = 0; j < n_; ++j) cost_[j] = p.objective[j];
        }
    }

    RunResult run(const LpProblem& p, bool phase1) {
        build_cost(p, phase1);
        int degenerate_streak = 0;
        bool bland = false;
        // Price beyond the reported optimality tolerance: columns with tiny
        // norms (the spectrum tails) carry reduced costs between the noise
        // floor and optimality_tol, and resolving them picks the exact-arith
        // vertex instead of an alternate one with spurious transitions.
        const double pricing_tol = std::min(cfg_.optimality_tol, 1e-12);
        while (iters_ < max_iter_) {
            if (!refactorize(p)) return RunResult::iteration_limit;
            compute_xb(p);
            // y = B^-T c_B
            for (int k = 0; k < m_; ++k) {
                double s = 0.0;
                for (int i = 0; i < m_; ++i) s += binv_[i * m_ + k] * cost_[basis_[i]];
                y_[k] = s;
            }
            int q = -1;
            double best_viol = pricing_tol;
            int sigma = +1;
            for (int j = 0; j < total_; ++j) {
                if (loc_[j] == Loc::basic) continue;
                if (lo_[j] == up_[j]) continue;  // fixed
                double d = cost_[j];
                for (int r = 0; r < m_; ++r) d -= y_[r] * column(p, j, r);
                double viol = 0.0;
                int dir = 0;
                if (loc_[j] == Loc::at_lower) {
                    viol = -d;
                    dir = +1;
                } else if (loc_[j] == Loc::at_upper) {
                    viol = d;
                    dir = -1;
                } else {  // free at zero
                    viol = std::abs(d);
                    dir = d < 0 ? +1 : -1;
                }
                if (viol > best_viol) {
                    best_viol = viol;
                    q = j;
                    sigma = dir;
                    if (bland) break;  // smallest index wins under Bland
                }
            }
            if (q < 0) return RunResult::optimal;

            for (int r = 0; r < m_; ++r) {
                double s = 0.0;
                for (int k = 0; k < m_; ++k) s += binv_[r * m_ + k] * column(p, q, k);
                w_[r] = s;
            }
            // ratio test: entering moves by t >= 0 with sign sigma
            double t_best = lp_inf;
            int blocker = -1;      // basis row
            bool to_upper = false; // leaving variable lands at upper bound?
            const double piv_tol = 1e-11;
            const double tie_tol = 1e-10;
            for (int r = 0; r < m_; ++r) {
                double delta = -sigma * w_[r];  // d x_B[r] / dt
                int b = basis_[r];
                double t;
                bool hits_upper;
                if (delta > piv_tol && std::isfinite(up_[b])) {
                    t = (up_[b] - xb_[r]) / delta;
                    hits_upper = true;
                } else if (delta < -piv_tol && std::isfinite(lo_[b])) {
                    t = (lo_[b] - xb_[r]) / delta;
                    hits_upper = false;
                } else {
                    continue;
                }
                if (t < 0.0) t = 0.0;
                if (t < t_best - tie_tol) {
                    t_best = t;
                    blocker = r;
                    to_upper = hits_upper;
                } else if (t <= t_best + tie_tol && blocker >= 0 && b < basis_[blocker] &&
                           std::abs(w_[r]) >= 0.01 * std::abs(w_[blocker])) {
                    blocker = r;
                    to_upper = hits_upper;
                }
            }
            double span = up_[q] - lo_[q];
            bool flip = std::isfinite(span) && span < t_best - tie_tol;
            if (!flip && blocker < 0) return RunResult::unbounded;

            double step = flip ? span : t_best;
            if (step <= 1e-12 * (1.0 + std::abs(rhs_scale_)))
                ++degenerate_streak;
            else
                degenerate_streak = 0;
            if (degenerate_streak >= 50) bland = true;

            if (flip) {
                loc_[q] = (loc_[q] == Loc::at_lower) ? Loc::at_upper : Loc::at_lower;
            } else {
                int leaving = basis_[blocker];
                loc_[leaving] = to_upper ? Loc::at_upper : Loc::at_lower;
                basis_[blocker] = q;
                loc_[q] = Loc::basic;
            }
            ++iters_;
        }
        return RunResult::iteration_limit;
    }

    LpSolution finish(const LpProblem& p, LpSolution& out, LpStatus status) {
        out.status = status;
        out.iterations = iters_;
        out.x.assign(n_, 0.0);
        for (int j = 0; j < n_; ++j)
            if (loc_[j] != Loc::basic) out.x[j] = bound_value(j);
        if (!basis_.empty() && refactorize(p)) {
            compute_xb(p);
            for (int i = 0; i < m_; ++i)
                if (basis_[i] < n_) out.x[basis_[i]] = xb_[i];
            // one step of iterative refinement on the basic components
            std::vector<double> resid(m_, 0.0);
            for (int r = 0; r < m_; ++r) {
                double s = p.rhs[r];
                for (int j = 0; j < n_; ++j) s -= p.col(j, r) * out.x[j];
                for (int i = 0; i < m_; ++i)
                    if (basis_[i] >= n_) s -= column(p, basis_[i], r) * xb_[i];
                resid[r] = s;
            }
            for (int i = 0; i < m_; ++i) {
                if (basis_[i] >= n_) continue;
                double corr = 0.0;
                for (int k = 0; k < m_; ++k) corr += binv_[i * m_ + k] * resid[k];
                out.x[basis_[i]] += corr;
            }
        }
        out.objective_value = 0.0;
        for (int j = 0; j < n_; ++j) out.objective_value += p.objective[j] * out.x[j];
        double viol = 0.0;
        for (int r = 0; r < m_; ++r) {
            double s = -p.rhs[r];
            for (int j = 0; j < n_; ++j) s += p.col(j, r) * out.x[j];
            viol = std::max(viol, std::abs(s));
        }
        for (int j = 0; j < n_; ++j) {
            if (std::isfinite(p.lower[j])) viol = std::max(viol, p.lower[j] - out.x[j]);
            if (std::isfinite(p.upper[j])) viol = std::max(viol, out.x[j] - p.upper[j]);
        }
        out.max_constraint_violation = viol;
        out.basis = basis_;
        if (status == LpStatus::optimal && !basis_.empty()) {
            out.reduced_costs.assign(n_, 0.0);
            for (int k = 0; k < m_; ++k) {
                double s = 0.0;
                for (int i = 0; i < m_; ++i) {
                    double cb = basis_[i] < n_ ? p.objective[basis_[i]] : 0.0;
                    s += binv_[i * m_ + k] * cb;
                }
                y_[k] = s;
            }
            for (int j = 0; j < n_; ++j) {
                double d = p.objective[j];
                for (int r = 0; r < m_; ++r) d -= y_[r] * p.col(j, r);
                out.reduced_costs[j] = d;
            }
        }
        return out;
    }
};

/// Convenience wrapper for one-off solves.
inline LpSolution solve_lp(const LpProblem& problem, const SolverConfig& config = {}) {
    BoundedSimplex solver(config);
    return solver.solve(problem);
}

}  // namespace ocs
