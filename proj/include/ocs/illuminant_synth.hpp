#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "ocs/spectral.hpp"

namespace ocs {

struct ChromaticityTarget {
    double x = 0.0;
    double y = 0.0;
    std::string label;
};

/// Smoothest-spectrum synthesis result. The illuminant is scaled to a
/// maximum value of 1 and is NOT yet normalized against a CMF set.
struct SmoothestResult {
    Illuminant illuminant;
    double min_power = 0.0;             // of the returned spectrum, after scaling
    double unconstrained_min = 0.0;     // min of the unconstrained solution (pre-scale)
    double constraint_residual = 0.0;   // relative, before scaling
    double stationarity_residual = 0.0; // relative projection residual of the gradient
    bool nonneg_active_set = false;
    int zero_bins = 0;
};

namespace detail {

inline Eigen::Vector3d target_xyz(const ChromaticityTarget& t) {
    if (!(t.x > 0.0) || !(t.y > 0.0) || !(t.x + t.y < 1.0))
        throw argument_error("chromaticity target must satisfy x > 0, y > 0, x + y < 1");
    return {t.x / t.y * 100.0, 100.0, (1.0 - t.x - t.y) / t.y * 100.0};
}

inline Eigen::MatrixXd cmf_matrix(const CmfSet& cmf) {
    Eigen::MatrixXd A(cmf.grid.count, 3);
    for (int i = 0; i < cmf.grid.count; ++i)
        for (int j = 0; j < 3; ++j) A(i, j) = cmf.values[i][j];
    return A;
}

// Roughness Hessian 2 D'D for the first-difference operator D.
inline Eigen::MatrixXd roughness_hessian(int n) {
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i + 1 < n; ++i) {
        H(i, i) += 2.0;
        H(i + 1, i + 1) += 2.0;
        H(i, i + 1) -= 2.0;
        H(i + 1, i) -= 2.0;
    }
    return H;
}

// Solves the equality-constrained smoothest problem restricted to the free
// bins (s = 0 elsewhere). Returns false when the KKT system is singular.
inline bool solve_restricted(const Eigen::MatrixXd& H, const Eigen::MatrixXd& A,
                             const Eigen::Vector3d& b, const std::vector<int>& free_bins,
                             Eigen::VectorXd& s_free, Eigen::Vector3d& lambda) {
    const int f = static_cast<int>(free_bins.size());
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(f + 3, f + 3);
    for (int r = 0; r < f; ++r)
        for (int c = 0; c < f; ++c) K(r, c) = H(free_bins[r], free_bins[c]);
    for (int r = 0; r < f; ++r)
        for (int c = 0; c < 3; ++c) {
            K(r, f + c) = A(free_bins[r], c);
            K(f + c, r) = A(free_bins[r], c);
        }
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(f + 3);
    rhs.segment(f, 3) = b;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(K);
    if (!lu.isInvertible()) return false;
    Eigen::VectorXd sol = lu.solve(rhs);
    s_free = sol.head(f);
    lambda = sol.segment(f, 3);
    return true;
}

inline double stationarity_resid(const Eigen::MatrixXd& H, const Eigen::MatrixXd& A,
                                 const Eigen::VectorXd& s) {
    // residual of projecting grad = H s onto the column space of A
    Eigen::VectorXd grad = H * s;
    Eigen::Vector3d mu = (A.transpose() * A).ldlt().solve(A.transpose() * grad);
    double num = (grad - A * mu).norm();
    double den = std::max(grad.norm(), 1e-30);
    return num / den;
}

}  // namespace detail

/// Smoothest spectrum with the prescribed chromaticity: minimize the summed
/// squared first differences subject to A's = XYZ_target, solved through the
/// stationarity system of the equality-constrained quadratic program. The
/// result may dip negative for saturated targets; min_power reports how far.
inline SmoothestResult smoothest_spectrum(const CmfSet& cmf, const ChromaticityTarget& target) {
    const int n = cmf.grid.count;
    Eigen::Vector3d b = detail::target_xyz(target);
    Eigen::MatrixXd A = detail::cmf_matrix(cmf);
    Eigen::MatrixXd H = detail::roughness_hessian(n);
    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    Eigen::VectorXd s;
    Eigen::Vector3d lambda;
    if (!detail::solve_restricted(H, A, b, all, s, lambda))
        throw geometry_error("smoothest-spectrum stationarity system is singular");

    SmoothestResult out;
    out.unconstrained_min = s.minCoeff();
    out.constraint_residual = (A.transpose() * s - b).norm() / b.norm();
    out.stationarity_residual = detail::stationarity_resid(H, A, s);
    double mx = s.maxCoeff();
    if (!(mx > 0.0)) throw geometry_error("smoothest spectrum has non-positive maximum");
    out.illuminant.grid = cmf.grid;
    out.illuminant.power.resize(n);
    for (int i = 0; i < n; ++i) out.illuminant.power[i] = s(i) / mx;
    out.min_power = out.unconstrained_min / mx;
    return out;
}

/// Variant with s >= 0 enforced by a primal active set (needed for saturated
/// chromaticities where the unconstrained solution dips negative, which would
/// make the downstream object color solid meaningless). Verifies the KKT
/// conditions before returning.
inline SmoothestResult smoothest_spectrum_nonneg(const CmfSet& cmf,
                                                 const ChromaticityTarget& target) {
    const int n = cmf.grid.count;
    Eigen::Vector3d b = detail::target_xyz(target);
    Eigen::MatrixXd A = detail::cmf_matrix(cmf);
    Eigen::MatrixXd H = detail::roughness_hessian(n);

    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    Eigen::VectorXd s;
    Eigen::Vector3d lambda;
    if (!detail::solve_restricted(H, A, b, all, s, lambda))
        throw geometry_error("smoothest-spectrum stationarity system is singular");
    double unconstrained_min = s.minCoeff();

    std::vector<char> zeroed(n, 0), banned(n, 0);
    if (unconstrained_min < -1e-12) {
        // Primal active set. The restricted KKT system returns lambda with
        // H s_F + A_F lambda = 0, so the sign-correct multiplier of a zeroed
        // bin is mu_i = (H s)_i + (A lambda)_i, nonnegative at the optimum.
        // A released bin whose candidate immediately dips negative again is
        // re-zeroed and banned, which bounds the release count.
        Eigen::VectorXd cur;
        bool have_cur = false;
        int last_release = -1;
        const int max_outer = 10 * n;
        int outer = 0;
        for (;; ++outer) {
            if (outer >= max_outer)
                throw geometry_error("nonnegative smoothest spectrum did not converge");
            std::vector<int> free_bins;
            for (int i = 0; i < n; ++i)
                if (!zeroed[i]) free_bins.push_back(i);
            if (static_cast<int>(free_bins.size()) < 3)
                throw geometry_error("nonnegative smoothest spectrum: active set exhausted");
            Eigen::VectorXd sf;
            if (!detail::solve_restricted(H, A, b, free_bins, sf, lambda))
                throw geometry_error("nonnegative smoothest spectrum: singular subsystem");
            Eigen::VectorXd cand = Eigen::VectorXd::Zero(n);
            for (std::size_t k = 0; k < free_bins.size(); ++k) cand(free_bins[k]) = sf(k);

            double min_free = 0.0;
            for (int i : free_bins) min_free = std::min(min_free, cand(i));
            if (min_free >= -1e-11 * std::max(1.0, cand.maxCoeff())) {
                cur = cand.cwiseMax(0.0);
                have_cur = true;
                last_release = -1;
                Eigen::VectorXd mu = H * cur + A * lambda;
                int release = -1;
                double worst = -1e-8 * std::max(1.0, (H * cur).cwiseAbs().maxCoeff());
                for (int i = 0; i < n; ++i) {
                    if (!zeroed[i] || banned[i]) continue;
                    if (mu(i) < worst) {
                        worst = mu(i);
                        release = i;
                    }
                }
                if (release < 0) break;
                zeroed[release] = 0;
                last_release = release;
                continue;
            }
            if (!have_cur) {
                // still repairing the clipped start: zero every violating bin
                for (int i : free_bins)
                    if (cand(i) < 0.0) zeroed[i] = 1;
                continue;
            }
            // step from the feasible iterate toward the candidate
            double t = 1.0;
            for (int i : free_bins)
                if (cand(i) < 0.0 && cur(i) > cand(i)) t = std::min(t, cur(i) / (cur(i) - cand(i)));
            if (t <= 1e-14 && last_release >= 0 && cand(last_release) < 0.0) {
                zeroed[last_release] = 1;
                banned[last_release] = 1;
                last_release = -1;
                continue;
            }
            cur += t * (cand - cur);
            for (int i : free_bins)
                if (cur(i) <= 1e-13 * std::max(1.0, cur.maxCoeff())) {
                    cur(i) = 0.0;
                    zeroed[i] = 1;
                }
        }
        s = cur.cwiseMax(0.0);
    }

    SmoothestResult out;
    out.nonneg_active_set = unconstrained_min < -1e-12;
    out.unconstrained_min = unconstrained_min;
    out.zero_bins = static_cast<int>(std::count(zeroed.begin(), zeroed.end(), 1));
    out.constraint_residual = (A.transpose() * s - b).norm() / b.norm();
    double mx = s.maxCoeff();
    if (!(mx > 0.0)) throw geometry_error("smoothest spectrum has non-positive maximum");
    out.stationarity_residual = detail::stationarity_resid(H, A, s);
    out.illuminant.grid = cmf.grid;
    out.illuminant.power.resize(n);
    for (int i = 0; i < n; ++i) out.illuminant.power[i] = s(i) / mx;
    out.min_power = s.minCoeff() / mx;
    return out;
}

/// Chromaticity of a reflectance sample under a weighted CMF set, used to
/// derive illuminant targets from shipped spectral data.
inline ChromaticityTarget chromaticity_of_sample(const WeightedCmf& wcmf,
                                                 const std::vector<double>& reflectance,
                                                 const std::string& label = "") {
    Tristimulus t = tristimulus(wcmf, reflectance);
    double s = t.X + t.Y + t.Z;
    if (!(s > 0.0)) throw data_error("sample has non-positive tristimulus sum");
    return {t.X / s, t.Y / s, label};
}

}  // namespace ocs
