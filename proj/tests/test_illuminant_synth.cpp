#include <catch2/catch_amalgamated.hpp>

#include <random>

#include <Eigen/Dense>

#include "ocs/illuminant_synth.hpp"
#include "ocs/random.hpp"
#include "test_util.hpp"

namespace {

Eigen::MatrixXd cmf_matrix(const ocs::CmfSet& cmf) {
    Eigen::MatrixXd A(cmf.grid.count, 3);
    for (int i = 0; i < cmf.grid.count; ++i)
        for (int j = 0; j < 3; ++j) A(i, j) = cmf.values[i][j];
    return A;
}

double roughness(const std::vector<double>& s) {
    double r = 0.0;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        double d = s[i + 1] - s[i];
        r += d * d;
    }
    return r;
}

ocs::ChromaticityTarget ee_white_target(const ocs::CmfSet& cmf) {
    double sx = 0, sy = 0, sz = 0;
    for (const auto& r : cmf.values) {
        sx += r[0];
        sy += r[1];
        sz += r[2];
    }
    double s = sx + sy + sz;
    return {sx / s, sy / s, "EE white"};
}

}  // namespace

TEST_CASE("flat spectrum at the equal-energy white chromaticity") {
    const ocs::CmfSet& cmf = testutil::cmf_1nm();
    ocs::SmoothestResult r = ocs::smoothest_spectrum(cmf, ee_white_target(cmf));
    double mx = *std::max_element(r.illuminant.power.begin(), r.illuminant.power.end());
    double mn = *std::min_element(r.illuminant.power.begin(), r.illuminant.power.end());
    CHECK(mx == Catch::Approx(1.0).margin(1e-12));
    CHECK(mx - mn <= 1e-8);
    CHECK(r.constraint_residual <= 1e-9);
}

TEST_CASE("constraint holds and the spectrum peaks at 1") {
    const ocs::CmfSet& cmf = testutil::cmf_1nm();
    ocs::ChromaticityTarget t{0.40, 0.38, "warm"};
    ocs::SmoothestResult r = ocs::smoothest_spectrum(cmf, t);
    CHECK(r.constraint_residual <= 1e-6);
    CHECK(*std::max_element(r.illuminant.power.begin(), r.illuminant.power.end()) ==
          Catch::Approx(1.0).margin(1e-12));
    // chromaticity of the synthesized illuminant equals the target
    Eigen::MatrixXd A = cmf_matrix(cmf);
    Eigen::VectorXd s(cmf.grid.count);
    for (int i = 0; i < cmf.grid.count; ++i) s(i) = r.illuminant.power[i];
    Eigen::Vector3d xyz = A.transpose() * s;
    double sum = xyz.sum();
    CHECK(xyz(0) / sum == Catch::Approx(t.x).margin(1e-9));
    CHECK(xyz(1) / sum == Catch::Approx(t.y).margin(1e-9));
}

TEST_CASE("stationarity certificate: gradient lies in the constraint row space") {
    const ocs::CmfSet& cmf = testutil::cmf_1nm();
    ocs::SmoothestResult r = ocs::smoothest_spectrum(cmf, {0.35, 0.40, ""});
    CHECK(r.stationarity_residual <= 1e-8);
}

TEST_CASE("optimality against random feasible perturbations") {
    const ocs::CmfSet& cmf = testutil::cmf_1nm();
    const int n = cmf.grid.count;
    ocs::SmoothestResult r = ocs::smoothest_spectrum(cmf, {0.31, 0.33, ""});
    Eigen::MatrixXd A = cmf_matrix(cmf);
    Eigen::Matrix3d AtA = (A.transpose() * A);
    double base = roughness(r.illuminant.power);
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i) v(i) = 2.0 * ocs::unit_double(rng) - 1.0;
        // project onto the null space of A'
        Eigen::Vector3d mu = AtA.ldlt().solve(A.transpose() * v);
        v -= A * mu;
        std::vector<double> pert(n);
        for (int i = 0; i < n; ++i) pert[i] = r.illuminant.power[i] + 0.01 * v(i);
        CHECK(roughness(pert) >= base - 1e-12);
    }
}

TEST_CASE("saturated yellow dips negative; the nonneg variant repairs it") {
    const ocs::CmfSet& cmf = testutil::cmf_1nm();
    ocs::ChromaticityTarget t{0.4791, 0.5012, "5Y 8/16"};
    ocs::SmoothestResult plain = ocs::smoothest_spectrum(cmf, t);
    CHECK(plain.min_power < -1e-6);  // the warning case the contract documents

    ocs::SmoothestResult nn = ocs::smoothest_spectrum_nonneg(cmf, t);
    CHECK(nn.nonneg_active_set);
    CHECK(nn.min_power >= 0.0);
    CHECK(nn.zero_bins > 0);
    CHECK(nn.constraint_residual <= 1e-6);
    // KKT: roughness cannot be improved by feasible perturbations that keep
    // the zero bins at zero
    Eigen::MatrixXd A = cmf_matrix(cmf);
    const int n = cmf.grid.count;
    std::vector<int> free_bins;
    for (int i = 0; i < n; ++i)
        if (nn.illuminant.power[i] > 0.0) free_bins.push_back(i);
    Eigen::MatrixXd Af(static_cast<int>(free_bins.size()), 3);
    for (std::size_t k = 0; k < free_bins.size(); ++k) Af.row(k) = A.row(free_bins[k]);
    Eigen::Matrix3d AtA = Af.transpose() * Af;
    double base = roughness(nn.illuminant.power);
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 10; ++trial) {
        Eigen::VectorXd v(static_cast<int>(free_bins.size()));
        for (int i = 0; i < v.size(); ++i) v(i) = 2.0 * ocs::unit_double(rng) - 1.0;
        Eigen::Vector3d mu = AtA.ldlt().solve(Af.transpose() * v);
        v -= Af * mu;
        // step small enough to stay nonnegative on the free bins
        double step = 1e-4;
        std::vector<double> pert = nn.illuminant.power;
        for (std::size_t k = 0; k < free_bins.size(); ++k) {
            pert[free_bins[k]] += step * v(static_cast<int>(k));
            if (pert[free_bins[k]] < 0.0) pert[free_bins[k]] = 0.0;
        }
        CHECK(roughness(pert) >= base - 1e-10);
    }
}

TEST_CASE("nonneg variant is a no-op when the plain solution is nonnegative") {
    const ocs::CmfSet& cmf = testutil::cmf_1nm();
    ocs::ChromaticityTarget t = ee_white_target(cmf);
    ocs::SmoothestResult nn = ocs::smoothest_spectrum_nonneg(cmf, t);
    CHECK_FALSE(nn.nonneg_active_set);
    CHECK(nn.zero_bins == 0);
}

TEST_CASE("invalid chromaticity targets are rejected") {
    const ocs::CmfSet& cmf = testutil::cmf_1nm();
    CHECK_THROWS_AS(ocs::smoothest_spectrum(cmf, {0.0, 0.5, ""}), ocs::argument_error);
    CHECK_THROWS_AS(ocs::smoothest_spectrum(cmf, {0.6, 0.5, ""}), ocs::argument_error);
}

TEST_CASE("synthesized illuminant flows through normalization and weighting") {
    const ocs::CmfSet& cmf = testutil::cmf_1nm();
    ocs::SmoothestResult nn = ocs::smoothest_spectrum_nonneg(cmf, {0.4791, 0.5012, "5Y"});
    ocs::Illuminant norm = ocs::normalize_illuminant(nn.illuminant, cmf);
    ocs::WeightedCmf w = ocs::weight_cmf(cmf, norm);
    CHECK(std::abs(w.white_point.Y - 100.0) <= 1e-9 * 100.0);
    // chromaticity is scale-invariant: white point chromaticity == target
    double s = w.white_point.X + w.white_point.Y + w.white_point.Z;
    CHECK(w.white_point.X / s == Catch::Approx(0.4791).margin(1e-9));
    CHECK(w.white_point.Y / s == Catch::Approx(0.5012).margin(1e-9));
}
