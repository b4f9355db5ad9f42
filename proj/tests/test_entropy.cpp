#include <catch_amalgamated.hpp>

#include <cmath>

#include "wyner/entropy.hpp"
#include "wyner/models.hpp"

using namespace wyner;

namespace {
const QuadratureConfig cfg{};
constexpr double ln_2pi_e = 2.8378770664093453;
// joint entropy of the A = B example at sigma_A = 1, rho_hat = 0.5, derived
// by inverting the exact-value relation from the reference data point
// 0.953037698413919 plus ln(pi e)
constexpr double h_ex1_sigma1 = 3.0977675842633188;
}  // namespace

TEST_CASE("gaussian_joint_entropy") {
    CHECK(gaussian_joint_entropy({1.0, 1.0, 0.0}) ==
          Catch::Approx(ln_2pi_e).margin(1e-12));
    CHECK(gaussian_joint_entropy({2.0, 2.0, 1.5}) ==
          Catch::Approx(ln_2pi_e + 0.5 * std::log(1.75)).margin(1e-12));
    CHECK_THROWS_AS(gaussian_joint_entropy({1.0, 1.0, 1.0}), DegenerateCovarianceError);
    CHECK_THROWS_AS(gaussian_joint_entropy({1.0, 1.0, 1.5}), DegenerateCovarianceError);
}

TEST_CASE("joint_entropy per branch") {
    const BivariateModel g = GaussianPair{{1.0, 0.5 + 0.5, 0.5}};
    // closed form, no quadrature in the path
    const auto rg = joint_entropy(GaussianPair{{1.0, 1.0, 0.5}}, cfg);
    CHECK(rg.method == EntropyMethod::closed_form);
    CHECK(rg.value == Catch::Approx(ln_2pi_e + 0.5 * std::log(0.75)).margin(1e-12));
    CHECK(rg.value == Catch::Approx(2.694036).margin(1e-6));

    const auto r1 = joint_entropy(BivariateModel{make_example1(0.5, 1.0)}, cfg);
    CHECK(r1.method == EntropyMethod::quadrature);
    CHECK(r1.value == Catch::Approx(h_ex1_sigma1).margin(5e-6));
    CHECK(r1.error_estimate <= cfg.abs_tol_2d + 1e-9);

    // zero noise collapses the mixture onto the closed form, exactly
    const auto r0 = joint_entropy(BivariateModel{make_example1(0.5, 0.0)}, cfg);
    CHECK(r0.method == EntropyMethod::closed_form);
    CHECK(r0.value == gaussian_joint_entropy({1.0, 1.0, 0.5}));
}

TEST_CASE("joint entropy agrees with the Monte Carlo oracle") {
    for (const BivariateModel& m :
         {BivariateModel{make_example1(0.5, 1.0)},
          BivariateModel{make_example2(0.5, 1.5, 0.8)},
          BivariateModel{BivariateLaplace{0.5}}}) {
        const auto quad = joint_entropy(m, cfg);
        const auto mc = joint_entropy_mc(m, cfg);
        CHECK(mc.method == EntropyMethod::monte_carlo);
        CHECK(std::abs(quad.value - mc.value) < 3.0 * mc.error_estimate);
    }
}

TEST_CASE("marginal_entropy") {
    CHECK(marginal_entropy(GaussianPair{{1.0, 1.0, 0.8}}, Axis::x, cfg).value ==
          Catch::Approx(0.5 * ln_2pi_e).margin(1e-12));
    CHECK(marginal_entropy(GaussianPair{{1.0, 1.0, 0.8}}, Axis::x, cfg).value ==
          Catch::Approx(1.418939).margin(1e-6));

    const auto r0 = marginal_entropy(BivariateModel{make_example1(0.5, 0.0)},
                                     Axis::x, cfg);
    CHECK(r0.method == EntropyMethod::closed_form);
    CHECK(r0.value == Catch::Approx(0.5 * ln_2pi_e).margin(1e-12));

    // unit-variance Laplace marginal: 1 + ln(2b) with b = 1/sqrt(2)
    const auto rl = marginal_entropy(BivariateModel{BivariateLaplace{0.5}},
                                     Axis::x, cfg);
    CHECK(rl.value == Catch::Approx(1.0 + 0.5 * std::log(2.0)).margin(1e-4));
    CHECK(rl.value == Catch::Approx(1.346574).margin(1e-4));
}

TEST_CASE("mutual_information") {
    // sigma_A = 0 reduces to the Gaussian pair: -1/2 ln(1 - rho^2)
    const auto mi0 = mutual_information(BivariateModel{make_example1(0.5, 0.0)}, cfg);
    CHECK(mi0.value == Catch::Approx(0.143841036225903).margin(1e-9));

    // reference curves: same-sign probability 0.9 <=> noise correlation 0.8
    const auto mi2 = mutual_information(BivariateModel{make_example2(0.5, 1.0, 0.8)}, cfg);
    CHECK(mi2.value == Catch::Approx(0.278936346760774).margin(1e-4));

    const auto mil = mutual_information(BivariateModel{BivariateLaplace{0.5}}, cfg);
    CHECK(mil.value == Catch::Approx(0.188251992217438).margin(1e-4));

    // independent components: raw MI is zero up to quadrature error
    const auto ind = mutual_information(
        BivariateModel{AdditiveGaussianChannelModel{
            Correlation(0.0), DiscretePair({{1.0, 1.0, 0.25},
                                            {1.0, -1.0, 0.25},
                                            {-1.0, 1.0, 0.25},
                                            {-1.0, -1.0, 0.25}})}},
        cfg);
    CHECK(std::abs(ind.raw) < 2.0 * cfg.abs_tol_2d);
    CHECK(ind.value >= 0.0);
}

TEST_CASE("entropy_power_2d") {
    CHECK(entropy_power_2d(ln_2pi_e) == Catch::Approx(1.0).margin(1e-12));
    CHECK(entropy_power_2d(gaussian_joint_entropy({1.0, 1.0, 0.5})) ==
          Catch::Approx(std::sqrt(0.75)).margin(1e-12));

    // Laplace at rho_l = 0.5: N follows from the MI-implied joint entropy
    // 2(1 + ln sqrt(2)) - 0.188251992217438, and the bound ln(N/(1-rho))
    // then reproduces the reference lower bound
    const double h_implied = 2.0 * (1.0 + 0.5 * std::log(2.0)) - 0.188251992217438;
    const double n = entropy_power_2d(h_implied);
    CHECK(n == Catch::Approx(0.7167823562).margin(1e-9));
    CHECK(std::log(n / 0.5) == Catch::Approx(0.36016530246227).margin(1e-12));
}

TEST_CASE("kl_to_gaussian") {
    CHECK(kl_to_gaussian(BivariateModel{GaussianPair{{1.0, 1.0, 0.4}}}, cfg) == 0.0);

    for (const BivariateModel& m :
         {BivariateModel{make_example1(0.5, 1.0)},
          BivariateModel{make_example2(0.5, 1.5, 0.8)},
          BivariateModel{BivariateLaplace{0.6}}}) {
        const double kl = kl_to_gaussian(m, cfg);
        const double hg = gaussian_joint_entropy(covariance(m));
        const double h = joint_entropy(m, cfg).value;
        CHECK(kl >= -2.0 * cfg.abs_tol_2d);  // divergence positivity
        // moment-matching identity D(p||p_g) = h_g - h
        CHECK(kl == Catch::Approx(hg - h).margin(2.0 * cfg.abs_tol_2d + 1e-5));
    }
}

TEST_CASE("Gaussian maximum entropy") {
    for (const BivariateModel& m :
         {BivariateModel{make_example1(0.5, 0.7)},
          BivariateModel{make_example2(0.5, 2.0, 0.8)},
          BivariateModel{BivariateLaplace{0.3}},
          BivariateModel{GaussianPair{{1.5, 0.9, -0.6}}}}) {
        const double h = joint_entropy(m, cfg).value;
        const double hg = gaussian_joint_entropy(covariance(m));
        CHECK(h <= hg + cfg.abs_tol_2d + 1e-5);
    }
}

TEST_CASE("entropy_2d_quadrature calibrates against closed forms") {
    const Covariance2 k{1.3, 0.8, -0.45};
    auto dens = [&](double x, double y) {
        const double det = k.det();
        const double quad =
            (k.var_y * x * x - 2.0 * k.cov_xy * x * y + k.var_x * y * y) / det;
        return std::exp(-0.5 * quad) / (2.0 * pi * std::sqrt(det));
    };
    const double hx = 8.0 * std::sqrt(k.var_x), hy = 8.0 * std::sqrt(k.var_y);
    const double h = entropy_2d_quadrature(dens, {-hx, hx, -hy, hy}, cfg);
    CHECK(h == Catch::Approx(gaussian_joint_entropy(k)).margin(1e-6));
}
