#pragma once

// Differential entropies, mutual information, entropy power and Gaussian
// divergence for the bivariate models.  Closed forms where they exist
// (Gaussian branches), adaptive quadrature elsewhere, and a seeded Monte
// Carlo estimate of -E[ln p] as an independent oracle.

#include <cmath>
#include <optional>
#include <vector>

#include "wyner/core.hpp"
#include "wyner/models.hpp"
#include "wyner/quadrature.hpp"

namespace wyner {

enum class EntropyMethod { closed_form, quadrature, monte_carlo };

struct EntropyResult {
    double value = 0.0;
    EntropyMethod method = EntropyMethod::closed_form;
    double error_estimate = 0.0;
};

/// h(X_g, Y_g) = 1/2 ln((2 pi e)^2 det K) for a nondegenerate Gaussian pair.
inline double gaussian_joint_entropy(const Covariance2& k) {
    const double det = k.det();
    if (!(det > 0.0))
        throw DegenerateCovarianceError(
            "gaussian_joint_entropy: det K must be > 0");
    return 0.5 * std::log(two_pi_e * two_pi_e * det);
}

/// 1/2 ln(2 pi e var), univariate case.
inline double gaussian_entropy(double var) {
    if (!(var > 0.0))
        throw DegenerateCovarianceError("gaussian_entropy: variance must be > 0");
    return 0.5 * std::log(two_pi_e * var);
}

/// N(X,Y) = exp(h) / (2 pi e).
inline double entropy_power_2d(double joint_entropy) {
    return std::exp(joint_entropy) / two_pi_e;
}

namespace detail {

// p ln p with the 0 ln 0 := 0 convention (p may underflow to exactly 0)
inline double p_log_p(double p) {
    if (p <= 0.0) return 0.0;
    return p * std::log(p);
}

// all positive-weight atoms coincide => the mixture is one shifted Gaussian
inline bool mixture_is_single_component(const AdditiveGaussianChannelModel& m) {
    std::optional<std::pair<double, double>> loc;
    for (const auto& at : m.noise.atoms) {
        if (at.weight == 0.0) continue;
        if (!loc) loc = {at.a, at.b};
        else if (loc->first != at.a || loc->second != at.b) return false;
    }
    return true;
}

// analytic overestimate of the neglected radial tail of the Laplace entropy
// integrand beyond R: uses K0(z) <= e^{-z} (z >= 2) and |ln ptilde| <=
// sqrt(2) r + 4, giving (2/pi) int_R^inf (sqrt(2) r^2 + 4 r) e^{-sqrt(2) r} dr.
inline double laplace_radial_tail_bound(double r_max) {
    const double a = std::sqrt(2.0);
    const double r = r_max;
    const double i2 = std::exp(-a * r) * (r * r / a + 2.0 * r / (a * a) + 2.0 / (a * a * a));
    const double i1 = std::exp(-a * r) * (r / a + 1.0 / (a * a));
    return 2.0 / pi * (a * i2 + 4.0 * i1);
}

}  // namespace detail

/// Quadrature estimate of -integral p ln p over the box for an arbitrary
/// density callable.  Shared by the mixture branch and by calibration tests
/// that force the quadrature path on densities with known entropy.
template <class Density>
double entropy_2d_quadrature(Density&& density_fn, const Box& box,
                             const QuadratureConfig& cfg,
                             std::span<const double> x_breaks = {},
                             std::span<const double> y_breaks = {}) {
    auto integrand = [&](double x, double y) {
        return -detail::p_log_p(density_fn(x, y));
    };
    return integrate_2d(integrand, box, cfg, x_breaks, y_breaks);
}

/// Joint differential entropy h(X, Y).  Gaussian (and degenerate
/// single-component mixture) inputs use the closed form; mixtures integrate
/// -p ln p over the truncated box; the Laplace branch integrates in whitened
/// polar coordinates, where the Jacobian absorbs the K0 log singularity.
inline EntropyResult joint_entropy(const BivariateModel& model,
                                   const QuadratureConfig& cfg) {
    if (const auto* g = std::get_if<GaussianPair>(&model))
        return {gaussian_joint_entropy(g->k), EntropyMethod::closed_form, 0.0};

    if (const auto* m = std::get_if<AdditiveGaussianChannelModel>(&model)) {
        if (detail::mixture_is_single_component(*m)) {
            const Covariance2 comp{1.0, 1.0, m->rho_hat.value()};
            return {gaussian_joint_entropy(comp), EntropyMethod::closed_form, 0.0};
        }
        const auto xb = atom_breaks(*m, Axis::x);
        const auto yb = atom_breaks(*m, Axis::y);
        const BivariateModel& mm = model;
        auto dens = [&](double x, double y) { return density(mm, x, y); };
        const double h =
            entropy_2d_quadrature(dens, truncation_box(model, cfg), cfg, xb, yb);
        return {h, EntropyMethod::quadrature, cfg.abs_tol_2d + 1e-12};
    }

    const auto& lap = std::get<BivariateLaplace>(model);
    const double rho = lap.rho_l.value();
    const double root = std::sqrt(1.0 - rho * rho);
    const double log_norm = -std::log(pi * root);
    // whitened radial profile: ptilde(r) = K0(sqrt(2) r) / (pi sqrt(1-rho^2)),
    // h = -sqrt(1-rho^2) * 2 pi * int ptilde ln ptilde r dr
    auto neg_plogp = [&](double r) {
        const double lp = log_bessel_k0(std::sqrt(2.0) * r) + log_norm;
        return -std::exp(lp) * lp;
    };
    const double h = root * integrate_polar(neg_plogp, cfg.r_max, cfg);
    return {h, EntropyMethod::quadrature,
            cfg.abs_tol_1d + detail::laplace_radial_tail_bound(cfg.r_max)};
}

/// Marginal differential entropy along one axis.
inline EntropyResult marginal_entropy(const BivariateModel& model, Axis which,
                                      const QuadratureConfig& cfg) {
    if (const auto* g = std::get_if<GaussianPair>(&model)) {
        const double var = which == Axis::x ? g->k.var_x : g->k.var_y;
        return {gaussian_entropy(var), EntropyMethod::closed_form, 0.0};
    }

    const Covariance2 k = covariance(model);
    const double var = which == Axis::x ? k.var_x : k.var_y;
    const double half = cfg.domain_sigmas * std::sqrt(var);

    if (const auto* m = std::get_if<AdditiveGaussianChannelModel>(&model)) {
        if (detail::mixture_is_single_component(*m))
            return {gaussian_entropy(1.0), EntropyMethod::closed_form, 0.0};
        const auto breaks = atom_breaks(*m, which);
        auto integrand = [&](double t) {
            return -detail::p_log_p(marginal_density(*m, which, t));
        };
        const double h = integrate_1d(integrand, -half, half, cfg, breaks);
        return {h, EntropyMethod::quadrature, cfg.abs_tol_1d + 1e-12};
    }

    const auto& lap = std::get<BivariateLaplace>(model);
    auto integrand = [&](double t) {
        return -detail::p_log_p(marginal_density(lap, which, t, cfg));
    };
    // heavier-than-Gaussian tails (~ e^{-sqrt(2) t}): 8 std devs truncate at
    // 1.5e-4, so widen to 1.5 r_max where the tail is ~1e-10
    const double lap_half = std::max(half, 1.5 * cfg.r_max);
    const double breaks[] = {0.0};  // the Laplace marginal has a kink at 0
    const double h = integrate_1d(integrand, -lap_half, lap_half, cfg, breaks);
    return {h, EntropyMethod::quadrature, 2.0 * cfg.abs_tol_1d};
}

struct MutualInformation {
    double value = 0.0;  // max(raw, 0): figures plot nonnegative MI
    double raw = 0.0;
    double error_estimate = 0.0;
};

/// I(X;Y) = h(X) + h(Y) - h(X,Y).
inline MutualInformation mutual_information(const BivariateModel& model,
                                            const QuadratureConfig& cfg) {
    const auto hx = marginal_entropy(model, Axis::x, cfg);
    // the Laplace density satisfies p(x,y) = p(y,x), so h(Y) = h(X)
    const auto hy = std::holds_alternative<BivariateLaplace>(model)
                        ? hx
                        : marginal_entropy(model, Axis::y, cfg);
    const auto hxy = joint_entropy(model, cfg);
    MutualInformation mi;
    mi.raw = hx.value + hy.value - hxy.value;
    mi.value = std::max(mi.raw, 0.0);
    mi.error_estimate = hx.error_estimate + hy.error_estimate + hxy.error_estimate;
    return mi;
}

/// D(p || p_g) against the Gaussian with the model's covariance, by direct
/// integration of p ln(p / p_g).
inline double kl_to_gaussian(const BivariateModel& model, const QuadratureConfig& cfg) {
    if (std::holds_alternative<GaussianPair>(model)) return 0.0;

    const Covariance2 k = covariance(model);

    if (const auto* m = std::get_if<AdditiveGaussianChannelModel>(&model)) {
        if (detail::mixture_is_single_component(*m)) return 0.0;
        auto integrand = [&](double x, double y) {
            const double lp = log_density(*m, x, y);
            if (!std::isfinite(lp)) return 0.0;
            return std::exp(lp) * (lp - detail::log_gaussian2(x, y, k));
        };
        return integrate_2d(integrand, truncation_box(model, cfg), cfg,
                            atom_breaks(*m, Axis::x), atom_breaks(*m, Axis::y));
    }

    // Laplace: in whitened coordinates both ln p and ln p_g are radial,
    // ln p_g(r) = -ln(2 pi sqrt(1-rho^2)) - r^2/2.  The r^2/2 term weights
    // the tail ~100x harder than the entropy integrand, so reach further out.
    const auto& lap = std::get<BivariateLaplace>(model);
    const double rho = lap.rho_l.value();
    const double root = std::sqrt(1.0 - rho * rho);
    auto integrand = [&](double r) {
        const double lp = log_bessel_k0(std::sqrt(2.0) * r) - std::log(pi * root);
        const double lg = -std::log(2.0 * pi * root) - 0.5 * r * r;
        return std::exp(lp) * (lp - lg);
    };
    return root * integrate_polar(integrand, cfg.r_max + 6.0, cfg);
}

/// Monte Carlo oracle: -E[ln p] over draws from the model itself.
inline EntropyResult joint_entropy_mc(const BivariateModel& model,
                                      const QuadratureConfig& cfg) {
    auto neg_log_p = [&](double x, double y) { return -log_density(model, x, y); };
    auto sampler = [&](Rng& rng) { return sample_one(model, rng); };
    const McResult r = mc_expectation(neg_log_p, sampler, cfg);
    return {r.estimate, EntropyMethod::monte_carlo, r.std_error};
}

}  // namespace wyner
