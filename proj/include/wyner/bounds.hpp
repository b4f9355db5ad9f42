#pragma once

// Closed-form common-information quantities and bounds: the Gaussian value,
// its relaxed variant, the entropy-corrected lower bound, the additive
// "Gaussian channel" lower/upper/exact forms, the KL rewriting, and the
// additivity bound for independent pairs.  All of these take the joint
// entropy as an input: entropy is the expensive part and is shared across
// every bound at a sweep point.

#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <utility>

#include "wyner/core.hpp"
#include "wyner/entropy.hpp"
#include "wyner/models.hpp"

namespace wyner {

/// C(X_g;Y_g) = 1/2 ln((1+|rho|)/(1-|rho|)).
inline double gaussian_wyner(const Correlation& rho) {
    const double a = rho.abs_value();
    if (a >= 1.0)
        throw InfiniteBoundError("gaussian_wyner: |rho| = 1 gives infinite common information");
    return 0.5 * std::log((1.0 + a) / (1.0 - a));
}

/// Relaxed Gaussian value
///   C_gamma(X_g;Y_g) = 1/2 log+ ((1+|rho|)/(1-|rho|)
///                              * (1 - s)/(1 + s)),  s = sqrt(1 - e^{-2 gamma}).
/// Equals gaussian_wyner at gamma = 0 and reaches 0 exactly once
/// gamma >= -1/2 ln(1 - rho^2).
inline double relaxed_gaussian_wyner(const Correlation& rho, const Gamma& gamma) {
    const double a = rho.abs_value();
    if (a >= 1.0)
        throw InfiniteBoundError("relaxed_gaussian_wyner: |rho| = 1 gives infinite value");
    if (gamma.value() == 0.0) return gaussian_wyner(rho);
    const double s = std::sqrt(1.0 - std::exp(-2.0 * gamma.value()));
    if (s >= a) return 0.0;  // log+ floor, exact at the crossover
    return 0.5 * std::log((1.0 + a) / (1.0 - a) * (1.0 - s) / (1.0 + s));
}

/// Dual variable behind the relaxed bound: mu* = 1/sqrt(1 - e^{-2 gamma})
/// (infinite at gamma = 0), and whether it satisfies the proof's mu* >= 1/rho.
struct RelaxationParams {
    Gamma gamma;
    double mu_star;
    bool mu_finite;
    bool valid_mu_condition;
};

inline RelaxationParams make_relaxation_params(const Gamma& gamma, const Correlation& rho) {
    RelaxationParams p{gamma, std::numeric_limits<double>::infinity(), false, false};
    if (gamma.value() > 0.0) {
        p.mu_star = 1.0 / std::sqrt(1.0 - std::exp(-2.0 * gamma.value()));
        p.mu_finite = true;
    }
    const double a = rho.abs_value();
    const double threshold = a > 0.0 ? 1.0 / a : std::numeric_limits<double>::infinity();
    p.valid_mu_condition = p.mu_star >= threshold;
    return p;
}

/// C(X;Y) >= C(X_g;Y_g) + h(X,Y) - h(X_g,Y_g), before the max with 0.
inline double theorem1_lower_unclamped(double joint_entropy, const Covariance2& k) {
    const double hg = gaussian_joint_entropy(k);  // throws on det <= 0
    return gaussian_wyner(correlation_of(k)) + joint_entropy - hg;
}

inline double theorem1_lower(double joint_entropy, const Covariance2& k) {
    return std::max(theorem1_lower_unclamped(joint_entropy, k), 0.0);
}

/// Relaxed variant; reduces to theorem1_lower at gamma = 0.
inline double theorem3_lower_unclamped(double joint_entropy, const Covariance2& k,
                                       const Gamma& gamma) {
    const double hg = gaussian_joint_entropy(k);
    return relaxed_gaussian_wyner(correlation_of(k), gamma) + joint_entropy - hg;
}

inline double theorem3_lower(double joint_entropy, const Covariance2& k,
                             const Gamma& gamma) {
    return std::max(theorem3_lower_unclamped(joint_entropy, k, gamma), 0.0);
}

/// KL form of the same bound: C(X;Y) >= C(X_g;Y_g) - D(p || p_g).
/// Deliberately unclamped; for independent non-Gaussian pairs it is negative.
inline double kl_form_lower(double gaussian_wyner_value, double kl) {
    if (kl < 0.0)
        throw std::invalid_argument("kl_form_lower: divergence must be >= 0");
    return gaussian_wyner_value - kl;
}

namespace detail {

// noise parameters (r, sigma_a) for the symmetric-noise bound formulas
inline std::pair<double, double> symmetric_noise_params(
    const AdditiveGaussianChannelModel& m) {
    const double va = m.noise.var_a(), vb = m.noise.var_b();
    const double scale = std::max({va, vb, 1e-300});
    if (std::abs(va - vb) > 1e-9 * scale)
        throw std::invalid_argument(
            "bounds: noise must be symmetric (sigma_A = sigma_B)");
    return {m.noise_r(), std::sqrt(va)};
}

}  // namespace detail

/// C(X;Y) >= h(X,Y) - ln(2 pi e (1 - rho_hat + (1 - r) sigma_A^2)).
/// Algebraically identical to theorem1_lower_unclamped for this family.
inline double agc_lower(const AdditiveGaussianChannelModel& m, double joint_entropy) {
    const auto [r, sigma_a] = detail::symmetric_noise_params(m);
    const double arg = 1.0 - m.rho_hat.value() + (1.0 - r) * sigma_a * sigma_a;
    if (!(arg > 0.0))
        throw std::domain_error("agc_lower: nonpositive log argument");
    return joint_entropy - std::log(two_pi_e * arg);
}

/// C(X;Y) <= h(X,Y) - ln(2 pi e (1 - rho_hat)).
inline double agc_upper(const AdditiveGaussianChannelModel& m, double joint_entropy) {
    const double rho_hat = m.rho_hat.value();
    if (std::abs(rho_hat) >= 1.0)
        throw InfiniteBoundError("agc_upper: |rho_hat| = 1");
    return joint_entropy - std::log(two_pi_e * (1.0 - rho_hat));
}

/// Exact value when A = B on every atom (the two bounds coincide):
/// C(X;Y) = h(X,Y) - ln(2 pi e (1 - rho_hat)).
inline double lemma1_exact(const AdditiveGaussianChannelModel& m, double joint_entropy) {
    for (const auto& at : m.noise.atoms)
        if (at.weight > 0.0 && at.a != at.b)
            throw std::domain_error(
                "lemma1_exact: requires A = B on every atom (r = 1)");
    return agc_upper(m, joint_entropy);
}

/// Additivity bound for independent pairs: sum of per-pair unclamped terms,
/// floored at zero only at the sum level.
inline double vector_lower(std::span<const std::pair<double, Covariance2>> pairs) {
    double sum = 0.0;
    for (const auto& [h, k] : pairs) sum += theorem1_lower_unclamped(h, k);
    return std::max(sum, 0.0);
}

/// Evaluate everything the CLI reports at one parameter point.  The joint
/// entropy is computed once and fed to every closed form.  A gamma switches
/// the lower bound to the relaxed variant.
inline BoundReport evaluate_bounds(const BivariateModel& model,
                                   const QuadratureConfig& cfg,
                                   std::optional<Gamma> gamma = std::nullopt) {
    BoundReport rep;
    const Covariance2 k = covariance(model);
    rep.joint_entropy = joint_entropy(model, cfg).value;
    rep.gaussian_joint_entropy = gaussian_joint_entropy(k);
    rep.gaussian_wyner = gaussian_wyner(correlation_of(k));
    rep.lower_unclamped =
        gamma ? theorem3_lower_unclamped(rep.joint_entropy, k, *gamma)
              : theorem1_lower_unclamped(rep.joint_entropy, k);
    rep.lower_bound = std::max(rep.lower_unclamped, 0.0);
    const double hx = marginal_entropy(model, Axis::x, cfg).value;
    const double hy = std::holds_alternative<BivariateLaplace>(model)
                          ? hx
                          : marginal_entropy(model, Axis::y, cfg).value;
    rep.mutual_information = std::max(hx + hy - rep.joint_entropy, 0.0);

    if (const auto* m = std::get_if<AdditiveGaussianChannelModel>(&model)) {
        rep.upper_bound = agc_upper(*m, rep.joint_entropy);
        bool all_equal = true;
        for (const auto& at : m->noise.atoms)
            if (at.weight > 0.0 && at.a != at.b) all_equal = false;
        if (all_equal) rep.exact = lemma1_exact(*m, rep.joint_entropy);
    } else if (std::holds_alternative<GaussianPair>(model)) {
        // the Gaussian value is exact (and the bound is tight there)
        rep.exact = rep.gaussian_wyner;
    }
    return rep;
}

}  // namespace wyner
