#pragma once

// The three distribution families: a zero-mean Gaussian pair, the additive
// "Gaussian channel" mixture (jointly Gaussian pair plus independent
// finite-atom noise), and the bivariate Laplace law with a Bessel-K0 radial
// profile.  Models are immutable; density/marginal/covariance are pure.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "wyner/core.hpp"
#include "wyner/quadrature.hpp"
#include "wyner/specfun.hpp"

namespace wyner {

/// The bivariate Laplace density diverges logarithmically at the origin;
/// evaluation exactly there raises this so callers integrate around it.
class SingularPointError : public std::domain_error {
public:
    explicit SingularPointError(const std::string& what) : std::domain_error(what) {}
};

struct GaussianPair {
    Covariance2 k;

    explicit GaussianPair(const Covariance2& cov) : k(cov) {
        if (!psd_check(k))
            throw std::invalid_argument("GaussianPair: covariance is not PSD");
    }
};

struct DiscreteAtom {
    double a;
    double b;
    double weight;
};

/// Finite-support zero-mean noise pair (A, B).
struct DiscretePair {
    std::vector<DiscreteAtom> atoms;

    explicit DiscretePair(std::vector<DiscreteAtom> pts) : atoms(std::move(pts)) {
        if (atoms.empty()) throw std::invalid_argument("DiscretePair: no atoms");
        double w = 0.0, ma = 0.0, mb = 0.0, scale = 0.0;
        for (const auto& at : atoms) {
            if (at.weight < 0.0)
                throw std::invalid_argument("DiscretePair: negative weight");
            w += at.weight;
            ma += at.weight * at.a;
            mb += at.weight * at.b;
            scale = std::max({scale, std::abs(at.a), std::abs(at.b), 1.0});
        }
        if (std::abs(w - 1.0) > 1e-12)
            throw std::invalid_argument("DiscretePair: weights must sum to 1");
        if (std::abs(ma) > 1e-12 * scale || std::abs(mb) > 1e-12 * scale)
            throw std::invalid_argument("DiscretePair: atoms must have mean zero");
    }

    double var_a() const {
        double s = 0.0;
        for (const auto& at : atoms) s += at.weight * at.a * at.a;
        return s;
    }
    double var_b() const {
        double s = 0.0;
        for (const auto& at : atoms) s += at.weight * at.b * at.b;
        return s;
    }
    double e_ab() const {
        double s = 0.0;
        for (const auto& at : atoms) s += at.weight * at.a * at.b;
        return s;
    }
    /// Noise correlation r; a noiseless pair (zero variance) reports r = 1,
    /// under which every downstream formula degenerates correctly.
    double correlation() const {
        const double va = var_a(), vb = var_b();
        if (va <= 0.0 || vb <= 0.0) return 1.0;
        return e_ab() / std::sqrt(va * vb);
    }
};

/// (X, Y) = (Xhat, Yhat) + (A, B) with (Xhat, Yhat) ~ N(0, [[1, rho_hat],
/// [rho_hat, 1]]) independent of the finite-atom noise.
struct AdditiveGaussianChannelModel {
    Correlation rho_hat;
    DiscretePair noise;

    AdditiveGaussianChannelModel(Correlation rho, DiscretePair atoms)
        : rho_hat(rho), noise(std::move(atoms)) {
        if (rho_hat.abs_value() >= 1.0)
            throw std::invalid_argument(
                "AdditiveGaussianChannelModel: |rho_hat| must be < 1");
    }

    double sigma_a() const { return std::sqrt(noise.var_a()); }
    double noise_r() const { return noise.correlation(); }
};

/// Example 1: A = B = +-sigma_a with equal probability (r = 1).
inline AdditiveGaussianChannelModel make_example1(double rho_hat, double sigma_a) {
    if (sigma_a < 0.0) throw std::invalid_argument("make_example1: sigma_a < 0");
    return {Correlation(rho_hat),
            DiscretePair({{sigma_a, sigma_a, 0.5}, {-sigma_a, -sigma_a, 0.5}})};
}

/// Example 2: doubly symmetric binary noise, P(A=B=+-s) = (1+r)/4 and
/// P(A=-B=+-s) = (1-r)/4, so the noise correlation is r.
inline AdditiveGaussianChannelModel make_example2(double rho_hat, double sigma_a,
                                                  double r) {
    if (sigma_a < 0.0) throw std::invalid_argument("make_example2: sigma_a < 0");
    if (std::abs(r) > 1.0) throw std::invalid_argument("make_example2: |r| > 1");
    const double s = sigma_a, wp = (1.0 + r) / 4.0, wm = (1.0 - r) / 4.0;
    return {Correlation(rho_hat), DiscretePair({{s, s, wp},
                                                {-s, -s, wp},
                                                {s, -s, wm},
                                                {-s, s, wm}})};
}

/// Unit-variance bivariate Laplace with correlation rho_l (Kotz type):
/// p(x,y) = K0(sqrt(2 (x^2 - 2 rho_l x y + y^2)/(1 - rho_l^2)))
///          / (pi sqrt(1 - rho_l^2)).
struct BivariateLaplace {
    Correlation rho_l;

    explicit BivariateLaplace(double rho) : rho_l(rho) {
        if (std::abs(rho) >= 1.0)
            throw std::invalid_argument("BivariateLaplace: |rho_l| must be < 1");
    }
};

using BivariateModel =
    std::variant<GaussianPair, AdditiveGaussianChannelModel, BivariateLaplace>;

enum class Axis { x, y };

// ---------------------------------------------------------------------------
// log densities

namespace detail {

inline double log_gaussian2(double x, double y, const Covariance2& k) {
    const double det = k.det();
    if (!(det > 0.0))
        throw DegenerateCovarianceError("log_gaussian2: covariance is singular");
    const double quad = (k.var_y * x * x - 2.0 * k.cov_xy * x * y + k.var_x * y * y) / det;
    return -std::log(2.0 * pi) - 0.5 * std::log(det) - 0.5 * quad;
}

inline double laplace_bessel_arg(const BivariateLaplace& m, double x, double y) {
    const double rho = m.rho_l.value();
    // grouped so the value is exactly invariant under (x,y) swap and negation
    const double q = (x * x + y * y) - 2.0 * rho * (x * y);
    return std::sqrt(std::max(2.0 * q / (1.0 - rho * rho), 0.0));
}

}  // namespace detail

inline double log_density(const GaussianPair& m, double x, double y) {
    return detail::log_gaussian2(x, y, m.k);
}

inline double log_density(const AdditiveGaussianChannelModel& m, double x, double y) {
    const Covariance2 comp{1.0, 1.0, m.rho_hat.value()};
    std::vector<double> terms;
    terms.reserve(m.noise.atoms.size());
    for (const auto& at : m.noise.atoms) {
        if (at.weight == 0.0) continue;
        terms.push_back(std::log(at.weight) +
                        detail::log_gaussian2(x - at.a, y - at.b, comp));
    }
    return log_sum_exp(terms);
}

inline double log_density(const BivariateLaplace& m, double x, double y) {
    const double z = detail::laplace_bessel_arg(m, x, y);
    if (z == 0.0)
        throw SingularPointError("BivariateLaplace: density diverges at the origin");
    const double rho = m.rho_l.value();
    return log_bessel_k0(z) - std::log(pi * std::sqrt(1.0 - rho * rho));
}

inline double log_density(const BivariateModel& m, double x, double y) {
    return std::visit([&](const auto& mm) { return log_density(mm, x, y); }, m);
}

inline double density(const BivariateModel& m, double x, double y) {
    return std::exp(log_density(m, x, y));
}

// ---------------------------------------------------------------------------
// marginals

inline double marginal_density(const GaussianPair& m, Axis which, double t) {
    const double var = which == Axis::x ? m.k.var_x : m.k.var_y;
    if (!(var > 0.0))
        throw DegenerateCovarianceError("marginal_density: zero variance");
    return std::exp(-0.5 * t * t / var) / std::sqrt(2.0 * pi * var);
}

inline double marginal_density(const AdditiveGaussianChannelModel& m, Axis which,
                               double t) {
    // component marginals are unit-variance normals centered at the atoms
    double s = 0.0;
    for (const auto& at : m.noise.atoms) {
        const double c = which == Axis::x ? at.a : at.b;
        s += at.weight * std::exp(-0.5 * (t - c) * (t - c)) / std::sqrt(2.0 * pi);
    }
    return s;
}

inline double marginal_density(const BivariateLaplace& m, Axis which, double t,
                               const QuadratureConfig& cfg) {
    (void)which;  // p(x,y) = p(y,x), both marginals coincide
    const double rho = m.rho_l.value();
    // K0 falls off like e^{-z} with z >= sqrt(2/(1-rho^2)) |y - rho t|, so a
    // cut at z ~ 42 leaves a tail far below the inner tolerance
    const double half_width = 30.0 * std::sqrt((1.0 - rho * rho) / 2.0) + 1.0;
    QuadratureConfig inner = cfg;
    inner.abs_tol_1d = 1e-10;
    inner.min_depth = 3;
    const BivariateLaplace& model = m;
    auto f = [&](double y) { return std::exp(log_density(model, t, y)); };
    const double center = rho * t;
    const double breaks[] = {0.0, center};
    return integrate_1d(f, center - half_width, center + half_width, inner, breaks);
}

inline double marginal_density(const BivariateModel& m, Axis which, double t,
                               const QuadratureConfig& cfg) {
    if (const auto* g = std::get_if<GaussianPair>(&m)) return marginal_density(*g, which, t);
    if (const auto* a = std::get_if<AdditiveGaussianChannelModel>(&m))
        return marginal_density(*a, which, t);
    return marginal_density(std::get<BivariateLaplace>(m), which, t, cfg);
}

// ---------------------------------------------------------------------------
// moments

inline Covariance2 covariance(const GaussianPair& m) { return m.k; }

inline Covariance2 covariance(const AdditiveGaussianChannelModel& m) {
    return {1.0 + m.noise.var_a(), 1.0 + m.noise.var_b(),
            m.rho_hat.value() + m.noise.e_ab()};
}

inline Covariance2 covariance(const BivariateLaplace& m) {
    return {1.0, 1.0, m.rho_l.value()};
}

inline Covariance2 covariance(const BivariateModel& m) {
    return std::visit([](const auto& mm) { return covariance(mm); }, m);
}

// ---------------------------------------------------------------------------
// sampling

namespace detail {

// correlated pair from N(0, [[vx, c], [c, vy]]) via Cholesky
inline std::pair<double, double> sample_gaussian2(Rng& rng, const Covariance2& k) {
    const double z1 = rng.normal(), z2 = rng.normal();
    const double sx = std::sqrt(k.var_x);
    if (sx == 0.0) return {0.0, std::sqrt(k.var_y) * z2};
    const double c = k.cov_xy / sx;
    const double res = std::sqrt(std::max(k.var_y - c * c, 0.0));
    return {sx * z1, c * z1 + res * z2};
}

}  // namespace detail

inline std::pair<double, double> sample_one(const GaussianPair& m, Rng& rng) {
    return detail::sample_gaussian2(rng, m.k);
}

inline std::pair<double, double> sample_one(const AdditiveGaussianChannelModel& m,
                                            Rng& rng) {
    const double u = rng.uniform_pos();
    double acc = 0.0;
    const DiscreteAtom* chosen = &m.noise.atoms.back();
    for (const auto& at : m.noise.atoms) {
        acc += at.weight;
        if (u <= acc) {
            chosen = &at;
            break;
        }
    }
    const auto [gx, gy] =
        detail::sample_gaussian2(rng, Covariance2{1.0, 1.0, m.rho_hat.value()});
    return {gx + chosen->a, gy + chosen->b};
}

inline std::pair<double, double> sample_one(const BivariateLaplace& m, Rng& rng) {
    // Gaussian variance mixture: (X, Y) = sqrt(E) (G1, G2), E ~ Exp(1),
    // (G1, G2) ~ N(0, [[1, rho], [rho, 1]]).
    const double e = rng.exponential();
    const auto [gx, gy] =
        detail::sample_gaussian2(rng, Covariance2{1.0, 1.0, m.rho_l.value()});
    const double s = std::sqrt(e);
    return {s * gx, s * gy};
}

inline std::pair<double, double> sample_one(const BivariateModel& m, Rng& rng) {
    return std::visit([&](const auto& mm) { return sample_one(mm, rng); }, m);
}

inline std::vector<std::pair<double, double>> sample(const BivariateModel& m, long n,
                                                     std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample: n must be >= 1");
    Rng rng(seed);
    std::vector<std::pair<double, double>> out;
    out.reserve(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) out.push_back(sample_one(m, rng));
    return out;
}

// ---------------------------------------------------------------------------
// integration-domain helpers

/// Axis-aligned truncation box: mean +- domain_sigmas marginal standard
/// deviations (the mixtures and both built-in examples are mean zero).
inline Box truncation_box(const BivariateModel& m, const QuadratureConfig& cfg) {
    const Covariance2 k = covariance(m);
    const double hx = cfg.domain_sigmas * std::sqrt(k.var_x);
    const double hy = cfg.domain_sigmas * std::sqrt(k.var_y);
    return {-hx, hx, -hy, hy};
}

/// Atom coordinates, used to pre-split quadrature panels so that well
/// separated mixture components are never missed by a coarse first pass.
inline std::vector<double> atom_breaks(const AdditiveGaussianChannelModel& m, Axis which) {
    std::vector<double> v;
    for (const auto& at : m.noise.atoms) v.push_back(which == Axis::x ? at.a : at.b);
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

}  // namespace wyner
