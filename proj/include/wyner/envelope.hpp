#pragma once

// The convex-envelope minimization behind the lower bound: closed-form KKT
// solution, feasible-set predicates, an exhaustive grid oracle over the
// primal and relaxed constraint sets, and the concave dual objective g(mu)
// whose maximizer yields the relaxed Gaussian value.

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>
#include <vector>

#include "wyner/core.hpp"

namespace wyner {

enum class EnvelopeBranch { rho_ge_q, rho_lt_q };

struct EnvelopeSolution {
    double q_star = 0.0;
    double sigma2_star = 0.0;
    double mu_star = 0.0;
    double min_value = 0.0;
    EnvelopeBranch branch = EnvelopeBranch::rho_ge_q;
};

enum class FeasibleSet { a_rho, b_rho, d_rho };

struct FeasibleSetSpec {
    Correlation rho;
    FeasibleSet set_kind;
};

bool feasible_a(double rho, double sx, double sy, double q);
bool feasible_b(double rho, double sx, double sy, double q);
bool feasible_d(double rho, double sigma2, double q);

/// Membership of a candidate (sigma_x, sigma_y, q) in the named set; D_rho
/// sees the point through sigma^2 = sigma_x sigma_y.
inline bool contains(const FeasibleSetSpec& spec, double sx, double sy, double q) {
    const double r = spec.rho.abs_value();
    switch (spec.set_kind) {
        case FeasibleSet::a_rho: return feasible_a(r, sx, sy, q);
        case FeasibleSet::b_rho: return feasible_b(r, sx, sy, q);
        case FeasibleSet::d_rho: return feasible_d(r, sx * sy, q);
    }
    return false;
}

/// f(lambda, sigma^2, q) = 1/2 ln((2 pi e)^2 sigma^4)
///                       - (1+lambda)/2 ln((2 pi e)^2 sigma^4 (1 - q^2)).
inline double objective_f(double lambda, double sigma2, double q) {
    if (!(sigma2 > 0.0)) throw std::domain_error("objective_f: sigma2 must be > 0");
    if (!(std::abs(q) < 1.0)) throw std::domain_error("objective_f: |q| must be < 1");
    const double ls = std::log(two_pi_e * two_pi_e * sigma2 * sigma2);
    return 0.5 * ls - 0.5 * (1.0 + lambda) * (ls + std::log(1.0 - q * q));
}

// ---------------------------------------------------------------------------
// feasible-set membership (sigma_x, sigma_y > 0 and |q| < 1 assumed)

/// K' - K <= 0 as an exact 2x2 matrix condition.
inline bool feasible_a(double rho, double sx, double sy, double q) {
    const double m11 = 1.0 - sx * sx;
    const double m22 = 1.0 - sy * sy;
    if (m11 < 0.0 || m22 < 0.0) return false;
    const double off = q * sx * sy - rho;
    return m11 * m22 - off * off >= 0.0;
}

inline bool feasible_b(double rho, double sx, double sy, double q) {
    const double p = sx * sy;
    if (p > 1.0) return false;
    return (1.0 - q * q) * p * p + 2.0 * rho * q * p + 1.0 - rho * rho - 2.0 * p >= 0.0;
}

inline bool feasible_d(double rho, double sigma2, double q) {
    if (sigma2 > 1.0) return false;
    if (rho >= q) return sigma2 * (1.0 - q) <= 1.0 - rho;
    return sigma2 * (1.0 + q) <= 1.0 + rho;
}

// ---------------------------------------------------------------------------
// closed form

/// Minimum of f over the constraint set, valid for 0 < lambda <= rho < 1:
///   1/2 ln(1/(1-lambda^2))
///     - lambda/2 ln((2 pi e)^2 (1-rho)^2 (1+lambda)/(1-lambda)).
inline double lemma2_closed_form(const Correlation& rho, double lambda) {
    const double r = rho.abs_value();
    if (!(lambda > 0.0 && lambda <= r && r < 1.0))
        throw std::domain_error("lemma2_closed_form: requires 0 < lambda <= rho < 1");
    return 0.5 * std::log(1.0 / (1.0 - lambda * lambda)) -
           0.5 * lambda *
               std::log(two_pi_e * two_pi_e * (1.0 - r) * (1.0 - r) *
                        (1.0 + lambda) / (1.0 - lambda));
}

/// The KKT point for the rho >= q branch:
/// q* = lambda, sigma^2* = (1-rho)/(1-lambda), mu* = lambda/(1-rho).
inline EnvelopeSolution lemma2_kkt_point(const Correlation& rho, double lambda) {
    const double r = rho.abs_value();
    EnvelopeSolution s;
    s.q_star = lambda;
    s.sigma2_star = (1.0 - r) / (1.0 - lambda);
    s.mu_star = lambda / (1.0 - r);
    s.min_value = lemma2_closed_form(rho, lambda);
    s.branch = EnvelopeBranch::rho_ge_q;
    return s;
}

/// Stationarity and complementary-slackness residuals at a candidate point:
///   r1 = -lambda/sigma^2 + mu (1 - q)
///   r2 = (1+lambda) q / (1 - q^2) - mu sigma^2
///   r3 = mu (sigma^2 (1 - q) - 1 + rho)
inline std::array<double, 3> kkt_residuals(double rho, double lambda, double q,
                                           double sigma2, double mu) {
    return {-lambda / sigma2 + mu * (1.0 - q),
            (1.0 + lambda) * q / (1.0 - q * q) - mu * sigma2,
            mu * (sigma2 * (1.0 - q) - 1.0 + rho)};
}

// ---------------------------------------------------------------------------
// grid oracle

namespace detail {

struct GridBest {
    double value = std::numeric_limits<double>::infinity();
    double q = 0.0;
    double sigma2 = 0.0;
    double sx = 0.0;
    double sy = 0.0;

    // lowest value; ties by smallest q, then smallest sigma^2, then sx
    bool better_than(const GridBest& o) const {
        if (value != o.value) return value < o.value;
        if (q != o.q) return q < o.q;
        if (sigma2 != o.sigma2) return sigma2 < o.sigma2;
        return sx < o.sx;
    }
};

}  // namespace detail

/// Exhaustive grid minimum of the objective over A_rho or B_rho (grid over
/// (sigma_x, sigma_y, q) in (0, 1.2]^2 x (-1, 1)) or D_rho (grid over
/// (sigma^2, q) in (0, 1] x (-1, 1)).  q_floor restricts the search to
/// q > q_floor, used to probe the rho < q branch.  Deterministic: slices are
/// scanned in parallel and merged under a total order.
inline EnvelopeSolution lemma2_grid_oracle(const Correlation& rho, double lambda,
                                           FeasibleSet set_kind, int resolution,
                                           double q_floor = -1.0) {
    if (resolution < 100)
        throw std::invalid_argument("lemma2_grid_oracle: resolution must be >= 100");
    const double r = rho.abs_value();
    const int n = resolution;

    std::vector<double> qs(n), log1mq2(n);
    for (int j = 0; j < n; ++j) {
        qs[j] = -1.0 + 2.0 * (j + 1) / (n + 1);
        log1mq2[j] = std::log(1.0 - qs[j] * qs[j]);
    }
    const double l2pe = std::log(two_pi_e * two_pi_e);
    const double half_1pl = 0.5 * (1.0 + lambda);
    // F = 1/2 Ls - (1+lambda)/2 (Ls + ln(1-q^2)), Ls = ln((2 pi e)^2 P^2)
    auto objective = [&](double p, int j) {
        const double ls = l2pe + 2.0 * std::log(p);
        return 0.5 * ls - half_1pl * (ls + log1mq2[j]);
    };
    // first grid index with q > q_floor
    int j_begin = 0;
    while (j_begin < n && qs[j_begin] <= q_floor) ++j_begin;

    detail::GridBest best;

    if (set_kind == FeasibleSet::d_rho) {
        for (int i = 1; i <= n; ++i) {
            const double s2 = static_cast<double>(i) / n;
            for (int j = j_begin; j < n; ++j) {
                if (!feasible_d(r, s2, qs[j])) continue;
                const double v = objective(s2, j);
                detail::GridBest cand{v, qs[j], s2, std::sqrt(s2), std::sqrt(s2)};
                if (cand.better_than(best)) best = cand;
            }
        }
    } else {
        const bool use_a = set_kind == FeasibleSet::a_rho;
        auto scan_rows = [&](int i_lo, int i_hi, detail::GridBest& out) {
            detail::GridBest local;
            for (int i = i_lo; i < i_hi; ++i) {
                const double sx = 1.2 * (i + 1) / n;
                if (use_a && sx > 1.0) continue;
                for (int k = 0; k < n; ++k) {
                    const double sy = 1.2 * (k + 1) / n;
                    if (use_a && sy > 1.0) continue;
                    const double p = sx * sy;
                    if (!use_a && p > 1.0) continue;
                    // both sets constrain q to an interval around rho/P
                    const double slack =
                        use_a ? std::sqrt((1.0 - sx * sx) * (1.0 - sy * sy))
                              : 1.0 - p;
                    const double q_lo = (r - slack) / p, q_hi = (r + slack) / p;
                    int jl = static_cast<int>(std::ceil((q_lo + 1.0) * (n + 1) / 2.0)) - 2;
                    int jh = static_cast<int>(std::floor((q_hi + 1.0) * (n + 1) / 2.0));
                    jl = std::max(jl, j_begin);
                    jh = std::min(jh, n - 1);
                    for (int j = jl; j <= jh; ++j) {
                        const bool ok = use_a ? feasible_a(r, sx, sy, qs[j])
                                              : feasible_b(r, sx, sy, qs[j]);
                        if (!ok) continue;
                        const double v = objective(p, j);
                        detail::GridBest cand{v, qs[j], p, sx, sy};
                        if (cand.better_than(local)) local = cand;
                    }
                }
            }
            out = local;
        };

        unsigned hw = std::thread::hardware_concurrency();
        const int n_threads = std::max(1, std::min<int>(hw ? hw : 1, 8));
        std::vector<detail::GridBest> partial(n_threads);
        std::vector<std::thread> workers;
        for (int t = 0; t < n_threads; ++t) {
            const int lo = n * t / n_threads, hi = n * (t + 1) / n_threads;
            workers.emplace_back(scan_rows, lo, hi, std::ref(partial[t]));
        }
        for (auto& w : workers) w.join();
        for (const auto& pb : partial)
            if (pb.better_than(best)) best = pb;
    }

    if (!std::isfinite(best.value))
        throw std::runtime_error("lemma2_grid_oracle: no feasible grid point");

    EnvelopeSolution sol;
    sol.q_star = best.q;
    sol.sigma2_star = best.sigma2;
    sol.min_value = best.value;
    sol.branch = best.q <= r ? EnvelopeBranch::rho_ge_q : EnvelopeBranch::rho_lt_q;
    // the dual variable is only derived in closed form on the rho >= q branch
    sol.mu_star = sol.branch == EnvelopeBranch::rho_ge_q ? lambda / (1.0 - r) : 0.0;
    return sol;
}

// ---------------------------------------------------------------------------
// the dual objective g(mu) from the relaxed bound

/// g(mu) = h(X,Y) - mu gamma + mu/2 ln(mu^2/(mu^2-1))
///         - 1/2 ln((2 pi e)^2 (1-rho)^2 (mu+1)/(mu-1)),  mu > 1.
inline double g_mu(const Correlation& rho, const Gamma& gamma, double joint_entropy,
                   double mu) {
    if (!(mu > 1.0)) throw std::domain_error("g_mu: requires mu > 1");
    const double r = rho.abs_value();
    return joint_entropy - mu * gamma.value() +
           0.5 * mu * std::log(mu * mu / (mu * mu - 1.0)) -
           0.5 * std::log(two_pi_e * two_pi_e * (1.0 - r) * (1.0 - r) * (mu + 1.0) /
                          (mu - 1.0));
}

/// dg/dmu = -1/2 ln((mu^2 - 1)/mu^2) - gamma (independent of rho and h).
inline double g_mu_derivative(const Gamma& gamma, double mu) {
    if (!(mu > 1.0)) throw std::domain_error("g_mu_derivative: requires mu > 1");
    return -0.5 * std::log((mu * mu - 1.0) / (mu * mu)) - gamma.value();
}

struct GMaxResult {
    double mu_star;
    double value;
};

/// Closed-form maximizer mu* = 1/sqrt(1 - e^{-2 gamma}) and g(mu*).
inline GMaxResult maximize_g(const Correlation& rho, const Gamma& gamma,
                             double joint_entropy) {
    if (gamma.value() == 0.0)
        throw std::domain_error("maximize_g: mu* is unbounded at gamma = 0");
    const double r = rho.abs_value();
    if (!(r > 0.0 && r < 1.0))
        throw std::domain_error("maximize_g: requires 0 < |rho| < 1");
    const double mu = 1.0 / std::sqrt(-std::expm1(-2.0 * gamma.value()));
    if (mu > 1.0) return {mu, g_mu(rho, gamma, joint_entropy, mu)};
    // huge gamma: mu* rounds to 1; the value is the mu -> 1+ limit of g
    return {mu, joint_entropy - gamma.value() - std::log(2.0) -
                    0.5 * std::log(two_pi_e * two_pi_e * (1.0 - r) * (1.0 - r))};
}

/// Golden-section maximization over mu in (1, 1e6], bracket found by
/// doubling.  g is strictly concave, so unimodal search is safe.
inline GMaxResult maximize_g_numeric(const Correlation& rho, const Gamma& gamma,
                                     double joint_entropy) {
    if (gamma.value() == 0.0)
        throw std::domain_error("maximize_g_numeric: mu* is unbounded at gamma = 0");
    auto g = [&](double mu) { return g_mu(rho, gamma, joint_entropy, mu); };
    double lo = 1.0 + 1e-9, hi = 2.0;
    while (hi < 1e6 && g(std::min(2.0 * hi, 1e6)) > g(hi)) hi = std::min(2.0 * hi, 1e6);
    hi = std::min(2.0 * hi, 1e6);

    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = g(c), fd = g(d);
    while (b - a > 1e-10 * std::max(1.0, std::abs(a))) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = g(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = g(d);
        }
    }
    const double mu = 0.5 * (a + b);
    return {mu, g(mu)};
}

}  // namespace wyner
