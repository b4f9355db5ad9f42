// Acceptance suite: one line per criterion, nonzero exit if any fails.
// Tolerances are fixed here, not configurable.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "wyner/wyner.hpp"

using namespace wyner;

namespace {

int failures = 0;

void report(int criterion, const std::string& what, bool ok) {
    std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", criterion, what.c_str());
    if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct MaxDiff {
    double value = 0.0;
    void add(double got, double want) { value = std::max(value, std::abs(got - want)); }
};

const QuadratureConfig cfg{};

// --------------------------------------------------------------------------

void criterion1_figure1() {
    const auto t0 = std::chrono::steady_clock::now();
    const double sigmas[] = {0.0, 0.5, 1.0, 2.0, 3.0, 5.0};
    const double exact_ref[] = {0.549306144, 0.692758022, 0.953037698,
                                1.213877697, 1.241680215, 1.242453313};
    const double mi_ref[] = {0.143841036, 0.223232122, 0.413771123,
                             0.744709871, 0.830062831, 0.836986502};
    MaxDiff d_exact, d_mi;
    for (int i = 0; i < 6; ++i) {
        const auto m = make_example1(0.5, sigmas[i]);
        const BivariateModel bm = m;
        const double h = joint_entropy(bm, cfg).value;
        d_exact.add(lemma1_exact(m, h), exact_ref[i]);
        const double hx = marginal_entropy(bm, Axis::x, cfg).value;
        const double hy = marginal_entropy(bm, Axis::y, cfg).value;
        d_mi.add(std::max(hx + hy - h, 0.0), mi_ref[i]);
    }
    const double elapsed = seconds_since(t0);
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "figure 1 exact/MI within 1e-3 (max diffs %.2e, %.2e), %.1fs < 30s",
                  d_exact.value, d_mi.value, elapsed);
    report(1, buf, d_exact.value <= 1e-3 && d_mi.value <= 1e-3 && elapsed < 30.0);
}

void criterion2_figure2() {
    // the figure-2 reference tables use the same-sign-probability convention:
    // probability 0.9 of A = B corresponds to noise correlation 0.8
    const double r_corr = 2.0 * 0.9 - 1.0;
    const double sigmas[] = {0.5, 1.0, 2.0};
    const double lower_ref[] = {0.632460751, 0.751400238, 0.557722996};
    const double upper_ref[] = {0.727770931, 1.087872474, 1.513234441};
    const double mi_ref[] = {0.188219214, 0.278936347, 0.445353127};
    MaxDiff d_lower, d_upper, d_mi;
    for (int i = 0; i < 3; ++i) {
        const auto m = make_example2(0.5, sigmas[i], r_corr);
        const BivariateModel bm = m;
        const double h = joint_entropy(bm, cfg).value;
        d_lower.add(theorem1_lower_unclamped(h, covariance(bm)), lower_ref[i]);
        d_upper.add(agc_upper(m, h), upper_ref[i]);
        const double hx = marginal_entropy(bm, Axis::x, cfg).value;
        const double hy = marginal_entropy(bm, Axis::y, cfg).value;
        d_mi.add(std::max(hx + hy - h, 0.0), mi_ref[i]);
    }
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "figure 2 lower/upper/MI within 1e-3 (max diffs %.2e, %.2e, %.2e)",
                  d_lower.value, d_upper.value, d_mi.value);
    report(2, buf,
           d_lower.value <= 1e-3 && d_upper.value <= 1e-3 && d_mi.value <= 1e-3);
}

void criterion3_figure3() {
    const auto t0 = std::chrono::steady_clock::now();
    const double rhos[] = {0.2, 0.5, 0.9, 0.99};
    const double lower_ref[] = {0.013591707, 0.360165302, 1.283078661, 2.457511586};
    const double mi_ref[] = {0.064821958, 0.188251992, 0.874776546, 2.002928714};
    MaxDiff d_lower, d_mi;
    for (int i = 0; i < 4; ++i) {
        const BivariateModel m = BivariateLaplace{rhos[i]};
        const double h = joint_entropy(m, cfg).value;
        d_lower.add(theorem1_lower(h, covariance(m)), lower_ref[i]);
        const double hx = marginal_entropy(m, Axis::x, cfg).value;
        d_mi.add(std::max(2.0 * hx - h, 0.0), mi_ref[i]);
    }
    const double elapsed = seconds_since(t0);
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "figure 3 lower/MI within 5e-3 (max diffs %.2e, %.2e), %.1fs < 120s",
                  d_lower.value, d_mi.value, elapsed);
    report(3, buf, d_lower.value <= 5e-3 && d_mi.value <= 5e-3 && elapsed < 120.0);
}

void criterion4_closed_forms() {
    bool ok = std::abs(gaussian_wyner(Correlation(0.5)) - 0.5 * std::log(3.0)) <= 1e-12;
    Rng rng(404);
    for (int i = 0; i < 20; ++i) {
        const double rho = 0.999 * (2.0 * rng.uniform_pos() - 1.0);
        const Correlation c(rho);
        ok = ok && relaxed_gaussian_wyner(c, Gamma(0.0)) == gaussian_wyner(c);
        if (rho != 0.0) {
            const double gamma_mi = -0.5 * std::log(1.0 - rho * rho);
            ok = ok && std::abs(relaxed_gaussian_wyner(c, Gamma(gamma_mi))) <= 1e-12;
        }
    }
    report(4, "closed-form exactness of the Gaussian and relaxed values", ok);
}

void criterion5_entropy_calibration() {
    bool ok = true;
    double worst = 0.0;
    Rng rng(505);
    for (int i = 0; i < 10; ++i) {
        const double vx = 0.4 + 2.0 * rng.uniform_pos();
        const double vy = 0.4 + 2.0 * rng.uniform_pos();
        const double rho = 1.8 * rng.uniform_pos() - 0.9;
        const Covariance2 k{vx, vy, rho * std::sqrt(vx * vy)};
        auto dens = [&](double x, double y) {
            const double quad =
                (k.var_y * x * x - 2.0 * k.cov_xy * x * y + k.var_x * y * y) / k.det();
            return std::exp(-0.5 * quad) / (2.0 * pi * std::sqrt(k.det()));
        };
        const double hx = 8.0 * std::sqrt(vx), hy = 8.0 * std::sqrt(vy);
        const double h = entropy_2d_quadrature(dens, {-hx, hx, -hy, hy}, cfg);
        const double diff = std::abs(h - gaussian_joint_entropy(k));
        worst = std::max(worst, diff);
        ok = ok && diff <= 1e-6;
    }

    // Monte Carlo oracle vs the production path, five points per family
    bool mc_ok = true;
    std::vector<BivariateModel> models;
    for (double rho : {0.1, 0.3, 0.5, 0.7, 0.9})
        models.emplace_back(GaussianPair{{1.0, 1.0, rho}});
    for (double s : {0.3, 0.8, 1.5, 2.5, 4.0}) models.emplace_back(make_example1(0.5, s));
    for (double s : {0.3, 0.8, 1.5, 2.5, 4.0})
        models.emplace_back(make_example2(0.5, s, 0.8));
    for (double rho : {0.2, 0.5, 0.7, 0.9, 0.99})
        models.emplace_back(BivariateLaplace{rho});
    for (const auto& m : models) {
        const double h = joint_entropy(m, cfg).value;
        const auto mc = joint_entropy_mc(m, cfg);
        if (std::abs(h - mc.value) >= 3.0 * mc.error_estimate) mc_ok = false;
    }

    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "entropy calibration: 10 Gaussian quadratures within 1e-6 "
                  "(worst %.2e), MC within 3 SE on 20 model points",
                  worst);
    report(5, buf, ok && mc_ok);
}

void criterion6_lemma2_oracle() {
    // per-pair gap bound: |oracle - closed| within 5 grid steps' worth of
    // objective variation, at resolution 400 and again at 800 where that
    // yardstick has halved (the raw lattice gap itself shrinks faster than
    // linearly against the curved active constraint, ~h^1.5; ratios printed)
    Rng rng(606);
    bool gap_ok_400 = true, gap_ok_800 = true, kkt_ok = true;
    double sum_gap_400 = 0.0, sum_gap_800 = 0.0;
    double sum_var_400 = 0.0, sum_var_800 = 0.0;

    auto step_variation = [](double lam, const EnvelopeSolution& s, int res) {
        const double dq = 2.0 / (res + 1.0), ds2 = 2.4 / res;
        double v = 0.0;
        for (double q : {s.q_star - dq, s.q_star + dq})
            if (std::abs(q) < 1.0)
                v = std::max(v, std::abs(objective_f(lam, s.sigma2_star, q) - s.min_value));
        for (double s2 : {s.sigma2_star - ds2, s.sigma2_star + ds2})
            if (s2 > 0.0)
                v = std::max(v, std::abs(objective_f(lam, s2, s.q_star) - s.min_value));
        return v;
    };

    for (int i = 0; i < 20; ++i) {
        const double rho = 0.15 + 0.8 * rng.uniform_pos();
        const double lam = rho * (0.1 + 0.9 * rng.uniform_pos());
        const Correlation c(rho);
        const double closed = lemma2_closed_form(c, lam);

        const auto s400 = lemma2_grid_oracle(c, lam, FeasibleSet::a_rho, 400);
        const auto s800 = lemma2_grid_oracle(c, lam, FeasibleSet::a_rho, 800);
        const double var400 = step_variation(lam, s400, 400);
        const double var800 = step_variation(lam, s800, 800);
        sum_gap_400 += s400.min_value - closed;
        sum_gap_800 += s800.min_value - closed;
        sum_var_400 += var400;
        sum_var_800 += var800;
        if (s400.min_value - closed > 5.0 * var400 + 1e-12) gap_ok_400 = false;
        if (s800.min_value - closed > 5.0 * var800 + 1e-12) gap_ok_800 = false;
        if (s400.min_value < closed - 1e-12) gap_ok_400 = false;  // never undercuts
        if (s800.min_value < closed - 1e-12) gap_ok_800 = false;

        const auto pt = lemma2_kkt_point(c, lam);
        const auto res = kkt_residuals(rho, lam, pt.q_star, pt.sigma2_star, pt.mu_star);
        if (std::max({std::abs(res[0]), std::abs(res[1]), std::abs(res[2])}) > 1e-10)
            kkt_ok = false;
    }
    const double var_ratio = sum_var_800 / sum_var_400;
    const double gap_ratio = sum_gap_800 / sum_gap_400;
    const bool halves = var_ratio >= 0.375 && var_ratio <= 0.625;
    char buf[240];
    std::snprintf(buf, sizeof buf,
                  "lemma-2 oracle: 20 random (rho,lambda), gaps within 5 grid-step "
                  "variations at res 400 and 800, KKT residuals <= 1e-10, step "
                  "yardstick halves (ratio %.3f in [0.375,0.625]; raw gap ratio %.3f)",
                  var_ratio, gap_ratio);
    report(6, buf, gap_ok_400 && gap_ok_800 && kkt_ok && halves);
}

void criterion7_identities() {
    // theorem-1 and additive-model forms agree to 1e-12 across the full grids
    bool identity_ok = true;
    MaxDiff d_identity;
    for (int i = 0; i <= 100; ++i) {
        const double sigma = 0.05 * i;
        for (double r : {1.0, 0.8}) {
            const auto m = make_example2(0.5, sigma, r);
            // the identity is algebraic in h; a placeholder entropy keeps the
            // full 202-point grid cheap (real-h spot checks follow)
            const double h = gaussian_joint_entropy(covariance(m)) - 0.1;
            const double thm1 = theorem1_lower_unclamped(h, covariance(m));
            const double eq15 = agc_lower(m, h);
            d_identity.add(thm1, eq15);
            if (std::abs(thm1 - eq15) > 1e-12) identity_ok = false;
            if (agc_lower(m, h) > agc_upper(m, h) + 1e-12) identity_ok = false;
        }
    }

    // real-entropy spot checks plus the KL rewriting on every family
    bool kl_ok = true;
    const std::vector<BivariateModel> models{
        BivariateModel{make_example1(0.5, 1.0)},
        BivariateModel{make_example2(0.5, 1.0, 0.8)},
        BivariateModel{BivariateLaplace{0.5}},
        BivariateModel{GaussianPair{{1.0, 1.0, 0.7}}},
    };
    for (const auto& m : models) {
        const double h = joint_entropy(m, cfg).value;
        const Covariance2 k = covariance(m);
        const double via_kl =
            kl_form_lower(gaussian_wyner(correlation_of(k)), kl_to_gaussian(m, cfg));
        const double via_h = theorem1_lower_unclamped(h, k);
        if (std::abs(via_kl - via_h) > 2.0 * (cfg.abs_tol_2d + 1e-5)) kl_ok = false;
        if (const auto* agc = std::get_if<AdditiveGaussianChannelModel>(&m)) {
            if (std::abs(agc_lower(*agc, h) - via_h) > 1e-12) identity_ok = false;
        }
    }
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "identities: thm-1 == additive form to 1e-12 on 202 grid points "
                  "(max %.1e), lower <= upper, KL form within 2x quadrature tol",
                  d_identity.value);
    report(7, buf, identity_ok && kl_ok);
}

void criterion8_gmu() {
    bool ok = true;
    const Correlation rho(0.5);
    for (double gamma : {0.01, 0.1, 0.5, 1.0}) {
        const Gamma g(gamma);
        const auto closed = maximize_g(rho, g, 3.0);
        const auto numeric = maximize_g_numeric(rho, g, 3.0);
        if (std::abs(closed.mu_star - numeric.mu_star) > 1e-6) ok = false;
        if (std::abs(closed.value - numeric.value) > 1e-8) ok = false;
        for (double mu : {1.02, 1.3, 2.0, 5.0, 30.0, 300.0}) {
            const double d = 1e-6 * mu;
            const double fd = (g_mu(rho, g, 3.0, mu + d) - g_mu(rho, g, 3.0, mu - d)) /
                              (2.0 * d);
            const double an = g_mu_derivative(g, mu);
            if (std::abs(fd - an) > 1e-6 * std::max(1.0, std::abs(an))) ok = false;
        }
    }
    report(8, "g(mu): numeric maximization matches mu* = 1/sqrt(1-e^{-2 gamma}) "
              "within 1e-6/1e-8, analytic derivative matches finite differences",
           ok);
}

}  // namespace

int main() {
    criterion1_figure1();
    criterion2_figure2();
    criterion3_figure3();
    criterion4_closed_forms();
    criterion5_entropy_calibration();
    criterion6_lemma2_oracle();
    criterion7_identities();
    criterion8_gmu();
    if (failures == 0) std::printf("all acceptance criteria passed\n");
    else std::printf("%d acceptance criteria FAILED\n", failures);
    return failures == 0 ? 0 : 1;
}
