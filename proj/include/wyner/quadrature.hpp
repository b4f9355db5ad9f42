#pragma once

// Deterministic adaptive quadrature (1D, 2D, polar) plus a seeded Monte
// Carlo estimator.  The adaptive scheme uses the nested Fejer-2 pair with 7
// and 15 interior nodes per panel: the low rule's nodes are a subset of the
// high rule's, the panel error is |high - low|, and the worst panel is split
// first (global strategy).  Rules are open, so integrable endpoint
// singularities (ln r at 0) are never evaluated, only refined towards.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "wyner/core.hpp"

namespace wyner {

struct QuadratureConfig {
    double abs_tol_1d = 1e-7;     // target absolute error, 1D panels
    double abs_tol_2d = 1e-6;     // target absolute error, 2D panels
    int max_depth = 60;           // adaptive bisection cap per panel
    int min_depth = 4;            // forced initial refinement (per axis)
    double domain_sigmas = 8.0;   // truncation radius in marginal std devs
    double r_max = 12.0;          // radial truncation, whitened units
    long mc_samples = 200000;
    std::uint64_t mc_seed = 1;

    void validate() const {
        if (!(abs_tol_1d > 0.0) || !(abs_tol_2d > 0.0))
            throw std::invalid_argument("QuadratureConfig: abs_tol must be > 0");
        if (max_depth < 1) throw std::invalid_argument("QuadratureConfig: max_depth < 1");
        if (!(domain_sigmas >= 4.0))
            throw std::invalid_argument("QuadratureConfig: domain_sigmas must be >= 4");
        if (mc_samples < 1000)
            throw std::invalid_argument("QuadratureConfig: mc_samples must be >= 1000");
    }
};

/// Thrown when the requested tolerance is out of reach; carries the best
/// estimate so callers can still report it.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double est, double err)
        : std::runtime_error(what), estimate(est), error_estimate(err) {}
    double estimate;
    double error_estimate;
};

namespace detail {

// Fejer-2 nodes x_k = cos(k pi / n), k = 1..n-1, with the closed-form
// weights w_k = (4 sin t_k / n) * sum_{m odd} sin(m t_k)/m.  n = 16 gives the
// 15-node rule; its even-index nodes form the nested 7-node rule (n = 8).
struct Fejer2Pair {
    std::array<double, 15> node{};
    std::array<double, 15> w_high{};
    std::array<double, 15> w_low{};  // zero on nodes the low rule skips

    Fejer2Pair() {
        auto weight = [](int k, int n) {
            const double t = k * pi / n;
            double s = 0.0;
            for (int m = 1; m <= n / 2; ++m) s += std::sin((2 * m - 1) * t) / (2 * m - 1);
            return 4.0 * std::sin(t) / n * s;
        };
        for (int k = 1; k <= 15; ++k) {
            node[k - 1] = std::cos(k * pi / 16.0);
            w_high[k - 1] = weight(k, 16);
            w_low[k - 1] = (k % 2 == 0) ? weight(k / 2, 8) : 0.0;
        }
    }
};

inline const Fejer2Pair& fejer2() {
    static const Fejer2Pair rule;
    return rule;
}

struct Panel1 {
    double a, b;
    double value, error;
    int depth;
};

template <class F>
Panel1 eval_panel(F& f, double a, double b, int depth) {
    const auto& rule = fejer2();
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double hi = 0.0, lo = 0.0;
    for (int i = 0; i < 15; ++i) {
        const double v = f(c + h * rule.node[i]);
        hi += rule.w_high[i] * v;
        lo += rule.w_low[i] * v;
    }
    return {a, b, hi * h, std::abs(hi - lo) * h, depth};
}

struct PanelWorse {
    bool operator()(const Panel1& x, const Panel1& y) const {
        if (x.error != y.error) return x.error < y.error;
        return x.a > y.a;  // deterministic tie-break
    }
};

}  // namespace detail

/// Adaptive estimate of the integral of f over [a, b] to cfg.abs_tol_1d.
/// Optional breakpoints seed the initial panel list (integrand kinks, atom
/// locations); they must lie inside (a, b).
template <class F>
double integrate_1d(F&& f, double a, double b, const QuadratureConfig& cfg,
                    std::span<const double> breakpoints = {}) {
    cfg.validate();
    if (!(a < b)) throw std::invalid_argument("integrate_1d: requires a < b");

    std::vector<double> edges{a};
    for (double x : breakpoints)
        if (x > a && x < b) edges.push_back(x);
    edges.push_back(b);
    std::sort(edges.begin(), edges.end());

    std::vector<detail::Panel1> heap;
    // forced refinement so narrow features are not missed by the first pass
    std::function<void(double, double, int)> seed = [&](double lo, double hi, int d) {
        if (d >= cfg.min_depth) {
            heap.push_back(detail::eval_panel(f, lo, hi, d));
            return;
        }
        const double m = 0.5 * (lo + hi);
        seed(lo, m, d + 1);
        seed(m, hi, d + 1);
    };
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) seed(edges[i], edges[i + 1], 0);
    std::make_heap(heap.begin(), heap.end(), detail::PanelWorse{});

    double sum_err = 0.0;
    for (const auto& p : heap) sum_err += p.error;
    constexpr std::size_t panel_cap = 200000;
    std::size_t iter = 0;
    while (sum_err > cfg.abs_tol_1d) {
        std::pop_heap(heap.begin(), heap.end(), detail::PanelWorse{});
        const detail::Panel1 p = heap.back();
        heap.pop_back();
        if (p.depth >= cfg.max_depth || heap.size() + 2 > panel_cap) {
            heap.push_back(p);
            double est = 0.0, err = 0.0;
            for (const auto& q : heap) est += q.value, err += q.error;
            throw QuadratureError("integrate_1d: tolerance not reached", est, err);
        }
        const double m = 0.5 * (p.a + p.b);
        const auto left = detail::eval_panel(f, p.a, m, p.depth + 1);
        const auto right = detail::eval_panel(f, m, p.b, p.depth + 1);
        sum_err += left.error + right.error - p.error;
        heap.push_back(left);
        std::push_heap(heap.begin(), heap.end(), detail::PanelWorse{});
        heap.push_back(right);
        std::push_heap(heap.begin(), heap.end(), detail::PanelWorse{});
        if (++iter % 4096 == 0) {  // resync against accumulation drift
            sum_err = 0.0;
            for (const auto& q : heap) sum_err += q.error;
        }
    }
    // fixed summation order for reproducibility
    std::sort(heap.begin(), heap.end(),
              [](const detail::Panel1& x, const detail::Panel1& y) { return x.a < y.a; });
    double sum = 0.0;
    for (const auto& p : heap) sum += p.value;
    return sum;
}

struct Box {
    double x_lo, x_hi, y_lo, y_hi;
};

namespace detail {

struct Panel2 {
    Box box;
    double value, error;
    double err_x, err_y;  // sensitivity of each axis's low-order defect
    int depth;
};

template <class F>
Panel2 eval_panel2(F& f, const Box& box, int depth) {
    const auto& rule = fejer2();
    const double cx = 0.5 * (box.x_lo + box.x_hi), hx = 0.5 * (box.x_hi - box.x_lo);
    const double cy = 0.5 * (box.y_lo + box.y_hi), hy = 0.5 * (box.y_hi - box.y_lo);
    double vals[15][15];
    for (int i = 0; i < 15; ++i)
        for (int j = 0; j < 15; ++j)
            vals[i][j] = f(cx + hx * rule.node[i], cy + hy * rule.node[j]);
    double kk = 0.0, gk = 0.0, kg = 0.0, gg = 0.0;
    for (int i = 0; i < 15; ++i) {
        double row_k = 0.0, row_g = 0.0;
        for (int j = 0; j < 15; ++j) {
            row_k += rule.w_high[j] * vals[i][j];
            row_g += rule.w_low[j] * vals[i][j];
        }
        kk += rule.w_high[i] * row_k;
        kg += rule.w_high[i] * row_g;
        gk += rule.w_low[i] * row_k;
        gg += rule.w_low[i] * row_g;
    }
    const double scale = hx * hy;
    Panel2 p;
    p.box = box;
    p.value = kk * scale;
    p.error = std::abs(kk - gg) * scale;
    p.err_x = std::abs(kk - gk) * scale;
    p.err_y = std::abs(kk - kg) * scale;
    p.depth = depth;
    return p;
}

struct Panel2Worse {
    bool operator()(const Panel2& x, const Panel2& y) const {
        if (x.error != y.error) return x.error < y.error;
        if (x.box.x_lo != y.box.x_lo) return x.box.x_lo > y.box.x_lo;
        return x.box.y_lo > y.box.y_lo;
    }
};

}  // namespace detail

/// Adaptive tensor-panel estimate over a rectangle to cfg.abs_tol_2d,
/// bisecting each worst panel along its worst axis.
template <class F>
double integrate_2d(F&& f, const Box& box, const QuadratureConfig& cfg,
                    std::span<const double> x_breaks = {},
                    std::span<const double> y_breaks = {}) {
    cfg.validate();
    if (!(box.x_lo < box.x_hi) || !(box.y_lo < box.y_hi))
        throw std::invalid_argument("integrate_2d: empty box");

    auto edge_list = [](double lo, double hi, std::span<const double> brk) {
        std::vector<double> e{lo};
        for (double x : brk)
            if (x > lo && x < hi) e.push_back(x);
        e.push_back(hi);
        std::sort(e.begin(), e.end());
        return e;
    };
    const auto xe = edge_list(box.x_lo, box.x_hi, x_breaks);
    const auto ye = edge_list(box.y_lo, box.y_hi, y_breaks);

    std::vector<detail::Panel2> heap;
    std::function<void(const Box&, int)> seed = [&](const Box& b, int d) {
        if (d >= 2 * cfg.min_depth) {
            heap.push_back(detail::eval_panel2(f, b, d));
            return;
        }
        // alternate axes while seeding: split the wider side
        if (b.x_hi - b.x_lo >= b.y_hi - b.y_lo) {
            const double m = 0.5 * (b.x_lo + b.x_hi);
            seed({b.x_lo, m, b.y_lo, b.y_hi}, d + 1);
            seed({m, b.x_hi, b.y_lo, b.y_hi}, d + 1);
        } else {
            const double m = 0.5 * (b.y_lo + b.y_hi);
            seed({b.x_lo, b.x_hi, b.y_lo, m}, d + 1);
            seed({b.x_lo, b.x_hi, m, b.y_hi}, d + 1);
        }
    };
    for (std::size_t i = 0; i + 1 < xe.size(); ++i)
        for (std::size_t j = 0; j + 1 < ye.size(); ++j)
            seed({xe[i], xe[i + 1], ye[j], ye[j + 1]}, 0);
    std::make_heap(heap.begin(), heap.end(), detail::Panel2Worse{});

    double sum_err = 0.0;
    for (const auto& p : heap) sum_err += p.error;
    constexpr std::size_t panel_cap = 120000;
    std::size_t iter = 0;
    while (sum_err > cfg.abs_tol_2d) {
        std::pop_heap(heap.begin(), heap.end(), detail::Panel2Worse{});
        const detail::Panel2 p = heap.back();
        heap.pop_back();
        if (p.depth >= 2 * cfg.max_depth || heap.size() + 2 > panel_cap) {
            heap.push_back(p);
            double est = 0.0, err = 0.0;
            for (const auto& q : heap) est += q.value, err += q.error;
            throw QuadratureError("integrate_2d: tolerance not reached", est, err);
        }
        Box left = p.box, right = p.box;
        if (p.err_x >= p.err_y) {
            const double m = 0.5 * (p.box.x_lo + p.box.x_hi);
            left.x_hi = m;
            right.x_lo = m;
        } else {
            const double m = 0.5 * (p.box.y_lo + p.box.y_hi);
            left.y_hi = m;
            right.y_lo = m;
        }
        const auto pl = detail::eval_panel2(f, left, p.depth + 1);
        const auto pr = detail::eval_panel2(f, right, p.depth + 1);
        sum_err += pl.error + pr.error - p.error;
        heap.push_back(pl);
        std::push_heap(heap.begin(), heap.end(), detail::Panel2Worse{});
        heap.push_back(pr);
        std::push_heap(heap.begin(), heap.end(), detail::Panel2Worse{});
        if (++iter % 1024 == 0) {
            sum_err = 0.0;
            for (const auto& q : heap) sum_err += q.error;
        }
    }
    std::sort(heap.begin(), heap.end(), [](const detail::Panel2& x, const detail::Panel2& y) {
        if (x.box.x_lo != y.box.x_lo) return x.box.x_lo < y.box.x_lo;
        return x.box.y_lo < y.box.y_lo;
    });
    double sum = 0.0;
    for (const auto& p : heap) sum += p.value;
    return sum;
}

/// 2 pi * integral of g(r) r dr over (0, r_max].  The Jacobian r absorbs a
/// logarithmic singularity of g at the origin.
template <class G>
double integrate_polar(G&& g, double r_max, const QuadratureConfig& cfg) {
    if (!(r_max > 0.0)) throw std::invalid_argument("integrate_polar: r_max must be > 0");
    auto radial = [&](double r) { return g(r) * r; };
    return 2.0 * pi * integrate_1d(radial, 0.0, r_max, cfg);
}

/// Seeded generator with explicit scalar transforms so sequences are
/// identical across platforms (std distributions are not portable).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

    std::uint64_t next_u64() {
        // xorshift* variant; splitmix64 step keeps short seeds well mixed
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// uniform in (0, 1)
    double uniform_pos() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

    /// standard normal, Box-Muller with a cached spare
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform_pos(), u2 = uniform_pos();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * pi * u2);
        have_spare_ = true;
        return r * std::cos(2.0 * pi * u2);
    }

    /// unit-rate exponential
    double exponential() { return -std::log(uniform_pos()); }

private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

struct McResult {
    double estimate;
    double std_error;
};

/// Sample mean and standard error of f over cfg.mc_samples draws from the
/// sampler (a callable Rng& -> pair<double,double>).  Reproducible per seed.
template <class F, class Sampler>
McResult mc_expectation(F&& f, Sampler&& sampler, const QuadratureConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.mc_seed);
    const long n = cfg.mc_samples;
    double mean = 0.0, m2 = 0.0;
    for (long i = 0; i < n; ++i) {
        const auto [x, y] = sampler(rng);
        const double v = f(x, y);
        const double d = v - mean;
        mean += d / static_cast<double>(i + 1);
        m2 += d * (v - mean);
    }
    const double var = n > 1 ? m2 / static_cast<double>(n - 1) : 0.0;
    return {mean, std::sqrt(std::max(var, 0.0) / static_cast<double>(n))};
}

}  // namespace wyner
