// Command-line front end: evaluate the common-information bounds at a point,
// sweep a parameter to CSV, verify the envelope optimization against the
// grid oracle, and compare sweep output against the shipped fixture tables.
//
// Exit codes: 0 success, 1 usage error, 2 numerical failure, 3 fixture
// mismatch.

#include <CLI11.hpp>

#include <atomic>
#include <cstdio>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "wyner/model_config.hpp"
#include "wyner/wyner.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_numerical = 2;
constexpr int exit_mismatch = 3;

struct ModelOptions {
    std::string model = "agc";
    double rho_hat = 0.5;
    double r = 1.0;
    double sigma_a = 1.0;
    double rho_l = 0.5;
    std::string spec_file;
};

void add_model_options(CLI::App* cmd, ModelOptions& opt) {
    cmd->add_option("--model", opt.model, "model family")
        ->check(CLI::IsMember({"gaussian", "agc", "agc4", "laplace"}));
    cmd->add_option("--rho-hat", opt.rho_hat,
                    "correlation of the Gaussian component (also the gaussian "
                    "family's correlation)");
    cmd->add_option("--r", opt.r, "noise correlation (agc4)");
    cmd->add_option("--sigma-a", opt.sigma_a, "noise scale sigma_A (agc, agc4)");
    cmd->add_option("--rho-l", opt.rho_l, "Laplace correlation rho_l");
    cmd->add_option("--spec", opt.spec_file, "JSON model spec file (overrides flags)");
}

wyner::BivariateModel build_model(const ModelOptions& opt) {
    if (!opt.spec_file.empty()) {
        std::ifstream in(opt.spec_file);
        if (!in) throw CLI::ValidationError("--spec", "cannot open " + opt.spec_file);
        nlohmann::json j;
        in >> j;
        return wyner::model_from_json(j);
    }
    if (opt.model == "gaussian")
        return wyner::GaussianPair{wyner::Covariance2{1.0, 1.0, opt.rho_hat}};
    if (opt.model == "agc") {
        if (opt.r != 1.0)
            throw CLI::ValidationError("--r", "agc is the A = B family (r = 1); use agc4");
        return wyner::make_example1(opt.rho_hat, opt.sigma_a);
    }
    if (opt.model == "agc4") return wyner::make_example2(opt.rho_hat, opt.sigma_a, opt.r);
    return wyner::BivariateLaplace{opt.rho_l};
}

wyner::QuadratureConfig make_config(double tol, std::uint64_t seed) {
    wyner::QuadratureConfig cfg;
    if (tol > 0.0) {
        cfg.abs_tol_2d = tol;
        cfg.abs_tol_1d = tol / 10.0;
    }
    cfg.mc_seed = seed;
    return cfg;
}

std::string fmt(double v) { return wyner::format_double(v); }

// ---------------------------------------------------------------------------

int run_bound(const ModelOptions& mopt, double tol, std::uint64_t seed,
              std::optional<double> gamma, bool mc_check, const std::string& out_path) {
    const wyner::BivariateModel model = build_model(mopt);
    const wyner::QuadratureConfig cfg = make_config(tol, seed);
    std::optional<wyner::Gamma> g;
    if (gamma) g.emplace(*gamma);

    const wyner::BoundReport rep = wyner::evaluate_bounds(model, cfg, g);
    const auto h = wyner::joint_entropy(model, cfg);
    const char* method = h.method == wyner::EntropyMethod::closed_form ? "closed_form"
                                                                       : "quadrature";

    std::cout << "model                   " << mopt.model << "\n";
    std::cout << "joint_entropy           " << fmt(rep.joint_entropy) << " (" << method
              << ", err<=" << fmt(h.error_estimate) << ")\n";
    std::cout << "gaussian_joint_entropy  " << fmt(rep.gaussian_joint_entropy) << "\n";
    std::cout << "gaussian_wyner          " << fmt(rep.gaussian_wyner) << "\n";
    if (g) {
        const auto rho = wyner::correlation_of(wyner::covariance(model));
        const auto params = wyner::make_relaxation_params(*g, rho);
        std::cout << "gamma                   " << fmt(g->value()) << "\n";
        std::cout << "relaxed_gaussian_wyner  "
                  << fmt(wyner::relaxed_gaussian_wyner(rho, *g)) << "\n";
        std::cout << "mu_star                 "
                  << (params.mu_finite ? fmt(params.mu_star) : "inf") << "\n";
        std::cout << "valid_mu_condition      "
                  << (params.valid_mu_condition ? "true" : "false") << "\n";
    }
    std::cout << "lower_bound             " << fmt(rep.lower_bound) << "\n";
    std::cout << "lower_unclamped         " << fmt(rep.lower_unclamped) << "\n";
    if (rep.upper_bound)
        std::cout << "upper_bound             " << fmt(*rep.upper_bound) << "\n";
    if (rep.exact) std::cout << "exact                   " << fmt(*rep.exact) << "\n";
    std::cout << "mutual_information      " << fmt(rep.mutual_information) << "\n";
    if (mc_check) {
        const auto mc = wyner::joint_entropy_mc(model, cfg);
        std::cout << "joint_entropy_mc        " << fmt(mc.value) << " (monte_carlo, se="
                  << fmt(mc.error_estimate) << ", seed=" << cfg.mc_seed << ")\n";
    }

    if (!out_path.empty()) {
        wyner::CsvTable t;
        t.header = {"lower", "lower_unclamped", "upper", "exact", "mi", "joint_entropy"};
        t.rows.push_back({rep.lower_bound, rep.lower_unclamped, rep.upper_bound,
                          rep.exact, rep.mutual_information, rep.joint_entropy});
        wyner::write_csv(out_path, t);
    }
    return exit_ok;
}

// ---------------------------------------------------------------------------

struct SweepOptions {
    std::string sweep_param = "sigma-a";
    double start = 0.0;
    double stop = 5.0;
    double step = 0.05;
    std::vector<std::string> quantities;
    std::optional<double> gamma;
    int jobs = 0;
    std::string out_path = "sweep.csv";
};

int run_sweep(const ModelOptions& mopt, const SweepOptions& sopt, double tol,
              std::uint64_t seed) {
    if (!(sopt.step > 0.0) || sopt.start > sopt.stop)
        throw CLI::ValidationError("--step", "need step > 0 and start <= stop");

    std::vector<std::string> quantities = sopt.quantities;
    if (quantities.empty()) {
        if (mopt.model == "agc") quantities = {"exact", "mi"};
        else if (mopt.model == "agc4") quantities = {"lower", "mi", "upper"};
        else quantities = {"lower", "mi"};
    }
    for (const auto& q : quantities)
        if (q != "lower" && q != "upper" && q != "exact" && q != "mi" &&
            q != "gamma_lower")
            throw CLI::ValidationError("--quantities", "unknown quantity " + q);
    const bool wants_gamma =
        std::find(quantities.begin(), quantities.end(), "gamma_lower") != quantities.end();
    if (wants_gamma && !sopt.gamma)
        throw CLI::ValidationError("--quantities", "gamma_lower requires --gamma");
    if (std::find(quantities.begin(), quantities.end(), "exact") != quantities.end() &&
        mopt.model == "agc4" && mopt.r != 1.0)
        throw CLI::ValidationError("--quantities", "exact requires r = 1");

    const long n = static_cast<long>(std::floor((sopt.stop - sopt.start) / sopt.step + 0.5)) + 1;
    auto param_at = [&](long i) {
        const double p = sopt.start + static_cast<double>(i) * sopt.step;
        return std::round(p * 1e9) / 1e9;  // keep grid values on clean decimals
    };

    wyner::CsvTable table;
    table.header = {"param"};
    for (const auto& q : quantities) {
        table.header.push_back(q);
        if (q == "lower") table.header.push_back("lower_unclamped");
    }
    table.rows.assign(n, std::vector<std::optional<double>>(table.header.size()));

    const wyner::QuadratureConfig cfg = make_config(tol, seed);
    std::mutex warn_mutex;
    std::atomic<long> next{0};

    auto worker = [&] {
        for (;;) {
            const long i = next.fetch_add(1);
            if (i >= n) return;
            const double p = param_at(i);
            auto& row = table.rows[static_cast<std::size_t>(i)];
            row[0] = p;
            ModelOptions point = mopt;
            if (sopt.sweep_param == "sigma-a") point.sigma_a = p;
            else if (sopt.sweep_param == "rho-hat") point.rho_hat = p;
            else if (sopt.sweep_param == "r") point.r = p;
            else if (sopt.sweep_param == "rho-l") point.rho_l = p;
            try {
                const wyner::BivariateModel model = build_model(point);
                std::optional<wyner::Gamma> g;
                if (sopt.gamma) g.emplace(*sopt.gamma);
                const wyner::BoundReport rep = wyner::evaluate_bounds(model, cfg);
                std::size_t col = 1;
                for (const auto& q : quantities) {
                    if (q == "lower") {
                        row[col++] = rep.lower_bound;
                        row[col++] = rep.lower_unclamped;
                    } else if (q == "upper") {
                        row[col++] = rep.upper_bound;
                    } else if (q == "exact") {
                        row[col++] = rep.exact;
                    } else if (q == "mi") {
                        row[col++] = rep.mutual_information;
                    } else {  // gamma_lower
                        row[col++] = wyner::theorem3_lower(
                            rep.joint_entropy, wyner::covariance(model), *g);
                    }
                }
            } catch (const wyner::QuadratureError& e) {
                std::lock_guard<std::mutex> lock(warn_mutex);
                std::cerr << "warning: param " << fmt(p) << ": " << e.what()
                          << " (best estimate " << fmt(e.estimate) << ")\n";
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(warn_mutex);
                std::cerr << "warning: param " << fmt(p) << ": " << e.what() << "\n";
            }
        }
    };

    long jobs = sopt.jobs;
    if (jobs <= 0) jobs = static_cast<long>(std::thread::hardware_concurrency());
    jobs = std::max<long>(1, std::min<long>(jobs, n));
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    wyner::write_csv(sopt.out_path, table);
    std::cout << "wrote " << sopt.out_path << " (" << n << " rows)\n";
    return exit_ok;
}

// ---------------------------------------------------------------------------

int run_verify_lemma2(double rho, double lambda, int resolution, double gap_tol,
                      const std::string& set_name) {
    if (!(rho > 0.0 && rho < 1.0) || !(lambda > 0.0)) {
        std::cerr << "verify-lemma2: requires 0 < rho < 1 and lambda > 0\n";
        return exit_usage;
    }
    if (lambda > rho) {
        std::cout << "out of scope: the closed form requires lambda <= rho "
                     "(lambda = " << fmt(lambda) << ", rho = " << fmt(rho) << ")\n";
        return exit_usage;
    }
    const wyner::FeasibleSet set = set_name == "a"   ? wyner::FeasibleSet::a_rho
                                   : set_name == "b" ? wyner::FeasibleSet::b_rho
                                                     : wyner::FeasibleSet::d_rho;
    const wyner::Correlation c(rho);
    const double closed = wyner::lemma2_closed_form(c, lambda);
    const auto sol = wyner::lemma2_grid_oracle(c, lambda, set, resolution);
    const auto kkt_pt = wyner::lemma2_kkt_point(c, lambda);
    const auto res = wyner::kkt_residuals(rho, lambda, kkt_pt.q_star,
                                          kkt_pt.sigma2_star, kkt_pt.mu_star);
    const double gap = std::abs(sol.min_value - closed);
    const double max_res =
        std::max({std::abs(res[0]), std::abs(res[1]), std::abs(res[2])});

    if (gap_tol <= 0.0) {
        // default: five grid steps' worth of objective variation at the argmin
        const double dq = 2.0 / (resolution + 1.0), ds2 = 2.4 / resolution;
        double variation = 0.0;
        for (double q : {sol.q_star - dq, sol.q_star + dq})
            if (std::abs(q) < 1.0)
                variation = std::max(variation,
                                     std::abs(wyner::objective_f(lambda, sol.sigma2_star, q) -
                                              sol.min_value));
        for (double s2 : {sol.sigma2_star - ds2, sol.sigma2_star + ds2})
            if (s2 > 0.0)
                variation = std::max(variation,
                                     std::abs(wyner::objective_f(lambda, s2, sol.q_star) -
                                              sol.min_value));
        gap_tol = 5.0 * variation + 1e-12;
    }

    std::cout << "closed_form      " << fmt(closed) << "\n";
    std::cout << "grid_oracle      " << fmt(sol.min_value) << " (set " << set_name
              << ", resolution " << resolution << ")\n";
    std::cout << "gap              " << fmt(gap) << " (tol " << fmt(gap_tol) << ")\n";
    std::cout << "argmin           q = " << fmt(sol.q_star)
              << ", sigma2 = " << fmt(sol.sigma2_star) << "\n";
    std::cout << "kkt_point        q* = " << fmt(kkt_pt.q_star) << ", sigma2* = "
              << fmt(kkt_pt.sigma2_star) << ", mu* = " << fmt(kkt_pt.mu_star) << "\n";
    std::cout << "kkt_residuals    " << fmt(res[0]) << ", " << fmt(res[1]) << ", "
              << fmt(res[2]) << "\n";
    const bool ok = gap <= gap_tol && max_res <= 1e-10;
    std::cout << (ok ? "PASS" : "FAIL") << "\n";
    return ok ? exit_ok : exit_numerical;
}

int run_verify_gmu(double rho, double gamma, double joint_entropy) {
    if (!(gamma > 0.0)) {
        std::cerr << "verify-gmu: requires gamma > 0\n";
        return exit_usage;
    }
    const wyner::Correlation c(rho);
    const wyner::Gamma g(gamma);
    const auto closed = wyner::maximize_g(c, g, joint_entropy);
    const auto numeric = wyner::maximize_g_numeric(c, g, joint_entropy);
    const double dmu = std::abs(closed.mu_star - numeric.mu_star);
    const double dval = std::abs(closed.value - numeric.value);

    // analytic derivative against central differences across the bracket
    double max_rel = 0.0;
    for (double mu : {1.05, 1.5, 2.0, 5.0, 20.0, 100.0}) {
        const double h = 1e-6 * mu;
        const double fd = (wyner::g_mu(c, g, joint_entropy, mu + h) -
                           wyner::g_mu(c, g, joint_entropy, mu - h)) /
                          (2.0 * h);
        const double an = wyner::g_mu_derivative(g, mu);
        const double scale = std::max(std::abs(an), 1e-8);
        max_rel = std::max(max_rel, std::abs(fd - an) / scale);
    }

    std::cout << "mu_star_closed   " << fmt(closed.mu_star) << "\n";
    std::cout << "mu_star_numeric  " << fmt(numeric.mu_star) << "\n";
    std::cout << "delta_mu         " << fmt(dmu) << "\n";
    std::cout << "value_closed     " << fmt(closed.value) << "\n";
    std::cout << "value_numeric    " << fmt(numeric.value) << "\n";
    std::cout << "delta_value      " << fmt(dval) << "\n";
    std::cout << "max_deriv_reldiff " << fmt(max_rel) << "\n";
    const bool ok = dmu <= 1e-6 && dval <= 1e-8 && max_rel <= 1e-6;
    std::cout << (ok ? "PASS" : "FAIL") << "\n";
    return ok ? exit_ok : exit_numerical;
}

int run_compare(const std::string& csv_path, const std::string& fixture_name,
                double tol, const std::string& fixtures_dir, std::string column) {
    wyner::FixtureTable fixture;
    wyner::CsvTable csv;
    try {
        fixture = wyner::load_fixture(fixtures_dir + "/" + fixture_name + ".csv");
        csv = wyner::read_csv(csv_path);
    } catch (const std::exception& e) {
        std::cerr << "compare: " << e.what() << "\n";
        return exit_usage;
    }

    if (column.empty()) {
        if (fixture_name.find("_exact") != std::string::npos) column = "exact";
        else if (fixture_name.find("_mi") != std::string::npos) column = "mi";
        else if (fixture_name.find("_upper") != std::string::npos) column = "upper";
        else column = "lower_unclamped";  // reference lower curves are unclamped
    }
    const int pcol = csv.column_index("param");
    const int vcol = csv.column_index(column);
    if (pcol < 0 || vcol < 0) {
        std::cerr << "compare: CSV lacks column 'param' or '" << column << "'\n";
        return exit_usage;
    }

    double max_diff = 0.0;
    double worst_param = 0.0;
    long matched = 0;
    for (const auto& [p, want] : fixture.rows) {
        const std::vector<std::optional<double>>* found = nullptr;
        for (const auto& row : csv.rows)
            if (row[pcol] && std::abs(*row[pcol] - p) <= 1e-9) {
                found = &row;
                break;
            }
        if (!found || !(*found)[vcol]) {
            std::cerr << "compare: no CSV row aligned with param " << fmt(p) << "\n";
            return exit_usage;
        }
        const double got = *(*found)[vcol];
        const double diff = std::abs(got - want);
        std::cout << fmt(p) << "  got " << fmt(got) << "  want " << fmt(want)
                  << "  |diff| " << fmt(diff) << "\n";
        if (diff > max_diff) {
            max_diff = diff;
            worst_param = p;
        }
        ++matched;
    }
    std::cout << "rows " << matched << "  max_diff " << fmt(max_diff) << " at param "
              << fmt(worst_param) << "  tol " << fmt(tol) << "\n";
    const bool ok = max_diff <= tol;
    std::cout << (ok ? "PASS" : "FAIL") << "\n";
    return ok ? exit_ok : exit_mismatch;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lower and upper bounds on common information for continuous "
                 "bivariate sources"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config");

    ModelOptions mopt;
    double tol = 0.0;
    std::uint64_t seed = 1;
    std::optional<double> gamma;
    bool mc_check = false;
    std::string out_path;

    auto* bound = app.add_subcommand("bound", "evaluate bounds at one point");
    add_model_options(bound, mopt);
    bound->add_option("--gamma", gamma, "slack for the relaxed lower bound (nats)");
    bound->add_option("--tol", tol, "quadrature absolute tolerance");
    bound->add_option("--seed", seed, "Monte Carlo seed");
    bound->add_flag("--mc-check", mc_check, "also print the Monte Carlo entropy");
    bound->add_option("--out", out_path, "write the report as a one-row CSV");

    SweepOptions sopt;
    auto* sweep = app.add_subcommand("sweep", "sweep a parameter to CSV");
    add_model_options(sweep, mopt);
    sweep->add_option("--sweep-param", sopt.sweep_param, "parameter to sweep")
        ->check(CLI::IsMember({"sigma-a", "rho-hat", "r", "rho-l"}));
    sweep->add_option("--start", sopt.start)->required();
    sweep->add_option("--stop", sopt.stop)->required();
    sweep->add_option("--step", sopt.step)->required();
    sweep->add_option("--quantities", sopt.quantities,
                      "subset of lower,upper,exact,mi,gamma_lower")
        ->delimiter(',');
    sweep->add_option("--gamma", sopt.gamma, "slack for gamma_lower");
    sweep->add_option("--jobs", sopt.jobs, "parallel sweep workers (0 = auto)");
    sweep->add_option("--tol", tol, "quadrature absolute tolerance");
    sweep->add_option("--seed", seed, "Monte Carlo seed");
    sweep->add_option("--out", sopt.out_path, "output CSV path");

    double vl_rho = 0.5, vl_lambda = 0.25, vl_tol = -1.0;
    int vl_resolution = 400;
    std::string vl_set = "a";
    auto* verify_l2 = app.add_subcommand("verify-lemma2",
                                         "closed form vs grid oracle + KKT residuals");
    verify_l2->add_option("--rho", vl_rho, "correlation rho")->required();
    verify_l2->add_option("--lambda", vl_lambda, "multiplier lambda")->required();
    verify_l2->add_option("--resolution", vl_resolution, "grid resolution per axis");
    verify_l2->add_option("--set", vl_set, "feasible set to scan")
        ->check(CLI::IsMember({"a", "b", "d"}));
    verify_l2->add_option("--tol", vl_tol, "allowed |oracle - closed form| gap (default: 5 grid steps of objective variation)");

    double vg_rho = 0.5, vg_gamma = 0.1, vg_h = 0.0;
    auto* verify_g = app.add_subcommand("verify-gmu",
                                        "closed-form mu* vs numeric maximization");
    verify_g->add_option("--rho-hat", vg_rho, "correlation rho");
    verify_g->add_option("--gamma", vg_gamma, "slack gamma (nats)")->required();
    verify_g->add_option("--joint-entropy", vg_h,
                         "h(X,Y) offset (does not move the maximizer)");

    std::string cmp_csv, cmp_fixture, cmp_dir = "fixtures", cmp_column;
    double cmp_tol = 1e-3;
    auto* compare = app.add_subcommand("compare", "compare a sweep CSV to a fixture");
    compare->add_option("csv", cmp_csv, "sweep CSV path")->required();
    compare->add_option("fixture", cmp_fixture, "fixture name, e.g. fig1_exact")
        ->required();
    compare->add_option("--tol", cmp_tol, "max allowed absolute difference");
    compare->add_option("--fixtures-dir", cmp_dir, "fixture directory");
    compare->add_option("--column", cmp_column, "CSV column to compare");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);  // prints the message or help text
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (bound->parsed()) return run_bound(mopt, tol, seed, gamma, mc_check, out_path);
        if (sweep->parsed()) return run_sweep(mopt, sopt, tol, seed);
        if (verify_l2->parsed())
            return run_verify_lemma2(vl_rho, vl_lambda, vl_resolution, vl_tol, vl_set);
        if (verify_g->parsed()) return run_verify_gmu(vg_rho, vg_gamma, vg_h);
        if (compare->parsed())
            return run_compare(cmp_csv, cmp_fixture, cmp_tol, cmp_dir, cmp_column);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return exit_usage;
    } catch (const wyner::QuadratureError& e) {
        std::cerr << "numerical failure: " << e.what() << " (best estimate "
                  << fmt(e.estimate) << ", err " << fmt(e.error_estimate) << ")\n";
        return exit_numerical;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_numerical;
    }
    return exit_usage;
}
