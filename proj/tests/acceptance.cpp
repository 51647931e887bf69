// Acceptance gate: one self-contained check per release criterion, one
// PASS/FAIL line each, nonzero exit if anything fails.
#include "config.hpp"
#include "diagnostics.hpp"
#include "runner.hpp"
#include "verify.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace nlskt;

namespace {

constexpr double kPi = 3.14159265358979323846;

int g_failures = 0;

void report(int idx, const char* name, bool pass, const std::string& detail) {
    std::printf("criterion %2d [%s]: %s (%s)\n", idx, name, pass ? "PASS" : "FAIL",
                detail.c_str());
    std::fflush(stdout);
    if (!pass)
        ++g_failures;
}

Coefficients benchmark_coeffs(double eps = 0.0) {
    Coefficients c;
    c.c1 = c.c2 = 1.0;
    c.a1 = c.a2 = 1.0;
    c.alpha1 = c.alpha2 = 1.0;
    c.beta11 = c.beta12 = c.beta21 = c.beta22 = 1.0;
    c.epsilon = eps;
    return c;
}

State benchmark_initial(const Domain& d) {
    Field u1 = Field::sample(d, [](double x) {
        double z = (x - 0.3) / 0.12;
        return std::exp(-z * z);
    });
    Field u2 = Field::sample(d, [](double x) {
        double z = (x - 0.7) / 0.12;
        return std::exp(-z * z);
    });
    return State(std::move(u1), std::move(u2));
}

std::string fmt1(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

// relative spread (max - min) / max of a set of ledger constants
double spread(const std::vector<double>& v) {
    double lo = v.front(), hi = v.front();
    for (double x : v) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    return hi > 0.0 ? (hi - lo) / hi : 0.0;
}

void criterion_taylor() {
    Domain d(0.0, 1.0, 256);
    KernelSpec base = KernelSpec::uniform_ball(1, 1.0);
    TestFunction1D cosfn{
        [](double x) { return std::cos(2.0 * kPi * x); },
        [](double x) { return -4.0 * kPi * kPi * std::cos(2.0 * kPi * x); }};
    TaylorReport rep = taylor_consistency(d, base, {0.2, 0.1, 0.05}, cosfn);

    TestFunction1D quad{[](double x) { return x * x; }, [](double) { return 2.0; }};
    TaylorReport exact = taylor_consistency(d, base, {0.2}, quad);

    bool decreasing = true;
    for (std::size_t k = 1; k < rep.rows.size(); ++k)
        decreasing = decreasing &&
                     rep.rows[k].max_interior_error < rep.rows[k - 1].max_interior_error;

    bool pass = decreasing && rep.fitted_order >= 1.0 &&
                exact.rows.front().max_interior_error <= 1e-10;
    report(1, "taylor consistency", pass,
           "order " + fmt1(rep.fitted_order) + ", quadratic error " +
               fmt1(exact.rows.front().max_interior_error));
}

void criterion_heat() {
    KernelSpec base = KernelSpec::uniform_ball(1, 1.0);
    HeatReport rep = heat_convergence({0.4, 0.2, 0.1}, 256, 0.05, 1e-4, base);
    bool pass = rep.monotone && rep.rows.back().sup_error <= 0.05;
    std::string detail = "errors";
    for (const auto& r : rep.rows)
        detail += " " + fmt1(r.sup_error);
    report(2, "nonlocal-to-local heat", pass, detail);
}

void criterion_ode() {
    Domain d(0.0, 1.0, 16);
    KernelTable table = build_table(KernelSpec::uniform_ball(1, 0.25), d);
    Coefficients co;
    co.alpha1 = 1.0;
    co.beta11 = 1.0;
    StepConfig cfg;
    cfg.tau_policy = TauPolicy::Fixed;
    cfg.tau_fixed = 1e-3;
    OdeReductionReport rep = ode_reduction({0.5, 0.0}, co, table, 1.0, cfg);
    double e = std::exp(1.0);
    double err = std::fabs(rep.final_value[0] - e / (e + 1.0));
    bool pass = err <= 2e-3 && rep.max_constancy_drift <= 1e-8;
    report(3, "ode reduction", pass,
           "logistic error " + fmt1(err) + ", constancy drift " +
               fmt1(rep.max_constancy_drift));
}

void criterion_contraction() {
    Domain d(0.0, 1.0, 64);
    KernelTable table = build_table(KernelSpec::uniform_ball(1, 0.25), d);
    StepConfig cfg;
    cfg.t_final = 1.0;
    Trajectory traj = simulate(benchmark_initial(d), benchmark_coeffs(), table, cfg);

    bool pass = true;
    double worst_ratio_gap = -1e300, worst_ball_gap = -1e300;
    for (const auto& rec : traj.records) {
        if (rec.max_ratio > 0.0) {
            worst_ratio_gap = std::max(worst_ratio_gap,
                                       rec.max_ratio - rec.certified_ratio);
            if (rec.max_ratio > rec.certified_ratio + 1e-9)
                pass = false;
        }
        worst_ball_gap = std::max(worst_ball_gap,
                                  rec.max_iterate_sup - 2.0 * rec.m0);
        if (rec.max_iterate_sup > 2.0 * rec.m0 + 1e-9)
            pass = false;
    }
    report(4, "picard contraction", pass,
           std::to_string(traj.steps()) + " steps, worst ratio gap " +
               fmt1(worst_ratio_gap) + ", worst ball gap " + fmt1(worst_ball_gap));
}

Lemma1Ledger lemma1_at(int cells, double tau, double t_final) {
    Domain d(0.0, 1.0, cells);
    KernelTable table = build_table(KernelSpec::uniform_ball(1, 0.25), d);
    Coefficients co = benchmark_coeffs(1e-3);
    StepConfig cfg;
    cfg.tau_policy = TauPolicy::Fixed;
    cfg.tau_fixed = tau;
    cfg.t_final = t_final;
    Trajectory traj = simulate(benchmark_initial(d), co, table, cfg);
    return lemma1_ledger(traj, co, table);
}

void criterion_lemma1() {
    std::vector<double> grid_cplus;
    for (int cells : {32, 64, 128})
        grid_cplus.push_back(lemma1_at(cells, 1e-3, 0.5).c_plus);
    double grid_spread = spread(grid_cplus);

    double c64 = grid_cplus[1];
    double c64_half = lemma1_at(64, 5e-4, 0.5).c_plus;
    double tau_spread = spread({c64, c64_half});

    bool pass = grid_spread <= 0.2 && tau_spread <= 0.1;
    report(5, "lemma 1 ledgers", pass,
           "c+ grid spread " + fmt1(grid_spread) + ", tau spread " +
               fmt1(tau_spread));
}

double entropy_c_at(int cells, double tau) {
    Domain d(0.0, 1.0, cells);
    KernelTable table = build_table(KernelSpec::uniform_ball(1, 0.25), d);
    Coefficients co = benchmark_coeffs(1e-3);
    StepConfig cfg;
    cfg.tau_policy = TauPolicy::Fixed;
    cfg.tau_fixed = tau;
    cfg.t_final = 1.0;
    Trajectory traj = simulate(benchmark_initial(d), co, table, cfg);
    return entropy_ledger(traj, co, table, co.epsilon).c;
}

void criterion_entropy() {
    double base = entropy_c_at(64, 2e-3);
    double tau_half = entropy_c_at(64, 1e-3);
    double h_half = entropy_c_at(128, 2e-3);
    bool finite = std::isfinite(base) && base >= 0.0;
    double tau_spread = spread({base, tau_half});
    double h_spread = spread({base, h_half});
    bool pass = finite && tau_spread <= 0.2 && h_spread <= 0.2;
    report(6, "entropy inequality", pass,
           "c " + fmt1(base) + ", tau spread " + fmt1(tau_spread) +
               ", h spread " + fmt1(h_spread));
}

void criterion_eps_sweep() {
    Domain d(0.0, 1.0, 64);
    KernelTable table = build_table(KernelSpec::uniform_ball(1, 0.25), d);
    State u0 = benchmark_initial(d);
    StepConfig cfg;
    cfg.tau_policy = TauPolicy::Fixed;
    cfg.tau_fixed = 1e-3;
    cfg.t_final = 0.25;
    cfg.picard_tol = 1e-10;

    NegPartSweep sweep = negpart_sweep({1e-2, 5e-3, 2.5e-3}, [&](double eps) {
        Coefficients co = benchmark_coeffs(eps);
        return simulate(u0, co, table, cfg);
    });

    // eps = 0 with nonnegative data: negatives at solver-tolerance scale only
    Trajectory zero_run = simulate(u0, benchmark_coeffs(0.0), table, cfg);
    double worst_min = 0.0;
    for (const auto& s : zero_run.states) {
        worst_min = std::min(worst_min, min_value(s.u1));
        worst_min = std::min(worst_min, min_value(s.u2));
    }
    double bound = cfg.picard_tol * static_cast<double>(zero_run.steps());

    bool pass = sweep.at_most_linear && worst_min >= -bound;
    std::string detail = "ratios";
    for (const auto& e : sweep.entries)
        detail += " " + fmt1(e.ratio);
    detail += "; eps=0 min " + fmt1(worst_min) + " >= " + fmt1(-bound);
    report(7, "eps-sweep nonnegativity", pass, detail);
}

void criterion_poincare() {
    std::mt19937_64 rng(31415);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    double worst = 0.0;
    struct KernelCase {
        int dim;
        double rho;
        bool gaussian;
    };
    const KernelCase cases[] = {{1, 0.2, false}, {1, 0.35, true}, {2, 0.3, false}};
    bool pass = true;
    for (const auto& kc : cases) {
        Domain d1(0.0, 1.0, 64);
        Domain d2({0.0, 0.0}, {1.0, 1.0}, {24, 24});
        const Domain& d = kc.dim == 1 ? d1 : d2;
        KernelSpec spec = kc.gaussian
                              ? KernelSpec::truncated_gaussian(kc.dim, kc.rho, 0.15)
                              : KernelSpec::uniform_ball(kc.dim, kc.rho);
        KernelTable table = build_table(spec, d);
        for (int trial = 0; trial < 200; ++trial) {
            Field v(d);
            for (std::size_t k = 0; k < v.size(); ++k)
                v[k] = uni(rng);
            PoincareCheck chk = poincare_check(v, table);
            double scale = std::max(chk.lhs, chk.rhs);
            worst = std::min(worst, chk.margin / scale);
            if (chk.margin < -1e-12 * scale)
                pass = false;
        }
    }
    report(8, "nonlocal poincare", pass, "worst relative margin " + fmt1(worst));
}

void criterion_uniqueness() {
    Domain d(0.0, 1.0, 64);
    KernelTable table = build_table(KernelSpec::uniform_ball(1, 0.25), d);
    Coefficients co = benchmark_coeffs();
    State u0 = benchmark_initial(d);
    StepConfig cfg;
    cfg.tau_policy = TauPolicy::Fixed;
    cfg.tau_fixed = 1e-3;
    cfg.t_final = 0.05;
    cfg.picard_tol = 1e-10;
    Trajectory tu = simulate(u0, co, table, cfg);
    cfg.picard_tol = 1e-8;
    Trajectory tv = simulate(u0, co, table, cfg);

    double residual = uniqueness_residual(tu, tv);
    double sup = 0.0;
    for (const auto& s : tu.states)
        sup = std::max(sup, std::max(sup_norm(s.u1), sup_norm(s.u2)));
    double scale = (1.0 + sup) * (1.0 + sup);
    double qt = d.volume() * tu.final_time();
    bool residual_ok = residual <= 1e-12 * qt * scale;

    DualSolveResult dual = dual_solve(tu, tv, co, table);
    bool windows_ok = true;
    for (double r : dual.window_ratios)
        windows_ok = windows_ok && r < 1.0;

    // frozen-coefficient oracle: constant states, single species, so the
    // dual collapses to phi' = w0 - l0 phi with the closed form below
    Coefficients frozen;
    frozen.alpha1 = 2.0;
    frozen.beta11 = 1.0;
    Domain ds(0.0, 1.0, 8);
    KernelTable ts = build_table(KernelSpec::uniform_ball(1, 0.25), ds);
    double A = 1.0, B = 0.9, w0 = A - B, l0 = frozen.alpha1 - frozen.beta11 * A;
    Trajectory fu, fv;
    for (int k = 0; k <= 500; ++k) {
        double t = k * 1e-3;
        fu.states.push_back(State(Field(ds, A), Field(ds), t));
        fv.states.push_back(State(Field(ds, B), Field(ds), t));
    }
    DualSolveResult fd = dual_solve(fu, fv, frozen, ts);
    double oracle_err = 0.0;
    for (const auto& h : fd.history) {
        double exact = (w0 / l0) * (1.0 - std::exp(-l0 * h.s));
        for (double v : h.phi1.values())
            oracle_err = std::max(oracle_err, std::fabs(v - exact));
    }

    bool pass = residual_ok && windows_ok && oracle_err <= 1e-6;
    report(9, "uniqueness certificate", pass,
           "residual " + fmt1(residual) + " <= " + fmt1(1e-12 * qt * scale) +
               ", oracle error " + fmt1(oracle_err));
}

void criterion_bilateral() {
    Domain d({0.0, 0.0}, {32.0, 32.0}, {32, 32});
    BilateralParams params{1.5, 0.2};
    KernelTable spatial = bilateral_spatial_table(d, params.rho);

    Field constant(d, 0.5);
    Field one = bilateral_step(constant, params, spatial);
    bool const_ok = true;
    for (std::size_t k = 0; k < one.size(); ++k)
        const_ok = const_ok && one[k] == 0.5;

    std::mt19937_64 rng(2718);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    bool minmax_ok = true;
    double worst = 0.0;
    for (int img_idx = 0; img_idx < 20; ++img_idx) {
        Field img(d);
        for (std::size_t k = 0; k < img.size(); ++k)
            img[k] = uni(rng);
        double lo = min_value(img), hi = max_value(img);
        Field cur = img;
        for (int step = 0; step < 100; ++step) {
            cur = bilateral_step(cur, params, spatial);
            double over = std::max(lo - min_value(cur), max_value(cur) - hi);
            worst = std::max(worst, over);
            if (over > 1e-12)
                minmax_ok = false;
        }
    }

    // h -> infinity: frozen range factor makes the step the linear heat step
    Field img(d);
    for (std::size_t k = 0; k < img.size(); ++k)
        img[k] = uni(rng);
    BilateralParams frozen{1.5, 1.0, 0.4 / spatial.row_l1(), true};
    Field filtered = bilateral_step(img, frozen, spatial);
    Field heat = nonlocal_apply(spatial, img);
    double eq_err = 0.0;
    for (std::size_t k = 0; k < img.size(); ++k)
        eq_err = std::max(eq_err,
                          std::fabs(filtered[k] - (img[k] + frozen.tau * heat[k])));

    bool pass = const_ok && minmax_ok && eq_err <= 1e-9;
    report(10, "bilateral filter", pass,
           "minmax overshoot " + fmt1(worst) + ", heat-step gap " + fmt1(eq_err));
}

void criterion_determinism() {
    namespace fs = std::filesystem;
    RunConfig cfg;
    cfg.cells_x = 64;
    cfg.coeffs = benchmark_coeffs();
    cfg.profile1 = "bump-left";
    cfg.profile2 = "bump-right";
    cfg.t_final = 0.2;
    cfg.snapshot_stride = 10;

    fs::path base = fs::temp_directory_path() / "nlskt_acceptance_det";
    fs::remove_all(base);
    RunResult r1 = run_simulate(cfg, (base / "a").string());
    RunResult r2 = run_simulate(cfg, (base / "b").string());

    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };

    bool pass = r1.exit_code == 0 && r2.exit_code == 0;
    int compared = 0;
    for (const std::string& name : r1.artifacts) {
        if (name == "manifest.json")
            continue; // carries timings by design
        fs::path pa = base / "a" / name;
        fs::path pb = base / "b" / name;
        if (!fs::exists(pa) || !fs::exists(pb)) {
            pass = false;
            continue;
        }
        if (slurp(pa) != slurp(pb))
            pass = false;
        ++compared;
    }
    pass = pass && compared > 2;
    fs::remove_all(base);
    report(11, "determinism", pass,
           std::to_string(compared) + " artifacts byte-compared");
}

} // namespace

int main() {
    criterion_taylor();
    criterion_heat();
    criterion_ode();
    criterion_contraction();
    criterion_lemma1();
    criterion_entropy();
    criterion_eps_sweep();
    criterion_poincare();
    criterion_uniqueness();
    criterion_bilateral();
    criterion_determinism();

    if (g_failures == 0) {
        std::printf("acceptance: all criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criteria FAILED\n", g_failures);
    return 1;
}
