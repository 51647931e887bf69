#include "runner.hpp"

#include "diagnostics.hpp"
#include "errors.hpp"
#include "verify.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

namespace nlskt {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

struct ManifestWriter {
    std::string out_dir;
    std::string subcommand;
    std::string config_hash;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    void write(const RunResult& result, bool complete) const {
        json j;
        j["tool_version"] = kVersion;
        j["subcommand"] = subcommand;
        j["config_hash"] = config_hash;
        j["complete"] = complete;
        j["artifacts"] = result.artifacts;
        j["message"] = result.message;
        j["timing_seconds"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        std::ofstream out(fs::path(out_dir) / "manifest.json");
        out << j.dump(2) << "\n";
    }
};

void require_valid(const RunConfig& cfg) {
    ValidationResult v = validate(cfg);
    for (const auto& w : v.warnings)
        std::cerr << "warning: " << w << "\n";
    if (!v.ok()) {
        std::string msg = "invalid configuration:";
        for (const auto& e : v.errors)
            msg += "\n  - " + e;
        throw ConfigError(msg);
    }
}

std::string prepare_out_dir(const RunConfig& cfg, const std::string& out_dir) {
    std::string dir = out_dir.empty() ? cfg.out_dir : out_dir;
    fs::create_directories(dir);
    return dir;
}

void write_effective_config(const RunConfig& cfg, const std::string& dir,
                            RunResult& result) {
    std::ofstream out(fs::path(dir) / "effective_config.txt");
    out << emit_config(cfg);
    result.artifacts.push_back("effective_config.txt");
}

void write_ledger_csv(const std::string& dir, const EntropyLedger& ledger,
                      const GronwallReport& gronwall, RunResult& result) {
    std::ofstream out(fs::path(dir) / "ledger.csv");
    out << "t,E,E_eps,D_cumulative,neg1,neg2,mass1,mass2,sup1,sup2,ledger_c,"
           "gronwall_C\n";
    for (std::size_t j = 0; j < ledger.rows.size(); ++j) {
        const EntropyReport& r = ledger.rows[j];
        double gc = j < gronwall.running_c.size() ? gronwall.running_c[j] : gronwall.c;
        out << fmt(r.t) << "," << fmt(r.entropy) << "," << fmt(r.entropy_eps) << ","
            << fmt(r.dissipation_cumulative) << "," << fmt(r.neg_l1[0]) << ","
            << fmt(r.neg_l1[1]) << "," << fmt(r.mass[0]) << "," << fmt(r.mass[1])
            << "," << fmt(r.sup[0]) << "," << fmt(r.sup[1]) << ","
            << fmt(ledger.running_c[j]) << "," << fmt(gc) << "\n";
    }
    result.artifacts.push_back("ledger.csv");
}

void write_steps_csv(const std::string& dir, const Trajectory& traj,
                     RunResult& result) {
    std::ofstream out(fs::path(dir) / "steps.csv");
    out << "t_end,tau,iterations,residual,max_ratio,certified_ratio,m0,"
           "max_iterate_sup\n";
    for (const StepRecord& r : traj.records)
        out << fmt(r.t_end) << "," << fmt(r.tau) << "," << r.iterations << ","
            << fmt(r.residual) << "," << fmt(r.max_ratio) << ","
            << fmt(r.certified_ratio) << "," << fmt(r.m0) << ","
            << fmt(r.max_iterate_sup) << "\n";
    result.artifacts.push_back("steps.csv");
}

void write_snapshots(const std::string& dir, const Trajectory& traj, int stride,
                     RunResult& result) {
    fs::create_directories(fs::path(dir) / "snapshots");
    for (std::size_t j = 0; j < traj.states.size(); ++j) {
        bool last = j + 1 == traj.states.size();
        if (j % static_cast<std::size_t>(stride) != 0 && !last)
            continue;
        for (int i = 0; i < 2; ++i) {
            char name[48];
            std::snprintf(name, sizeof(name), "snapshots/u%d_%06zu.csv", i + 1, j);
            write_snapshot_file((fs::path(dir) / name).string(),
                                traj.states[j].species(i));
            result.artifacts.push_back(name);
        }
    }
}

// Fixed benchmark used by the verify subcommand's uniqueness study: all
// model constants 1 on 64 cells.
RunConfig benchmark_config() {
    RunConfig cfg;
    cfg.cells_x = 64;
    cfg.rho = 0.25;
    cfg.coeffs.c1 = cfg.coeffs.c2 = 1.0;
    cfg.coeffs.a1 = cfg.coeffs.a2 = 1.0;
    cfg.coeffs.alpha1 = cfg.coeffs.alpha2 = 1.0;
    cfg.coeffs.beta11 = cfg.coeffs.beta12 = 1.0;
    cfg.coeffs.beta21 = cfg.coeffs.beta22 = 1.0;
    cfg.profile1 = "bump-left";
    cfg.profile2 = "bump-right";
    return cfg;
}

} // namespace

RunResult run_simulate(const RunConfig& cfg, const std::string& out_dir) {
    require_valid(cfg);
    std::string dir = prepare_out_dir(cfg, out_dir);
    ManifestWriter manifest{dir, "simulate", fnv1a_hex(emit_config(cfg))};

    RunResult result;
    Domain domain = build_domain(cfg);
    KernelTable table = build_kernel_table(cfg, domain);
    State u0 = build_initial_state(cfg, domain);
    StepConfig sc = build_step_config(cfg);

    write_effective_config(cfg, dir, result);

    Trajectory partial;
    try {
        Trajectory traj = simulate(u0, cfg.coeffs, table, sc, nullptr, &partial);
        EntropyLedger ledger = entropy_ledger(traj, cfg.coeffs, table,
                                              cfg.coeffs.epsilon);
        GronwallReport gronwall = gronwall_bound(traj, cfg.coeffs, table);
        write_ledger_csv(dir, ledger, gronwall, result);
        write_steps_csv(dir, traj, result);
        write_snapshots(dir, traj, cfg.snapshot_stride, result);
        std::ostringstream msg;
        msg << "simulated " << traj.steps() << " steps to t = "
            << fmt(traj.final_time()) << "; ledger c = " << fmt(ledger.c)
            << ", gronwall C = " << fmt(gronwall.c);
        result.message = msg.str();
        manifest.write(result, true);
        result.artifacts.push_back("manifest.json");
    } catch (const std::exception& ex) {
        if (!partial.states.empty()) {
            write_steps_csv(dir, partial, result);
            write_snapshots(dir, partial, cfg.snapshot_stride, result);
        }
        result.exit_code = 1;
        result.message = std::string("simulate failed: ") + ex.what();
        manifest.write(result, false);
        result.artifacts.push_back("manifest.json");
    }
    return result;
}

RunResult run_sweep(const RunConfig& cfg, const std::string& out_dir) {
    require_valid(cfg);
    std::string dir = prepare_out_dir(cfg, out_dir);
    ManifestWriter manifest{dir, "sweep", fnv1a_hex(emit_config(cfg))};

    RunResult result;
    write_effective_config(cfg, dir, result);

    if (cfg.study_kind == "epsilon") {
        std::vector<double> eps_list = cfg.epsilon_list;
        if (eps_list.empty())
            eps_list = {1e-2, 5e-3, 2.5e-3};

        Domain domain = build_domain(cfg);
        KernelTable table = build_kernel_table(cfg, domain);
        State u0 = build_initial_state(cfg, domain);
        StepConfig sc = build_step_config(cfg);

        NegPartSweep sweep = negpart_sweep(eps_list, [&](double eps) {
            Coefficients coeffs = cfg.coeffs;
            coeffs.epsilon = eps;
            return simulate(u0, coeffs, table, sc);
        });

        std::ofstream out(fs::path(dir) / "sweep_epsilon.csv");
        out << "eps,max_neg_l1,ratio,at_most_linear\n";
        for (const auto& e : sweep.entries)
            out << fmt(e.eps) << "," << fmt(e.max_neg_l1) << "," << fmt(e.ratio)
                << "," << (sweep.at_most_linear ? 1 : 0) << "\n";
        result.artifacts.push_back("sweep_epsilon.csv");
        result.message = sweep.at_most_linear
                             ? "negative-part growth at most linear in eps"
                             : "negative-part growth NOT linear in eps";
        result.exit_code = sweep.at_most_linear ? 0 : 1;
    } else if (cfg.study_kind == "delta") {
        std::vector<double> deltas = cfg.delta_list;
        if (deltas.empty())
            deltas = {0.4, 0.2, 0.1};
        double tau = cfg.tau > 0.0 ? cfg.tau : 1e-4;
        KernelSpec base = cfg.kernel_family == "truncated-gaussian"
                              ? KernelSpec::truncated_gaussian(1, cfg.rho, cfg.width)
                              : KernelSpec::uniform_ball(1, cfg.rho);
        HeatReport rep = heat_convergence(deltas, cfg.cells_x, cfg.t_final, tau, base);

        std::ofstream out(fs::path(dir) / "sweep_delta.csv");
        out << "delta,sup_error,monotone\n";
        for (const auto& r : rep.rows)
            out << fmt(r.delta) << "," << fmt(r.sup_error) << ","
                << (rep.monotone ? 1 : 0) << "\n";
        result.artifacts.push_back("sweep_delta.csv");
        result.message = rep.monotone ? "sup error decreases along the delta list"
                                      : "sup error NOT monotone along the delta list";
        result.exit_code = rep.monotone ? 0 : 1;
    } else {
        throw ConfigError("study.kind: expected 'epsilon' or 'delta', got '" +
                          cfg.study_kind + "'");
    }

    manifest.write(result, true);
    result.artifacts.push_back("manifest.json");
    return result;
}

RunResult run_verify(const RunConfig& cfg, const std::string& out_dir) {
    require_valid(cfg);
    std::string dir = prepare_out_dir(cfg, out_dir);
    ManifestWriter manifest{dir, "verify", fnv1a_hex(emit_config(cfg))};

    RunResult result;
    write_effective_config(cfg, dir, result);
    bool all_pass = true;
    const double pi = 3.14159265358979323846;

    { // Taylor consistency of the rescaled operator.
        Domain domain(0.0, 1.0, 256);
        KernelSpec base = KernelSpec::uniform_ball(1, 1.0);
        std::vector<double> deltas = {0.2, 0.1, 0.05};
        TestFunction1D cosfn{
            [&](double x) { return std::cos(2.0 * pi * x); },
            [&](double x) { return -4.0 * pi * pi * std::cos(2.0 * pi * x); }};
        TaylorReport rep = taylor_consistency(domain, base, deltas, cosfn);

        TestFunction1D quad{[](double x) { return x * x; }, [](double) { return 2.0; }};
        TaylorReport exact = taylor_consistency(domain, base, {0.2}, quad);

        bool pass = rep.fitted_order >= 1.0 &&
                    exact.rows.front().max_interior_error <= 1e-10;
        all_pass = all_pass && pass;
        std::ofstream out(fs::path(dir) / "taylor.csv");
        out << "delta,max_interior_error,first_moment,fitted_order,pass\n";
        for (const auto& r : rep.rows)
            out << fmt(r.delta) << "," << fmt(r.max_interior_error) << ","
                << fmt(r.first_moment) << "," << fmt(rep.fitted_order) << ","
                << (pass ? 1 : 0) << "\n";
        out << fmt(exact.rows.front().delta) << ","
            << fmt(exact.rows.front().max_interior_error) << ","
            << fmt(exact.rows.front().first_moment) << ",nan," << (pass ? 1 : 0)
            << "\n";
        result.artifacts.push_back("taylor.csv");
    }

    { // Nonlocal -> local heat limit.
        KernelSpec base = KernelSpec::uniform_ball(1, 1.0);
        HeatReport rep = heat_convergence({0.4, 0.2, 0.1}, 256, 0.05, 1e-4, base);
        bool pass = rep.monotone && rep.rows.back().sup_error <= 0.05;
        all_pass = all_pass && pass;
        std::ofstream out(fs::path(dir) / "heat.csv");
        out << "delta,sup_error,monotone,pass\n";
        for (const auto& r : rep.rows)
            out << fmt(r.delta) << "," << fmt(r.sup_error) << ","
                << (rep.monotone ? 1 : 0) << "," << (pass ? 1 : 0) << "\n";
        result.artifacts.push_back("heat.csv");
    }

    { // ODE reduction: logistic closed form.
        Domain domain(0.0, 1.0, 16);
        KernelSpec spec = KernelSpec::uniform_ball(1, 0.25);
        KernelTable table = build_table(spec, domain);
        Coefficients coeffs;
        coeffs.alpha1 = 1.0;
        coeffs.beta11 = 1.0;
        StepConfig sc;
        sc.tau_policy = TauPolicy::Fixed;
        sc.tau_fixed = 1e-3;
        sc.t_final = 1.0;
        OdeReductionReport rep = ode_reduction({0.5, 0.0}, coeffs, table, 1.0, sc);
        double e = std::exp(1.0);
        double logistic = e / (e + 1.0);
        bool pass = std::fabs(rep.final_value[0] - logistic) <= 2e-3 &&
                    rep.max_constancy_drift <= 1e-8;
        all_pass = all_pass && pass;
        std::ofstream out(fs::path(dir) / "ode.csv");
        out << "final_u1,exact_u1,max_deviation,max_constancy_drift,pass\n";
        out << fmt(rep.final_value[0]) << "," << fmt(logistic) << ","
            << fmt(rep.max_deviation) << "," << fmt(rep.max_constancy_drift) << ","
            << (pass ? 1 : 0) << "\n";
        result.artifacts.push_back("ode.csv");
    }

    { // Bilateral filter sanity: constant fixed point, min/max principle.
        Domain domain({0.0, 0.0}, {32.0, 32.0}, {32, 32});
        BilateralParams params{3.0, 0.25};
        KernelTable spatial = bilateral_spatial_table(domain, params.rho);

        Field constant(domain, 0.5);
        Field one = bilateral_step(constant, params, spatial);
        double const_err = 0.0;
        for (std::size_t k = 0; k < one.size(); ++k)
            const_err = std::max(const_err, std::fabs(one[k] - 0.5));

        std::mt19937_64 rng(static_cast<std::uint64_t>(cfg.seed) + 17);
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        double worst_overshoot = 0.0;
        for (int trial = 0; trial < 5; ++trial) {
            Field img(domain);
            for (std::size_t k = 0; k < img.size(); ++k)
                img[k] = uni(rng);
            double lo = min_value(img), hi = max_value(img);
            Field cur = img;
            for (int step = 0; step < 20; ++step) {
                cur = bilateral_step(cur, params, spatial);
                worst_overshoot = std::max(worst_overshoot,
                                           std::max(lo - min_value(cur),
                                                    max_value(cur) - hi));
            }
        }
        bool pass = const_err == 0.0 && worst_overshoot <= 1e-12;
        all_pass = all_pass && pass;
        std::ofstream out(fs::path(dir) / "bilateral.csv");
        out << "check,value,pass\n";
        out << "constant_fixed_point_error," << fmt(const_err) << ","
            << (pass ? 1 : 0) << "\n";
        out << "minmax_worst_overshoot," << fmt(worst_overshoot) << ","
            << (pass ? 1 : 0) << "\n";
        result.artifacts.push_back("bilateral.csv");
    }

    { // Uniqueness certificate on the benchmark pair.
        RunConfig bench = benchmark_config();
        Domain domain = build_domain(bench);
        KernelTable table = build_kernel_table(bench, domain);
        State u0 = build_initial_state(bench, domain);
        StepConfig sc;
        sc.tau_policy = TauPolicy::Fixed;
        sc.tau_fixed = 1e-3;
        sc.t_final = 0.1;
        sc.picard_tol = 1e-10;
        Trajectory traj_u = simulate(u0, bench.coeffs, table, sc);
        sc.picard_tol = 1e-8;
        Trajectory traj_v = simulate(u0, bench.coeffs, table, sc);

        DualSolveResult dual = dual_solve(traj_u, traj_v, bench.coeffs, table);
        double residual = uniqueness_residual(traj_u, traj_v);
        double pairing = duality_pairing(traj_u, traj_v, bench.coeffs, table, dual);
        double qt = domain.volume() * traj_u.final_time();
        double sup = 0.0;
        for (const auto& s : traj_u.states)
            sup = std::max(sup, std::max(sup_norm(s.u1), sup_norm(s.u2)));
        double scale = (1.0 + sup) * (1.0 + sup);
        double max_ratio = 0.0;
        for (double r : dual.window_ratios)
            max_ratio = std::max(max_ratio, r);
        bool pass = residual <= 1e-12 * qt * scale && max_ratio < 1.0;
        all_pass = all_pass && pass;
        std::ofstream out(fs::path(dir) / "dual.csv");
        out << "residual,pairing,bound,window_length,max_window_ratio,pass\n";
        out << fmt(residual) << "," << fmt(pairing) << "," << fmt(1e-12 * qt * scale)
            << "," << fmt(dual.window_length) << "," << fmt(max_ratio) << ","
            << (pass ? 1 : 0) << "\n";
        result.artifacts.push_back("dual.csv");
    }

    result.exit_code = all_pass ? 0 : 1;
    result.message = all_pass ? "all verification studies passed"
                              : "one or more verification studies failed";
    manifest.write(result, true);
    result.artifacts.push_back("manifest.json");
    return result;
}

RunResult run_filter(const RunConfig& cfg, const std::string& out_dir) {
    require_valid(cfg);
    if (cfg.filter_input.empty())
        throw ConfigError("filter.input: an image path is required");
    std::string dir = prepare_out_dir(cfg, out_dir);
    ManifestWriter manifest{dir, "filter", fnv1a_hex(emit_config(cfg))};

    RunResult result;
    write_effective_config(cfg, dir, result);

    GrayImage img = read_pgm(cfg.filter_input);
    Domain domain({0.0, 0.0},
                  {static_cast<double>(img.width), static_cast<double>(img.height)},
                  {img.width, img.height});
    Field field(domain, img.pixels);

    BilateralParams params{cfg.filter_rho, cfg.filter_range_h, cfg.filter_tau};
    Field filtered = cfg.filter_t_final > 0.0
                         ? bilateral_filter(field, params, cfg.filter_t_final)
                         : bilateral_step(field, params,
                                          bilateral_spatial_table(domain,
                                                                  params.rho));

    GrayImage out_img = img;
    out_img.pixels = filtered.values();
    write_pgm((fs::path(dir) / "filtered.pgm").string(), out_img);
    write_snapshot_file((fs::path(dir) / "filtered.csv").string(), filtered);
    result.artifacts.push_back("filtered.pgm");
    result.artifacts.push_back("filtered.csv");

    std::ostringstream msg;
    msg << "filtered " << img.width << "x" << img.height
        << " image; mean drift = " << fmt(integrate(filtered) - integrate(field));
    result.message = msg.str();
    manifest.write(result, true);
    result.artifacts.push_back("manifest.json");
    return result;
}

RunResult run_subcommand(const std::string& name, const RunConfig& cfg,
                         const std::string& out_dir) {
    if (name == "simulate")
        return run_simulate(cfg, out_dir);
    if (name == "sweep")
        return run_sweep(cfg, out_dir);
    if (name == "verify")
        return run_verify(cfg, out_dir);
    if (name == "filter")
        return run_filter(cfg, out_dir);
    throw ConfigError("unknown subcommand: '" + name + "'");
}

GrayImage read_pgm(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open image: " + path);
    auto next_token = [&]() -> std::string {
        std::string tok;
        while (in >> tok) {
            if (tok[0] == '#') {
                std::string rest;
                std::getline(in, rest);
                continue;
            }
            return tok;
        }
        throw ConfigError("truncated graymap: " + path);
    };
    if (next_token() != "P2")
        throw ConfigError("only plain-text P2 graymaps are supported: " + path);
    GrayImage img;
    img.width = std::stoi(next_token());
    img.height = std::stoi(next_token());
    img.maxval = std::stoi(next_token());
    if (img.width <= 0 || img.height <= 0 || img.maxval <= 0)
        throw ConfigError("bad graymap header: " + path);
    img.pixels.resize(static_cast<std::size_t>(img.width) * img.height);
    for (double& p : img.pixels)
        p = std::stod(next_token()) / img.maxval;
    return img;
}

void write_pgm(const std::string& path, const GrayImage& img) {
    std::ofstream out(path);
    out << "P2\n" << img.width << " " << img.height << "\n" << img.maxval << "\n";
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            double v = img.pixels[static_cast<std::size_t>(y) * img.width + x];
            long level = std::lround(std::clamp(v, 0.0, 1.0) * img.maxval);
            out << level << (x + 1 == img.width ? "\n" : " ");
        }
    }
}

} // namespace nlskt
