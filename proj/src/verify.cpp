#include "verify.hpp"

#include "errors.hpp"

#include <algorithm>
#include <cmath>

namespace nlskt {

namespace {

constexpr double kPi = 3.14159265358979323846;

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    // least squares slope of log(y) against log(1/x); positive = convergent
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const std::size_t n = x.size();
    for (std::size_t k = 0; k < n; ++k) {
        double lx = std::log(x[k]);
        double ly = std::log(std::max(y[k], 1e-300));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace

TaylorReport taylor_consistency(const Domain& domain, const KernelSpec& base,
                                const std::vector<double>& deltas,
                                const TestFunction1D& fn) {
    if (domain.dim() != 1)
        throw ConfigError("taylor_consistency needs a 1D domain");

    TaylorReport report;
    Field u = Field::sample(domain, fn.value);

    std::vector<double> ds, errs;
    for (double delta : deltas) {
        KernelSpec spec = rescale(base, delta);
        KernelTable table = build_table(spec, domain, /*calibrate=*/true);
        Field applied = nonlocal_apply(table, u);

        double first_moment = 0.0;
        for (const auto& e : table.stencil())
            first_moment += e.weight * e.dx * domain.spacing(0);

        double radius = spec.support_radius();
        double err = 0.0;
        for (int i = 0; i < domain.cells(0); ++i) {
            double x = domain.center(0, i);
            if (x - domain.lower(0) <= radius || domain.upper(0) - x <= radius)
                continue;
            err = std::max(err, std::fabs(applied[i] - fn.second_derivative(x)));
        }
        report.rows.push_back({delta, err, std::fabs(first_moment)});
        ds.push_back(delta);
        errs.push_back(err);
    }
    if (ds.size() >= 2)
        report.fitted_order = loglog_slope(ds, errs);
    return report;
}

HeatReport heat_convergence(const std::vector<double>& deltas, int cells, double t_final,
                            double tau, const KernelSpec& base) {
    Domain domain(0.0, 1.0, cells);
    Field u0 = Field::sample(domain, [](double x) { return 1.0 + std::cos(kPi * x); });
    Field zero(domain);

    Coefficients coeffs;
    coeffs.c1 = 1.0; // p_1(u) = u_1 with u_2 = 0: the linear nonlocal heat equation

    StepConfig cfg;
    cfg.tau_policy = TauPolicy::Fixed;
    cfg.tau_fixed = tau;
    cfg.t_final = t_final;

    HeatReport report;
    for (double delta : deltas) {
        KernelSpec spec = rescale(base, delta);
        KernelTable table = build_table(spec, domain, /*calibrate=*/true);
        Trajectory traj = simulate(State(u0, zero), coeffs, table, cfg);
        const State& last = traj.states.back();

        double amp = std::exp(-kPi * kPi * t_final);
        double err = 0.0;
        for (int i = 0; i < cells; ++i) {
            double exact = 1.0 + amp * std::cos(kPi * domain.center(0, i));
            err = std::max(err, std::fabs(last.u1[i] - exact));
        }
        report.rows.push_back({delta, err});
    }
    report.monotone = true;
    for (std::size_t k = 1; k < report.rows.size(); ++k)
        if (!(report.rows[k].sup_error < report.rows[k - 1].sup_error))
            report.monotone = false;
    return report;
}

std::array<double, 2> lotka_volterra_rk4(std::array<double, 2> u0,
                                         const Coefficients& coeffs, double t_final,
                                         int steps) {
    auto deriv = [&](std::array<double, 2> u) {
        return std::array<double, 2>{f(0, u, coeffs), f(1, u, coeffs)};
    };
    std::array<double, 2> u = u0;
    double h = t_final / steps;
    for (int k = 0; k < steps; ++k) {
        auto k1 = deriv(u);
        auto k2 = deriv({u[0] + 0.5 * h * k1[0], u[1] + 0.5 * h * k1[1]});
        auto k3 = deriv({u[0] + 0.5 * h * k2[0], u[1] + 0.5 * h * k2[1]});
        auto k4 = deriv({u[0] + h * k3[0], u[1] + h * k3[1]});
        u[0] += h / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]);
        u[1] += h / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]);
    }
    return u;
}

OdeReductionReport ode_reduction(std::array<double, 2> u0, const Coefficients& coeffs,
                                 const KernelTable& table, double t_final,
                                 const StepConfig& cfg) {
    const Domain& d = table.domain();
    StepConfig run_cfg = cfg;
    run_cfg.t_final = t_final;
    Trajectory traj = simulate(State(Field(d, u0[0]), Field(d, u0[1])), coeffs, table,
                               run_cfg);

    OdeReductionReport rep{};
    double drift = 0.0;
    for (const auto& s : traj.states) {
        for (int i = 0; i < 2; ++i) {
            const Field& u = s.species(i);
            double mean = integrate(u) / d.volume();
            for (double v : u.values())
                drift = std::max(drift, std::fabs(v - mean));
        }
    }
    rep.max_constancy_drift = drift;

    auto ref = lotka_volterra_rk4(u0, coeffs, t_final, 200000);
    const State& last = traj.states.back();
    rep.final_value = {integrate(last.u1) / d.volume(), integrate(last.u2) / d.volume()};
    rep.max_deviation = std::max(std::fabs(rep.final_value[0] - ref[0]),
                                 std::fabs(rep.final_value[1] - ref[1]));
    return rep;
}

KernelTable bilateral_spatial_table(const Domain& domain, double rho) {
    if (!(rho > 0.0))
        throw ConfigError("bilateral filter needs rho > 0");
    // cutoff where the Gaussian tail drops below 1e-14
    double cutoff = std::min(rho * 5.68, 0.999 * domain.diameter());
    // amplitude cancels the unit-mass normalization: evaluate = exp(-r^2/rho^2)
    KernelSpec spec = KernelSpec::truncated_gaussian(
        domain.dim(), cutoff, rho, gaussian_l1_mass(domain.dim(), cutoff, rho));
    return build_table(spec, domain);
}

Field bilateral_step(const Field& image, const BilateralParams& params,
                     const KernelTable& spatial) {
    if (!(params.range_h > 0.0))
        throw ConfigError("bilateral filter needs range_h > 0");
    const Domain& d = image.domain();
    double tau = params.tau > 0.0 ? params.tau : 0.9 / spatial.row_l1();
    double inv_h2 = 1.0 / (params.range_h * params.range_h);

    Field out(d);
    const int nx = d.cells(0);
    const int ny = d.dim() == 2 ? d.cells(1) : 1;
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            std::size_t idx = d.flat_index(ix, iy);
            double ux = image[idx];
            double acc = 0.0;
            for (const auto& e : spatial.stencil()) {
                int jx = ix + e.dx;
                int jy = iy + e.dy;
                if (jx < 0 || jx >= nx || jy < 0 || jy >= ny)
                    continue;
                double diff = image[d.flat_index(jx, jy)] - ux;
                double range = params.freeze_range ? 1.0 : std::exp(-diff * diff * inv_h2);
                acc += e.weight * range * diff;
            }
            out[idx] = ux + tau * acc;
        }
    }

    double in_range = max_value(image) - min_value(image);
    double out_range = max_value(out) - min_value(out);
    if (out_range > 2.0 * in_range + 1e-12 * (1.0 + sup_norm(image)))
        throw UnstableStep("bilateral step amplified the image range; tau too large");
    return out;
}

Field bilateral_filter(const Field& image, const BilateralParams& params, double t_final) {
    KernelTable spatial = bilateral_spatial_table(image.domain(), params.rho);
    BilateralParams step = params;
    if (step.tau <= 0.0)
        step.tau = 0.9 / spatial.row_l1();
    Field u = image;
    double t = 0.0;
    while (t < t_final - 1e-14) {
        step.tau = std::min(step.tau, t_final - t);
        u = bilateral_step(u, step, spatial);
        t += step.tau;
    }
    return u;
}

// ---------------------------------------------------------------------------
// Dual problem

namespace {

struct DualData {
    // all indexed by dual knot k (original knot N-k)
    std::vector<Field> w1, w2;
    std::vector<Field> k1, k2; // K_12, K_21
    std::vector<Field> l1, l2; // L_12, L_21
    std::vector<Field> v1, v2;
    std::vector<double> s;     // reversed-time knots
};

DualData assemble_dual_data(const Trajectory& tu, const Trajectory& tv,
                            const Coefficients& coeffs) {
    if (tu.states.size() != tv.states.size() || tu.states.empty())
        throw ConfigError("dual solve needs trajectories on the same time grid");
    const std::size_t n = tu.states.size();
    double T = tu.states.back().t;
    DualData data;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t o = n - 1 - k;
        const State& su = tu.states[o];
        const State& sv = tv.states[o];
        if (std::fabs(su.t - sv.t) > 1e-12 * (1.0 + T))
            throw ConfigError("dual solve: trajectory knot times differ");
        const Domain& d = su.domain();
        Field w1(d), w2(d), k1(d), k2(d), l1(d), l2(d);
        for (std::size_t x = 0; x < w1.size(); ++x) {
            double u1 = su.u1[x], u2 = su.u2[x];
            w1[x] = u1 - sv.u1[x];
            w2[x] = u2 - sv.u2[x];
            k1[x] = coeffs.c1 + coeffs.a1 * (u1 + u2) + u2;
            k2[x] = coeffs.c2 + coeffs.a2 * (u1 + u2) + u1;
            l1[x] = coeffs.alpha1 - coeffs.beta11 * (u1 + u2) - coeffs.beta12 * u2;
            l2[x] = coeffs.alpha2 - coeffs.beta22 * (u1 + u2) - coeffs.beta21 * u1;
        }
        data.w1.push_back(std::move(w1));
        data.w2.push_back(std::move(w2));
        data.k1.push_back(std::move(k1));
        data.k2.push_back(std::move(k2));
        data.l1.push_back(std::move(l1));
        data.l2.push_back(std::move(l2));
        data.v1.push_back(sv.u1);
        data.v2.push_back(sv.u2);
        data.s.push_back(T - su.t);
    }
    return data;
}

// RHS of the reversed-time dual system at dual knot k.
std::array<Field, 2> dual_rhs(const DualData& data, const Coefficients& coeffs,
                              const KernelTable& table, std::size_t k,
                              const Field& phi1, const Field& phi2) {
    Field a1 = nonlocal_apply(table, phi1);
    Field a2 = nonlocal_apply(table, phi2);
    Field r1(phi1.domain()), r2(phi2.domain());
    for (std::size_t x = 0; x < r1.size(); ++x) {
        r1[x] = data.w1[k][x] + data.k1[k][x] * a1[x] + data.v2[k][x] * a2[x] -
                data.l1[k][x] * phi1[x] - coeffs.beta21 * data.v2[k][x] * phi2[x];
        r2[x] = data.w2[k][x] + data.k2[k][x] * a2[x] + data.v1[k][x] * a1[x] -
                data.l2[k][x] * phi2[x] - coeffs.beta12 * data.v1[k][x] * phi1[x];
    }
    return {std::move(r1), std::move(r2)};
}

double dual_lipschitz(const DualData& data, const Coefficients& coeffs,
                      const KernelTable& table) {
    double supk = 0.0, supl = 0.0, supv = 0.0;
    for (std::size_t k = 0; k < data.s.size(); ++k) {
        supk = std::max({supk, sup_norm(data.k1[k]), sup_norm(data.k2[k])});
        supl = std::max({supl, sup_norm(data.l1[k]), sup_norm(data.l2[k])});
        supv = std::max({supv, sup_norm(data.v1[k]), sup_norm(data.v2[k])});
    }
    double op = table.row_l1() + table.j1();
    double beta = std::max(coeffs.beta12, coeffs.beta21);
    return op * (supk + supv) + supl + beta * supv;
}

} // namespace

DualSolveResult dual_solve(const Trajectory& traj_u, const Trajectory& traj_v,
                           const Coefficients& coeffs, const KernelTable& table,
                           const DualConfig& cfg) {
    DualData data = assemble_dual_data(traj_u, traj_v, coeffs);
    const std::size_t nk = data.s.size();
    const Domain& d = traj_u.states.front().domain();
    double T = data.s.back();

    double chat = std::max(dual_lipschitz(data, coeffs, table), 1e-30);
    double t0 = std::min(cfg.theta_dual / chat, T > 0.0 ? T : cfg.theta_dual / chat);

    DualSolveResult result;
    result.history.push_back({Field(d), Field(d), 0.0});

    int halvings = 0;
    std::size_t start = 0;
    while (start + 1 < nk) {
        // window end: furthest knot within t0 of the window start
        std::size_t end = start + 1;
        while (end + 1 < nk && data.s[end + 1] - data.s[start] <= t0)
            ++end;

        const Field& phi1_0 = result.history[start].phi1;
        const Field& phi2_0 = result.history[start].phi2;
        std::size_t m = end - start + 1;
        std::vector<Field> phi1(m, phi1_0), phi2(m, phi2_0);

        double tol = cfg.picard_tol * (1.0 + std::max(sup_norm(phi1_0), sup_norm(phi2_0)));
        double prev_diff = -1.0;
        bool converged = false;
        double window_max_ratio = -1.0;
        for (int iter = 0; iter < cfg.picard_max_iters; ++iter) {
            // cumulative trapezoid of the RHS along the window
            std::vector<std::array<Field, 2>> rhs;
            rhs.reserve(m);
            for (std::size_t k = 0; k < m; ++k)
                rhs.push_back(dual_rhs(data, coeffs, table, start + k, phi1[k], phi2[k]));

            std::vector<Field> next1(m, phi1_0), next2(m, phi2_0);
            for (std::size_t k = 1; k < m; ++k) {
                double dt = data.s[start + k] - data.s[start + k - 1];
                for (std::size_t x = 0; x < next1[k].size(); ++x) {
                    next1[k][x] = next1[k - 1][x] +
                                  0.5 * dt * (rhs[k - 1][0][x] + rhs[k][0][x]);
                    next2[k][x] = next2[k - 1][x] +
                                  0.5 * dt * (rhs[k - 1][1][x] + rhs[k][1][x]);
                }
            }

            double diff = 0.0;
            for (std::size_t k = 0; k < m; ++k)
                for (std::size_t x = 0; x < next1[k].size(); ++x) {
                    diff = std::max(diff, std::fabs(next1[k][x] - phi1[k][x]));
                    diff = std::max(diff, std::fabs(next2[k][x] - phi2[k][x]));
                }
            phi1 = std::move(next1);
            phi2 = std::move(next2);

            if (prev_diff > 0.0 && diff > 0.0)
                window_max_ratio = std::max(window_max_ratio, diff / prev_diff);
            if (prev_diff > 0.0 && diff > prev_diff) {
                window_max_ratio = diff / prev_diff;
                break; // expanding: window too large
            }
            if (diff < tol) {
                converged = true;
                break;
            }
            prev_diff = diff;
        }

        if (!converged && window_max_ratio > 1.0) {
            if (++halvings > cfg.max_window_halvings)
                throw WindowTooLarge("dual window kept expanding after halving limit");
            t0 *= 0.5;
            continue;
        }
        if (!converged)
            throw NoConvergence("dual window picard iteration stalled");

        if (window_max_ratio > 0.0)
            result.window_ratios.push_back(window_max_ratio);
        for (std::size_t k = 1; k < m; ++k)
            result.history.push_back({phi1[k], phi2[k], data.s[start + k]});
        start = end;
    }
    result.window_length = t0;
    return result;
}

double uniqueness_residual(const Trajectory& traj_u, const Trajectory& traj_v) {
    if (traj_u.states.size() != traj_v.states.size() || traj_u.states.empty())
        throw ConfigError("residual needs trajectories on the same time grid");
    const std::size_t n = traj_u.states.size();
    double acc = 0.0;
    auto slab = [&](std::size_t j) {
        const State& su = traj_u.states[j];
        const State& sv = traj_v.states[j];
        double s = 0.0;
        for (std::size_t x = 0; x < su.u1.size(); ++x) {
            double w1 = su.u1[x] - sv.u1[x];
            double w2 = su.u2[x] - sv.u2[x];
            s += w1 * w1 + w2 * w2;
        }
        return s * su.domain().cell_volume();
    };
    for (std::size_t j = 1; j < n; ++j) {
        double dt = traj_u.states[j].t - traj_u.states[j - 1].t;
        acc += 0.5 * dt * (slab(j - 1) + slab(j));
    }
    return acc;
}

double duality_pairing(const Trajectory& traj_u, const Trajectory& traj_v,
                       const Coefficients& coeffs, const KernelTable& table,
                       const DualSolveResult& dual) {
    DualData data = assemble_dual_data(traj_u, traj_v, coeffs);
    const std::size_t nk = data.s.size();
    if (dual.history.size() != nk)
        throw ConfigError("dual history does not match the trajectory grid");

    double vol = traj_u.states.front().domain().cell_volume();
    double acc = 0.0;
    for (std::size_t k = 1; k < nk; ++k) {
        double dt = data.s[k] - data.s[k - 1];
        if (dt <= 0.0)
            continue;
        auto rhs_a = dual_rhs(data, coeffs, table, k - 1, dual.history[k - 1].phi1,
                              dual.history[k - 1].phi2);
        auto rhs_b = dual_rhs(data, coeffs, table, k, dual.history[k].phi1,
                              dual.history[k].phi2);
        for (int i = 0; i < 2; ++i) {
            const Field& wa = i == 0 ? data.w1[k - 1] : data.w2[k - 1];
            const Field& wb = i == 0 ? data.w1[k] : data.w2[k];
            const Field& pa = i == 0 ? dual.history[k - 1].phi1 : dual.history[k - 1].phi2;
            const Field& pb = i == 0 ? dual.history[k].phi1 : dual.history[k].phi2;
            for (std::size_t x = 0; x < wa.size(); ++x) {
                double wbar = 0.5 * (wa[x] + wb[x]);
                double dphi = (pb[x] - pa[x]) / dt;
                // operator part of the RHS, i.e. RHS minus the source w
                double opbar = 0.5 * ((rhs_a[i][x] - wa[x]) + (rhs_b[i][x] - wb[x]));
                acc += dt * vol * wbar * (dphi - opbar);
            }
        }
    }
    return acc;
}

} // namespace nlskt
