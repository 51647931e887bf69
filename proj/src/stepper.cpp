#include "stepper.hpp"

#include "errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace nlskt {

namespace {

// Minimum invariance-ball radius. Any M0 >= sup|u| yields a valid ball
// T(V) subset V; flooring it keeps the step rule tau <= C(M0)/2 from
// collapsing for near-zero states (C(M0) -> 0 as M0 -> 0).
constexpr double kM0Floor = 0.5;

double state_sup(const State& s) {
    return std::max(sup_norm(s.u1), sup_norm(s.u2));
}

// sup-norm distance between two-species iterates.
double iterate_distance(const State& a, const State& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.u1.size(); ++k) {
        m = std::max(m, std::fabs(a.u1[k] - b.u1[k]));
        m = std::max(m, std::fabs(a.u2[k] - b.u2[k]));
    }
    return m;
}

State apply_fixed_point(const State& base, const State& v, double tau,
                        const Coefficients& coeffs, const KernelTable& table) {
    auto rhs = rhs_regularized(v, coeffs, table);
    State out = base;
    for (std::size_t k = 0; k < out.u1.size(); ++k) {
        out.u1[k] = base.u1[k] + tau * rhs[0][k];
        out.u2[k] = base.u2[k] + tau * rhs[1][k];
    }
    return out;
}

} // namespace

StepConstants step_constants(const State& state, const Coefficients& coeffs,
                             const KernelTable& table) {
    if (!state.u1.all_finite() || !state.u2.all_finite())
        throw DegenerateState("state contains non-finite values");

    double m0 = std::max(state_sup(state), kM0Floor);
    auto lb = lipschitz_bounds(m0, coeffs);

    // Growth constant of one application of T: |nonlocal p| <= 2 J1 sup|p|
    // with p_i(s) <= max(c_i, a_i + 1)(s + s^2), and f likewise.
    double j1 = table.j1();
    double c0 = 0.0;
    for (int i = 0; i < 2; ++i) {
        double pg = std::max(coeffs.c(i), coeffs.a(i) + 1.0);
        double fg = std::max(coeffs.alpha(i), coeffs.beta(i, 0) + coeffs.beta(i, 1));
        c0 = std::max(c0, 2.0 * j1 * pg + fg);
    }
    c0 = std::max(c0, 1e-30); // all-zero coefficients: T is the identity

    double c1 = table.row_l1() + j1 + 1.0;

    double invariance = m0 / (c0 * (1.0 + 2.0 * m0 + 4.0 * m0 * m0));
    double lsum = lb.lp + lb.lf;
    double contraction = lsum > 0.0 ? 1.0 / (c1 * lsum) : std::numeric_limits<double>::infinity();
    return {m0, lb.lp, lb.lf, c0, c1, invariance, contraction};
}

double tau_max(const State& state, const Coefficients& coeffs,
               const KernelTable& table, const StepConfig& cfg) {
    auto k = step_constants(state, coeffs, table);
    return cfg.theta * std::min(k.invariance_tau / 2.0, k.contraction_tau);
}

PicardResult picard_step(const State& state_j, double tau, const Coefficients& coeffs,
                         const KernelTable& table, const StepConfig& cfg,
                         std::optional<State> initial_iterate) {
    auto consts = step_constants(state_j, coeffs, table);
    double tol = cfg.tolerance(consts.m0);
    double certified = consts.c1 * tau * (consts.lp + consts.lf);

    State v = initial_iterate ? std::move(*initial_iterate) : state_j;
    double prev_increment = -1.0;
    double max_ratio = -1.0;
    double max_sup = state_sup(v);
    int consecutive_expanding = 0;

    for (int iter = 1; iter <= cfg.picard_max_iters; ++iter) {
        State next = apply_fixed_point(state_j, v, tau, coeffs, table);
        double increment = iterate_distance(next, v);
        max_sup = std::max(max_sup, state_sup(next));

        if (prev_increment > 0.0) {
            double ratio = increment / prev_increment;
            max_ratio = std::max(max_ratio, ratio);
            consecutive_expanding = ratio > 1.0 ? consecutive_expanding + 1 : 0;
            if (consecutive_expanding >= 2)
                throw NonContracting("picard iteration expanding twice in a row; tau too large");
        }

        if (increment < tol) {
            next.t = state_j.t + tau;
            StepRecord rec{next.t, tau, iter, increment, max_ratio, certified,
                           consts.m0, max_sup};
            return {std::move(next), rec};
        }
        prev_increment = increment;
        v = std::move(next);
    }
    throw NoConvergence("picard iteration did not reach tolerance within max iterations");
}

Trajectory simulate(const State& u0, const Coefficients& coeffs,
                    const KernelTable& table, const StepConfig& cfg,
                    const SnapshotHook& hook, Trajectory* partial) {
    State init = u0;
    init.t = 0.0;
    bool clipped = false;
    for (std::size_t k = 0; k < init.u1.size(); ++k) {
        if (init.u1[k] < 0.0) { init.u1[k] = 0.0; clipped = true; }
        if (init.u2[k] < 0.0) { init.u2[k] = 0.0; clipped = true; }
    }
    if (clipped)
        std::fprintf(stderr, "warning: negative initial data clipped to zero\n");

    Trajectory traj;
    traj.states.push_back(init);

    try {
        long step_index = 0;
        while (traj.states.back().t < cfg.t_final - 1e-14) {
            const State& cur = traj.states.back();
            double tau;
            if (cfg.tau_policy == TauPolicy::Auto) {
                tau = tau_max(cur, coeffs, table, cfg);
            } else {
                if (!(cfg.tau_fixed > 0.0))
                    throw ConfigError("fixed tau policy needs tau > 0");
                tau = cfg.tau_fixed;
            }
            tau = std::min(tau, cfg.t_final - cur.t);
            auto result = picard_step(cur, tau, coeffs, table, cfg);
            traj.records.push_back(result.record);
            traj.states.push_back(std::move(result.state));
            ++step_index;
            if (hook && (step_index % std::max(cfg.snapshot_stride, 1) == 0))
                hook(traj.states.back(), traj.records.back());
        }
    } catch (...) {
        if (partial)
            *partial = traj;
        throw;
    }
    return traj;
}

State interpolate(const Trajectory& traj, double t) {
    if (traj.states.empty())
        throw OutOfRange("interpolate on empty trajectory");
    double t0 = traj.states.front().t;
    double t1 = traj.states.back().t;
    if (t < t0 - 1e-14 || t > t1 + 1e-14)
        throw OutOfRange("interpolation time outside trajectory span");
    t = std::clamp(t, t0, t1);

    // locate the knot interval
    std::size_t hi = 1;
    while (hi < traj.states.size() && traj.states[hi].t < t)
        ++hi;
    if (hi == traj.states.size())
        return traj.states.back();
    const State& a = traj.states[hi - 1];
    const State& b = traj.states[hi];
    if (b.t == a.t)
        return b;
    double w = (t - a.t) / (b.t - a.t);
    State out = a;
    out.t = t;
    for (std::size_t k = 0; k < out.u1.size(); ++k) {
        out.u1[k] = (1.0 - w) * a.u1[k] + w * b.u1[k];
        out.u2[k] = (1.0 - w) * a.u2[k] + w * b.u2[k];
    }
    return out;
}

} // namespace nlskt
