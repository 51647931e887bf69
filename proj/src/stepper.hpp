#pragma once

#include "dynamics.hpp"
#include "grid.hpp"
#include "kernel.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace nlskt {

enum class TauPolicy { Auto, Fixed };

struct StepConfig {
    double picard_tol = 0.0;        // 0 = default 1e-10 * (1 + M0)
    int picard_max_iters = 200;
    TauPolicy tau_policy = TauPolicy::Auto;
    double tau_fixed = 0.0;
    double theta = 0.5;             // safety factor on the contraction bound
    double t_final = 1.0;
    int snapshot_stride = 1;

    double tolerance(double m0) const {
        return picard_tol > 0.0 ? picard_tol : 1e-10 * (1.0 + m0);
    }
};

/// Certified constants entering the step-size rule. C0 bounds the growth of
/// one fixed-point application, C1 the contraction factor per unit
/// tau*(Lp+Lf); both are conservative over-estimates computed from the
/// kernel table and the coefficient magnitudes.
struct StepConstants {
    double m0;
    double lp;
    double lf;
    double c0;
    double c1;
    double invariance_tau; // C(M0) = M0 / (C0 (1 + 2 M0 + 4 M0^2))
    double contraction_tau; // 1 / (C1 (Lp + Lf))
};

struct StepRecord {
    double t_end;
    double tau;
    int iterations;
    double residual;        // sup-norm increment at acceptance
    double max_ratio;       // max consecutive increment ratio, -1 if < 2 ratios
    double certified_ratio; // C1 * tau * (Lp + Lf)
    double m0;
    double max_iterate_sup; // max over Picard iterates of max_i ||v_i||_inf
};

struct Trajectory {
    std::vector<State> states;   // states[0] at t=0
    std::vector<StepRecord> records;

    double final_time() const { return states.empty() ? 0.0 : states.back().t; }
    std::size_t steps() const { return records.size(); }
};

StepConstants step_constants(const State& state, const Coefficients& coeffs,
                             const KernelTable& table);

// theta * min(C(M0)/2, 1/(C1(Lp+Lf))); M0 is re-derived from the current
// state each call, implementing the continuation argument instead of the
// geometric in-step decay.
double tau_max(const State& state, const Coefficients& coeffs,
               const KernelTable& table, const StepConfig& cfg);

struct PicardResult {
    State state;
    StepRecord record;
};

// One implicit Euler step: the fixed point of
//   T_i(v) = u_i^j + tau * [nonlocal(p_i(v^+ + eps)) + f_i(v^+ + eps)]
// solved by Picard iteration warm-started from state_j.
PicardResult picard_step(const State& state_j, double tau, const Coefficients& coeffs,
                         const KernelTable& table, const StepConfig& cfg,
                         std::optional<State> initial_iterate = std::nullopt);

using SnapshotHook = std::function<void(const State&, const StepRecord&)>;

// Integrates to t >= t_final. Negative initial data are clipped to zero
// with a logged warning. On solver failure the exception propagates; if
// `partial` is given it receives the trajectory built so far.
Trajectory simulate(const State& u0, const Coefficients& coeffs,
                    const KernelTable& table, const StepConfig& cfg,
                    const SnapshotHook& hook = nullptr, Trajectory* partial = nullptr);

State interpolate(const Trajectory& traj, double t);

} // namespace nlskt
