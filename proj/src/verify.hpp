#pragma once

#include "diagnostics.hpp"
#include "dynamics.hpp"
#include "stepper.hpp"

#include <functional>
#include <vector>

namespace nlskt {

// ---------------------------------------------------------------------------
// Taylor consistency of the rescaled operator against the second derivative.

struct TaylorRow {
    double delta;
    double max_interior_error;
    double first_moment; // |sum w(xi) xi h| of the stencil
};

struct TaylorReport {
    std::vector<TaylorRow> rows;
    double fitted_order = 0.0; // log-log least squares slope
};

struct TestFunction1D {
    std::function<double(double)> value;
    std::function<double(double)> second_derivative;
};

TaylorReport taylor_consistency(const Domain& domain, const KernelSpec& base,
                                const std::vector<double>& deltas,
                                const TestFunction1D& fn);

// ---------------------------------------------------------------------------
// Nonlocal -> local heat limit against the closed-form Neumann solution
// for u0(x) = 1 + cos(pi x) on (0,1).

struct HeatRow {
    double delta;
    double sup_error;
};

struct HeatReport {
    std::vector<HeatRow> rows;
    bool monotone = false;
};

HeatReport heat_convergence(const std::vector<double>& deltas, int cells, double t_final,
                            double tau, const KernelSpec& base);

// ---------------------------------------------------------------------------
// Spatially constant data reduce the system to the Lotka-Volterra ODE.

struct OdeReductionReport {
    double max_deviation;       // vs high-order explicit reference
    double max_constancy_drift; // max_x |u_i(t,x) - mean|
    std::array<double, 2> final_value;
};

OdeReductionReport ode_reduction(std::array<double, 2> u0, const Coefficients& coeffs,
                                 const KernelTable& table, double t_final,
                                 const StepConfig& cfg);

// Reference integrator for du/dt = f(u): classic RK4 at fixed step.
std::array<double, 2> lotka_volterra_rk4(std::array<double, 2> u0,
                                         const Coefficients& coeffs, double t_final,
                                         int steps);

// ---------------------------------------------------------------------------
// Bilateral filter: scalar nonlocal evolution with a state-dependent range
// kernel, advanced by explicit Euler.

struct BilateralParams {
    double rho;           // spatial width
    double range_h;       // range width
    double tau = 0.0;     // 0 = auto: 0.9 / stencil row sum
    bool freeze_range = false;
};

// Spatial weights exp(-|x-y|^2/rho^2) tabulated with a far-tail cutoff.
KernelTable bilateral_spatial_table(const Domain& domain, double rho);

Field bilateral_step(const Field& image, const BilateralParams& params,
                     const KernelTable& spatial);

Field bilateral_filter(const Field& image, const BilateralParams& params, double t_final);

// ---------------------------------------------------------------------------
// Dual-problem uniqueness certificate (reversed-time linear system).

struct DualConfig {
    double theta_dual = 0.5;
    double picard_tol = 1e-12;
    int picard_max_iters = 400;
    int max_window_halvings = 20;
};

struct DualState {
    Field phi1;
    Field phi2;
    double s; // reversed time
};

struct DualSolveResult {
    std::vector<DualState> history; // phi at every reversed-time knot
    std::vector<double> window_ratios;
    double window_length = 0.0;     // accepted T0
};

DualSolveResult dual_solve(const Trajectory& traj_u, const Trajectory& traj_v,
                           const Coefficients& coeffs, const KernelTable& table,
                           const DualConfig& cfg = {});

// sum_i integral over Q_T of |u_i - v_i|^2 (trapezoid in time).
double uniqueness_residual(const Trajectory& traj_u, const Trajectory& traj_v);

// Duality pairing of w with the solved phi through the dual equation; equals
// the residual when phi solves the dual system exactly.
double duality_pairing(const Trajectory& traj_u, const Trajectory& traj_v,
                       const Coefficients& coeffs, const KernelTable& table,
                       const DualSolveResult& dual);

} // namespace nlskt
