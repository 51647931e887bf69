#pragma once

#include "dynamics.hpp"
#include "stepper.hpp"

#include <array>
#include <vector>

namespace nlskt {

/// Per-snapshot entropy/boundedness quantities and inequality margins.
struct EntropyReport {
    double t = 0.0;
    double entropy = 0.0;           // E(t), with the +1 normalization
    double entropy_eps = 0.0;       // sum_i E_i with the eps shift, no +1
    double dissipation = 0.0;       // instantaneous D at this state
    double dissipation_cumulative = 0.0;
    std::array<double, 2> neg_l1{}; // ||u_i^-||_L1
    std::array<double, 2> mass{};   // integral of u_i
    std::array<double, 2> sup{};    // ||u_i||_inf
};

struct EntropyLedger {
    std::vector<EntropyReport> rows;
    std::vector<double> running_c;  // smallest admissible c over [0, t_j]
    double c = 0.0;                 // smallest admissible constant in the
                                    // discrete entropy inequality
    double eps = 0.0;
};

struct GronwallReport {
    std::vector<double> running_c;  // smallest admissible C over [0, t_j]
    double c = 0.0;                 // smallest admissible C
    double worst_violation = 0.0;   // max over (t,x) of lhs - rhs at that C
};

struct PoincareCheck {
    double lhs;
    double rhs;
    double margin;                  // rhs - lhs
};

struct NegPartSweepEntry {
    double eps;
    double max_neg_l1;              // max over t of sum_i ||u_i^-||_L1
    double ratio;                   // max_neg_l1 / eps
};

struct NegPartSweep {
    std::vector<NegPartSweepEntry> entries;
    bool at_most_linear = false;    // ratios bounded within factor-2 slack
};

// E = sum_i integral of u_i (ln u_i - 1) + 1, with 0 ln 0 := 0. Negative
// values are evaluated on positive parts; *clipped_flag reports if any were
// present.
double entropy(const State& state, bool* clipped_flag = nullptr);

// E_eps = sum_i integral of (u_i^+ + eps)(ln(u_i^+ + eps) - 1); no +1 term.
double entropy_eps(const State& state, double eps);

// D = sum_i a_i sum_x sum_y w(x-y) (u_i^+(y) - u_i^+(x))^2 h^d >= 0.
double dissipation(const State& state, const Coefficients& coeffs,
                   const KernelTable& table);

EntropyReport snapshot_report(const State& state, const Coefficients& coeffs,
                              const KernelTable& table, double eps);

// Checks the discrete entropy inequality
//   E_eps(t_j) + sum tau D - ln(eps) sum ||u_i^-|| <= E_eps(0) + c (1+eps) t_j
// and reports the smallest admissible c. With eps = 0 the ln(eps) term is
// omitted (negative parts stay at solver-tolerance size there).
EntropyLedger entropy_ledger(const Trajectory& traj, const Coefficients& coeffs,
                             const KernelTable& table, double eps);

GronwallReport gronwall_bound(const Trajectory& traj, const Coefficients& coeffs,
                              const KernelTable& table);

// ||v||_L2^2 <= (||J||_inf / J0) ||v||_L1^2 + 1/(2 J0) * iint J (v(y)-v(x))^2.
PoincareCheck poincare_check(const Field& v, const KernelTable& table);

// Per-step Lemma-1 ledger: smallest admissible constants in the discrete L1
// inequalities for the positive and negative parts.
struct Lemma1Ledger {
    double c_plus = 0.0;   // (lema1 positive-part law)
    double c_minus = 0.0;  // (lema1 negative-part law)
};

Lemma1Ledger lemma1_ledger(const Trajectory& traj, const Coefficients& coeffs,
                           const KernelTable& table);

NegPartSweep negpart_sweep(const std::vector<double>& eps_list,
                           const std::function<Trajectory(double)>& run);

} // namespace nlskt
