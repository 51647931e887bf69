#pragma once

#include "grid.hpp"
#include "kernel.hpp"

#include <array>

namespace nlskt {

/// Model constants of the diffusion and reaction nonlinearities plus the
/// positivity regularization epsilon.
struct Coefficients {
    double c1 = 0.0, c2 = 0.0;
    double a1 = 0.0, a2 = 0.0;
    double alpha1 = 0.0, alpha2 = 0.0;
    double beta11 = 0.0, beta12 = 0.0, beta21 = 0.0, beta22 = 0.0;
    double epsilon = 0.0;

    double c(int i) const { return i == 0 ? c1 : c2; }
    double a(int i) const { return i == 0 ? a1 : a2; }
    double alpha(int i) const { return i == 0 ? alpha1 : alpha2; }
    double beta(int i, int j) const {
        return i == 0 ? (j == 0 ? beta11 : beta12) : (j == 0 ? beta21 : beta22);
    }

    bool all_nonnegative() const;
    // Existence-theorem condition a_i + beta_ii > 0 for both species.
    bool theorem_condition() const;
    Coefficients swapped_species() const;
};

struct LipschitzBounds {
    double m0;
    double lp;
    double lf;
};

// p_i(u) = u_i (c_i + a_i u_i + u_j), f_i(u) = u_i (alpha_i - beta_i1 u_1 - beta_i2 u_2)
double p(int i, std::array<double, 2> u, const Coefficients& coeffs);
double f(int i, std::array<double, 2> u, const Coefficients& coeffs);

// out(x) = sum_xi w(xi) (g(x+xi) - g(x)), entries outside the grid dropped.
Field nonlocal_apply(const KernelTable& table, const Field& g);

// Right side of the regularized equation: nonlocal term of p_i(u^+ + eps)
// plus the pointwise reaction f_i(u^+ + eps), per species.
std::array<Field, 2> rhs_regularized(const State& state, const Coefficients& coeffs,
                                     const KernelTable& table);

// Row-sum Jacobian bounds of p and f over the box [0, 2*M0 + eps]^2, exact
// by corner evaluation (every partial derivative is affine).
LipschitzBounds lipschitz_bounds(double m0, const Coefficients& coeffs);

} // namespace nlskt
