#include "dynamics.hpp"

#include "errors.hpp"

#include <algorithm>
#include <cmath>

namespace nlskt {

bool Coefficients::all_nonnegative() const {
    const double v[] = {c1, c2, a1, a2, alpha1, alpha2, beta11, beta12, beta21, beta22,
                        epsilon};
    return std::all_of(std::begin(v), std::end(v), [](double x) { return x >= 0.0; });
}

bool Coefficients::theorem_condition() const {
    return a1 + beta11 > 0.0 && a2 + beta22 > 0.0;
}

Coefficients Coefficients::swapped_species() const {
    Coefficients s = *this;
    std::swap(s.c1, s.c2);
    std::swap(s.a1, s.a2);
    std::swap(s.alpha1, s.alpha2);
    std::swap(s.beta11, s.beta22);
    std::swap(s.beta12, s.beta21);
    return s;
}

double p(int i, std::array<double, 2> u, const Coefficients& coeffs) {
    int j = 1 - i;
    return u[i] * (coeffs.c(i) + coeffs.a(i) * u[i] + u[j]);
}

double f(int i, std::array<double, 2> u, const Coefficients& coeffs) {
    return u[i] * (coeffs.alpha(i) - coeffs.beta(i, 0) * u[0] - coeffs.beta(i, 1) * u[1]);
}

Field nonlocal_apply(const KernelTable& table, const Field& g) {
    const Domain& d = table.domain();
    if (g.domain() != d)
        throw ConfigError("nonlocal_apply: field domain does not match kernel table");
    Field out(d);
    const int nx = d.cells(0);
    const int ny = d.dim() == 2 ? d.cells(1) : 1;
    const auto& stencil = table.stencil();
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            std::size_t idx = d.flat_index(ix, iy);
            double gx = g[idx];
            double acc = 0.0;
            for (const auto& e : stencil) {
                int jx = ix + e.dx;
                int jy = iy + e.dy;
                if (jx < 0 || jx >= nx || jy < 0 || jy >= ny)
                    continue;
                acc += e.weight * (g[d.flat_index(jx, jy)] - gx);
            }
            out[idx] = acc;
        }
    }
    return out;
}

std::array<Field, 2> rhs_regularized(const State& state, const Coefficients& coeffs,
                                     const KernelTable& table) {
    const Domain& d = state.domain();
    double eps = coeffs.epsilon;

    // Shifted positive parts s_i = u_i^+ + eps, applied pointwise before
    // kernel application.
    Field s1(d), s2(d);
    for (std::size_t k = 0; k < s1.size(); ++k) {
        s1[k] = std::max(state.u1[k], 0.0) + eps;
        s2[k] = std::max(state.u2[k], 0.0) + eps;
    }

    Field p1(d), p2(d);
    for (std::size_t k = 0; k < p1.size(); ++k) {
        p1[k] = p(0, {s1[k], s2[k]}, coeffs);
        p2[k] = p(1, {s1[k], s2[k]}, coeffs);
    }

    Field r1 = nonlocal_apply(table, p1);
    Field r2 = nonlocal_apply(table, p2);
    for (std::size_t k = 0; k < r1.size(); ++k) {
        r1[k] += f(0, {s1[k], s2[k]}, coeffs);
        r2[k] += f(1, {s1[k], s2[k]}, coeffs);
    }
    return {std::move(r1), std::move(r2)};
}

LipschitzBounds lipschitz_bounds(double m0, const Coefficients& coeffs) {
    if (!(m0 > 0.0))
        throw DegenerateState("lipschitz_bounds needs M0 > 0");
    double b = 2.0 * m0 + coeffs.epsilon;
    const double corners[4][2] = {{0.0, 0.0}, {b, 0.0}, {0.0, b}, {b, b}};

    double lp = 0.0, lf = 0.0;
    for (int i = 0; i < 2; ++i) {
        int j = 1 - i;
        for (const auto& corner : corners) {
            double ui = corner[0], uj = corner[1];
            // dp_i/du_i = c_i + 2 a_i u_i + u_j ; dp_i/du_j = u_i
            double rowp = std::fabs(coeffs.c(i) + 2.0 * coeffs.a(i) * ui + uj) +
                          std::fabs(ui);
            // df_i/du_i = alpha_i - 2 beta_ii u_i - beta_ij u_j ; df_i/du_j = -beta_ij u_i
            double rowf = std::fabs(coeffs.alpha(i) - 2.0 * coeffs.beta(i, i) * ui -
                                    coeffs.beta(i, j) * uj) +
                          std::fabs(coeffs.beta(i, j) * ui);
            lp = std::max(lp, rowp);
            lf = std::max(lf, rowf);
        }
    }
    return {m0, lp, lf};
}

} // namespace nlskt
