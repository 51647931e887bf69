#pragma once

#include "grid.hpp"

#include <string>
#include <vector>

namespace nlskt {

enum class KernelFamily { UniformBall, TruncatedGaussian, Table };

/// Radial kernel specification. Families are even by construction and
/// default to unit L1 mass on R^d before boundary truncation; `amplitude`
/// multiplies the normalized profile. `rescale` produces the spec of
/// J_delta(z) = c1 * delta^-(2+d) * J(z/delta) with support rho*delta.
struct KernelSpec {
    KernelFamily family = KernelFamily::UniformBall;
    int dim = 1;
    double rho = 0.25;       // base support radius
    double width = 0.1;      // Gaussian width parameter
    double amplitude = 1.0;
    double delta = 1.0;      // rescaling stretch
    double scale = 1.0;      // rescaling prefactor (c1 * delta^-(2+d))
    // Table family: radial profile samples (radius, value), linearly
    // interpolated, zero beyond rho.
    std::vector<std::pair<double, double>> profile;

    double support_radius() const { return rho * delta; }

    static KernelSpec uniform_ball(int dim, double rho, double amplitude = 1.0);
    static KernelSpec truncated_gaussian(int dim, double rho, double width,
                                         double amplitude = 1.0);
    static KernelSpec table(int dim, double rho,
                            std::vector<std::pair<double, double>> profile);
};

double evaluate(const KernelSpec& spec, double zx, double zy = 0.0);

// L1 mass of the normalized Gaussian profile on R^d before amplitude,
// i.e. the constant Z with exp(-|z|^2/w^2) = Z * normalized profile.
double gaussian_l1_mass(int dim, double rho, double width);

// integral of J(z) z_d^2 dz over the support, by radial quadrature.
double second_moment(const KernelSpec& spec);
double normalizer_c1(const KernelSpec& spec);
double l1_mass(const KernelSpec& spec);

KernelSpec rescale(const KernelSpec& spec, double delta);

struct StencilEntry {
    int dx;
    int dy;
    double weight; // J(offset) * h^d
};

/// Precomputed translation-invariant stencil plus the boundary-truncated
/// mass function m(x) and its bounds. Immutable after build.
class KernelTable {
public:
    const Domain& domain() const { return *domain_; }
    const std::vector<StencilEntry>& stencil() const { return stencil_; }
    const Field& mass() const { return mass_; }
    double j0() const { return j0_; }
    double j1() const { return j1_; }
    double linf() const { return linf_; }
    // Full stencil weight sum (the L1 row norm of the discrete operator).
    double row_l1() const { return row_l1_; }
    // Discrete second moment along axis 0: sum w(xi) (xi_x h)^2.
    double discrete_second_moment() const { return m2_; }

    friend KernelTable build_table(const KernelSpec& spec, const Domain& domain,
                                   bool calibrate_second_moment);

private:
    KernelTable(const Domain& domain, Field mass)
        : domain_(&domain), mass_(std::move(mass)) {}

    const Domain* domain_;
    std::vector<StencilEntry> stencil_;
    Field mass_;
    double j0_ = 0.0;
    double j1_ = 0.0;
    double linf_ = 0.0;
    double row_l1_ = 0.0;
    double m2_ = 0.0;
};

// Builds the stencil by cell-center sampling of J and the mass field by
// boundary-truncated summation. With calibrate_second_moment the stencil is
// post-scaled so its discrete second moment matches the continuum
// second_moment(spec) exactly; this makes the operator exact on quadratics.
KernelTable build_table(const KernelSpec& spec, const Domain& domain,
                        bool calibrate_second_moment = false);

} // namespace nlskt
