#include "kernel.hpp"

#include "errors.hpp"

#include <algorithm>
#include <cmath>

namespace nlskt {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Normalization constant of the raw profile on R^d (before truncation the
// families are normalized on the truncated support, which is what "unit L1
// mass" means for a compactly supported kernel).
double profile_l1(KernelFamily family, int dim, double rho, double width) {
    switch (family) {
    case KernelFamily::UniformBall:
        return dim == 1 ? 2.0 * rho : kPi * rho * rho;
    case KernelFamily::TruncatedGaussian:
        if (dim == 1)
            return width * std::sqrt(kPi) * std::erf(rho / width);
        return kPi * width * width * (1.0 - std::exp(-(rho * rho) / (width * width)));
    case KernelFamily::Table:
        return 1.0; // table profiles are taken verbatim
    }
    return 1.0;
}

// Radial profile value at radius r, including normalization and amplitude
// but excluding the rescaling prefactor.
double radial_value(const KernelSpec& spec, double r) {
    if (r > spec.rho)
        return 0.0;
    switch (spec.family) {
    case KernelFamily::UniformBall:
        return spec.amplitude / profile_l1(spec.family, spec.dim, spec.rho, spec.width);
    case KernelFamily::TruncatedGaussian:
        return spec.amplitude * std::exp(-(r * r) / (spec.width * spec.width)) /
               profile_l1(spec.family, spec.dim, spec.rho, spec.width);
    case KernelFamily::Table: {
        const auto& p = spec.profile;
        if (p.empty())
            return 0.0;
        if (r <= p.front().first)
            return spec.amplitude * p.front().second;
        if (r >= p.back().first)
            return spec.amplitude * p.back().second;
        for (std::size_t k = 1; k < p.size(); ++k) {
            if (r <= p[k].first) {
                double t = (r - p[k - 1].first) / (p[k].first - p[k - 1].first);
                return spec.amplitude * ((1.0 - t) * p[k - 1].second + t * p[k].second);
            }
        }
        return 0.0;
    }
    }
    return 0.0;
}

} // namespace

KernelSpec KernelSpec::uniform_ball(int dim, double rho, double amplitude) {
    KernelSpec s;
    s.family = KernelFamily::UniformBall;
    s.dim = dim;
    s.rho = rho;
    s.amplitude = amplitude;
    if (rho <= 0.0)
        throw DegenerateKernel("uniform-ball kernel needs rho > 0");
    return s;
}

KernelSpec KernelSpec::truncated_gaussian(int dim, double rho, double width,
                                          double amplitude) {
    KernelSpec s;
    s.family = KernelFamily::TruncatedGaussian;
    s.dim = dim;
    s.rho = rho;
    s.width = width;
    s.amplitude = amplitude;
    if (rho <= 0.0 || width <= 0.0)
        throw DegenerateKernel("truncated-gaussian kernel needs rho, width > 0");
    return s;
}

KernelSpec KernelSpec::table(int dim, double rho,
                             std::vector<std::pair<double, double>> profile) {
    KernelSpec s;
    s.family = KernelFamily::Table;
    s.dim = dim;
    s.rho = rho;
    s.profile = std::move(profile);
    if (rho <= 0.0)
        throw DegenerateKernel("table kernel needs rho > 0");
    for (auto& [r, v] : s.profile)
        if (r < 0.0 || v < 0.0)
            throw DegenerateKernel("table kernel profile must be non-negative");
    return s;
}

double evaluate(const KernelSpec& spec, double zx, double zy) {
    double r = spec.dim == 1 ? std::fabs(zx) : std::sqrt(zx * zx + zy * zy);
    if (r > spec.support_radius())
        return 0.0;
    return spec.scale * radial_value(spec, r / spec.delta);
}

double gaussian_l1_mass(int dim, double rho, double width) {
    return profile_l1(KernelFamily::TruncatedGaussian, dim, rho, width);
}

namespace {

// Composite midpoint quadrature of fn over [0, upper].
template <typename Fn>
double radial_quad(Fn&& fn, double upper, int n = 1 << 16) {
    double h = upper / n;
    double sum = 0.0;
    for (int k = 0; k < n; ++k)
        sum += fn((k + 0.5) * h);
    return sum * h;
}

} // namespace

double second_moment(const KernelSpec& spec) {
    double R = spec.support_radius();
    auto j = [&](double r) { return evaluate(spec, r); };
    if (spec.dim == 1)
        return 2.0 * radial_quad([&](double r) { return j(r) * r * r; }, R);
    return kPi * radial_quad([&](double r) { return j(r) * r * r * r; }, R);
}

double normalizer_c1(const KernelSpec& spec) {
    double m2 = second_moment(spec);
    if (!(m2 > 0.0))
        throw DegenerateKernel("kernel has vanishing second moment");
    return 2.0 / m2;
}

double l1_mass(const KernelSpec& spec) {
    double R = spec.support_radius();
    auto j = [&](double r) { return evaluate(spec, r); };
    if (spec.dim == 1)
        return 2.0 * radial_quad([&](double r) { return j(r); }, R);
    return 2.0 * kPi * radial_quad([&](double r) { return j(r) * r; }, R);
}

KernelSpec rescale(const KernelSpec& spec, double delta) {
    if (!(delta > 0.0))
        throw InvalidDelta("rescale needs delta > 0");
    double c1 = normalizer_c1(spec);
    KernelSpec out = spec;
    out.delta = spec.delta * delta;
    out.scale = spec.scale * c1 * std::pow(delta, -(2.0 + spec.dim));
    return out;
}

KernelTable build_table(const KernelSpec& spec, const Domain& domain,
                        bool calibrate_second_moment) {
    if (spec.dim != domain.dim())
        throw DegenerateKernel("kernel and domain dimensions differ");
    double R = spec.support_radius();
    if (!(R < domain.diameter()))
        throw DegenerateKernel("kernel support radius must be below the domain diameter");

    double hx = domain.spacing(0);
    double hy = domain.dim() == 2 ? domain.spacing(1) : 0.0;
    double hd = domain.cell_volume();

    KernelTable table(domain, Field(domain));
    int kx = static_cast<int>(std::floor(R / hx));
    int ky = domain.dim() == 2 ? static_cast<int>(std::floor(R / hy)) : 0;

    bool off_center = false;
    for (int dy = -ky; dy <= ky; ++dy) {
        for (int dx = -kx; dx <= kx; ++dx) {
            double v = evaluate(spec, dx * hx, dy * hy);
            if (v <= 0.0)
                continue;
            table.stencil_.push_back({dx, dy, v * hd});
            if (dx != 0 || dy != 0)
                off_center = true;
        }
    }
    if (!off_center)
        throw DegenerateKernel("kernel support is unresolved by the grid (rho < h)");

    if (calibrate_second_moment) {
        double m2 = 0.0;
        for (const auto& e : table.stencil_)
            m2 += e.weight * (e.dx * hx) * (e.dx * hx);
        double target = second_moment(spec);
        if (!(m2 > 0.0))
            throw DegenerateKernel("discrete second moment vanished");
        double factor = target / m2;
        for (auto& e : table.stencil_)
            e.weight *= factor;
    }

    for (const auto& e : table.stencil_) {
        table.row_l1_ += e.weight;
        table.m2_ += e.weight * (e.dx * hx) * (e.dx * hx);
        table.linf_ = std::max(table.linf_, e.weight / hd);
    }

    // Boundary-truncated mass m(x): entries reaching outside the grid drop.
    const int nx = domain.cells(0);
    const int ny = domain.dim() == 2 ? domain.cells(1) : 1;
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            double m = 0.0;
            for (const auto& e : table.stencil_) {
                int jx = ix + e.dx;
                int jy = iy + e.dy;
                if (jx < 0 || jx >= nx || jy < 0 || jy >= ny)
                    continue;
                m += e.weight;
            }
            table.mass_[domain.flat_index(ix, iy)] = m;
        }
    }
    table.j0_ = min_value(table.mass_);
    table.j1_ = max_value(table.mass_);
    if (!(table.j0_ > 0.0))
        throw DegenerateKernel("discrete mass function is not bounded away from zero");
    return table;
}

} // namespace nlskt
