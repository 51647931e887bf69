#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "errors.hpp"
#include "kernel.hpp"

#include <cmath>

using namespace nlskt;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Independent quadrature oracle for the axis second moment, refined far
// beyond the library's internal resolution mismatch.
double second_moment_oracle_1d(const KernelSpec& spec, int n) {
    double r = spec.support_radius();
    double h = 2.0 * r / n;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        double z = -r + (i + 0.5) * h;
        acc += evaluate(spec, z) * z * z * h;
    }
    return acc;
}

} // namespace

TEST_CASE("uniform ball is unit mass with closed-form second moment") {
    for (int dim : {1, 2}) {
        KernelSpec spec = KernelSpec::uniform_ball(dim, 0.3);
        CHECK(l1_mass(spec) == doctest::Approx(1.0).epsilon(1e-10));
        double exact = dim == 1 ? 0.3 * 0.3 / 3.0 : 0.3 * 0.3 / 4.0;
        CHECK(second_moment(spec) == doctest::Approx(exact).epsilon(1e-8));
    }
}

TEST_CASE("uniform ball pointwise value") {
    KernelSpec spec = KernelSpec::uniform_ball(1, 0.5);
    CHECK(evaluate(spec, 0.25) == doctest::Approx(1.0)); // 1/(2*0.5)
    CHECK(evaluate(spec, 0.51) == 0.0);
    CHECK(evaluate(spec, -0.25) == evaluate(spec, 0.25)); // even
}

TEST_CASE("truncated gaussian is unit mass") {
    KernelSpec g1 = KernelSpec::truncated_gaussian(1, 0.4, 0.1);
    CHECK(l1_mass(g1) == doctest::Approx(1.0).epsilon(1e-8));
    KernelSpec g2 = KernelSpec::truncated_gaussian(2, 0.4, 0.1);
    CHECK(l1_mass(g2) == doctest::Approx(1.0).epsilon(1e-8));

    // profile shape: ratio of two evaluations matches exp(-(r1^2-r2^2)/w^2)
    double ratio = evaluate(g1, 0.2) / evaluate(g1, 0.1);
    CHECK(ratio == doctest::Approx(std::exp(-(0.04 - 0.01) / 0.01)).epsilon(1e-12));
}

TEST_CASE("second moment agrees with refined quadrature oracle") {
    KernelSpec g = KernelSpec::truncated_gaussian(1, 0.4, 0.15);
    double oracle = second_moment_oracle_1d(g, 1 << 20);
    CHECK(second_moment(g) == doctest::Approx(oracle).epsilon(1e-8));
}

TEST_CASE("rescaling normalizes the second moment to 2") {
    // J_delta = c1 delta^-(d+2) J(z/delta) with c1 = 2 / second_moment(J)
    for (int dim : {1, 2}) {
        KernelSpec base = KernelSpec::uniform_ball(dim, 1.0);
        CHECK(normalizer_c1(base) == doctest::Approx(2.0 / second_moment(base)));
        for (double delta : {0.5, 0.1}) {
            KernelSpec r = rescale(base, delta);
            CHECK(r.support_radius() == doctest::Approx(delta));
            CHECK(second_moment(r) == doctest::Approx(2.0).epsilon(1e-7));
        }
    }
}

TEST_CASE("stencil is even and boundary mass is bounded") {
    Domain domain(0.0, 1.0, 64);
    KernelSpec spec = KernelSpec::uniform_ball(1, 0.2);
    KernelTable table = build_table(spec, domain);

    double first_moment = 0.0;
    double row = 0.0;
    for (const auto& e : table.stencil()) {
        first_moment += e.weight * e.dx;
        row += e.weight;
    }
    CHECK(std::fabs(first_moment) <= 1e-14 * row);
    CHECK(table.row_l1() == doctest::Approx(row));

    CHECK(table.j0() > 0.0);
    CHECK(table.j0() <= table.j1());
    CHECK(table.j1() == doctest::Approx(table.row_l1()).epsilon(1e-12));

    // interior mass equals the full row sum; boundary mass is truncated
    const Field& m = table.mass();
    CHECK(m[32] == doctest::Approx(table.row_l1()));
    CHECK(m[0] < table.row_l1());
    CHECK(m[0] == doctest::Approx(table.j0()));
}

TEST_CASE("2D table has vanishing first moments") {
    Domain domain({0.0, 0.0}, {1.0, 1.0}, {32, 32});
    KernelTable table = build_table(KernelSpec::uniform_ball(2, 0.2), domain);
    double mx = 0.0, my = 0.0;
    for (const auto& e : table.stencil()) {
        mx += e.weight * e.dx;
        my += e.weight * e.dy;
    }
    CHECK(std::fabs(mx) <= 1e-13);
    CHECK(std::fabs(my) <= 1e-13);
}

TEST_CASE("second-moment calibration is exact") {
    Domain domain(0.0, 1.0, 256);
    KernelSpec spec = rescale(KernelSpec::uniform_ball(1, 1.0), 0.1);
    KernelTable plain = build_table(spec, domain, false);
    KernelTable cal = build_table(spec, domain, true);
    CHECK(cal.discrete_second_moment() ==
          doctest::Approx(second_moment(spec)).epsilon(1e-13));
    // calibration is a small correction, not a rebuild
    CHECK(cal.row_l1() == doctest::Approx(plain.row_l1()).epsilon(0.05));
}

TEST_CASE("degenerate kernels are rejected") {
    Domain domain(0.0, 1.0, 16);
    // support covering the whole domain
    CHECK_THROWS_AS(build_table(KernelSpec::uniform_ball(1, 1.5), domain),
                    DegenerateKernel);
    // support below grid resolution
    CHECK_THROWS_AS(build_table(KernelSpec::uniform_ball(1, 0.01), domain),
                    DegenerateKernel);
}

TEST_CASE("invalid rescale parameters are rejected") {
    KernelSpec base = KernelSpec::uniform_ball(1, 1.0);
    CHECK_THROWS_AS(rescale(base, 0.0), InvalidDelta);
    CHECK_THROWS_AS(rescale(base, -0.5), InvalidDelta);
}
