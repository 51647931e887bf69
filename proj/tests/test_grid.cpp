#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "grid.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

using namespace nlskt;

TEST_CASE("domain geometry 1D") {
    Domain d(0.0, 2.0, 8);
    CHECK(d.dim() == 1);
    CHECK(d.cells(0) == 8);
    CHECK(d.total_cells() == 8);
    CHECK(d.spacing(0) == doctest::Approx(0.25));
    CHECK(d.cell_volume() == doctest::Approx(0.25));
    CHECK(d.volume() == doctest::Approx(2.0));
    CHECK(d.diameter() == doctest::Approx(2.0));
    CHECK(d.center(0, 0) == doctest::Approx(0.125));
    CHECK(d.center(0, 7) == doctest::Approx(1.875));
}

TEST_CASE("domain geometry 2D") {
    Domain d({0.0, -1.0}, {1.0, 1.0}, {4, 8});
    CHECK(d.dim() == 2);
    CHECK(d.total_cells() == 32);
    CHECK(d.cell_volume() == doctest::Approx(0.25 * 0.25));
    CHECK(d.diameter() == doctest::Approx(std::sqrt(1.0 + 4.0)));
    CHECK(d.flat_index(3, 0) == 3);
    CHECK(d.flat_index(0, 1) == 4); // x-fastest
    CHECK(d == Domain({0.0, -1.0}, {1.0, 1.0}, {4, 8}));
    CHECK(d != Domain({0.0, -1.0}, {1.0, 1.0}, {4, 4}));
}

TEST_CASE("integrate is midpoint quadrature") {
    Domain d(0.0, 1.0, 128);
    Field one(d, 1.0);
    CHECK(integrate(one) == doctest::Approx(1.0).epsilon(1e-14));

    // midpoint rule is exact on linear functions
    Field lin = Field::sample(d, [](double x) { return 3.0 * x; });
    CHECK(integrate(lin) == doctest::Approx(1.5).epsilon(1e-13));
}

TEST_CASE("norms and sign splitting") {
    Domain d(0.0, 1.0, 4);
    Field f(d, {1.0, -2.0, 0.0, 3.0});
    auto nm = norms(f);
    CHECK(nm.l1 == doctest::Approx(6.0 * 0.25));
    CHECK(nm.l2sq == doctest::Approx(14.0 * 0.25));
    CHECK(nm.linf == doctest::Approx(3.0));
    CHECK(min_value(f) == -2.0);
    CHECK(max_value(f) == 3.0);
    CHECK(sup_norm(f) == 3.0);

    auto sp = split_signs(f);
    for (std::size_t i = 0; i < f.size(); ++i) {
        CHECK(sp.plus[i] >= 0.0);
        CHECK(sp.minus[i] >= 0.0);
        CHECK(sp.plus[i] - sp.minus[i] == doctest::Approx(f[i]));
    }
    Field plus = positive_part(f);
    CHECK(plus[1] == 0.0);
    CHECK(plus[3] == 3.0);
}

TEST_CASE("sampling hits cell centers") {
    Domain d(0.0, 1.0, 10);
    Field f = Field::sample(d, [](double x) { return x; });
    CHECK(f[0] == doctest::Approx(0.05));
    CHECK(f[9] == doctest::Approx(0.95));

    Domain d2({0.0, 0.0}, {1.0, 1.0}, {4, 4});
    Field g = Field::sample(d2, [](double x, double y) { return x + 10.0 * y; });
    CHECK(g[d2.flat_index(1, 2)] == doctest::Approx(0.375 + 6.25));
}

TEST_CASE("snapshot round trip is exact") {
    Domain d(0.0, 1.0, 33);
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Field f(d);
    for (std::size_t i = 0; i < f.size(); ++i)
        f[i] = uni(rng);

    std::string path = "/tmp/nlskt_test_snapshot.csv";
    write_snapshot_file(path, f);
    Field g = read_snapshot_file(path, d);
    for (std::size_t i = 0; i < f.size(); ++i)
        CHECK(g[i] == f[i]); // %.17g round-trips doubles exactly
    std::remove(path.c_str());
}

TEST_CASE("snapshot round trip 2D") {
    Domain d({0.0, 0.0}, {1.0, 2.0}, {5, 7});
    Field f = Field::sample(d, [](double x, double y) { return std::sin(x + y); });
    std::string path = "/tmp/nlskt_test_snapshot2.csv";
    write_snapshot_file(path, f);
    Field g = read_snapshot_file(path, d);
    for (std::size_t i = 0; i < f.size(); ++i)
        CHECK(g[i] == f[i]);
    std::remove(path.c_str());
}

TEST_CASE("state species accessors") {
    Domain d(0.0, 1.0, 4);
    State s(Field(d, 1.0), Field(d, 2.0), 0.5);
    CHECK(s.t == 0.5);
    CHECK(s.species(0)[0] == 1.0);
    CHECK(s.species(1)[0] == 2.0);
    CHECK(&s.domain() == &d);
}

TEST_CASE("all_finite flags bad values") {
    Domain d(0.0, 1.0, 4);
    Field f(d, 1.0);
    CHECK(f.all_finite());
    f[2] = std::nan("");
    CHECK(!f.all_finite());
}
