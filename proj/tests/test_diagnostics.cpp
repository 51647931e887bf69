#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "diagnostics.hpp"
#include "errors.hpp"

#include <cmath>
#include <random>

using namespace nlskt;

namespace {

Coefficients benchmark_coeffs() {
    Coefficients c;
    c.c1 = c.c2 = 1.0;
    c.a1 = c.a2 = 1.0;
    c.alpha1 = c.alpha2 = 1.0;
    c.beta11 = c.beta12 = c.beta21 = c.beta22 = 1.0;
    return c;
}

Trajectory benchmark_run(const Domain& domain, const KernelTable& table, double eps,
                         double t_final) {
    Coefficients co = benchmark_coeffs();
    co.epsilon = eps;
    Field u1 = Field::sample(domain, [](double x) {
        double z = (x - 0.3) / 0.12;
        return std::exp(-z * z);
    });
    Field u2 = Field::sample(domain, [](double x) {
        double z = (x - 0.7) / 0.12;
        return std::exp(-z * z);
    });
    StepConfig cfg;
    cfg.t_final = t_final;
    return simulate(State(u1, u2), co, table, cfg);
}

} // namespace

TEST_CASE("entropy closed forms") {
    Domain d(0.0, 2.0, 8);

    // u == 1: integrand 1 (ln 1 - 1) + 1 = 0 for both species
    State ones(Field(d, 1.0), Field(d, 1.0));
    CHECK(entropy(ones) == doctest::Approx(0.0));

    // u == s constant: E = 2 |domain| (s(ln s - 1) + 1)
    double s = 2.5;
    State consts(Field(d, s), Field(d, s));
    double expected = 2.0 * 2.0 * (s * (std::log(s) - 1.0) + 1.0);
    CHECK(entropy(consts) == doctest::Approx(expected).epsilon(1e-13));

    // zero state: 0 ln 0 := 0, so the integrand is the +1 normalization
    State zero{Field(d), Field(d)};
    CHECK(entropy(zero) == doctest::Approx(2.0 * 2.0));

    // eps-shifted variant drops the +1
    double eps = 0.01;
    double shifted = 2.0 * 2.0 * ((s + eps) * (std::log(s + eps) - 1.0));
    CHECK(entropy_eps(consts, eps) == doctest::Approx(shifted).epsilon(1e-13));
}

TEST_CASE("entropy clipping flag") {
    Domain d(0.0, 1.0, 4);
    Field f(d, {1.0, -0.5, 1.0, 1.0});
    bool clipped = false;
    entropy(State(f, Field(d, 1.0)), &clipped);
    CHECK(clipped);
    clipped = true;
    entropy(State(Field(d, 1.0), Field(d, 1.0)), &clipped);
    CHECK(!clipped);
}

TEST_CASE("dissipation two-point oracle") {
    // 3 cells, kernel reaching one neighbour: hand-computed pair sum
    Domain d(0.0, 3.0, 3); // h = 1
    KernelSpec spec = KernelSpec::uniform_ball(1, 1.5);
    KernelTable table = build_table(spec, d);

    // stencil offsets {-1, 0, 1} each with weight J*h = (1/3)*1
    REQUIRE(table.stencil().size() == 3);
    double w = 1.0 / 3.0;

    Coefficients co;
    co.a1 = 2.0;
    State s(Field(d, {0.0, 1.0, 3.0}), Field(d));
    // pairs (x,y) ordered: (0,1),(1,0),(1,2),(2,1) with diffs 1,1,2,2
    double expected = 2.0 * w * (1.0 + 1.0 + 4.0 + 4.0) * d.cell_volume();
    CHECK(dissipation(s, co, table) == doctest::Approx(expected).epsilon(1e-13));
    CHECK(dissipation(s, Coefficients{}, table) == 0.0);
}

TEST_CASE("entropy ledger on a stationary run is tight") {
    Domain d(0.0, 1.0, 32);
    KernelTable table = build_table(KernelSpec::uniform_ball(1, 0.25), d);
    // coexistence equilibrium: alpha = 3, beta = 1 -> u1 + u2 = 3 stationary
    Coefficients co;
    co.c1 = co.c2 = 1.0;
    co.alpha1 = co.alpha2 = 3.0;
    co.beta11 = co.beta12 = co.beta21 = co.beta22 = 1.0;
    StepConfig cfg;
    cfg.t_final = 0.2;
    Trajectory traj = simulate(State(Field(d, 1.5), Field(d, 1.5)), co, table, cfg);
    EntropyLedger ledger = entropy_ledger(traj, co, table, 0.0);
    CHECK(ledger.c <= 1e-8); // nothing moves, no entropy production
    CHECK(ledger.rows.size() == traj.states.size());
    CHECK(ledger.running_c.size() == traj.states.size());
}

TEST_CASE("entropy ledger constant is positive and modest on the benchmark") {
    Domain d(0.0, 1.0, 64);
    KernelTable table = build_table(KernelSpec::uniform_ball(1, 0.25), d);
    Trajectory traj = benchmark_run(d, table, 1e-3, 0.5);
    EntropyLedger ledger = entropy_ledger(traj, benchmark_coeffs(), table, 1e-3);
    CHECK(std::isfinite(ledger.c));
    CHECK(ledger.c >= 0.0);
    // running constants are nondecreasing and end at the reported c
    for (std::size_t j = 1; j < ledger.running_c.size(); ++j)
        CHECK(ledger.running_c[j] >= ledger.running_c[j - 1]);
    CHECK(ledger.running_c.back() == ledger.c);
}

TEST_CASE("gronwall bound admits a finite constant") {
    Domain d(0.0, 1.0, 64);
    KernelTable table = build_table(KernelSpec::uniform_ball(1, 0.25), d);
    Trajectory traj = benchmark_run(d, table, 0.0, 0.3);
    GronwallReport rep = gronwall_bound(traj, benchmark_coeffs(), table);
    CHECK(std::isfinite(rep.c));
    CHECK(rep.worst_violation == 0.0);
    CHECK(rep.running_c.size() == traj.states.size());
}

TEST_CASE("poincare inequality on random fields") {
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Domain d(0.0, 1.0, 64);
    for (double rho : {0.1, 0.25, 0.45}) {
        KernelTable table = build_table(KernelSpec::uniform_ball(1, rho), d);
        for (int trial = 0; trial < 50; ++trial) {
            Field v(d);
            for (std::size_t k = 0; k < v.size(); ++k)
                v[k] = uni(rng);
            PoincareCheck chk = poincare_check(v, table);
            double scale = std::max(chk.lhs, chk.rhs);
            CHECK(chk.margin >= -1e-12 * scale);
        }
    }
}

TEST_CASE("lemma 1 ledgers hold along the benchmark run") {
    Domain d(0.0, 1.0, 64);
    KernelTable table = build_table(KernelSpec::uniform_ball(1, 0.25), d);
    Coefficients co = benchmark_coeffs();
    co.epsilon = 1e-3;
    Trajectory traj = benchmark_run(d, table, 1e-3, 0.3);
    Lemma1Ledger ledger = lemma1_ledger(traj, co, table);
    CHECK(std::isfinite(ledger.c_plus));
    CHECK(ledger.c_plus >= 0.0);
    CHECK(std::isfinite(ledger.c_minus));
}

TEST_CASE("negative-part sweep classifies scaling") {
    std::vector<double> eps_list = {1e-2, 5e-3, 2.5e-3};
    Domain d(0.0, 1.0, 8);
    KernelTable table = build_table(KernelSpec::uniform_ball(1, 0.3), d);

    auto fake_run = [&](double neg_total) {
        Trajectory traj;
        traj.states.push_back(State(Field(d, -neg_total), Field(d), 0.0));
        return traj;
    };

    SUBCASE("linear scaling passes") {
        NegPartSweep sweep = negpart_sweep(eps_list, [&](double eps) {
            return fake_run(0.5 * eps);
        });
        CHECK(sweep.at_most_linear);
        CHECK(sweep.entries.size() == 3);
        CHECK(sweep.entries[0].ratio == doctest::Approx(0.5));
    }
    SUBCASE("eps-independent negatives fail") {
        NegPartSweep sweep = negpart_sweep(eps_list, [&](double) {
            return fake_run(0.01);
        });
        CHECK(!sweep.at_most_linear);
    }
}
