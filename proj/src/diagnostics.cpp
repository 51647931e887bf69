#include "diagnostics.hpp"

#include "errors.hpp"

#include <algorithm>
#include <cmath>

namespace nlskt {

namespace {

double xlnx_minus(double s) {
    // s (ln s - 1) + 1 with the continuous extension 0 ln 0 := 0.
    if (s <= 0.0)
        return 1.0;
    return s * (std::log(s) - 1.0) + 1.0;
}

double pair_dissipation(const Field& g, const KernelTable& table) {
    const Domain& d = g.domain();
    const int nx = d.cells(0);
    const int ny = d.dim() == 2 ? d.cells(1) : 1;
    double acc = 0.0;
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            double gx = g[d.flat_index(ix, iy)];
            for (const auto& e : table.stencil()) {
                int jx = ix + e.dx;
                int jy = iy + e.dy;
                if (jx < 0 || jx >= nx || jy < 0 || jy >= ny)
                    continue;
                double diff = g[d.flat_index(jx, jy)] - gx;
                acc += e.weight * diff * diff;
            }
        }
    }
    return acc * d.cell_volume();
}

State positive_state(const State& s) {
    State out = s;
    for (std::size_t k = 0; k < out.u1.size(); ++k) {
        out.u1[k] = std::max(out.u1[k], 0.0);
        out.u2[k] = std::max(out.u2[k], 0.0);
    }
    return out;
}

} // namespace

double entropy(const State& state, bool* clipped_flag) {
    bool clipped = false;
    double acc = 0.0;
    for (int i = 0; i < 2; ++i) {
        const Field& u = state.species(i);
        for (double v : u.values()) {
            if (v < 0.0)
                clipped = true;
            acc += xlnx_minus(std::max(v, 0.0));
        }
    }
    if (clipped_flag)
        *clipped_flag = clipped;
    return acc * state.domain().cell_volume();
}

double entropy_eps(const State& state, double eps) {
    double acc = 0.0;
    for (int i = 0; i < 2; ++i) {
        const Field& u = state.species(i);
        for (double v : u.values()) {
            double s = std::max(v, 0.0) + eps;
            if (s > 0.0)
                acc += s * (std::log(s) - 1.0);
        }
    }
    return acc * state.domain().cell_volume();
}

double dissipation(const State& state, const Coefficients& coeffs,
                   const KernelTable& table) {
    double acc = 0.0;
    if (coeffs.a1 > 0.0)
        acc += coeffs.a1 * pair_dissipation(state.u1, table);
    if (coeffs.a2 > 0.0)
        acc += coeffs.a2 * pair_dissipation(state.u2, table);
    return acc;
}

EntropyReport snapshot_report(const State& state, const Coefficients& coeffs,
                              const KernelTable& table, double eps) {
    EntropyReport r;
    r.t = state.t;
    r.entropy = entropy(state);
    r.entropy_eps = entropy_eps(state, eps);
    r.dissipation = dissipation(positive_state(state), coeffs, table);
    for (int i = 0; i < 2; ++i) {
        auto split = split_signs(state.species(i));
        r.neg_l1[i] = integrate(split.minus);
        r.mass[i] = integrate(state.species(i));
        r.sup[i] = sup_norm(state.species(i));
    }
    return r;
}

EntropyLedger entropy_ledger(const Trajectory& traj, const Coefficients& coeffs,
                             const KernelTable& table, double eps) {
    if (traj.states.empty())
        throw LedgerViolation("entropy ledger needs a nonempty trajectory");

    EntropyLedger ledger;
    ledger.eps = eps;

    double cumulative = 0.0;
    double lhs0 = 0.0;
    for (std::size_t j = 0; j < traj.states.size(); ++j) {
        EntropyReport row = snapshot_report(traj.states[j], coeffs, table, eps);
        if (j > 0) {
            double tau = traj.records[j - 1].tau;
            cumulative += tau * row.dissipation;
        }
        row.dissipation_cumulative = cumulative;
        double lhs = row.entropy_eps + cumulative;
        if (eps > 0.0)
            lhs -= std::log(eps) * (row.neg_l1[0] + row.neg_l1[1]);
        if (j == 0) {
            lhs0 = row.entropy_eps;
        } else {
            double t = traj.states[j].t;
            double c_needed = (lhs - lhs0) / ((1.0 + eps) * t);
            ledger.c = std::max(ledger.c, std::max(c_needed, 0.0));
        }
        ledger.running_c.push_back(ledger.c);
        ledger.rows.push_back(std::move(row));
    }
    if (!std::isfinite(ledger.c))
        throw LedgerViolation("entropy ledger constant is not finite");
    return ledger;
}

GronwallReport gronwall_bound(const Trajectory& traj, const Coefficients& coeffs,
                              const KernelTable& table) {
    GronwallReport rep;
    rep.running_c.assign(traj.states.size(), 0.0);
    if (traj.states.size() < 2)
        return rep;

    const Domain& d = traj.states.front().domain();
    const std::size_t n = d.total_cells();
    double jinf = table.linf();

    // Running Q_t norms of the positive parts (piecewise-constant in time)
    // and the pointwise time integral of u_i.
    std::array<double, 2> l1_qt{}, l2_qt{};
    std::vector<double> time_int(2 * n, 0.0);

    for (std::size_t j = 1; j < traj.states.size(); ++j) {
        double tau = traj.records[j - 1].tau;
        const State& s = traj.states[j];
        for (int i = 0; i < 2; ++i) {
            Field plus = positive_part(s.species(i));
            auto nm = norms(plus);
            l1_qt[i] += tau * nm.l1;
            l2_qt[i] += tau * nm.l2sq;
            for (std::size_t k = 0; k < n; ++k)
                time_int[i * n + k] += tau * plus[k];
        }
        double denom_core = 0.0; // shared L2 cross term
        double cross = std::sqrt(l2_qt[0] * l2_qt[1]);
        for (int i = 0; i < 2; ++i) {
            denom_core = jinf * (l1_qt[i] + l2_qt[i] + cross);
            const Field& u0 = traj.states.front().species(i);
            const Field& u = s.species(i);
            for (std::size_t k = 0; k < n; ++k) {
                double base = u0[k] + coeffs.alpha(i) * time_int[i * n + k];
                double excess = u[k] - base;
                if (excess <= 0.0)
                    continue;
                if (denom_core > 0.0)
                    rep.c = std::max(rep.c, excess / denom_core);
                else
                    rep.worst_violation = std::max(rep.worst_violation, excess);
            }
        }
        rep.running_c[j] = rep.c;
    }
    return rep;
}

PoincareCheck poincare_check(const Field& v, const KernelTable& table) {
    auto nm = norms(v);
    double lhs = nm.l2sq;
    double rhs = (table.linf() / table.j0()) * nm.l1 * nm.l1 +
                 pair_dissipation(v, table) / (2.0 * table.j0());
    return {lhs, rhs, rhs - lhs};
}

Lemma1Ledger lemma1_ledger(const Trajectory& traj, const Coefficients& coeffs,
                           const KernelTable& /*table*/) {
    Lemma1Ledger ledger;
    for (std::size_t j = 1; j < traj.states.size(); ++j) {
        double tau = traj.records[j - 1].tau;
        const State& prev = traj.states[j - 1];
        const State& cur = traj.states[j];
        double eps = coeffs.epsilon;

        double lhs_plus = 0.0, prev_plus = 0.0, cur_plus_l1 = 0.0;
        double lhs_minus = 0.0, prev_minus = 0.0, minus_denom = 0.0;
        for (int i = 0; i < 2; ++i) {
            auto sp = split_signs(cur.species(i));
            auto sp_prev = split_signs(prev.species(i));
            auto nm = norms(sp.plus);
            lhs_plus += nm.l1 + tau * coeffs.beta(i, i) * nm.l2sq;
            cur_plus_l1 += nm.l1;
            prev_plus += integrate(sp_prev.plus);
            lhs_minus += integrate(sp.minus);
            prev_minus += integrate(sp_prev.minus);
            minus_denom += tau * eps * (1.0 + nm.l1);
        }
        double c_plus = (lhs_plus - prev_plus) / (tau * (cur_plus_l1 + eps));
        ledger.c_plus = std::max(ledger.c_plus, std::max(c_plus, 0.0));

        double minus_excess = lhs_minus - prev_minus;
        if (minus_excess > 0.0) {
            if (minus_denom > 0.0)
                ledger.c_minus = std::max(ledger.c_minus, minus_excess / minus_denom);
            else if (minus_excess > 1e-12)
                throw LedgerViolation("negative part grew with eps = 0");
        }
    }
    return ledger;
}

NegPartSweep negpart_sweep(const std::vector<double>& eps_list,
                           const std::function<Trajectory(double)>& run) {
    NegPartSweep sweep;
    for (double eps : eps_list) {
        Trajectory traj = run(eps);
        double worst = 0.0;
        for (const auto& s : traj.states) {
            double total = 0.0;
            for (int i = 0; i < 2; ++i)
                total += integrate(split_signs(s.species(i)).minus);
            worst = std::max(worst, total);
        }
        sweep.entries.push_back({eps, worst, eps > 0.0 ? worst / eps : 0.0});
    }
    if (!sweep.entries.empty()) {
        double baseline = std::max(sweep.entries.front().ratio, 1e-9);
        sweep.at_most_linear = std::all_of(
            sweep.entries.begin(), sweep.entries.end(),
            [&](const NegPartSweepEntry& e) { return e.ratio <= 2.0 * baseline; });
    }
    return sweep;
}

} // namespace nlskt
