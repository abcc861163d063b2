// Acceptance suite: one line per shipping criterion, PASS or FAIL, with the
// numbers that decided it. Exits with the number of failed criteria.
//
// Two criteria are expected to stay red; neither traces to a defect in
// this implementation (details in README):
//  - criterion 1: the bundled linear-cost reference table was generated
//    with k = 0.14, not the stated k = 0.85 (shown by the side diagnostic
//    that re-solves under k = 0.14 and lands on the published cells);
//  - criterion 8, two cell classes at the pinned dt = 1e-3:
//    (a) a width-exactly-Q band under discrete monitoring overshoots the
//        trigger, so every simulated order pays the high setup; the
//        simulated cost converges to the high-setup closed form (shown as
//        a diagnostic), not to the low-setup one;
//    (b) a start just above the trigger defers the first order charge by
//        the overshoot time, an O(sqrt(dt)) effect that exceeds the 1%
//        tolerance under beta = 0.5 (the dt-halving test in the simulate
//        suite shows the convergence).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "impulse/config.hpp"
#include "impulse/errors.hpp"
#include "impulse/kernel.hpp"
#include "impulse/model.hpp"
#include "impulse/policy.hpp"
#include "impulse/simulate.hpp"
#include "impulse/solver.hpp"
#include "impulse/verify.hpp"
#include "reference_tables.hpp"
#include "test_helpers.hpp"

using namespace impulse;

namespace {

const std::string kExe = IMPULSE_BAND_EXE;
const std::string kCfg = IMPULSE_CONFIG_DIR;

int g_failures = 0;

void report(int id, bool pass, const std::string& detail) {
    std::printf("criterion %d [%s]: %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
    if (!pass) ++g_failures;
}

void note(const std::string& text) { std::printf("  note: %s\n", text.c_str()); }

double now_seconds() {
    using clock = std::chrono::steady_clock;
    static const clock::time_point start = clock::now();
    return std::chrono::duration<double>(clock::now() - start).count();
}

struct ParsedRow {
    double Q;
    std::vector<std::optional<double>> cells;  // s1,S1,A1,s2,S2,A2,Sbar,s_low,Xi
};

std::vector<ParsedRow> parse_table_csv(const std::string& csv) {
    std::vector<ParsedRow> rows;
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ParsedRow row;
        std::istringstream ls(line);
        std::string cell;
        int idx = 0;
        while (std::getline(ls, cell, ',')) {
            if (idx == 0)
                row.Q = std::stod(cell);
            else
                row.cells.push_back(cell.empty() ? std::nullopt
                                                 : std::optional<double>(std::stod(cell)));
            ++idx;
        }
        while (row.cells.size() < 9) row.cells.push_back(std::nullopt);
        rows.push_back(std::move(row));
    }
    return rows;
}

struct CellTols {
    double band = 2e-3;  // s1,S1,s2,S2,Sbar,s_low
    double a = 2e-4;     // A1,A2
    double xi = 5e-3;
};

// Compares a parsed CLI table against a reference table. Returns a summary;
// fills `mismatches` with human-readable deviations.
template <std::size_t N>
int compare_table(const std::vector<ParsedRow>& got, const std::array<testref::Row, N>& want,
                  const CellTols& tol, std::vector<std::string>& mismatches,
                  bool& dash_pattern_ok) {
    dash_pattern_ok = got.size() == want.size();
    int checked = 0;
    const char* names[9] = {"s1", "S1", "A1", "s2", "S2", "A2", "Sbar", "s_low", "Xi"};
    for (std::size_t i = 0; i < std::min(got.size(), want.size()); ++i) {
        const auto& g = got[i];
        const auto& w = want[i];
        const std::optional<double> expect[9] = {w.s1, w.S1, w.a1, w.s2, w.S2,
                                                 w.a2, w.s_bar, w.s_low, w.xi};
        for (int c = 0; c < 9; ++c) {
            if (expect[c].has_value() != g.cells[c].has_value()) dash_pattern_ok = false;
            if (!expect[c] || !g.cells[c]) continue;
            ++checked;
            const double t = (c == 2 || c == 5) ? tol.a : (c == 8 ? tol.xi : tol.band);
            const double diff = std::abs(*g.cells[c] - *expect[c]);
            if (diff > t) {
                std::ostringstream os;
                os << "Q=" << w.Q << " " << names[c] << ": got " << *g.cells[c] << " want "
                   << *expect[c] << " (|diff| " << diff << " > " << t << ")";
                mismatches.push_back(os.str());
            }
        }
    }
    return checked;
}

// ---------------------------------------------------------------------------

void criterion_1_linear_table() {
    const double t0 = now_seconds();
    const auto run = testutil::run_command(
        kExe + " table --config " + kCfg + "/table1.cfg --q-min 1 --q-max 10 --q-step 1 "
        "--precision 10");
    const double elapsed = now_seconds() - t0;
    if (run.exit_code != 0) {
        report(1, false, "table command failed with exit " + std::to_string(run.exit_code));
        return;
    }
    const auto rows = parse_table_csv(run.out);
    std::vector<std::string> mismatches;
    bool dashes_ok = false;
    const int checked =
        compare_table(rows, testref::kLinearTable, CellTols{}, mismatches, dashes_ok);

    const bool in_time = elapsed < 10.0;
    const bool pass = mismatches.empty() && dashes_ok && in_time;
    std::ostringstream os;
    os << "linear-cost table, stated k=0.85: " << mismatches.size() << "/" << checked
       << " cells out of tolerance, dash pattern " << (dashes_ok ? "ok" : "wrong") << ", "
       << elapsed << "s";
    report(1, pass, os.str());
    for (std::size_t i = 0; i < std::min<std::size_t>(mismatches.size(), 4); ++i)
        note(mismatches[i]);
    if (!mismatches.empty())
        note("expected: the reference table is reproducible only with k = 0.14 (below)");

    // Side diagnostic: the same solver run with k = 0.14 lands on the
    // published band and reorder-target cells.
    ModelParams p{0.2, 0.6, 0.01, 0.14, 4.0, 7.0, 1.0};
    const HoldingCost cost = HoldingCost::piecewise_linear(0.08, 0.12);
    int hits = 0, cells = 0;
    for (const auto& row : testref::kLinearTable) {
        p.Q = row.Q;
        const Kernel kr(p, cost);
        const RegimeReport rep = classify(kr);
        auto close = [&](double got, double want, double tol) {
            ++cells;
            if (std::abs(got - want) <= tol) ++hits;
        };
        close(rep.sol1.s, row.s1, 2e-3);
        close(rep.sol1.S, row.S1, 2e-3);
        close(rep.sol1.a_star, row.a1, 2e-4);
        if (row.Q <= 8) {  // wide-band rows for Q = 9, 10 are inconsistent upstream
            close(rep.sol2.s, row.s2, 2e-3);
            close(rep.sol2.S, row.S2, 2e-3);
            close(rep.sol2.a_star, row.a2, 2e-4);
        }
        if (row.s_bar && rep.s_bar) close(*rep.s_bar, *row.s_bar, 2e-3);
    }
    std::ostringstream diag;
    diag << "diagnostic: with k = 0.14 the solver matches " << hits << "/" << cells
         << " published band/Sbar cells";
    note(diag.str());
}

void criterion_2_quadratic_table() {
    const double t0 = now_seconds();
    const auto run = testutil::run_command(
        kExe + " table --config " + kCfg + "/table2.cfg --q-min 1 --q-max 10 --q-step 1 "
        "--precision 10");
    const double elapsed = now_seconds() - t0;
    if (run.exit_code != 0) {
        report(2, false, "table command failed with exit " + std::to_string(run.exit_code));
        return;
    }
    const auto rows = parse_table_csv(run.out);
    std::vector<std::string> mismatches;
    bool dashes_ok = false;
    const int checked =
        compare_table(rows, testref::kQuadraticTable, CellTols{}, mismatches, dashes_ok);
    const bool pass = mismatches.empty() && dashes_ok && elapsed < 30.0;
    std::ostringstream os;
    os << "quadratic-cost table: " << checked - static_cast<int>(mismatches.size()) << "/"
       << checked << " cells within tolerance, " << elapsed << "s";
    report(2, pass, os.str());
    for (const auto& m : mismatches) note(m);
}

void criterion_3_regime_facts() {
    const HoldingCost cost = HoldingCost::piecewise_linear(0.08, 0.12);
    std::vector<std::string> problems;
    std::vector<RegimeReport> reps;
    for (int q = 1; q <= 10; ++q) {
        ModelParams p{0.2, 0.6, 0.01, 0.85, 4.0, 7.0, static_cast<double>(q)};
        reps.push_back(classify(Kernel(p, cost)));
    }
    auto expect = [&](bool cond, const std::string& what) {
        if (!cond) problems.push_back(what);
    };
    for (int q = 1; q <= 10; ++q) {
        const RegimeReport& r = reps[q - 1];
        const bool wide = r.sol1.a_star <= r.sol2.a_star;
        expect(wide == (q <= 2), "A1*<=A2* exactly for Q in {1,2} (Q=" + std::to_string(q) + ")");
        if (q <= 6)
            expect(std::abs(r.sol1.S - r.sol1.s - q) < 1e-9,
                   "S1-s1 = Q for Q=" + std::to_string(q));
        if (q >= 7) {
            expect(std::abs(r.sol1.s - reps[6].sol1.s) < 1e-6 &&
                       std::abs(r.sol1.S - reps[6].sol1.S) < 1e-6,
                   "s1,S1 constant for Q=" + std::to_string(q));
            expect(r.s_bar && std::abs(*r.s_bar - r.sol1.S) < 1e-6,
                   "Sbar = S1 for Q=" + std::to_string(q));
        }
        const bool tight2 = std::abs(r.sol2.S - r.sol2.s - q) < 1e-9;
        expect(tight2 == (q >= 8), "S2-s2 = Q exactly for Q in {8,9,10} (Q=" +
                                       std::to_string(q) + ")");
    }
    std::ostringstream os;
    os << "regime boundary facts from solver output: " << problems.size() << " violations";
    report(3, problems.empty(), os.str());
    for (const auto& m : problems) note(m);
}

void criterion_4_oracle() {
    const double t0 = now_seconds();
    int bad = 0, total = 0;
    for (int model = 0; model < 2; ++model) {
        const HoldingCost cost = model == 0 ? HoldingCost::piecewise_linear(0.08, 0.12)
                                            : HoldingCost::quadratic(0.01);
        for (double q : {1.0, 4.0, 7.0, 10.0}) {
            ModelParams p{0.2, 0.6, 0.01, 0.85, 4.0, 7.0, q};
            const Kernel kr(p, cost);
            for (Op op : {Op::OP1, Op::OP2}) {
                const BandSolution sol = op == Op::OP1 ? solve_op1(kr) : solve_op2(kr);
                const auto res = grid_oracle(kr, op, {sol.s - 0.75, sol.s + 0.75},
                                             {sol.S - 0.75, sol.S + 0.75}, 0.01);
                ++total;
                if (std::abs(res.s - sol.s) > 0.0101 || std::abs(res.S - sol.S) > 0.0101) ++bad;
            }
        }
    }
    const double elapsed = now_seconds() - t0;
    std::ostringstream os;
    os << "grid oracle at step 0.01 agrees with the solver on " << total - bad << "/" << total
       << " problems, " << elapsed << "s";
    report(4, bad == 0 && elapsed < 60.0, os.str());
}

void criterion_5_invariants() {
    std::vector<std::string> problems;
    auto expect = [&](bool cond, const std::string& what) {
        if (!cond) problems.push_back(what);
    };

    for (int model = 0; model < 2; ++model) {
        const HoldingCost cost = model == 0 ? HoldingCost::piecewise_linear(0.08, 0.12)
                                            : HoldingCost::quadratic(0.01);
        const std::string tag = model == 0 ? "linear" : "quadratic";
        ModelParams p{0.2, 0.6, 0.01, 0.85, 4.0, 7.0, 3.0};
        const Kernel kr(p, cost);

        // generator identity and finite-difference consistency
        const auto [alo, ahi] = kr.a_bounds();
        for (double A : {alo + 1e-6 * (ahi - alo), 0.5 * (alo + ahi), ahi - 1e-6 * (ahi - alo)}) {
            for (int i = 0; i <= 400; ++i) {
                const double x = -20.0 + 40.0 * i / 400.0;
                if (std::abs(x) < 1e-6) continue;
                const double resid = 0.5 * p.sigma * p.sigma * kr.d2v(A, x) -
                                     p.mu * kr.dv(A, x) - p.beta * kr.v(A, x) + cost.g(x);
                if (!(std::abs(resid) < 1e-8 * (1 + std::abs(kr.v(A, x))))) {
                    expect(false, tag + ": ODE residual at x=" + std::to_string(x));
                    break;
                }
            }
        }
        const double h = 1e-5;
        for (double x = -12.0; x <= 12.0; x += 1.1) {
            if (std::abs(x) < 0.05) continue;
            const double A = 0.4 * alo;
            const double fd1 = (kr.v(A, x + h) - kr.v(A, x - h)) / (2 * h);
            const double fd2 = (kr.dv(A, x + h) - kr.dv(A, x - h)) / (2 * h);
            const double fd3 = (kr.d2v(A, x + h) - kr.d2v(A, x - h)) / (2 * h);
            expect(std::abs(kr.dv(A, x) - fd1) <= 1e-5 * (1 + std::abs(fd1)),
                   tag + ": dv vs finite difference");
            expect(std::abs(kr.d2v(A, x) - fd2) <= 1e-5 * (1 + std::abs(fd2)),
                   tag + ": d2v vs finite difference");
            expect(std::abs(kr.d3v(A, x) - fd3) <= 1e-5 * (1 + std::abs(fd3)),
                   tag + ": d3v vs finite difference");
        }

        // per-threshold band facts: smooth pasting, value matching, H(s_low)
        for (int q = 1; q <= 10; ++q) {
            p.Q = q;
            const Kernel kq(p, cost);
            const RegimeReport rep = classify(kq);
            const std::string at = tag + " Q=" + std::to_string(q);
            for (int which = 0; which < 2; ++which) {
                const BandSolution& sol = which == 0 ? rep.sol1 : rep.sol2;
                const double setup = which == 0 ? p.K1 : p.K2;
                expect(std::abs(kq.dv(sol.a_star, sol.s) - kq.dv(sol.a_star, sol.S)) < 1e-8,
                       at + ": equal edge slopes");
                if (!sol.boundary_tight)
                    expect(std::abs(sol.smooth_paste + p.k) < 1e-8, at + ": paste at -k");
                else if (which == 0)
                    expect(sol.smooth_paste <= -p.k + 1e-10, at + ": pinned band pastes <= -k");
                else
                    expect(sol.smooth_paste >= -p.k - 1e-10, at + ": pinned band pastes >= -k");
                expect(std::abs(kq.v(sol.a_star, sol.s) - kq.v(sol.a_star, sol.S) - setup -
                                p.k * (sol.S - sol.s)) < 1e-8,
                       at + ": value matching");
                expect(std::abs(kq.big_a(sol.s, sol.S, setup) - sol.a_star) < 1e-8,
                       at + ": objective self-consistency");
            }
            if (rep.regime == Regime::S1PlusGeneralized) {
                const double a1 = rep.sol1.a_star;
                const double H = (kq.v(a1, *rep.s_low + p.Q) + p.K1 + p.k * p.Q) -
                                 (kq.v(a1, *rep.s_bar) + p.K2 +
                                  p.k * (*rep.s_bar - *rep.s_low));
                expect(std::abs(H) < 1e-8, at + ": H(s_low) = 0");
                // four-branch cost is continuous at its three junctions
                const double s1 = rep.sol1.s, S1 = rep.sol1.S;
                const double vS1 = kq.v(a1, S1);
                expect(std::abs(kq.v(a1, s1) - (vS1 + p.K1 + p.k * (S1 - s1))) < 1e-8,
                       at + ": continuity at s1");
                expect(std::abs((vS1 + p.K1 + p.k * p.Q) -
                                (kq.v(a1, (S1 - p.Q) + p.Q) + p.K1 + p.k * p.Q)) < 1e-8,
                       at + ": continuity at S1-Q");
                expect(std::abs((kq.v(a1, *rep.s_low + p.Q) + p.K1 + p.k * p.Q) -
                                (kq.v(a1, *rep.s_bar) + p.K2 +
                                 p.k * (*rep.s_bar - *rep.s_low))) < 1e-8,
                       at + ": continuity at s_low");
            }
        }
    }

    // randomized valid models: the classifier's structural implications
    std::mt19937_64 rng(424242);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        ModelParams p;
        p.mu = 0.05 + 0.45 * unif(rng);
        p.sigma = 0.25 + unif(rng);
        p.beta = 0.005 + 0.03 * unif(rng);
        p.k = unif(rng);
        p.K1 = 1.0 + 5.0 * unif(rng);
        p.K2 = p.K1 * (1.05 + 0.9 * unif(rng));
        p.Q = 0.5 + 7.5 * unif(rng);
        HoldingCost cost = HoldingCost::quadratic(0.002 + 0.05 * unif(rng));
        if (trial % 2 == 0) {
            const double p_min = p.beta * (p.k + p.K1 / p.Q);
            cost = HoldingCost::piecewise_linear(0.02 + 0.3 * unif(rng),
                                                 p_min * (1.5 + 2.0 * unif(rng)) + 0.02);
        }
        if (!validate(p, cost).ok) {
            expect(false, "random model " + std::to_string(trial) + " failed validation");
            continue;
        }
        const RegimeReport rep = classify(Kernel(p, cost));
        if (rep.regime == Regime::S2Everywhere) {
            expect(rep.sol1.boundary_tight && rep.sol2.S - rep.sol2.s > p.Q,
                   "random model " + std::to_string(trial) + ": wide-regime implication");
        } else {
            expect(rep.sol1.s > rep.sol2.s,
                   "random model " + std::to_string(trial) + ": s1 > s2");
        }
    }

    std::ostringstream os;
    os << "analytic invariant suite: " << problems.size() << " violations";
    report(5, problems.empty(), os.str());
    for (std::size_t i = 0; i < std::min<std::size_t>(problems.size(), 6); ++i)
        note(problems[i]);
}

void criterion_6_dominance() {
    ModelParams p{0.2, 0.6, 0.01, 0.85, 4.0, 7.0, 4.0};
    const Kernel kr(p, HoldingCost::piecewise_linear(0.08, 0.12));
    const RegimeReport rep = classify(kr);
    if (rep.regime != Regime::S1PlusGeneralized) {
        report(6, false, "Q=4 model unexpectedly in the wide-band regime");
        return;
    }
    const double sl = *rep.s_low, edge = rep.sol1.S - p.Q;
    int strict = 0;
    for (int i = 1; i <= 200; ++i) {
        const double x = sl + (edge - sl) * i / 201.0;
        const double gen = dc_generalized(kr, rep, x);
        const double band = dc_band(kr, rep.sol1.s, rep.sol1.S, x);
        if (gen < band - 1e-8) ++strict;
    }
    // Equality at s_low means the two order choices there (quantity Q at
    // the low setup vs up to S_bar at the high one) price identically;
    // the band policy itself stays strictly worse at s_low whenever its
    // width is pinned, because it re-ups to S1 instead of S_bar.
    const double a1 = rep.sol1.a_star;
    const double branch_gap =
        std::abs((kr.v(a1, sl + p.Q) + p.K1 + p.k * p.Q) -
                 (kr.v(a1, *rep.s_bar) + p.K2 + p.k * (*rep.s_bar - sl)));
    const bool band_strict_at_sl =
        dc_generalized(kr, rep, sl) < dc_band(kr, rep.sol1.s, rep.sol1.S, sl) - 1e-8;
    std::ostringstream os;
    os << "generalized policy strictly dominates the pinned band at " << strict
       << "/200 interior points (and at s_low itself: " << (band_strict_at_sl ? "yes" : "no")
       << "); indifference gap at s_low = " << branch_gap;
    report(6, strict == 200 && branch_gap < 1e-8 && band_strict_at_sl, os.str());
}

void criterion_7_lower_bound_checks() {
    const HoldingCost cost = HoldingCost::piecewise_linear(0.08, 0.12);
    std::vector<std::string> problems;
    auto expect = [&](bool cond, const std::string& what) {
        if (!cond) problems.push_back(what);
    };

    {
        ModelParams p{0.2, 0.6, 0.01, 0.85, 4.0, 7.0, 1.0};
        const Kernel kr(p, cost);
        const RegimeReport rep = classify(kr);
        const PiecewiseFn fn = band_value_fn(kr, rep.sol2, p.K2);
        const auto hjb = hjb_check(kr, fn, check_grid(-14, 12, 520, fn.kinks));
        expect(hjb.pass && hjb.worst_value > -1e-7, "Q=1 wide-band value fails the generator check");
        const auto gap = intervention_gap_check(
            kr, fn.f, std::vector<double>{rep.sol2.s, rep.sol2.S}, 10000);
        expect(gap.pass, "Q=1 wide-band value fails the intervention-gap check");
    }
    {
        ModelParams p{0.2, 0.6, 0.01, 0.85, 4.0, 7.0, 4.0};
        const Kernel kr(p, cost);
        const RegimeReport rep = classify(kr);
        expect(rep.xi_nonneg, "Q=4 certificate unexpectedly negative");
        const PiecewiseFn fn = generalized_value_fn(kr, rep);
        const auto hjb = hjb_check(kr, fn, check_grid(-14, 10, 520, fn.kinks));
        expect(hjb.pass, "Q=4 generalized value fails the generator check");
        const auto gap = intervention_gap_check(
            kr, fn.f,
            std::vector<double>{*rep.s_low, rep.sol1.S - p.Q, rep.sol1.s, rep.sol1.S}, 10000);
        expect(gap.pass, "Q=4 generalized value fails the intervention-gap check");
    }
    {
        ModelParams p{0.2, 0.6, 0.01, 0.85, 4.0, 7.0, 3.0};
        const Kernel kr(p, cost);
        const RegimeReport rep = classify(kr);
        expect(!rep.xi_nonneg, "Q=3 certificate unexpectedly nonnegative");
        const PiecewiseFn fn = generalized_value_fn(kr, rep);
        const auto hjb = hjb_check(kr, fn, check_grid(-10, 6, 640, fn.kinks));
        expect(!hjb.pass && hjb.worst_value < 0 && hjb.worst_point < *rep.s_low,
               "Q=3 generator violation below s_low not detected");
    }

    std::ostringstream os;
    os << "lower-bound checks (pass at Q=1 and Q=4, asserted failure at Q=3): "
       << problems.size() << " problems";
    report(7, problems.empty(), os.str());
    for (const auto& m : problems) note(m);
}

void criterion_8_monte_carlo() {
    const double t0 = now_seconds();
    const HoldingCost cost = HoldingCost::piecewise_linear(0.08, 0.12);

    // policies come from the slow-discount Q=3 solve; the strong-discount
    // model itself has no band solution (its A4 fails by design)
    ModelParams slow{0.2, 0.6, 0.01, 0.85, 4.0, 7.0, 3.0};
    const Kernel slow_kr(slow, cost);
    const RegimeReport rep = classify(slow_kr);
    const GeneralizedPolicy gen = generalized_from(rep, slow.Q);

    ModelParams fast = slow;
    fast.beta = 0.5;
    const Kernel fast_kr(fast, cost);

    struct Case {
        std::string name;
        Policy policy;
    };
    const std::vector<Case> cases = {
        {"band1", BandPolicy{rep.sol1.s, rep.sol1.S}},
        {"band2", BandPolicy{rep.sol2.s, rep.sol2.S}},
        {"generalized", gen},
    };

    SimConfig cfg{1e-3, 40.0, 20000, 7};
    std::vector<std::string> failures;
    std::vector<std::string> diagnostics;
    SimEstimate band2_first{};

    for (const auto& c : cases) {
        for (double x0 : {-6.0, -2.0, 0.0}) {
            const SimEstimate est = simulate_dc(fast, cost, c.policy, x0, cfg);
            const double want = dc_policy(fast_kr, c.policy, x0);
            const double tol = std::max(3 * est.std_err + est.tail_bound,
                                        0.01 * std::abs(want));
            const double diff = std::abs(est.mean - want);
            if (diff > tol) {
                std::ostringstream os;
                os << c.name << " x0=" << x0 << ": sim " << est.mean << " vs closed " << want
                   << " (|diff| " << diff << " > tol " << tol << ")";
                failures.push_back(os.str());
            }
            if (c.name == "band1") {
                // high-setup limit of the width-exactly-Q band under
                // discrete monitoring
                const double A2 = fast_kr.big_a(rep.sol1.s, rep.sol1.S, fast.K2);
                const double lim = x0 > rep.sol1.s
                                       ? fast_kr.v(A2, x0)
                                       : fast_kr.v(A2, rep.sol1.S) + fast.K2 +
                                             fast.k * (rep.sol1.S - x0);
                if (std::abs(est.mean - lim) <=
                    std::max(3 * est.std_err + est.tail_bound, 0.01 * std::abs(lim))) {
                    std::ostringstream os;
                    os << "band1 x0=" << x0 << " agrees with the high-setup limit " << lim;
                    diagnostics.push_back(os.str());
                }
            }
            if (c.name == "band2" && x0 == 0.0) band2_first = est;
        }
    }

    // bit-identical re-run with the same seed
    const SimEstimate rerun = simulate_dc(fast, cost, cases[1].policy, 0.0, cfg);
    const bool deterministic =
        rerun.mean == band2_first.mean && rerun.std_err == band2_first.std_err;

    const double elapsed = now_seconds() - t0;
    std::ostringstream os;
    os << "Monte Carlo vs closed forms (20000 paths, dt=1e-3, T=40): " << failures.size()
       << "/9 cells out of tolerance, bit-identical rerun " << (deterministic ? "ok" : "BROKEN")
       << ", " << elapsed << "s";
    report(8, failures.empty() && deterministic && elapsed < 300.0, os.str());
    for (const auto& f : failures) note(f);
    if (!failures.empty()) {
        note("expected failures: (a) the width-exactly-Q band overshoots the trigger "
             "under discrete monitoring, so every simulated order pays the high setup; "
             "(b) a start just above the trigger defers the first charge by the "
             "overshoot, an O(sqrt(dt)) bias beyond the 1% tolerance at dt=1e-3 "
             "(see README)");
    }
    for (const auto& d : diagnostics) note("diagnostic: " + d);
}

void criterion_9_large_threshold_sweep() {
    std::vector<std::string> problems;
    for (int model = 0; model < 2; ++model) {
        const HoldingCost cost = model == 0 ? HoldingCost::piecewise_linear(0.08, 0.12)
                                            : HoldingCost::quadratic(0.01);
        const std::string tag = model == 0 ? "linear" : "quadratic";
        ModelParams p{0.2, 0.6, 0.01, 0.85, 4.0, 7.0, 1.0};
        const Kernel kr(p, cost);
        const BandSolution free1 = solve_op1_unconstrained(kr);
        const double qd = free1.S - free1.s;

        std::vector<double> qs;
        for (int i = 0; i <= 10; ++i) qs.push_back(qd + 0.5 * i);
        const auto [rows, summary] = sweep_q(kr, qs);

        double rho0 = 0;
        double prev_xi = -1e300;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto& r = rows[i];
            if (!r.xi) {
                problems.push_back(tag + ": no certificate at Q=" + std::to_string(r.Q));
                continue;
            }
            if (!(*r.xi > prev_xi))
                problems.push_back(tag + ": Xi not strictly increasing at Q=" +
                                   std::to_string(r.Q));
            prev_xi = *r.xi;
            const double rho = *r.s_low + r.Q;
            if (i == 0)
                rho0 = rho;
            else if (std::abs(rho - rho0) > 1e-6)
                problems.push_back(tag + ": s_low + Q drifts at Q=" + std::to_string(r.Q));
            if (std::abs(*r.s_bar - r.S1) > 1e-6)
                problems.push_back(tag + ": Sbar != S1 at Q=" + std::to_string(r.Q));
        }
    }
    std::ostringstream os;
    os << "large-threshold sweep (Q_dagger .. Q_dagger+5): " << problems.size()
       << " violations";
    report(9, problems.empty(), os.str());
    for (const auto& m : problems) note(m);
}

}  // namespace

int main() {
    std::printf("acceptance suite\n");
    criterion_1_linear_table();
    criterion_2_quadratic_table();
    criterion_3_regime_facts();
    criterion_4_oracle();
    criterion_5_invariants();
    criterion_6_dominance();
    criterion_7_lower_bound_checks();
    criterion_8_monte_carlo();
    criterion_9_large_threshold_sweep();
    std::printf("%d/9 criteria pass\n", 9 - g_failures);
    return g_failures;
}
