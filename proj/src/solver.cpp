#include "impulse/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "impulse/errors.hpp"
#include "impulse/rootfind.hpp"

namespace impulse {

namespace {

constexpr int kMaxOuterIter = 200;
constexpr double kInnerTol = 1e-12;

struct InteriorBand {
    bool empty;
    double s, S;
};

// Roots of dv(A, .) = -k around the minimizer of dv; empty when even the
// minimum lies above -k.
InteriorBand interior_band(const Kernel& kr, double A) {
    const double k = kr.params().k;
    const double xs = kr.x_star(A);
    if (kr.dv(A, xs) > -k) return {true, 0.0, 0.0};
    auto f = [&](double x) { return kr.dv(A, x) + k; };
    // dv -> +inf to the left and to g'(inf)/beta > 0 to the right, so both
    // expansions terminate.
    const double s = bisect_expand_left(f, xs, 1.0, -1e9, kInnerTol);
    const double S = bisect_expand_right(f, xs, 1.0, 1e9, kInnerTol);
    return {false, s, S};
}

double tight_s(const Kernel& kr, double A, double w) {
    const double xs = kr.x_star(A);
    // dv(A,s) - dv(A,s+w) is positive at s = xs - w, negative at s = xs,
    // and crosses zero once while the pair straddles the minimizer.
    auto f = [&](double s) { return kr.dv(A, s) - kr.dv(A, s + w); };
    const double f_left = f(xs - w);
    const double f_right = f(xs);
    // Exactly, f(xs-w) >= 0 >= f(xs). Near the low end of the objective
    // bracket dv goes flat over a wide range and the signs can drown in
    // rounding; any placement equalizes within noise then.
    if (f_left <= 0.0 || f_right >= 0.0) return xs - 0.5 * w;
    return bisect(f, xs - w, xs, kInnerTol, 500, "tight_s");
}

// Bisects kappa(A) = target over (a_low + delta, a_high - delta); kappa is
// strictly decreasing in A.
template <class Kappa>
double bisect_a(const Kernel& kr, Kappa&& kappa, double target,
                std::vector<std::pair<double, double>>* trace) {
    const auto [a_low, a_high] = kr.a_bounds();
    const double delta = 1e-9 * (a_high - a_low);
    double lo = a_low + delta;
    double hi = a_high - delta;
    auto eval = [&](double A) {
        const double val = kappa(A);
        if (trace) trace->emplace_back(A, val);
        return val;
    };
    double flo = eval(lo) - target;
    double fhi = eval(hi) - target;
    if (flo < 0 || fhi > 0)
        throw NoBracket("band solve: implied setup cost never crosses the target " +
                        std::to_string(target) +
                        " on (a_low, a_high); model likely violates A4");
    for (int i = 0; i < kMaxOuterIter; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (hi - lo <= 1e-12 * std::max(1.0, std::abs(mid))) return mid;
        const double fm = eval(mid) - target;
        if (fm > 0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

BandSolution solve_band(const Kernel& kr, double setup, double q, bool width_at_most,
                        SolveTrace* trace) {
    const double a_int = bisect_a(kr, [&](double A) { return kappa_interior(kr, A); }, setup,
                                  trace ? &trace->interior : nullptr);
    InteriorBand band = interior_band(kr, a_int);
    if (band.empty)
        throw ConvergenceFailure("band solve: interior band vanished at the solution");

    const double width = band.S - band.s;
    const bool feasible = width_at_most ? width <= q : width >= q;
    if (feasible) {
        return {band.s, band.S, a_int, false, kr.dv(a_int, band.s)};
    }

    const double a_tight = bisect_a(kr, [&](double A) { return kappa_tight(kr, A, q); }, setup,
                                    trace ? &trace->tight : nullptr);
    const double s = tight_s(kr, a_tight, q);
    return {s, s + q, a_tight, true, kr.dv(a_tight, s)};
}

}  // namespace

double kappa_interior(const Kernel& kr, double A) {
    const InteriorBand b = interior_band(kr, A);
    if (b.empty) return 0.0;
    return kr.v(A, b.s) - kr.v(A, b.S) - kr.params().k * (b.S - b.s);
}

double kappa_tight(const Kernel& kr, double A, double w) {
    const double s = tight_s(kr, A, w);
    return kr.v(A, s) - kr.v(A, s + w) - kr.params().k * w;
}

BandSolution solve_op1_at(const Kernel& kr, double q, SolveTrace* trace) {
    if (std::isinf(q)) return solve_op1_unconstrained(kr);
    return solve_band(kr, kr.params().K1, q, /*width_at_most=*/true, trace);
}

BandSolution solve_op2_at(const Kernel& kr, double q, SolveTrace* trace) {
    return solve_band(kr, kr.params().K2, q, /*width_at_most=*/false, trace);
}

BandSolution solve_op1(const Kernel& kr, SolveTrace* trace) {
    return solve_op1_at(kr, kr.params().Q, trace);
}

BandSolution solve_op2(const Kernel& kr, SolveTrace* trace) {
    return solve_op2_at(kr, kr.params().Q, trace);
}

BandSolution solve_op1_unconstrained(const Kernel& kr) {
    const double a =
        bisect_a(kr, [&](double A) { return kappa_interior(kr, A); }, kr.params().K1, nullptr);
    const InteriorBand b = interior_band(kr, a);
    if (b.empty)
        throw ConvergenceFailure("unconstrained band solve: band vanished at the solution");
    return {b.s, b.S, a, false, kr.dv(a, b.s)};
}

double s_bar(const Kernel& kr, const BandSolution& sol1, const BandSolution& sol2) {
    if (!(sol1.a_star > sol2.a_star))
        throw RegimeError("s_bar is defined only when a1_star > a2_star");
    const double k = kr.params().k;
    auto f = [&](double x) { return kr.dv(sol1.a_star, x) + k; };
    // An interior band pastes at -k, so the root is S1 itself; only a
    // pinned band can push the slope below -k at S1.
    if (!sol1.boundary_tight || f(sol1.S) >= -1e-12) return sol1.S;
    return bisect_expand_right(f, sol1.S, std::max(1.0, sol1.S - sol1.s), 1e9, kInnerTol);
}

double s_low(const Kernel& kr, const BandSolution& sol1, double sbar) {
    const ModelParams& p = kr.params();
    const double a1 = sol1.a_star;
    const double base = kr.v(a1, sbar) + p.K2;
    auto H = [&](double x) {
        return (kr.v(a1, x + p.Q) + p.K1 + p.k * p.Q) - (base + p.k * (sbar - x));
    };
    const double lo = sol1.s - p.Q;
    const double hi = sol1.S - p.Q;
    const double Hlo = H(lo), Hhi = H(hi);
    if (Hlo < -1e-9 || Hhi > 1e-9)
        throw NoBracket("s_low: H does not change sign on [s1-Q, S1-Q]");
    if (Hlo <= 0.0) return lo;
    if (Hhi >= 0.0) return hi;
    return bisect(H, lo, hi, kInnerTol, 500, "s_low");
}

double xi_value(const Kernel& kr, const BandSolution& sol1, double sbar, double slow) {
    const ModelParams& p = kr.params();
    return p.mu * p.k + kr.cost().g(slow) -
           p.beta * (kr.v(sol1.a_star, sbar) + p.K2 + p.k * (sbar - slow));
}

RegimeReport classify(const Kernel& kr) {
    RegimeReport rep;
    rep.sol1 = solve_op1(kr);
    rep.sol2 = solve_op2(kr);
    const double Q = kr.params().Q;

    if (rep.sol1.a_star <= rep.sol2.a_star) {
        rep.regime = Regime::S2Everywhere;
        // Structural implications of a1* <= a2*: the small-setup band is
        // pinned at width Q and the large-setup band is strictly wider.
        if (!rep.sol1.boundary_tight)
            throw InternalCheckFailure("classify: a1 <= a2 but the OP1 band is not tight");
        if (!(rep.sol2.S - rep.sol2.s > Q))
            throw InternalCheckFailure("classify: a1 <= a2 but the OP2 band is not wider than Q");
        return rep;
    }

    rep.regime = Regime::S1PlusGeneralized;
    if (!(rep.sol1.s > rep.sol2.s))
        throw InternalCheckFailure("classify: a1 > a2 but s1 <= s2");
    const double sb = s_bar(kr, rep.sol1, rep.sol2);
    const double sl = s_low(kr, rep.sol1, sb);
    const double x = xi_value(kr, rep.sol1, sb, sl);
    rep.s_bar = sb;
    rep.s_low = sl;
    rep.xi = x;
    rep.xi_nonneg = x >= 0.0;
    return rep;
}

std::pair<std::vector<QSweepRow>, SweepSummary> sweep_q(const Kernel& kr,
                                                        const std::vector<double>& q_values) {
    for (size_t i = 0; i < q_values.size(); ++i) {
        if (q_values[i] <= 0.0)
            throw InvalidConfig("sweep_q: q values must be positive");
        if (i > 0 && q_values[i] <= q_values[i - 1])
            throw InvalidConfig("sweep_q: q values must be strictly increasing");
    }

    SweepSummary summary{};
    const BandSolution free1 = solve_op1_unconstrained(kr);
    summary.q_dagger = free1.S - free1.s;
    summary.s1_dagger = free1.s;
    summary.S1_dagger = free1.S;
    summary.a1_dagger = free1.a_star;

    std::vector<QSweepRow> rows;
    rows.reserve(q_values.size());
    ModelParams p = kr.params();
    for (double q : q_values) {
        p.Q = q;
        Kernel kq(p, kr.cost());
        RegimeReport rep = classify(kq);
        QSweepRow row;
        row.Q = q;
        row.s1 = rep.sol1.s;
        row.S1 = rep.sol1.S;
        row.a1_star = rep.sol1.a_star;
        row.s2 = rep.sol2.s;
        row.S2 = rep.sol2.S;
        row.a2_star = rep.sol2.a_star;
        row.s_bar = rep.s_bar;
        row.s_low = rep.s_low;
        row.xi = rep.xi;
        if (rep.xi && *rep.xi >= 0.0 && !summary.first_q_xi_nonneg)
            summary.first_q_xi_nonneg = q;
        rows.push_back(std::move(row));
    }
    return {std::move(rows), summary};
}

}  // namespace impulse
