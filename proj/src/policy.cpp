#include "impulse/policy.hpp"

#include <cmath>
#include <limits>

#include "impulse/errors.hpp"

namespace impulse {

std::optional<double> order_up_to(const Policy& policy, double x) {
    if (const auto* b = std::get_if<BandPolicy>(&policy)) {
        if (x <= b->s) return b->S;
        return std::nullopt;
    }
    if (const auto* g = std::get_if<GeneralizedPolicy>(&policy)) {
        if (x > g->s1) return std::nullopt;
        if (x > g->S1 - g->Q) return g->S1;
        if (x >= g->s_low) return x + g->Q;
        return g->s_bar;
    }
    const auto& c = std::get<CustomPolicy>(policy);
    if (x <= c.trigger) return c.up_to(x);
    return std::nullopt;
}

GeneralizedPolicy generalized_from(const RegimeReport& report, double q) {
    if (report.regime != Regime::S1PlusGeneralized)
        throw RegimeError("generalized policy undefined: a1_star <= a2_star");
    return {report.sol1.s, report.sol1.S, q, *report.s_low, *report.s_bar};
}

double dc_band(const Kernel& kr, double s, double S, double x) {
    const ModelParams& p = kr.params();
    const double A = kr.big_a(s, S, p.setup_cost(S - s));
    if (x > s) return kr.v(A, x);
    return kr.v(A, S) + p.setup_cost(S - x) + p.k * (S - x);
}

namespace {

double dc_generalized_impl(const Kernel& kr, const GeneralizedPolicy& g, double x) {
    const ModelParams& p = kr.params();
    const double A = kr.big_a(g.s1, g.S1, p.setup_cost(g.S1 - g.s1));
    if (x > g.s1) return kr.v(A, x);
    if (x > g.S1 - g.Q) return kr.v(A, g.S1) + p.K1 + p.k * (g.S1 - x);
    if (x >= g.s_low) return kr.v(A, x + g.Q) + p.K1 + p.k * g.Q;
    return kr.v(A, g.s_bar) + p.K2 + p.k * (g.s_bar - x);
}

}  // namespace

double dc_generalized(const Kernel& kr, const RegimeReport& report, double x) {
    return dc_generalized_impl(kr, generalized_from(report, kr.params().Q), x);
}

double dc_policy(const Kernel& kr, const Policy& policy, double x) {
    if (const auto* b = std::get_if<BandPolicy>(&policy)) return dc_band(kr, b->s, b->S, x);
    if (const auto* g = std::get_if<GeneralizedPolicy>(&policy))
        return dc_generalized_impl(kr, *g, x);
    throw OutOfRange("dc_policy: custom policies have no closed-form cost");
}

std::vector<CostCurve> cost_curves(const Kernel& kr, const RegimeReport& report,
                                   std::span<const double> xs) {
    std::vector<CostCurve> curves;
    curves.push_back({"band1", {}});
    curves.push_back({"band2", {}});
    const bool has_gen = report.regime == Regime::S1PlusGeneralized;
    if (has_gen) curves.push_back({"generalized", {}});
    for (double x : xs) {
        curves[0].points.emplace_back(x, dc_band(kr, report.sol1.s, report.sol1.S, x));
        curves[1].points.emplace_back(x, dc_band(kr, report.sol2.s, report.sol2.S, x));
        if (has_gen) curves[2].points.emplace_back(x, dc_generalized(kr, report, x));
    }
    return curves;
}

std::vector<CompareRow> compare(const Kernel& kr, const RegimeReport& report,
                                std::span<const double> xs) {
    const bool has_gen = report.regime == Regime::S1PlusGeneralized;
    std::vector<CompareRow> rows;
    rows.reserve(xs.size());
    for (double x : xs) {
        CompareRow row;
        row.x = x;
        row.band1 = dc_band(kr, report.sol1.s, report.sol1.S, x);
        row.band2 = dc_band(kr, report.sol2.s, report.sol2.S, x);
        double best = row.band2;
        row.best = "band2";
        if (row.band1 < best) {
            best = row.band1;
            row.best = "band1";
        }
        if (has_gen) {
            row.generalized = dc_generalized(kr, report, x);
            if (*row.generalized < best) row.best = "generalized";
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace impulse
