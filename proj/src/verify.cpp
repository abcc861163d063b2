#include "impulse/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "json.hpp"

#include "impulse/errors.hpp"

namespace impulse {

std::string to_json(const CheckReport& r) {
    nlohmann::json j;
    j["check"] = r.check;
    j["pass"] = r.pass;
    j["worst_value"] = r.worst_value;
    j["worst_point"] = r.worst_point;
    j["n_checked"] = r.n_checked;
    j["notes"] = r.notes;
    return j.dump();
}

namespace {

bool near_kink(double x, const std::vector<double>& kinks) {
    for (double z : kinks)
        if (std::abs(x - z) < 1e-6) return true;
    return std::abs(x) < 1e-6;  // g'' is undefined at 0
}

}  // namespace

CheckReport hjb_check(const Kernel& kr, const PiecewiseFn& fn, std::span<const double> grid,
                      double tol) {
    const ModelParams& p = kr.params();
    CheckReport rep;
    rep.check = "hjb";
    rep.worst_value = std::numeric_limits<double>::infinity();

    for (double x : grid) {
        if (near_kink(x, fn.kinks)) continue;
        const double resid = 0.5 * p.sigma * p.sigma * fn.fpp(x) - p.mu * fn.fp(x) -
                             p.beta * fn.f(x) + kr.cost().g(x);
        ++rep.n_checked;
        if (resid < rep.worst_value) {
            rep.worst_value = resid;
            rep.worst_point = x;
        }
        if (resid < -tol) rep.pass = false;
        if (x > fn.continuation_lo && std::abs(resid) > tol) {
            rep.pass = false;
            std::ostringstream os;
            os << "continuation-region residual " << resid << " at x = " << x;
            rep.notes.push_back(os.str());
        }
    }
    if (rep.n_checked == 0) rep.worst_value = 0.0;
    return rep;
}

CheckReport intervention_gap_check(const Kernel& kr, const std::function<double(double)>& f,
                                   std::span<const double> strata, int n_pairs,
                                   std::uint64_t seed, double tol) {
    const ModelParams& p = kr.params();
    CheckReport rep;
    rep.check = "intervention_gap";
    rep.worst_value = std::numeric_limits<double>::infinity();

    std::vector<double> anchors(strata.begin(), strata.end());
    if (anchors.empty()) anchors.push_back(0.0);
    std::sort(anchors.begin(), anchors.end());
    const double lo = anchors.front() - 5.0;
    const double hi = anchors.back() + 5.0;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    auto draw = [&]() {
        // half the mass near a stratum boundary, half uniform on the range
        if (unif(rng) < 0.5) {
            const auto idx = static_cast<size_t>(unif(rng) * anchors.size());
            return anchors[std::min(idx, anchors.size() - 1)] + 4.0 * (unif(rng) - 0.5);
        }
        return lo + (hi - lo) * unif(rng);
    };

    for (int i = 0; i < n_pairs; ++i) {
        double x1 = draw();
        double x2;
        const double mode = unif(rng);
        if (mode < 0.25) {
            // straddle the setup-cost step: jumps just below / above Q
            x2 = x1 + p.Q + (unif(rng) - 0.5) * 0.02;
        } else {
            x2 = draw();
        }
        if (x2 < x1) std::swap(x1, x2);
        if (x2 - x1 < 1e-9) continue;
        const double margin =
            f(x2) - f(x1) + p.setup_cost(x2 - x1) + p.k * (x2 - x1);
        ++rep.n_checked;
        if (margin < rep.worst_value) {
            rep.worst_value = margin;
            rep.worst_point = x1;
        }
        if (margin < -tol) rep.pass = false;
    }
    if (rep.n_checked == 0) rep.worst_value = 0.0;
    return rep;
}

GridOracleResult grid_oracle(const Kernel& kr, Op which, std::pair<double, double> s_range,
                             std::pair<double, double> S_range, double step) {
    const ModelParams& p = kr.params();
    const double setup = which == Op::OP1 ? p.K1 : p.K2;
    GridOracleResult best{0, 0, -std::numeric_limits<double>::infinity()};

    const auto ns = static_cast<long>(std::floor((s_range.second - s_range.first) / step + 1e-9));
    const auto nS = static_cast<long>(std::floor((S_range.second - S_range.first) / step + 1e-9));
    for (long i = 0; i <= ns; ++i) {
        const double s = s_range.first + static_cast<double>(i) * step;
        for (long j = 0; j <= nS; ++j) {
            const double S = S_range.first + static_cast<double>(j) * step;
            const double width = S - s;
            if (width < 1e-9) continue;
            if (which == Op::OP1 && width > p.Q * (1 + 1e-12) + 1e-9) continue;
            if (which == Op::OP2 && width < p.Q * (1 - 1e-12) - 1e-9) continue;
            const double a = kr.big_a(s, S, setup);
            if (a > best.a) best = {s, S, a};
        }
    }
    return best;
}

CheckReport quasiconvexity_check(const Kernel& kr, double A, std::span<const double> grid) {
    const auto [a_low, a_high] = kr.a_bounds();
    if (!(A > a_low && A < a_high))
        throw OutOfRange("quasiconvexity_check: A outside (a_low, a_high)");

    CheckReport rep;
    rep.check = "quasiconvexity";
    rep.worst_value = std::numeric_limits<double>::infinity();
    constexpr double tol = 1e-10;

    bool rising = false;
    double prev = 0;
    bool have_prev = false;
    for (double x : grid) {
        const double val = kr.dv(A, x);
        if (have_prev) {
            const double diff = val - prev;
            ++rep.n_checked;
            if (!rising && diff > tol) rising = true;
            if (rising && diff < -tol) {
                rep.pass = false;
                if (diff < rep.worst_value) {
                    rep.worst_value = diff;
                    rep.worst_point = x;
                }
                rep.notes.push_back("dv falls again after rising");
            }
        }
        prev = val;
        have_prev = true;
    }
    if (rep.pass) rep.worst_value = 0.0;
    return rep;
}

PiecewiseFn band_value_fn(const Kernel& kr, const BandSolution& sol, double setup) {
    const ModelParams p = kr.params();
    const double A = sol.a_star;
    const double s = sol.s, S = sol.S;
    const double vS = kr.v(A, S);
    PiecewiseFn fn;
    fn.f = [&kr, A, s, S, vS, setup, k = p.k](double x) {
        return x >= s ? kr.v(A, x) : vS + setup + k * (S - x);
    };
    fn.fp = [&kr, A, s, k = p.k](double x) { return x >= s ? kr.dv(A, x) : -k; };
    fn.fpp = [&kr, A, s](double x) { return x >= s ? kr.d2v(A, x) : 0.0; };
    fn.kinks = {s, 0.0};
    fn.continuation_lo = s;
    return fn;
}

PiecewiseFn generalized_value_fn(const Kernel& kr, const RegimeReport& rep) {
    if (rep.regime != Regime::S1PlusGeneralized)
        throw RegimeError("generalized_value_fn: wrong regime");
    const ModelParams p = kr.params();
    const double A = rep.sol1.a_star;
    const double s1 = rep.sol1.s, S1 = rep.sol1.S;
    const double sb = *rep.s_bar, sl = *rep.s_low;
    const double vS1 = kr.v(A, S1), vsb = kr.v(A, sb);

    PiecewiseFn fn;
    fn.f = [&kr, p, A, s1, S1, sb, sl, vS1, vsb](double x) {
        if (x > s1) return kr.v(A, x);
        if (x > S1 - p.Q) return vS1 + p.K1 + p.k * (S1 - x);
        if (x >= sl) return kr.v(A, x + p.Q) + p.K1 + p.k * p.Q;
        return vsb + p.K2 + p.k * (sb - x);
    };
    fn.fp = [&kr, p, A, s1, S1, sl](double x) {
        if (x > s1) return kr.dv(A, x);
        if (x > S1 - p.Q) return -p.k;
        if (x >= sl) return kr.dv(A, x + p.Q);
        return -p.k;
    };
    fn.fpp = [&kr, p, A, s1, S1, sl](double x) {
        if (x > s1) return kr.d2v(A, x);
        if (x > S1 - p.Q) return 0.0;
        if (x >= sl) return kr.d2v(A, x + p.Q);
        return 0.0;
    };
    fn.kinks = {sl, S1 - p.Q, s1, 0.0, -p.Q};
    fn.continuation_lo = s1;
    return fn;
}

PiecewiseFn continuation_value_fn(const Kernel& kr, double A) {
    PiecewiseFn fn;
    fn.f = [&kr, A](double x) { return kr.v(A, x); };
    fn.fp = [&kr, A](double x) { return kr.dv(A, x); };
    fn.fpp = [&kr, A](double x) { return kr.d2v(A, x); };
    fn.kinks = {0.0};
    fn.continuation_lo = -std::numeric_limits<double>::infinity();
    return fn;
}

std::vector<double> check_grid(double lo, double hi, int n, std::span<const double> focus) {
    std::vector<double> grid;
    grid.reserve(n + 1 + 16 * focus.size());
    for (int i = 0; i <= n; ++i) grid.push_back(lo + (hi - lo) * i / n);
    constexpr double offsets[] = {2e-6, 1e-5, 1e-4, 1e-3, 3e-3, 1e-2, 2e-2, 5e-2};
    for (double f : focus) {
        for (double d : offsets) {
            if (f - d > lo) grid.push_back(f - d);
            if (f + d < hi) grid.push_back(f + d);
        }
    }
    std::sort(grid.begin(), grid.end());
    return grid;
}

}  // namespace impulse
