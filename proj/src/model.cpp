#include "impulse/model.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

namespace impulse {

HoldingCost HoldingCost::piecewise_linear(double h, double p) {
    HoldingCost c;
    c.kind_ = Kind::PiecewiseLinear;
    c.h_ = h;
    c.p_ = p;
    c.gp_left0_ = -p;
    c.gp_right0_ = h;
    c.bound_a_ = 0.0;
    c.bound_b_ = std::max(h, p);
    c.bound_n_ = 1;
    return c;
}

HoldingCost HoldingCost::quadratic(double alpha) {
    HoldingCost c;
    c.kind_ = Kind::Quadratic;
    c.alpha_ = alpha;
    c.gp_left0_ = 0.0;
    c.gp_right0_ = 0.0;
    c.bound_a_ = 0.0;
    c.bound_b_ = alpha;
    c.bound_n_ = 2;
    return c;
}

HoldingCost HoldingCost::custom(CustomSpec spec) {
    HoldingCost c;
    c.kind_ = Kind::Custom;
    c.gp_left0_ = spec.gp_left0;
    c.gp_right0_ = spec.gp_right0;
    c.bound_a_ = spec.bound_a;
    c.bound_b_ = spec.bound_b;
    c.bound_n_ = spec.bound_n;
    c.custom_ = std::move(spec);
    return c;
}

double HoldingCost::g(double x) const {
    switch (kind_) {
        case Kind::PiecewiseLinear: return x >= 0 ? h_ * x : -p_ * x;
        case Kind::Quadratic: return alpha_ * x * x;
        case Kind::Custom: return custom_.g(x);
    }
    return 0.0;
}

double HoldingCost::gp(double x) const {
    switch (kind_) {
        case Kind::PiecewiseLinear: return x >= 0 ? h_ : -p_;
        case Kind::Quadratic: return 2.0 * alpha_ * x;
        case Kind::Custom: return x == 0.0 ? gp_right0_ : custom_.gp(x);
    }
    return 0.0;
}

double HoldingCost::gpp(double x) const {
    switch (kind_) {
        case Kind::PiecewiseLinear: return 0.0;
        case Kind::Quadratic: return 2.0 * alpha_;
        case Kind::Custom: return custom_.gpp(x);
    }
    return 0.0;
}

namespace {

void add(ValidationReport& r, const std::string& id, const std::string& detail, double witness) {
    r.ok = false;
    r.violations.push_back({id, detail, witness});
}

std::string num(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace

ValidationReport validate(const ModelParams& params, const HoldingCost& g) {
    ValidationReport r;

    if (!(params.mu > 0)) add(r, "params", "mu must be > 0", params.mu);
    if (!(params.sigma > 0)) add(r, "params", "sigma must be > 0", params.sigma);
    if (!(params.beta > 0)) add(r, "params", "beta must be > 0", params.beta);
    if (!(params.k >= 0)) add(r, "params", "k must be >= 0", params.k);
    if (!(params.K1 > 0)) add(r, "params", "K1 must be > 0", params.K1);
    if (!(params.Q > 0)) add(r, "params", "Q must be > 0", params.Q);
    if (!(params.K1 < params.K2))
        add(r, "K-step", "setup cost must step up: K1 < K2", params.K2);
    if (!(params.K2 <= 2.0 * params.K1))
        add(r, "K-step", "K2 <= 2*K1 required (rules out splitting one order into two)",
            params.K2);

    const bool custom = g.kind() == HoldingCost::Kind::Custom;
    r.sampled_checks = custom;

    // A1: g(0) = 0 and convexity. Built-ins are convex by construction;
    // for Custom we can only falsify on a grid.
    if (std::abs(g(0.0)) > 1e-12) add(r, "A1", "g(0) must be 0", g(0.0));
    if (g.kind() == HoldingCost::Kind::PiecewiseLinear) {
        if (g.h() < 0) add(r, "A1", "piecewise-linear slope h must be >= 0", g.h());
        if (g.p() < 0) add(r, "A1", "piecewise-linear slope p must be >= 0", g.p());
    } else if (g.kind() == HoldingCost::Kind::Quadratic) {
        if (!(g.alpha() > 0)) add(r, "A1", "quadratic coefficient must be > 0", g.alpha());
    }

    // Sampling grid for Custom: {-100, -99.5, ..., 100} plus +/-1e-6.
    if (custom) {
        std::vector<double> grid;
        for (double x = -100.0; x <= 100.0 + 1e-9; x += 0.5) grid.push_back(x);
        grid.push_back(-1e-6);
        grid.push_back(1e-6);
        bool bad_gpp = false, bad_sign = false, bad_bound = false;
        double w_gpp = 0, w_sign = 0, w_bound = 0;
        for (double x : grid) {
            if (x != 0.0 && g.gpp(x) < -1e-9 && !bad_gpp) {
                bad_gpp = true;
                w_gpp = x;
            }
            if ((x < 0 && g.gp(x) >= 0) || (x > 0 && g.gp(x) <= 0)) {
                if (!bad_sign) {
                    bad_sign = true;
                    w_sign = x;
                }
            }
            double bound = g.bound_a() + g.bound_b() * std::pow(std::abs(x), g.bound_n());
            if (g(x) > bound * (1 + 1e-9) + 1e-12 && !bad_bound) {
                bad_bound = true;
                w_bound = x;
            }
        }
        if (bad_gpp) add(r, "A1", "sampled g'' < 0 (not convex) at x = " + num(w_gpp), w_gpp);
        if (bad_sign)
            add(r, "A3", "sampled g' has wrong sign at x = " + num(w_sign), g.gp(w_sign));
        if (bad_bound)
            add(r, "A5", "sampled g exceeds witness bound a + b|x|^n at x = " + num(w_bound),
                g(w_bound));
    }

    // A3 for piecewise linear: strict slopes needed on both sides.
    if (g.kind() == HoldingCost::Kind::PiecewiseLinear) {
        if (!(g.h() > 0)) add(r, "A3", "h must be > 0 so g increases on (0,inf)", g.h());
        if (!(g.p() > 0)) add(r, "A3", "p must be > 0 so g decreases on (-inf,0)", g.p());
    }

    // A4: lim_{x->-inf} g'(x) + beta*k < -beta*K1/Q. Exact for built-ins,
    // one deep probe (monotone g' by convexity) for Custom.
    if (params.beta > 0 && params.Q > 0 && params.K1 > 0) {
        const double rhs = -params.beta * params.K1 / params.Q;
        double gp_limit;
        switch (g.kind()) {
            case HoldingCost::Kind::PiecewiseLinear: gp_limit = -g.p(); break;
            case HoldingCost::Kind::Quadratic:
                gp_limit = -std::numeric_limits<double>::infinity();
                break;
            case HoldingCost::Kind::Custom: gp_limit = g.gp(-1e6); break;
            default: gp_limit = 0;
        }
        const double lhs = gp_limit + params.beta * params.k;
        if (!(lhs < rhs))
            add(r, "A4",
                "lim g'(-inf) + beta*k = " + num(lhs) + " must be < -beta*K1/Q = " + num(rhs),
                lhs);
    }

    return r;
}

}  // namespace impulse
