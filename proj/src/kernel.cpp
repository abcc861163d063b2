#include "impulse/kernel.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "impulse/errors.hpp"
#include "impulse/rootfind.hpp"

namespace impulse {

Roots roots(const ModelParams& p) {
    const double disc = std::sqrt(p.mu * p.mu + 2.0 * p.beta * p.sigma * p.sigma);
    return {(p.mu + disc) / (p.sigma * p.sigma), (-p.mu + disc) / (p.sigma * p.sigma)};
}

Kernel::Kernel(ModelParams params, HoldingCost cost, Quadrature quad, Backend backend)
    : params_(params),
      cost_(std::move(cost)),
      quad_(quad),
      use_quadrature_(backend == Backend::ForceQuadrature ||
                      cost_.kind() == HoldingCost::Kind::Custom),
      roots_(roots(params_)) {
    coef_ = (2.0 / (params_.sigma * params_.sigma)) / (roots_.lambda1 + roots_.lambda2);

    switch (cost_.kind()) {
        case HoldingCost::Kind::PiecewiseLinear:
            abounds_ = {-cost_.p(), cost_.h()};
            break;
        case HoldingCost::Kind::Quadratic:
            abounds_ = {-2.0 * cost_.alpha() / roots_.lambda2,
                        2.0 * cost_.alpha() / roots_.lambda1};
            break;
        case HoldingCost::Kind::Custom: {
            // a_low = lambda2 * int_{-inf}^0 e^{lambda2 y} g'(y) dy, with the
            // tail cut where the exponential has crushed the polynomial bound
            // on g' (g' inherits g's bound up to a unit shift).
            const double lo = -tail_cutoff(0.0, roots_.lambda2);
            abounds_.a_low = roots_.lambda2 *
                integrate([this](double y) { return std::exp(roots_.lambda2 * y) * cost_.gp(y); },
                          lo, 0.0, quad_);
            const double hi = tail_cutoff(0.0, roots_.lambda1);
            abounds_.a_high = roots_.lambda1 *
                integrate([this](double y) { return std::exp(-roots_.lambda1 * y) * cost_.gp(y); },
                          0.0, hi, quad_);
            break;
        }
    }
}

double Kernel::tail_cutoff(double x, double rate) const {
    // Distance d with e^{-rate*d} * (a + b*(|x|+d+1)^n) < abs_tol/10.
    const double a = cost_.bound_a();
    const double b = cost_.bound_b();
    const int n = cost_.bound_n();
    const double target = quad_.abs_tol / 10.0;
    double d = 1.0;
    while (std::exp(-rate * d) * (a + b * std::pow(std::abs(x) + d + 1.0, n)) >= target) {
        d *= 2.0;
        if (d > 1e7) break;  // exp has long since underflowed anyway
    }
    return std::abs(x) + d;
}

double Kernel::lam1_integral_closed(double x) const {
    const double l1 = roots_.lambda1;
    if (cost_.kind() == HoldingCost::Kind::PiecewiseLinear) {
        const double h = cost_.h(), p = cost_.p();
        if (x >= 0) return h * (x / l1 + 1.0 / (l1 * l1));
        const double e = std::exp(l1 * x);
        return -p * (x / l1 + (1.0 - e) / (l1 * l1)) + h * e / (l1 * l1);
    }
    const double a = cost_.alpha();
    return a * (x * x / l1 + 2.0 * x / (l1 * l1) + 2.0 / (l1 * l1 * l1));
}

double Kernel::lam2_integral_closed(double x) const {
    const double l2 = roots_.lambda2;
    if (cost_.kind() == HoldingCost::Kind::PiecewiseLinear) {
        const double slope = x >= 0 ? cost_.h() : -cost_.p();
        // x/l2 - 1/l2^2 + e^{-l2 x}/l2^2, written with expm1 because
        // lambda2 is small for slow discounting and the terms cancel.
        return slope * (x * l2 + std::expm1(-l2 * x)) / (l2 * l2);
    }
    const double a = cost_.alpha();
    return a * (x * x / l2 - 2.0 * x / (l2 * l2) - 2.0 * std::expm1(-l2 * x) / (l2 * l2 * l2));
}

double Kernel::lam1_integral_quad(double x) const {
    const double hi = tail_cutoff(x, roots_.lambda1);
    return integrate(
        [this, x](double y) { return std::exp(roots_.lambda1 * (x - y)) * cost_.g(y); }, x, hi,
        quad_);
}

double Kernel::lam2_integral_quad(double x) const {
    return integrate(
        [this, x](double y) { return std::exp(-roots_.lambda2 * (x - y)) * cost_.g(y); }, 0.0,
        x, quad_);
}

double Kernel::cap_lambda1(double x) const {
    return use_quadrature_ ? lam1_integral_quad(x) : lam1_integral_closed(x);
}

double Kernel::cap_lambda2(double x) const {
    return use_quadrature_ ? lam2_integral_quad(x) : lam2_integral_closed(x);
}

double Kernel::big_a(double s, double S, double setup) const {
    if (!(S - s >= 1e-12))
        throw DegenerateBand("big_a: band width below 1e-12 (s=" + std::to_string(s) +
                             ", S=" + std::to_string(S) + ")");
    const double l1 = roots_.lambda1, l2 = roots_.lambda2;
    // e^{-l2 S} - e^{-l2 s} = e^{-l2 s} * expm1(-l2 (S-s)): avoids the
    // cancellation of two nearly equal exponentials when l2 (S-s) is small.
    const double denom = std::exp(-l2 * s) * std::expm1(-l2 * (S - s));
    const double num = (cap_lambda1(S) - cap_lambda1(s)) + (cap_lambda2(S) - cap_lambda2(s)) +
                       0.5 * params_.sigma * params_.sigma * (l1 + l2) *
                           (setup + params_.k * (S - s));
    return l2 * l2 * num / denom;
}

double Kernel::v(double A, double x) const {
    const double l2 = roots_.lambda2;
    return coef_ * (cap_lambda1(x) + cap_lambda2(x) - A * std::exp(-l2 * x) / (l2 * l2));
}

double Kernel::dv(double A, double x) const {
    const double l1 = roots_.lambda1, l2 = roots_.lambda2;
    return coef_ *
           (l1 * cap_lambda1(x) - l2 * cap_lambda2(x) + A * std::exp(-l2 * x) / l2);
}

double Kernel::gpp_tail1(double x) const {
    const double l1 = roots_.lambda1;
    switch (cost_.kind()) {
        case HoldingCost::Kind::PiecewiseLinear: return 0.0;
        case HoldingCost::Kind::Quadratic:
            return 2.0 * cost_.alpha() * std::exp(-l1 * x) / l1;
        case HoldingCost::Kind::Custom: {
            const double hi = tail_cutoff(x, l1);
            return integrate([this, l1](double y) { return std::exp(-l1 * y) * cost_.gpp(y); },
                             x, hi, quad_);
        }
    }
    return 0.0;
}

double Kernel::gpp_seg2(double x) const {
    const double l2 = roots_.lambda2;
    switch (cost_.kind()) {
        case HoldingCost::Kind::PiecewiseLinear: return 0.0;
        case HoldingCost::Kind::Quadratic:
            return 2.0 * cost_.alpha() * std::expm1(l2 * x) / l2;
        case HoldingCost::Kind::Custom:
            return integrate([this, l2](double y) { return std::exp(l2 * y) * cost_.gpp(y); },
                             0.0, x, quad_);
    }
    return 0.0;
}

double Kernel::d2v(double A, double x) const {
    const double l1 = roots_.lambda1, l2 = roots_.lambda2;
    const double kink = cost_.gp_right0() - cost_.gp_left0();
    const double gp0 = x >= 0 ? cost_.gp_right0() : cost_.gp_left0();
    const double up = (x >= 0 ? 0.0 : kink) + gpp_tail1(x);
    const double down = A - gp0 - gpp_seg2(x);
    return coef_ * (up * std::exp(l1 * x) - down * std::exp(-l2 * x));
}

double Kernel::d3v(double A, double x) const {
    const double l1 = roots_.lambda1, l2 = roots_.lambda2;
    const double kink = cost_.gp_right0() - cost_.gp_left0();
    const double gp0 = x >= 0 ? cost_.gp_right0() : cost_.gp_left0();
    const double up = (x >= 0 ? 0.0 : kink) + gpp_tail1(x);
    const double down = A - gp0 - gpp_seg2(x);
    return coef_ * (l1 * up * std::exp(l1 * x) + l2 * down * std::exp(-l2 * x));
}

double Kernel::x_star(double A) const {
    if (!(A > abounds_.a_low && A < abounds_.a_high))
        throw OutOfRange("x_star: A = " + std::to_string(A) + " outside (" +
                         std::to_string(abounds_.a_low) + ", " +
                         std::to_string(abounds_.a_high) + ")");
    // d2v(A, 0) = coef * (a_high - A) > 0 and d2v -> -inf on the left, so a
    // sign change exists; expand geometrically, capped at -1e6.
    double lo = -1.0;
    while (d2v(A, lo) > 0) {
        lo *= 2.0;
        if (lo < -1e6) throw NoBracket("x_star: no sign change of d2v above -1e6");
    }
    return bisect([this, A](double x) { return d2v(A, x); }, lo, 0.0, 1e-12, 500,
                  "x_star");
}

}  // namespace impulse
