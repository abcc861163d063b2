#pragma once

#include "impulse/model.hpp"
#include "impulse/quadrature.hpp"

namespace impulse {

/// Characteristic roots of (sigma^2/2) y'' - mu y' - beta y = 0, both
/// positive:
///   lambda1 = ( mu + sqrt(mu^2 + 2 beta sigma^2)) / sigma^2
///   lambda2 = (-mu + sqrt(mu^2 + 2 beta sigma^2)) / sigma^2
/// They satisfy lambda1*lambda2 = 2 beta / sigma^2 and lambda1 > lambda2
/// when mu > 0.
struct Roots {
    double lambda1;
    double lambda2;
};

Roots roots(const ModelParams& params);

/// Analytic bracket for every optimal band objective value:
///   a_low  = lambda2 * int_{-inf}^0 e^{lambda2 y} g'(y) dy   (< 0)
///   a_high = lambda1 * int_0^inf    e^{-lambda1 y} g'(y) dy  (> 0)
struct ABounds {
    double a_low;
    double a_high;
};

/// Closed-form machinery shared by the solver, the policy evaluators and
/// the verifier: the exponential transforms of g, the band objective
/// A(s,S), and the continuation value v_A with its first three
/// derivatives.
///
/// Piecewise-linear and quadratic cost families evaluate everything in
/// closed form; Custom falls back to adaptive quadrature with an
/// exponential tail cutoff. Backend::ForceQuadrature makes the built-in
/// families use the quadrature path too, which the tests exploit to
/// cross-check the closed forms.
class Kernel {
  public:
    enum class Backend { Auto, ForceQuadrature };

    Kernel(ModelParams params, HoldingCost cost, Quadrature quad = {},
           Backend backend = Backend::Auto);

    const ModelParams& params() const { return params_; }
    const HoldingCost& cost() const { return cost_; }
    Roots char_roots() const { return roots_; }
    ABounds a_bounds() const { return abounds_; }

    /// Lambda1(x) = int_x^inf e^{lambda1 (x-y)} g(y) dy.
    double cap_lambda1(double x) const;
    /// Lambda2(x) = int_0^x e^{-lambda2 (x-y)} g(y) dy, signed: for x < 0
    /// this is the negatively oriented integral, which keeps v_A a
    /// solution of the pricing ODE on both half-lines.
    double cap_lambda2(double x) const;

    /// Band objective
    ///   A(s,S) = lambda2^2 / (e^{-lambda2 S} - e^{-lambda2 s}) *
    ///            [ sum_j (Lambda_j(S)-Lambda_j(s))
    ///              + sigma^2 (lambda1+lambda2)/2 * (setup + k (S-s)) ].
    /// The discounted band cost is decreasing in A, so maximizing A(s,S)
    /// minimizes cost. Throws DegenerateBand when S - s < 1e-12.
    double big_a(double s, double S, double setup) const;

    /// v_A(x) = (2/sigma^2) (1/(lambda1+lambda2))
    ///          [ Lambda1(x) + Lambda2(x) - A e^{-lambda2 x} / lambda2^2 ]
    /// solves (sigma^2/2) v'' - mu v' - beta v + g = 0 for every A.
    double v(double A, double x) const;
    /// v_A'(x) via the transform identities
    ///   Lambda1' = lambda1 Lambda1 - g,  Lambda2' = g - lambda2 Lambda2.
    double dv(double A, double x) const;
    /// v_A'' and v_A''' use the integrated-by-parts forms built from
    /// int e^{-lambda1 y} g''(y) dy tails; both half-line branches carry
    /// the g'(0+) - g'(0-) kink term, so d3v may jump at 0.
    double d2v(double A, double x) const;
    double d3v(double A, double x) const;

    /// Unique negative root of d2v(A, .) = 0 for A in (a_low, a_high):
    /// v_A' decreases strictly left of it and increases right of it.
    /// Throws OutOfRange for A outside the open bracket.
    double x_star(double A) const;

  private:
    double lam1_integral_closed(double x) const;
    double lam2_integral_closed(double x) const;
    double lam1_integral_quad(double x) const;
    double lam2_integral_quad(double x) const;
    /// J1(x) = int_x^inf e^{-lambda1 y} g''(y) dy.
    double gpp_tail1(double x) const;
    /// W(x) = int_0^x e^{lambda2 y} g''(y) dy (signed).
    double gpp_seg2(double x) const;
    double tail_cutoff(double x, double rate) const;

    ModelParams params_;
    HoldingCost cost_;
    Quadrature quad_;
    bool use_quadrature_;
    Roots roots_;
    ABounds abounds_;
    double coef_;  // (2/sigma^2) / (lambda1+lambda2)
};

}  // namespace impulse
