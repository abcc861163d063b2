#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "impulse/kernel.hpp"

namespace impulse {

/// Solution of one constrained band problem.
struct BandSolution {
    double s;             ///< reorder level
    double S;             ///< order-up-to level
    double a_star;        ///< optimal band objective value
    bool boundary_tight;  ///< width constraint S - s = Q active
    double smooth_paste;  ///< dv(a_star, s) = dv(a_star, S); equals -k when interior
};

enum class Regime { S2Everywhere, S1PlusGeneralized };

struct RegimeReport {
    Regime regime;
    BandSolution sol1;
    BandSolution sol2;
    // Present exactly when regime == S1PlusGeneralized.
    std::optional<double> s_bar;
    std::optional<double> s_low;
    std::optional<double> xi;
    bool xi_nonneg = false;
};

struct QSweepRow {
    double Q;
    double s1, S1, a1_star;
    double s2, S2, a2_star;
    std::optional<double> s_bar, s_low, xi;
};

struct SweepSummary {
    double q_dagger;  ///< width of the unconstrained small-setup band
    double s1_dagger, S1_dagger, a1_dagger;
    std::optional<double> first_q_xi_nonneg;  ///< smallest swept Q with xi >= 0
};

/// Optional record of the outer bisections: (A, kappa(A)) pairs in visit
/// order, one list per phase. Each kappa is strictly decreasing in A,
/// which the tests assert.
struct SolveTrace {
    std::vector<std::pair<double, double>> interior;
    std::vector<std::pair<double, double>> tight;
};

/// Implied setup cost of the interior band at objective level A: the two
/// roots s(A) < S(A) of dv(A, .) = -k around x_star(A) define
///   kappa(A) = v(A, s) - v(A, S) - k (S - s),
/// zero when the sublevel set is empty. Strictly decreasing in A.
double kappa_interior(const Kernel& kernel, double A);

/// Same with the width pinned to w: s solves dv(A, s) = dv(A, s + w).
double kappa_tight(const Kernel& kernel, double A, double w);

/// Small-setup problem: maximize A(s,S) subject to 0 < S - s <= Q.
/// First solves the interior smooth-pasting system by bisecting
/// kappa_interior(A) = K1; if the resulting band is wider than Q, re-solves
/// with the width pinned to Q via kappa_tight. Throws NoBracket when kappa
/// never reaches K1 (a model that slipped validation, e.g. A4 failing) and
/// ConvergenceFailure when iteration limits are hit.
BandSolution solve_op1(const Kernel& kernel, SolveTrace* trace = nullptr);

/// Large-setup problem: maximize A(s,S) subject to S - s >= Q. Interior
/// attempt with kappa = K2; width pinned to Q when it comes out narrower.
BandSolution solve_op2(const Kernel& kernel, SolveTrace* trace = nullptr);

/// Unconstrained small-setup band (interior attempt only); defines
/// q_dagger = S - s.
BandSolution solve_op1_unconstrained(const Kernel& kernel);

/// Variants with an explicit threshold, used by the Q sweep. `q` may be
/// +infinity for solve_op1 (interior only).
BandSolution solve_op1_at(const Kernel& kernel, double q, SolveTrace* trace = nullptr);
BandSolution solve_op2_at(const Kernel& kernel, double q, SolveTrace* trace = nullptr);

/// Order-up-to target used below s_low: the unique root of
/// dv(a1_star, x) = -k on [S1, inf). Equals S1 when the band pastes
/// smoothly at -k. Throws RegimeError unless a1_star > a2_star.
double s_bar(const Kernel& kernel, const BandSolution& sol1, const BandSolution& sol2);

/// Indifference level: unique root of
///   H(x) = (v(a1,x+Q) + K1 + kQ) - (v(a1,Sbar) + K2 + k(Sbar-x))
/// on [s1 - Q, S1 - Q]; H is strictly decreasing there.
double s_low(const Kernel& kernel, const BandSolution& sol1, double sbar);

/// Xi(s_low) = mu k + g(s_low) - beta (v(a1,Sbar) + K2 + k (Sbar - s_low)).
/// Nonnegativity certifies optimality of the generalized policy within the
/// restricted class.
double xi_value(const Kernel& kernel, const BandSolution& sol1, double sbar, double slow);

/// Solves both problems and classifies which policy regime applies:
/// S2Everywhere iff a1_star <= a2_star, otherwise the generalized regime
/// with S_bar, s_low and Xi filled in.
RegimeReport classify(const Kernel& kernel);

/// One row per q value plus the unconstrained-band summary. q_values must
/// be strictly increasing and positive.
std::pair<std::vector<QSweepRow>, SweepSummary> sweep_q(const Kernel& kernel,
                                                        const std::vector<double>& q_values);

}  // namespace impulse
