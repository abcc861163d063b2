#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "impulse/kernel.hpp"
#include "impulse/solver.hpp"

namespace impulse {

/// Candidate value function: f with one-sided-safe derivatives away from
/// the declared kink set. Points within 1e-6 of a kink are skipped by the
/// differential checks (the operator needs f''; x = 0 is always treated as
/// a kink because of g). `continuation_lo` marks the region (lo, inf)
/// where the generator identity must hold with equality.
struct PiecewiseFn {
    std::function<double(double)> f;
    std::function<double(double)> fp;
    std::function<double(double)> fpp;
    std::vector<double> kinks;
    double continuation_lo = std::numeric_limits<double>::infinity();
};

struct CheckReport {
    std::string check;
    bool pass = true;
    double worst_value = 0.0;  ///< most negative margin seen
    double worst_point = 0.0;
    std::size_t n_checked = 0;
    std::vector<std::string> notes;
};

std::string to_json(const CheckReport& report);

/// Lower-bound condition on the generator: Gamma f - beta f + g >= -tol on
/// the grid (kinks excluded), with |Gamma f - beta f + g| < tol additionally
/// required on the continuation region. The report records the minimum
/// margin and where it occurs; failures are data, not exceptions.
CheckReport hjb_check(const Kernel& kernel, const PiecewiseFn& fn,
                      std::span<const double> grid, double tol = 1e-7);

/// Intervention-gap condition: f(x2) - f(x1) >= -K(x2-x1) - k (x2-x1) - tol
/// for sampled pairs x1 < x2. Pairs are drawn deterministically (fixed
/// seed) and stratified across the supplied breakpoints plus threshold
/// offsets, so failures reproduce.
CheckReport intervention_gap_check(const Kernel& kernel,
                                   const std::function<double(double)>& f,
                                   std::span<const double> strata, int n_pairs,
                                   std::uint64_t seed = 0x5eedf00d, double tol = 1e-8);

enum class Op { OP1, OP2 };

struct GridOracleResult {
    double s, S, a;
};

/// Exhaustive maximization of big_a over the constrained (s, S) grid;
/// the anti-regression oracle for the KKT solvers. Ranges must bracket
/// the optimum; a maximizer on the range boundary flags the ranges.
GridOracleResult grid_oracle(const Kernel& kernel, Op which,
                             std::pair<double, double> s_range,
                             std::pair<double, double> S_range, double step);

/// dv(A, .) must fall then rise across the grid with a single sign change
/// of its successive differences (tolerance 1e-10 on the differences).
CheckReport quasiconvexity_check(const Kernel& kernel, double A,
                                 std::span<const double> grid);

/// Candidate value functions with analytic derivatives, ready for the
/// checks above.
PiecewiseFn band_value_fn(const Kernel& kernel, const BandSolution& sol, double setup);
PiecewiseFn generalized_value_fn(const Kernel& kernel, const RegimeReport& report);
PiecewiseFn continuation_value_fn(const Kernel& kernel, double A);

/// Uniform grid over [lo, hi] with n intervals, plus geometric clusters on
/// both sides of each focus point. Generator-condition violations live in
/// thin layers against the branch boundaries, so a plain uniform grid can
/// step straight over them.
std::vector<double> check_grid(double lo, double hi, int n, std::span<const double> focus);

}  // namespace impulse
