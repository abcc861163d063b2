#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "impulse/kernel.hpp"
#include "impulse/solver.hpp"

namespace impulse {

/// Order up to S whenever the level is at or below s.
struct BandPolicy {
    double s;
    double S;
};

/// State-dependent order-up-to rule: nothing above s1, then
///   S1    for x in (S1 - Q, s1]
///   x + Q for x in [s_low, S1 - Q]
///   s_bar for x <  s_low.
struct GeneralizedPolicy {
    double s1;
    double S1;
    double Q;
    double s_low;
    double s_bar;
};

/// Arbitrary trigger/order-up-to rule; up_to(x) must exceed x for x <= trigger.
struct CustomPolicy {
    double trigger;
    std::function<double(double)> up_to;
};

using Policy = std::variant<BandPolicy, GeneralizedPolicy, CustomPolicy>;

/// Target level if the policy orders at level x, nullopt otherwise.
std::optional<double> order_up_to(const Policy& policy, double x);

/// Builds the generalized policy from a classified model; `q` is the
/// quantity threshold the model was classified under.
/// Throws RegimeError unless the report is in the generalized regime.
GeneralizedPolicy generalized_from(const RegimeReport& report, double q);

/// Discounted cost of an arbitrary band s < S (not necessarily optimal):
/// the band objective A = big_a(s, S, setup(S-s)) prices the continuation
/// value, and a start at x <= s is charged the setup implied by the actual
/// jump S - x, which can exceed the threshold even when S - s does not.
double dc_band(const Kernel& kernel, double s, double S, double x);

/// Closed-form discounted cost of the generalized policy of a classified
/// model. Throws RegimeError in the S2Everywhere regime.
double dc_generalized(const Kernel& kernel, const RegimeReport& report, double x);

/// Closed-form discounted cost of a Band or Generalized policy with
/// arbitrary (possibly suboptimal) parameters; the simulator is the
/// independent check for these values. Custom policies have no closed
/// form and throw OutOfRange.
double dc_policy(const Kernel& kernel, const Policy& policy, double x);

struct CompareRow {
    double x;
    double band1;
    double band2;
    std::optional<double> generalized;
    std::string best;
};

/// Per-x discounted costs of the candidate policies plus the argmin tag.
std::vector<CompareRow> compare(const Kernel& kernel, const RegimeReport& report,
                                std::span<const double> xs);

/// Sampled cost curve of one policy, as serialized by the CLI.
struct CostCurve {
    std::string policy_tag;
    std::vector<std::pair<double, double>> points;  // (x, discounted cost)
};

/// One curve per candidate policy over the grid (band1, band2, and the
/// generalized policy when the regime admits it).
std::vector<CostCurve> cost_curves(const Kernel& kernel, const RegimeReport& report,
                                   std::span<const double> xs);

}  // namespace impulse
