#pragma once

#include <cstdint>

#include "impulse/model.hpp"
#include "impulse/policy.hpp"

namespace impulse {

/// Discretization and replication settings for the path simulator.
struct SimConfig {
    double dt = 1e-3;
    double horizon = 40.0;
    int n_paths = 10000;
    std::uint64_t master_seed = 1;
    /// Worker threads; 0 picks the hardware count. The IMPULSE_BAND_THREADS
    /// environment variable caps whatever is chosen. Results never depend
    /// on the thread count.
    int threads = 0;
};

struct SimEstimate {
    double mean = 0.0;
    double std_err = 0.0;
    int n_paths = 0;
    /// Upper bound on the truncation bias from stopping at the horizon,
    /// from the polynomial bound on g and the moment growth of the
    /// controlled path.
    double tail_bound = 0.0;
    /// e^{-beta * horizon}, reported so callers can judge the truncation.
    double discount_at_horizon = 0.0;
};

std::string to_json(const SimEstimate& est);

/// Euler scheme for the controlled level: Z steps by -mu dt + sigma
/// sqrt(dt) N(0,1); the order trigger is checked after each step (and once
/// at time zero), charging e^{-beta t} (K(q) + k q) and jumping to the
/// order-up-to level. Holding cost accrues by the left-endpoint rule.
///
/// Path i draws from an RNG stream derived from (master_seed, i) alone and
/// the reduction is a fixed-shape pairwise sum, so the estimate is
/// bit-identical for a given config regardless of parallelism.
///
/// Throws InvalidConfig on nonsensical settings. The model is taken as
/// already validated; this routine shares no code with the closed-form
/// cost evaluators it is used to check.
SimEstimate simulate_dc(const ModelParams& params, const HoldingCost& cost,
                        const Policy& policy, double x0, const SimConfig& cfg);

}  // namespace impulse
