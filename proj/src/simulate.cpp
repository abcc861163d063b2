#include "impulse/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <thread>
#include <vector>

#include "json.hpp"

#include "impulse/errors.hpp"

namespace impulse {

std::string to_json(const SimEstimate& est) {
    nlohmann::json j;
    j["mean"] = est.mean;
    j["std_err"] = est.std_err;
    j["n_paths"] = est.n_paths;
    j["tail_bound"] = est.tail_bound;
    j["discount_at_horizon"] = est.discount_at_horizon;
    return j.dump();
}

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Self-contained normal generator (Box-Muller over splitmix64 streams):
// identical output on every platform, one stream per path.
class NormalStream {
  public:
    explicit NormalStream(std::uint64_t seed) : state_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 1e-300) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

  private:
    double uniform() {
        state_ = splitmix64_next(state_);
        return static_cast<double>(state_ >> 11) * 0x1.0p-53;
    }
    static std::uint64_t splitmix64_next(std::uint64_t& s) {
        s += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = s;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

double one_path(const ModelParams& p, const HoldingCost& g, const Policy& policy, double x0,
                const SimConfig& cfg, std::uint64_t seed) {
    NormalStream rng(seed);
    const long n_steps = std::lround(std::ceil(cfg.horizon / cfg.dt - 1e-9));
    const double sqdt = std::sqrt(cfg.dt);
    const double step_decay = std::exp(-p.beta * cfg.dt);

    double z = x0;
    double cost = 0.0;
    double disc = 1.0;  // e^{-beta t}, advanced multiplicatively

    if (auto y = order_up_to(policy, z)) {
        const double q = *y - z;
        cost += p.setup_cost(q) + p.k * q;
        z = *y;
    }
    for (long j = 0; j < n_steps; ++j) {
        cost += disc * g(z) * cfg.dt;
        z += -p.mu * cfg.dt + p.sigma * sqdt * rng.next();
        disc *= step_decay;
        if (auto y = order_up_to(policy, z)) {
            const double q = *y - z;
            cost += disc * (p.setup_cost(q) + p.k * q);
            z = *y;
        }
    }
    return cost;
}

// Fixed-shape pairwise sum: independent of thread count and immune to the
// worst of float accumulation order effects.
double pairwise_sum(const double* data, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += data[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

// Trigger level and the largest order-up-to level the policy can use;
// these bound the controlled path for the tail estimate.
std::pair<double, double> policy_levels(const Policy& policy, double x0) {
    double trigger = x0, ymax = x0;
    if (const auto* b = std::get_if<BandPolicy>(&policy)) {
        trigger = b->s;
        ymax = b->S;
    } else if (const auto* g = std::get_if<GeneralizedPolicy>(&policy)) {
        trigger = g->s1;
        ymax = std::max(g->S1, g->s_bar);
    } else {
        const auto& c = std::get<CustomPolicy>(policy);
        trigger = c.trigger;
        // No structure to exploit; probe the rule on a coarse range.
        ymax = x0;
        for (double x = c.trigger; x > c.trigger - 20.0; x -= 0.5)
            ymax = std::max(ymax, c.up_to(x));
    }
    return {std::min(trigger, x0), std::max(ymax, x0)};
}

// int_T^inf e^{-beta t} t^m dt for integer m >= 0.
double exp_poly_tail(double beta, double T, int m) {
    double sum = 0.0;
    double fact_ratio = 1.0;  // m!/j! starting at j = m
    double tpow = std::pow(T, m);
    for (int j = m; j >= 0; --j) {
        sum += fact_ratio * tpow / std::pow(beta, m - j + 1);
        if (j > 0) {
            fact_ratio *= j;
            tpow /= T;
        }
    }
    return std::exp(-beta * T) * sum;
}

// E[g(Z(t))] <= a + b E|Z(t)|^n with, by Minkowski and Doob,
// ||Z(t)||_n <= C + mu t + 2 sigma kappa_n sqrt(t), kappa_n = E|N|^n ^(1/n).
// sqrt(t) <= 1 + t turns the bound into a degree-n polynomial whose
// discounted tail integrates in closed form.
double tail_bound(const ModelParams& p, const HoldingCost& g, const Policy& policy, double x0,
                  double T) {
    const double a = g.bound_a();
    const double b = g.bound_b();
    const int n = std::max(1, g.bound_n());
    const auto [lo, hi] = policy_levels(policy, x0);
    const double c0 = std::max(std::abs(lo), std::abs(hi));

    const double abs_moment =
        std::pow(2.0, 0.5 * n) * std::tgamma(0.5 * (n + 1)) / std::sqrt(std::numbers::pi);
    const double kappa = std::pow(abs_moment, 1.0 / n);
    const double D = c0 + 2.0 * p.sigma * kappa;
    const double E = p.mu + 2.0 * p.sigma * kappa;

    double poly = 0.0;
    double binom = 1.0;
    for (int j = 0; j <= n; ++j) {
        poly += binom * std::pow(D, n - j) * std::pow(E, j) * exp_poly_tail(p.beta, T, j);
        binom = binom * (n - j) / (j + 1);
    }
    return a * std::exp(-p.beta * T) / p.beta + b * poly;
}

int pick_threads(int requested) {
    int t = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
    if (t < 1) t = 1;
    if (const char* cap = std::getenv("IMPULSE_BAND_THREADS")) {
        const int c = std::atoi(cap);
        if (c > 0) t = std::min(t, c);
    }
    return t;
}

}  // namespace

SimEstimate simulate_dc(const ModelParams& p, const HoldingCost& g, const Policy& policy,
                        double x0, const SimConfig& cfg) {
    if (!(cfg.dt > 0) || !(cfg.horizon > 0) || cfg.dt > cfg.horizon)
        throw InvalidConfig("simulate_dc: need 0 < dt <= horizon");
    if (cfg.n_paths <= 0) throw InvalidConfig("simulate_dc: n_paths must be positive");
    if (const auto* c = std::get_if<CustomPolicy>(&policy)) {
        const double y = c->up_to(c->trigger);
        if (!(y > c->trigger))
            throw InvalidConfig("simulate_dc: custom policy must order above the trigger");
    }

    const auto n = static_cast<std::size_t>(cfg.n_paths);
    std::vector<double> path_cost(n);

    const int n_threads = pick_threads(cfg.threads);
    auto worker = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const std::uint64_t seed =
                splitmix64(cfg.master_seed ^ (0xd1b54a32d192ed03ULL * (i + 1)));
            path_cost[i] = one_path(p, g, policy, x0, cfg, seed);
        }
    };
    if (n_threads == 1 || n < 2 * static_cast<std::size_t>(n_threads)) {
        worker(0, n);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (n + n_threads - 1) / n_threads;
        for (int t = 0; t < n_threads; ++t) {
            const std::size_t begin = t * chunk;
            const std::size_t end = std::min(n, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(worker, begin, end);
        }
        for (auto& th : pool) th.join();
    }

    SimEstimate est;
    est.n_paths = cfg.n_paths;
    est.mean = pairwise_sum(path_cost.data(), n) / static_cast<double>(n);
    for (double& c : path_cost) {
        const double d = c - est.mean;
        c = d * d;
    }
    const double var = pairwise_sum(path_cost.data(), n) / (static_cast<double>(n) - 1.0);
    est.std_err = std::sqrt(var / static_cast<double>(n));
    est.tail_bound = tail_bound(p, g, policy, x0, cfg.horizon);
    est.discount_at_horizon = std::exp(-p.beta * cfg.horizon);
    return est;
}

}  // namespace impulse
