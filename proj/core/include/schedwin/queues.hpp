#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "schedwin/errors.hpp"

namespace schedwin {

enum class ServiceLaw {
    Exponential,    // M/M/1 family
    Deterministic,  // M/D/1 family
};

// Single-server queue with Poisson arrivals. capacity == nullopt means an
// unbounded queue; a stationary distribution then exists only when rho < 1.
struct QueueSpec {
    double lambda = 0.0;
    double mu = 1.0;
    std::optional<std::int64_t> capacity;
    ServiceLaw service_law = ServiceLaw::Exponential;

    double rho() const { return lambda / mu; }
    void validate() const;
};

// Time-stationary occupancy distribution. For unbounded queues probs is a
// truncation: tail_mass bounds the probability left beyond the last entry.
struct StationaryDistribution {
    std::vector<double> probs;
    std::optional<std::int64_t> truncation_level;
    double tail_mass = 0.0;
    QueueSpec spec;

    std::int64_t max_level() const { return static_cast<std::int64_t>(probs.size()) - 1; }
    // P(system full); only meaningful for bounded queues.
    double blocking() const { return probs.empty() ? 0.0 : probs.back(); }
    double mean() const;
    // P(occupancy <= k)
    double cumulative(std::int64_t k) const;
    double sum() const;
};

StationaryDistribution mm1k_distribution(double lambda, double mu, std::int64_t capacity);
StationaryDistribution md1k_distribution(double lambda, double mu, std::int64_t capacity);
StationaryDistribution mm1_distribution(double lambda, double mu, double tail_tol = 1e-13);
StationaryDistribution md1_distribution(double lambda, double mu, double tail_tol = 1e-13);
StationaryDistribution stationary_distribution(const QueueSpec& spec, double tail_tol = 1e-13);

namespace detail {

// Poisson(rho) pmf and upper tails, mass[n] = P(N = n), tail[n] = P(N >= n).
struct PoissonServiceKernel {
    double rho = 0.0;
    std::vector<double> mass;
    std::vector<double> tail;

    static PoissonServiceKernel build(double rho, std::size_t count);
};

// Unnormalised stationary occupancy weights x_0..x_{count-1} shared by every
// capacity bound: the bounded distribution at capacity K only renormalises a
// prefix of x. For Exponential service x_j = rho^j (anchored at the largest
// index when rho > 1 so the weights stay representable); for Deterministic
// service x solves the embedded-chain balance recursion
//   x_{n+1} a_0 = x_0 Abar_n + sum_{k=1..n} x_k Abar_{n+1-k},
// a_n = Poisson(rho) pmf, Abar_n = P(N >= n), every term nonnegative
// (Gross, Shortle, Thompson & Harris, Fundamentals of Queueing Theory,
// 4th ed., sec. 6.1). Weights are rescaled when they overflow; `prefix`
// carries running sums S_n = x_0 + ... + x_n for O(1) renormalisation.
struct OccupancyWeights {
    ServiceLaw law = ServiceLaw::Exponential;
    double lambda = 0.0;
    double mu = 1.0;
    double rho = 0.0;
    std::vector<double> x;
    std::vector<double> prefix;

    static OccupancyWeights build(ServiceLaw law, double lambda, double mu,
                                  std::size_t count);
};

}  // namespace detail

}  // namespace schedwin
