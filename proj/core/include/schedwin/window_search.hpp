#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "schedwin/reward.hpp"

namespace schedwin {

// Candidate capacity bounds K to evaluate, inclusive of both ends.
struct WindowGrid {
    std::int64_t k_min = 20;
    std::int64_t k_max = 2000;
    std::int64_t k_step = 20;

    void validate() const;
    std::vector<std::int64_t> points() const;
};

struct WindowSearchResult {
    // Best finite bound on the grid; nullopt when leaving the queue unbounded
    // is at least as good (within infinity_tolerance) as any finite bound.
    std::optional<std::int64_t> k_star;
    double t_at_k_star = 0.0;
    // Reward of the unbounded system; nullopt when rho >= 1 (no stationary
    // regime without a bound).
    std::optional<double> t_at_infinity;
    std::vector<std::pair<std::int64_t, double>> trace;
    double infinity_tolerance = 0.0;

    bool unbounded() const { return !k_star.has_value(); }
    double best_value() const;
};

// Sweeps T(K) over the grid and compares the best finite bound against the
// unbounded system. Declares "no finite bound needed" only when the
// unbounded reward is within infinity_tolerance (relative) of the best grid
// value; the tolerance must dominate the truncation error of the unbounded
// evaluation (tail_tol) for the declaration to be trustworthy.
WindowSearchResult optimal_window(ServiceLaw law, double lambda, double mu,
                                  const EconomicParams& econ,
                                  const ShowupModel& model,
                                  const WindowGrid& grid = {},
                                  double infinity_tolerance = 1e-11,
                                  double tail_tol = 1e-13);

// Same search on a prebuilt reward curve, with the unbounded reward supplied
// by the caller (nullopt when rho >= 1). Lets sweeps share the expensive
// unbounded evaluation across many (economics, show-up) combinations.
WindowSearchResult optimal_window_on_curve(const RewardCurve& curve,
                                           const WindowGrid& grid,
                                           double infinity_tolerance,
                                           std::optional<double> t_infinity);

// Smallest index attaining the maximum value in a sweep trace.
std::optional<std::int64_t> argmax_smallest_k(
    const std::vector<std::pair<std::int64_t, double>>& trace);

// Percent efficiency lost by running without a bound: 100 (T(K*) - T(inf)) / T(inf).
// Zero when the search declared the unbounded system optimal.
double efficiency_gain_vs_infinite(const WindowSearchResult& result);
// Same gain measured against an arbitrary baseline reward.
double efficiency_gain_vs_reference(const WindowSearchResult& result, double t_reference);

// Percent reward lost by running the deterministic-service system at the
// exponential-service bound instead of its own best bound k_d:
// 100 (T_D(k_d) - T_D(k_m)) / T_D(k_d). With literal_window_denominator the
// ratio divides by k_d itself rather than by the reward.
double efficiency_gain_md_vs_mm(double t_md_at_kd, double t_md_at_km,
                                std::int64_t k_d,
                                bool literal_window_denominator = false);

}  // namespace schedwin
