#pragma once

#include <cstdint>
#include <vector>

#include "schedwin/queues.hpp"
#include "schedwin/showup.hpp"

namespace schedwin {

// theta: penalty per rejected booking request; xi: ancillary revenue rate on
// capacity left unused by appointments, earning xi * (mu - completed-visit
// rate); overtime_a scales the quadratic cost of raising service capacity
// above regular_capacity_M.
struct EconomicParams {
    double theta = 0.0;
    double xi = 0.0;
    double overtime_a = 0.0;
    double regular_capacity_M = 20.0;

    void validate() const;
};

struct RewardBreakdown {
    double visit_revenue = 0.0;      // lambda * sum_j pi_j q_j, j below the bound
    double ancillary_revenue = 0.0;  // xi * (mu - visit_revenue)
    double rejection_cost = 0.0;     // lambda * theta * pi_K
    double overtime_cost = 0.0;      // populated only by capacity searches
    double total = 0.0;
    double occupancy_zero = 0.0;
    double idle_fraction = 0.0;
    // For unbounded queues: certified bound on the error from truncating the
    // occupancy sum. Zero for bounded queues.
    double truncation_error_bound = 0.0;
};

double overtime_cost(double mu, const EconomicParams& econ);

// Expected net reward per day of running the system described by dist:
// completed-visit revenue plus ancillary revenue on unused capacity minus the
// cost of turning booking requests away at the capacity bound.
RewardBreakdown net_reward(const StationaryDistribution& dist,
                           const EconomicParams& econ,
                           const ShowupModel& model);

RewardBreakdown net_reward_infinite(ServiceLaw law, double lambda, double mu,
                                    const EconomicParams& econ,
                                    const ShowupModel& model,
                                    double tail_tol = 1e-13);
RewardBreakdown net_reward_infinite(const StationaryDistribution& unbounded,
                                    const EconomicParams& econ,
                                    const ShowupModel& model);

// Closed-form unbounded net reward: the geometric occupancy sum for
// exponential service, the probability generating function evaluated at the
// show-up decay factor for deterministic service. Equals the truncated-sum
// evaluation to ~1e-12 relative at a fraction of the cost; used inside
// capacity-search inner loops. Requires lambda < mu.
double net_reward_infinite_closed(ServiceLaw law, double lambda, double mu,
                                  const EconomicParams& econ,
                                  const ShowupModel& model);

// Service level of a proposed bound: P(occupancy <= k_star) under the
// unbounded system's stationary law.
double service_level(const StationaryDistribution& unbounded, std::int64_t k_star);

// Net reward as a function of the capacity bound K for fixed (law, lambda,
// mu). Shares one occupancy-weight vector across every K, so total(K) costs
// O(1) after construction instead of re-solving the queue per K.
class RewardCurve {
public:
    RewardCurve(ServiceLaw law, double lambda, double mu,
                const EconomicParams& econ, const ShowupModel& model,
                std::int64_t k_max);

    double total(std::int64_t k) const;
    RewardBreakdown breakdown(std::int64_t k) const;

    std::int64_t k_max() const { return k_max_; }
    double lambda() const { return lambda_; }
    double mu() const { return mu_; }
    ServiceLaw law() const { return law_; }

private:
    ServiceLaw law_;
    double lambda_;
    double mu_;
    EconomicParams econ_;
    ShowupModel model_;
    std::int64_t k_max_;
    std::vector<double> x_;         // occupancy weights, shared across K
    std::vector<double> sum_x_;     // S_n = x_0 + ... + x_n
    std::vector<double> sum_xq_;    // W_n = sum_{j<=n} x_j q_j
};

}  // namespace schedwin
