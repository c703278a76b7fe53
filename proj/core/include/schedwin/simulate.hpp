#pragma once

#include <cstdint>
#include <vector>

#include "schedwin/reward.hpp"

namespace schedwin {

// Discrete-event simulation of the booking queue: Poisson booking requests,
// one server, capacity bound from spec (nullopt = never reject). Each
// accepted request is tagged show/no-show with probability taken at its
// queue position on arrival; no-shows still occupy their slot. Used as an
// independent check on the analytic stationary distributions and rewards.
struct SimConfig {
    QueueSpec spec;
    ShowupModel showup;
    EconomicParams econ;
    double horizon_days = 200000.0;
    double warmup_days = 20000.0;
    std::uint64_t seed = 1;
    // Post-warmup time is cut into this many equal batches; standard errors
    // come from the spread of per-batch means.
    int batches = 32;
    // Record the time-averaged occupancy of every simulated day, including
    // warmup days, in SimResult::daily_occupancy.
    bool record_daily_occupancy = false;

    void validate() const;
};

struct SimResult {
    // Time-weighted occupancy distribution and per-state standard errors.
    std::vector<double> occupancy;
    std::vector<double> occupancy_se;
    // Occupancy as sampled by arriving requests; should agree with the
    // time-weighted distribution for Poisson arrivals.
    std::vector<double> arrival_seen;
    double reward_per_day = 0.0;
    double reward_se = 0.0;
    double visit_rate = 0.0;      // completed shows per day
    double ancillary_rate = 0.0;  // revenue on capacity unused by visits, per day
    double rejection_rate = 0.0;  // rejected requests per day
    std::int64_t arrivals = 0;
    std::int64_t admitted = 0;
    std::int64_t rejected = 0;
    std::int64_t shows = 0;
    std::int64_t noshows = 0;
    double duration_days = 0.0;   // measured (post-warmup) span
    // One entry per simulated day when requested, empty otherwise.
    std::vector<double> daily_occupancy;
};

SimResult simulate(const SimConfig& config);

}  // namespace schedwin
