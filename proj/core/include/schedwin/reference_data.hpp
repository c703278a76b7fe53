#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "schedwin/queues.hpp"

namespace schedwin::refdata {

// Bundled reference results for the default study configuration (mu = 20,
// lambdas {18, 19, 19.9, 19.99}, scenarios {(0,0),(0,0.5),(1.5,0),(1.5,0.5)},
// window grid 20..1000 step 20). Used by the mapping report and by the
// regression suite. nullopt in a window cell means the reference leaves the
// queue unbounded.

inline constexpr int kColumns = 5;
extern const char* const kColumnNames[kColumns];  // K_0.2, K_0.4, K_0.6, G, GS

struct ReferenceWindowRow {
    double theta;
    double xi;
    double lambda;
    std::optional<std::int64_t> k[kColumns];
};

struct ReferenceGainRow {
    double theta;
    double xi;
    double lambda;
    double gain[kColumns];  // percent vs the no-window baseline
};

const std::vector<ReferenceWindowRow>& reference_windows(ServiceLaw law);
const std::vector<ReferenceGainRow>& reference_gains(ServiceLaw law);

// Window-on-top-of-capacity lever table: efficiency gain and service level
// per (scenario, show-up family), for fixed regular capacity and for the
// overtime-optimised capacity, under both service laws.
struct ReferenceLeverRow {
    double theta;
    double xi;
    const char* column;  // one of kColumnNames
    double de_fixed_m;
    double alpha_fixed_m;
    double de_fixed_d;
    double alpha_fixed_d;
    double de_opt_m;
    double alpha_opt_m;
    double de_opt_d;
    double alpha_opt_d;
};

const std::vector<ReferenceLeverRow>& reference_levers();

// Mean improvement of the one-shot (lambda, mu, K) search over optimising
// capacity first and the window second, per rejection penalty.
struct ReferenceJointGain {
    double theta;
    double mean_gain_percent;
};

const std::vector<ReferenceJointGain>& reference_joint_gains();

}  // namespace schedwin::refdata
