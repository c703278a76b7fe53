#pragma once

#include <cstdint>
#include <string>

namespace schedwin {

// How an appointee's show-up probability decays with the delay (in days)
// between booking and appointment. Every family reduces to the affine form
//   q(d) = offset + scale * exp(-rate * d)
// which downstream code exploits for O(1) incremental evaluation.
enum class ShowupFamily {
    Kopach,                  // 1 - p * (1 - amp * exp(-c d)); amp=0.5, c=0.017 by default
    PureExponential,         // amp * exp(-c d); ancillary-only patients, q -> 0
    SaturatingExponential,   // q_max - (q_max - q_min) * (1 - exp(-c d)); decays to q_min
};

// Mapping from queue position to booking delay. A patient who books when j
// appointments are already scheduled waits j service slots; SlotsAsDays reads
// that count directly as days, SlotsOverMu divides by the daily service rate.
enum class DelayMap {
    SlotsAsDays,
    SlotsOverMu,
};

double showup_kopach(double noshow_base_p, double delay_days,
                     double amp = 0.5, double decay = 0.017);
double showup_pure_exponential(double delay_days,
                               double amp = 0.5, double decay = 0.017);
double showup_saturating(double q_min, double q_max, double decay, double delay_days);

struct AffineExp {
    double offset = 0.0;
    double scale = 0.0;
    double rate = 0.0;

    double at(double d) const;
};

struct ShowupModel {
    ShowupFamily family = ShowupFamily::Kopach;
    double noshow_base_p = 0.2;     // Kopach only
    double decay_amplitude = 0.5;   // Kopach / PureExponential
    double decay_coeff = 0.017;     // per-day decay rate, all families
    double q_min = 0.2;             // SaturatingExponential only
    double q_max = 0.85;            // SaturatingExponential only
    DelayMap delay_map = DelayMap::SlotsOverMu;
    // Added to the queue position before mapping to a delay; models patients
    // booking k slots behind the head of the queue.
    std::int64_t position_offset = 0;
    std::string label;

    void validate() const;

    AffineExp affine_exp() const;
    double at_delay(double delay_days) const;
    double at_position(std::int64_t j, double mu) const;
    // Limit of q(d) as d -> infinity.
    double asymptote() const;
    double delay_for_position(std::int64_t j, double mu) const;
};

ShowupModel kopach_model(double noshow_base_p, DelayMap map = DelayMap::SlotsOverMu);
ShowupModel pure_exponential_model(DelayMap map = DelayMap::SlotsOverMu);
ShowupModel saturating_model(double q_min, double q_max, double decay,
                             DelayMap map = DelayMap::SlotsOverMu);

double showup_at_position(const ShowupModel& model, std::int64_t j, double mu);

}  // namespace schedwin
