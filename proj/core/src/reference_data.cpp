#include "schedwin/reference_data.hpp"

namespace schedwin::refdata {

namespace {

constexpr std::optional<std::int64_t> unb = std::nullopt;

std::optional<std::int64_t> fin(std::int64_t k) { return k; }

}  // namespace

const char* const kColumnNames[kColumns] = {"K_0.2", "K_0.4", "K_0.6", "G", "GS"};

const std::vector<ReferenceWindowRow>& reference_windows(ServiceLaw law) {
    static const std::vector<ReferenceWindowRow> exponential{
        {0.0, 0.0, 18.00, {unb, unb, unb, fin(60), unb}},
        {0.0, 0.0, 19.00, {unb, fin(280), fin(160), fin(40), fin(200)}},
        {0.0, 0.0, 19.90, {fin(180), fin(100), fin(80), fin(40), fin(80)}},
        {0.0, 0.0, 19.99, {fin(160), fin(100), fin(80), fin(40), fin(80)}},
        {0.0, 0.5, 18.00, {unb, unb, unb, fin(60), unb}},
        {0.0, 0.5, 19.00, {unb, fin(280), fin(160), fin(40), fin(200)}},
        {0.0, 0.5, 19.90, {fin(180), fin(100), fin(80), fin(40), fin(80)}},
        {0.0, 0.5, 19.99, {fin(160), fin(100), fin(80), fin(40), fin(80)}},
        {1.5, 0.0, 18.00, {unb, unb, unb, fin(200), unb}},
        {1.5, 0.0, 19.00, {unb, unb, unb, fin(100), unb}},
        {1.5, 0.0, 19.90, {fin(320), fin(200), fin(160), fin(60), fin(160)}},
        {1.5, 0.0, 19.99, {fin(260), fin(180), fin(140), fin(60), fin(140)}},
        {1.5, 0.5, 18.00, {unb, unb, unb, unb, unb}},
        {1.5, 0.5, 19.00, {unb, unb, unb, fin(160), unb}},
        {1.5, 0.5, 19.90, {fin(460), fin(280), fin(200), fin(80), fin(200)}},
        {1.5, 0.5, 19.99, {fin(340), fin(220), fin(180), fin(60), fin(180)}},
    };
    static const std::vector<ReferenceWindowRow> deterministic{
        {0.0, 0.0, 18.00, {unb, unb, unb, fin(60), unb}},
        {0.0, 0.0, 19.00, {unb, unb, fin(160), fin(40), fin(200)}},
        {0.0, 0.0, 19.90, {fin(120), fin(80), fin(60), fin(20), fin(60)}},
        {0.0, 0.0, 19.99, {fin(100), fin(80), fin(60), fin(20), fin(60)}},
        {0.0, 0.5, 18.00, {unb, unb, unb, fin(60), unb}},
        {0.0, 0.5, 19.00, {unb, unb, fin(160), fin(40), fin(200)}},
        {0.0, 0.5, 19.90, {fin(120), fin(80), fin(60), fin(20), fin(60)}},
        {0.0, 0.5, 19.99, {fin(100), fin(80), fin(60), fin(20), fin(60)}},
        {1.5, 0.0, 18.00, {unb, unb, unb, fin(160), unb}},
        {1.5, 0.0, 19.00, {unb, unb, unb, fin(80), unb}},
        {1.5, 0.0, 19.90, {fin(260), fin(160), fin(120), fin(40), fin(120)}},
        {1.5, 0.0, 19.99, {fin(180), fin(120), fin(100), fin(40), fin(100)}},
        {1.5, 0.5, 18.00, {unb, unb, unb, unb, unb}},
        {1.5, 0.5, 19.00, {unb, unb, unb, fin(160), unb}},
        {1.5, 0.5, 19.90, {fin(380), fin(220), fin(160), fin(60), fin(160)}},
        {1.5, 0.5, 19.99, {fin(240), fin(160), fin(120), fin(40), fin(120)}},
    };
    return law == ServiceLaw::Exponential ? exponential : deterministic;
}

const std::vector<ReferenceGainRow>& reference_gains(ServiceLaw law) {
    static const std::vector<ReferenceGainRow> exponential{
        {0.0, 0.0, 18.00, {0.00, 0.00, 0.00, 0.00, 0.00}},
        {0.0, 0.0, 19.00, {0.00, 0.00, 0.00, 0.46, 0.00}},
        {0.0, 0.0, 19.90, {0.56, 1.93, 4.02, 21.19, 3.02}},
        {0.0, 0.0, 19.99, {2.23, 6.18, 12.07, 42.50, 9.08}},
        {0.0, 0.5, 18.00, {0.00, 0.00, 0.00, 0.00, 0.00}},
        {0.0, 0.5, 19.00, {0.00, 0.00, 0.00, 0.20, 0.00}},
        {0.0, 0.5, 19.90, {0.26, 0.84, 1.59, 8.49, 1.46}},
        {0.0, 0.5, 19.99, {1.04, 2.63, 4.57, 15.41, 4.27}},
        {1.5, 0.0, 18.00, {0.00, 0.00, 0.00, 0.00, 0.00}},
        {1.5, 0.0, 19.00, {0.00, 0.00, 0.00, 0.02, 0.00}},
        {1.5, 0.0, 19.90, {0.22, 1.09, 2.57, 16.67, 2.05}},
        {1.5, 0.0, 19.99, {1.57, 4.91, 10.03, 36.67, 7.71}},
        {1.5, 0.5, 18.00, {0.00, 0.00, 0.00, 0.00, 0.00}},
        {1.5, 0.5, 19.00, {0.00, 0.00, 0.00, 0.00, 0.00}},
        {1.5, 0.5, 19.90, {0.04, 0.29, 0.72, 5.48, 0.73}},
        {1.5, 0.5, 19.99, {0.54, 1.74, 3.31, 11.82, 3.20}},
    };
    static const std::vector<ReferenceGainRow> deterministic{
        {0.0, 0.0, 18.00, {0.00, 0.00, 0.00, 0.00, 0.00}},
        {0.0, 0.0, 19.00, {0.00, 0.00, 0.00, 0.06, 0.00}},
        {0.0, 0.0, 19.90, {0.22, 0.86, 1.86, 13.24, 1.40}},
        {0.0, 0.0, 19.99, {2.30, 6.06, 11.59, 42.60, 8.84}},
        {0.0, 0.5, 18.00, {0.00, 0.00, 0.00, 0.00, 0.00}},
        {0.0, 0.5, 19.00, {0.00, 0.00, 0.00, 0.03, 0.00}},
        {0.0, 0.5, 19.90, {0.10, 0.38, 0.75, 5.59, 0.69}},
        {0.0, 0.5, 19.99, {1.07, 2.59, 4.42, 15.65, 4.18}},
        {1.5, 0.0, 18.00, {0.00, 0.00, 0.00, 0.00, 0.00}},
        {1.5, 0.0, 19.00, {0.00, 0.00, 0.00, 0.00, 0.00}},
        {1.5, 0.0, 19.90, {0.06, 0.39, 1.02, 10.26, 0.84}},
        {1.5, 0.0, 19.99, {1.80, 5.14, 10.11, 38.14, 7.84}},
        {1.5, 0.5, 18.00, {0.00, 0.00, 0.00, 0.00, 0.00}},
        {1.5, 0.5, 19.00, {0.00, 0.00, 0.00, 0.00, 0.00}},
        {1.5, 0.5, 19.90, {0.01, 0.09, 0.25, 3.51, 0.27}},
        {1.5, 0.5, 19.99, {0.69, 1.93, 3.49, 12.87, 3.38}},
    };
    return law == ServiceLaw::Exponential ? exponential : deterministic;
}

const std::vector<ReferenceLeverRow>& reference_levers() {
    // Columns per row: fixed-mu exponential, fixed-mu deterministic,
    // optimised-mu exponential, optimised-mu deterministic.
    static const std::vector<ReferenceLeverRow> rows{
        {0.0, 0.0, "K_0.2", 0.03, 0.87, 0.20, 0.70, 0.13, 0.82, 0.11, 0.79},
        {0.0, 0.0, "K_0.4", 0.12, 0.88, 0.15, 0.87, 0.21, 0.83, 0.15, 0.82},
        {0.0, 0.0, "K_0.6", 0.20, 0.87, 0.21, 0.79, 0.29, 0.85, 0.21, 0.81},
        {0.0, 0.0, "G", 0.97, 0.81, 0.43, 0.73, 0.81, 0.84, 0.85, 0.68},
        {0.0, 0.0, "GS", 0.29, 0.80, 0.06, 0.92, 0.15, 0.87, 0.20, 0.86},
        {0.0, 0.5, "K_0.2", 0.05, 0.87, 0.05, 0.84, 0.06, 0.82, 0.05, 0.79},
        {0.0, 0.5, "K_0.4", 0.07, 0.88, 0.07, 0.87, 0.09, 0.83, 0.06, 0.82},
        {0.0, 0.5, "K_0.6", 0.09, 0.87, 0.09, 0.79, 0.12, 0.85, 0.09, 0.81},
        {0.0, 0.5, "G", 0.43, 0.81, 0.19, 0.73, 0.36, 0.84, 0.38, 0.68},
        {0.0, 0.5, "GS", 0.14, 0.80, 0.03, 0.92, 0.07, 0.87, 0.10, 0.86},
        {1.5, 0.0, "K_0.2", 0.01, 0.99, 0.01, 0.97, 0.02, 0.98, 0.02, 0.97},
        {1.5, 0.0, "K_0.4", 0.01, 0.99, 0.02, 0.98, 0.02, 0.98, 0.02, 0.98},
        {1.5, 0.0, "K_0.6", 0.01, 0.99, 0.02, 0.98, 0.02, 0.99, 0.02, 0.99},
        {1.5, 0.0, "G", 0.13, 0.96, 0.06, 0.98, 0.09, 0.97, 0.16, 0.99},
        {1.5, 0.0, "GS", 0.05, 0.96, 0.00, 1.00, 0.01, 0.99, 0.04, 0.97},
        {1.5, 0.5, "K_0.2", 0.00, 1.00, 0.00, 1.00, 0.00, 1.00, 0.00, 1.00},
        {1.5, 0.5, "K_0.4", 0.00, 1.00, 0.00, 1.00, 0.00, 1.00, 0.00, 1.00},
        {1.5, 0.5, "K_0.6", 0.00, 1.00, 0.00, 1.00, 0.00, 1.00, 0.00, 1.00},
        {1.5, 0.5, "G", 0.00, 1.00, 0.00, 1.00, 0.00, 1.00, 0.02, 0.99},
        {1.5, 0.5, "GS", 0.00, 0.99, 0.00, 1.00, 0.00, 1.00, 0.00, 0.99},
    };
    return rows;
}

const std::vector<ReferenceJointGain>& reference_joint_gains() {
    static const std::vector<ReferenceJointGain> rows{
        {0.0, 0.0},
        {1.5, 4.0},
    };
    return rows;
}

}  // namespace schedwin::refdata
