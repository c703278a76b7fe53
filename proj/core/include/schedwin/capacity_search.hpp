#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "schedwin/window_search.hpp"

namespace schedwin {

enum class CapacityMode {
    FixedMu,     // choose panel size lambda only, mu held at regular capacity
    OptimizeMu,  // choose (lambda, mu), overtime cost applies above regular capacity
    Joint,       // choose (lambda, mu, K) in one search
};

// Panel-size candidates. The grid tops out just below mu so the unbounded
// objective stays finite; fine_step refines around the coarse optimum.
struct LambdaGrid {
    double lo = 10.0;
    double margin = 0.01;      // keep lambda <= mu - margin
    double coarse_step = 0.1;
    double fine_step = 0.1;

    void validate() const;
};

struct MuGrid {
    double lo = 20.0;
    double hi = 25.0;
    double step = 0.1;

    void validate() const;
    std::vector<double> points() const;
};

struct CapacityTracePoint {
    double lambda = 0.0;
    double mu = 0.0;
    std::optional<std::int64_t> k;
    double objective = 0.0;
};

struct CapacitySearchResult {
    double lambda_star = 0.0;
    double mu_star = 0.0;
    // Joint mode only: best capacity bound, nullopt when unbounded wins.
    std::optional<std::int64_t> k_star;
    bool k_applicable = false;
    double objective = 0.0;
    CapacityMode mode = CapacityMode::FixedMu;
    // FixedMu: best objective per lambda on the coarse grid.
    // OptimizeMu / Joint: best objective per mu.
    std::vector<CapacityTracePoint> trace;
    // Joint mode only: the two-stage baseline (capacity first, window
    // second), its objective, and the percent improvement of the joint
    // search over it.
    std::optional<CapacityTracePoint> sequential_point;
    std::optional<double> sequential_objective;
    std::optional<double> gain_over_sequential_percent;
};

// Best panel size (and service rate when mode allows) for an unbounded
// system: maximises expected reward net of overtime cost, with no rejection
// term because nothing is ever turned away.
CapacitySearchResult optimal_panel(CapacityMode mode, ServiceLaw law,
                                   const EconomicParams& econ,
                                   const ShowupModel& model,
                                   const LambdaGrid& lambda_grid = {},
                                   const MuGrid& mu_grid = {});

// Effect of adding a booking window on top of a capacity decision.
struct LeverReport {
    CapacitySearchResult capacity;
    WindowSearchResult window;
    // Percent reward gain of imposing the window at (lambda*, mu*).
    double delta_e_percent = 0.0;
    // Share of booking requests still accepted under the window.
    double service_level_alpha = 1.0;
};

LeverReport levers_efficiency_report(const CapacitySearchResult& capacity,
                                     ServiceLaw law, const EconomicParams& econ,
                                     const ShowupModel& model,
                                     const WindowGrid& window_grid = {},
                                     double infinity_tolerance = 1e-11,
                                     std::optional<std::int64_t> reference_window = {});

// One-shot search over (lambda, mu, K or unbounded). Also runs the two-stage
// capacity-then-window baseline and reports the joint improvement over it.
CapacitySearchResult joint_optimal(ServiceLaw law, const EconomicParams& econ,
                                   const ShowupModel& model,
                                   const LambdaGrid& lambda_grid = {},
                                   const MuGrid& mu_grid = {},
                                   const WindowGrid& window_grid = {},
                                   double infinity_tolerance = 1e-11);

}  // namespace schedwin
