#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "schedwin/capacity_search.hpp"
#include "schedwin/showup.hpp"

using namespace schedwin;

namespace {

const LambdaGrid kLambdaGrid{10.0, 0.01, 0.1, 0.1};
const MuGrid kMuGrid{20.0, 22.0, 0.5};
const WindowGrid kWindowGrid{20, 1000, 20};

}  // namespace

TEST_CASE("panel grids validate their shapes") {
    CHECK_NOTHROW(kLambdaGrid.validate());
    CHECK_THROWS_AS((LambdaGrid{0.0, 0.01, 0.1, 0.1}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((LambdaGrid{10.0, 0.0, 0.1, 0.1}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((LambdaGrid{10.0, 0.01, 0.0, 0.1}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((LambdaGrid{10.0, 0.01, 0.1, 0.2}.validate()), std::invalid_argument);

    CHECK_THROWS_AS((MuGrid{0.0, 22.0, 0.5}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((MuGrid{22.0, 20.0, 0.5}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((MuGrid{20.0, 22.0, 0.0}.validate()), std::invalid_argument);

    CHECK(MuGrid{20.0, 21.0, 0.5}.points() == std::vector<double>{20.0, 20.5, 21.0});
    CHECK(MuGrid{20.0, 20.0, 0.1}.points() == std::vector<double>{20.0});
}

TEST_CASE("fixed capacity drives arrivals to the stability margin when everyone shows") {
    // With a sure-show population and no other economics the unbounded
    // reward is just lambda, so the panel fills to the cap mu - margin.
    const ShowupModel always = saturating_model(1.0, 1.0, 0.1);
    const EconomicParams econ{0.0, 0.0, 0.0, 20.0};
    const CapacitySearchResult r = optimal_panel(
        CapacityMode::FixedMu, ServiceLaw::Exponential, econ, always, kLambdaGrid, kMuGrid);
    CHECK(r.mode == CapacityMode::FixedMu);
    CHECK(!r.k_applicable);
    CHECK(r.mu_star == doctest::Approx(20.0));
    CHECK(r.lambda_star == doctest::Approx(19.99).epsilon(1e-12));
    CHECK(r.objective == doctest::Approx(19.99).epsilon(1e-12));
    REQUIRE(!r.trace.empty());
    for (const CapacityTracePoint& p : r.trace) CHECK(r.objective >= p.objective - 1e-12);
}

TEST_CASE("capacity optimization exploits the wider panel when everyone shows") {
    const ShowupModel always = saturating_model(1.0, 1.0, 0.1);
    const EconomicParams econ{0.0, 0.0, 0.0, 20.0};
    const CapacitySearchResult r = optimal_panel(
        CapacityMode::OptimizeMu, ServiceLaw::Exponential, econ, always, kLambdaGrid, kMuGrid);
    CHECK(r.mu_star == doctest::Approx(22.0));
    CHECK(r.lambda_star == doctest::Approx(21.99).epsilon(1e-12));
    CHECK(r.lambda_star <= r.mu_star - kLambdaGrid.margin + 1e-12);
    // One trace point per panel size, each already maximised over lambda.
    CHECK(r.trace.size() == kMuGrid.points().size());
}

TEST_CASE("joint search never falls below the two-stage baseline") {
    const ShowupModel model = kopach_model(0.2);
    for (double theta : {0.0, 1.5}) {
        const EconomicParams econ{theta, 0.5, 0.2, 20.0};
        const CapacitySearchResult r = joint_optimal(
            ServiceLaw::Exponential, econ, model, kLambdaGrid, kMuGrid, kWindowGrid, 1e-11);
        CAPTURE(theta);
        CHECK(r.mode == CapacityMode::Joint);
        CHECK(r.k_applicable);
        REQUIRE(r.sequential_objective.has_value());
        REQUIRE(r.sequential_point.has_value());
        REQUIRE(r.gain_over_sequential_percent.has_value());
        CHECK(r.objective >= *r.sequential_objective - 1e-12);
        CHECK(*r.gain_over_sequential_percent >= 0.0);
        CHECK(r.lambda_star <= r.mu_star - kLambdaGrid.margin + 1e-12);
    }

    // Free rejections let the joint stage push arrivals past the two-stage
    // operating point and truncate the no-show tail; a rejection penalty
    // makes that unprofitable and the two candidates coincide.
    const EconomicParams free_rejections{0.0, 0.5, 0.2, 20.0};
    const CapacitySearchResult gain = joint_optimal(
        ServiceLaw::Exponential, free_rejections, model, kLambdaGrid, kMuGrid,
        kWindowGrid, 1e-11);
    CHECK(*gain.gain_over_sequential_percent > 0.0);
    REQUIRE(gain.k_star.has_value());

    const EconomicParams penalised{1.5, 0.5, 0.2, 20.0};
    const CapacitySearchResult tie = joint_optimal(
        ServiceLaw::Exponential, penalised, model, kLambdaGrid, kMuGrid,
        kWindowGrid, 1e-11);
    CHECK(std::abs(*tie.gain_over_sequential_percent) <= 1e-12);
}

TEST_CASE("joint mode is rejected by the plain panel search") {
    const ShowupModel model = kopach_model(0.2);
    const EconomicParams econ{0.0, 0.0, 0.2, 20.0};
    CHECK_THROWS_AS(optimal_panel(CapacityMode::Joint, ServiceLaw::Exponential, econ,
                                  model, kLambdaGrid, kMuGrid),
                    std::invalid_argument);
}

TEST_CASE("lever report resolves the window at the chosen operating point") {
    const ShowupModel model = kopach_model(0.2);
    const EconomicParams econ{0.0, 0.0, 0.2, 20.0};
    const CapacitySearchResult capacity = optimal_panel(
        CapacityMode::FixedMu, ServiceLaw::Exponential, econ, model, kLambdaGrid, kMuGrid);
    CHECK(capacity.lambda_star == doctest::Approx(19.8).epsilon(1e-12));

    const LeverReport report = levers_efficiency_report(
        capacity, ServiceLaw::Exponential, econ, model, kWindowGrid, 1e-11, 1000);
    REQUIRE(report.window.k_star.has_value());
    CHECK(report.delta_e_percent > 0.0);
    CHECK(report.delta_e_percent < 1.0);
    CHECK(report.service_level_alpha > 0.8);
    CHECK(report.service_level_alpha < 0.95);

    CHECK_THROWS_AS(levers_efficiency_report(capacity, ServiceLaw::Exponential, econ,
                                             model, kWindowGrid, 1e-11, 2000),
                    std::invalid_argument);
}

TEST_CASE("lever report collapses to the unbounded defaults when no bound helps") {
    const ShowupModel always = saturating_model(1.0, 1.0, 0.1);
    const EconomicParams econ{0.0, 0.0, 0.0, 20.0};
    const CapacitySearchResult capacity = optimal_panel(
        CapacityMode::FixedMu, ServiceLaw::Exponential, econ, always, kLambdaGrid, kMuGrid);
    const LeverReport report = levers_efficiency_report(
        capacity, ServiceLaw::Exponential, econ, always, kWindowGrid, 1e-11, 1000);
    CHECK(report.window.unbounded());
    CHECK(report.delta_e_percent == 0.0);
    CHECK(report.service_level_alpha == 1.0);
}
