#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "doctest.h"
#include "schedwin/errors.hpp"
#include "schedwin/reward.hpp"
#include "schedwin/showup.hpp"
#include "schedwin/window_search.hpp"

using namespace schedwin;

namespace {

const EconomicParams kBaseEcon{1.5, 0.5, 0.0, 20.0};

std::optional<std::int64_t> window_at(double lambda, double theta, double xi) {
    const WindowSearchResult r =
        optimal_window(ServiceLaw::Exponential, lambda, 20.0,
                       EconomicParams{theta, xi, 0.0, 20.0}, kopach_model(0.2),
                       WindowGrid{20, 1000, 20});
    return r.k_star;
}

}  // namespace

TEST_CASE("smallest maximiser wins ties in a sweep trace") {
    using Trace = std::vector<std::pair<std::int64_t, double>>;
    CHECK(argmax_smallest_k(Trace{{20, 1.0}, {40, 2.0}, {60, 3.0}}) == 60);
    CHECK(argmax_smallest_k(Trace{{20, 1.0}, {40, 2.0}, {60, 2.0}}) == 40);
    CHECK(argmax_smallest_k(Trace{{20, 5.0}}) == 20);
    CHECK(argmax_smallest_k(Trace{}) == std::nullopt);
}

TEST_CASE("flat sweeps fall back to the smallest candidate") {
    // No arrivals: the objective is the constant mu xi, flat in K.
    const ShowupModel always = saturating_model(1.0, 1.0, 0.1);
    const RewardCurve curve(ServiceLaw::Exponential, 0.0, 20.0,
                            EconomicParams{0.0, 0.5, 0.0, 20.0}, always, 200);
    const WindowSearchResult r =
        optimal_window_on_curve(curve, WindowGrid{20, 200, 20}, 1e-11, std::nullopt);
    REQUIRE(!r.unbounded());
    CHECK(*r.k_star == 20);
    CHECK(r.t_at_k_star == doctest::Approx(10.0).epsilon(1e-14));
    for (const auto& [k, t] : r.trace) CHECK(t == doctest::Approx(10.0).epsilon(1e-14));
}

TEST_CASE("improving curves declare the unbounded system optimal") {
    // Every appointee shows and rejections are free, so throughput only
    // grows with the bound and no finite window should be declared.
    const ShowupModel always = saturating_model(1.0, 1.0, 0.1);
    const WindowSearchResult r =
        optimal_window(ServiceLaw::Exponential, 10.0, 20.0,
                       EconomicParams{0.0, 0.0, 0.0, 20.0}, always,
                       WindowGrid{20, 400, 20});
    CHECK(r.unbounded());
    REQUIRE(r.t_at_infinity.has_value());
    CHECK(*r.t_at_infinity == doctest::Approx(10.0).epsilon(1e-10));
    CHECK(r.best_value() == doctest::Approx(10.0).epsilon(1e-10));
    CHECK(efficiency_gain_vs_infinite(r) == 0.0);
    CHECK(efficiency_gain_vs_reference(r, 5.0) == 0.0);
}

TEST_CASE("saturated systems always get a finite bound") {
    const WindowSearchResult r =
        optimal_window(ServiceLaw::Exponential, 22.0, 20.0, kBaseEcon,
                       kopach_model(0.2), WindowGrid{20, 400, 20});
    CHECK(!r.t_at_infinity.has_value());
    REQUIRE(r.k_star.has_value());
    CHECK_THROWS_AS(efficiency_gain_vs_infinite(r), StabilityError);
}

TEST_CASE("search reports the grid maximum with its trace") {
    for (ServiceLaw law : {ServiceLaw::Exponential, ServiceLaw::Deterministic}) {
        const WindowSearchResult r =
            optimal_window(law, 19.9, 20.0, kBaseEcon, kopach_model(0.4),
                           WindowGrid{20, 1000, 20});
        CAPTURE(static_cast<int>(law));
        REQUIRE(r.k_star.has_value());
        CHECK(*r.k_star % 20 == 0);
        double best = r.trace.front().second;
        for (const auto& [k, t] : r.trace) {
            CHECK(t <= r.t_at_k_star + 1e-14);
            best = std::max(best, t);
        }
        CHECK(r.t_at_k_star == doctest::Approx(best).epsilon(1e-14));
        REQUIRE(r.t_at_infinity.has_value());
        CHECK(r.t_at_k_star > *r.t_at_infinity);
    }
}

TEST_CASE("direct and prebuilt-curve searches agree") {
    const ShowupModel model = kopach_model(0.4);
    const RewardCurve curve(ServiceLaw::Deterministic, 19.9, 20.0, kBaseEcon, model, 600);
    const double t_inf =
        net_reward_infinite(ServiceLaw::Deterministic, 19.9, 20.0, kBaseEcon, model).total;
    const WindowSearchResult on_curve =
        optimal_window_on_curve(curve, WindowGrid{20, 600, 20}, 1e-11, t_inf);
    const WindowSearchResult direct =
        optimal_window(ServiceLaw::Deterministic, 19.9, 20.0, kBaseEcon, model,
                       WindowGrid{20, 600, 20});
    REQUIRE(on_curve.k_star.has_value());
    REQUIRE(direct.k_star.has_value());
    CHECK(*on_curve.k_star == *direct.k_star);
    CHECK(on_curve.t_at_k_star == doctest::Approx(direct.t_at_k_star).epsilon(1e-12));
}

TEST_CASE("window grids validate and enumerate inclusively") {
    CHECK_THROWS_AS((WindowGrid{0, 100, 20}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((WindowGrid{100, 20, 20}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((WindowGrid{20, 100, 0}.validate()), std::invalid_argument);

    CHECK(WindowGrid{20, 80, 30}.points() == std::vector<std::int64_t>{20, 50, 80});
    // k_max joins the grid even when the step does not land on it.
    CHECK(WindowGrid{20, 100, 30}.points() == std::vector<std::int64_t>{20, 50, 80, 100});
    CHECK(WindowGrid{40, 40, 20}.points() == std::vector<std::int64_t>{40});

    const RewardCurve small(ServiceLaw::Exponential, 10.0, 20.0, kBaseEcon,
                            kopach_model(0.2), 100);
    CHECK_THROWS_AS(
        optimal_window_on_curve(small, WindowGrid{20, 200, 20}, 1e-11, std::nullopt),
        std::invalid_argument);
}

TEST_CASE("window tightens with load and relaxes with the rejection penalty") {
    const auto k_198 = window_at(19.8, 1.5, 0.5);
    const auto k_199 = window_at(19.9, 1.5, 0.5);
    const auto k_1999 = window_at(19.99, 1.5, 0.5);
    REQUIRE(k_198.has_value());
    REQUIRE(k_199.has_value());
    REQUIRE(k_1999.has_value());
    CHECK(*k_198 >= *k_199);
    CHECK(*k_199 >= *k_1999);

    // A rejection penalty only ever argues for a looser bound; it can even
    // push the optimum back to the unbounded system.
    const auto k_free = window_at(19.9, 0.0, 0.5);
    REQUIRE(k_free.has_value());
    CHECK(*k_free <= *k_199);
    CHECK(window_at(19.5, 0.0, 0.5).has_value());
    CHECK(!window_at(19.5, 1.5, 0.5).has_value());
}

TEST_CASE("efficiency gains guard their baselines") {
    const WindowSearchResult finite =
        optimal_window(ServiceLaw::Exponential, 19.9, 20.0, kBaseEcon,
                       kopach_model(0.2), WindowGrid{20, 1000, 20});
    REQUIRE(finite.k_star.has_value());
    CHECK(efficiency_gain_vs_infinite(finite) > 0.0);
    CHECK(efficiency_gain_vs_reference(finite, finite.t_at_k_star) ==
          doctest::Approx(0.0).epsilon(1e-14));
    CHECK_THROWS_AS(efficiency_gain_vs_reference(finite, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(efficiency_gain_vs_reference(finite, -3.0), std::invalid_argument);

    CHECK(efficiency_gain_md_vs_mm(10.0, 10.0, 200) == 0.0);
    CHECK(efficiency_gain_md_vs_mm(10.0, 5.0, 200) == doctest::Approx(50.0));
    CHECK(efficiency_gain_md_vs_mm(10.0, 5.0, 200, true) ==
          doctest::Approx(100.0 * 5.0 / 200.0));
    CHECK_THROWS_AS(efficiency_gain_md_vs_mm(0.0, 1.0, 200), std::invalid_argument);
    CHECK_THROWS_AS(efficiency_gain_md_vs_mm(10.0, 5.0, 0, true), std::invalid_argument);
}
