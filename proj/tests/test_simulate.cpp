#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "doctest.h"
#include "schedwin/errors.hpp"
#include "schedwin/queues.hpp"
#include "schedwin/reward.hpp"
#include "schedwin/showup.hpp"
#include "schedwin/simulate.hpp"

using namespace schedwin;

namespace {

SimConfig short_run(QueueSpec spec, ShowupModel showup, EconomicParams econ,
                    std::uint64_t seed) {
    SimConfig cfg;
    cfg.spec = spec;
    cfg.showup = showup;
    cfg.econ = econ;
    cfg.horizon_days = 24000.0;
    cfg.warmup_days = 4000.0;
    cfg.seed = seed;
    return cfg;
}

// |observed - expected| measured in standard errors, floored to keep
// near-exact states from dividing by a vanishing spread.
double z_score(double observed, double expected, double se) {
    return std::abs(observed - expected) / std::max(se, 1e-9);
}

}  // namespace

TEST_CASE("same seed reproduces the run, different seeds vary it") {
    const SimConfig cfg = short_run({10.0, 20.0, 3, ServiceLaw::Exponential},
                                    kopach_model(0.2), EconomicParams{1.5, 0.5, 0.0, 20.0},
                                    42);
    const SimResult a = simulate(cfg);
    const SimResult b = simulate(cfg);
    CHECK(a.arrivals == b.arrivals);
    CHECK(a.reward_per_day == b.reward_per_day);
    CHECK(a.occupancy == b.occupancy);

    SimConfig other = cfg;
    other.seed = 43;
    CHECK(simulate(other).arrivals != a.arrivals);
}

TEST_CASE("request accounting balances") {
    const SimResult r = simulate(short_run({19.9, 20.0, 5, ServiceLaw::Exponential},
                                           kopach_model(0.4),
                                           EconomicParams{1.5, 0.5, 0.0, 20.0}, 7));
    CHECK(r.arrivals == r.admitted + r.rejected);
    // Admissions are counted on arrival, show tags on departure; the two
    // totals can differ only by the populations straddling the measurement
    // window's edges, each at most the capacity bound.
    CHECK(std::abs(r.admitted - (r.shows + r.noshows)) <= 10);
    CHECK(r.arrivals > 0);
    CHECK(r.rejected > 0);
    CHECK(r.duration_days == doctest::Approx(20000.0));
}

TEST_CASE("an empty panel earns exactly the ancillary rate") {
    const SimResult r = simulate(short_run({0.0, 20.0, 5, ServiceLaw::Exponential},
                                           kopach_model(0.2),
                                           EconomicParams{0.0, 0.5, 0.0, 20.0}, 11));
    CHECK(r.arrivals == 0);
    CHECK(r.visit_rate == 0.0);
    CHECK(r.reward_per_day == doctest::Approx(10.0).epsilon(1e-14));
    CHECK(r.reward_se == doctest::Approx(0.0));
}

TEST_CASE("simulated occupancy matches the exponential-service law") {
    const QueueSpec spec{10.0, 20.0, 3, ServiceLaw::Exponential};
    const SimResult r = simulate(short_run(spec, kopach_model(0.2),
                                           EconomicParams{0.0, 0.0, 0.0, 20.0}, 1234));
    const StationaryDistribution ref = mm1k_distribution(10.0, 20.0, 3);
    REQUIRE(r.occupancy.size() >= ref.probs.size());
    for (std::size_t j = 0; j < ref.probs.size(); ++j) {
        CAPTURE(j);
        CHECK(z_score(r.occupancy[j], ref.probs[j], r.occupancy_se[j]) < 3.5);
    }
}

TEST_CASE("simulated occupancy matches the deterministic-service law") {
    const QueueSpec spec{15.0, 20.0, 2, ServiceLaw::Deterministic};
    const SimResult r = simulate(short_run(spec, kopach_model(0.2),
                                           EconomicParams{0.0, 0.0, 0.0, 20.0}, 99));
    const StationaryDistribution ref = md1k_distribution(15.0, 20.0, 2);
    REQUIRE(r.occupancy.size() >= ref.probs.size());
    for (std::size_t j = 0; j < ref.probs.size(); ++j) {
        CAPTURE(j);
        CHECK(z_score(r.occupancy[j], ref.probs[j], r.occupancy_se[j]) < 3.5);
    }
}

TEST_CASE("arriving requests see the time-stationary occupancy") {
    const SimResult r = simulate(short_run({18.0, 20.0, 4, ServiceLaw::Exponential},
                                           kopach_model(0.2),
                                           EconomicParams{0.0, 0.0, 0.0, 20.0}, 5));
    REQUIRE(r.arrival_seen.size() == r.occupancy.size());
    for (std::size_t j = 0; j < r.occupancy.size(); ++j) {
        CAPTURE(j);
        CHECK(std::abs(r.arrival_seen[j] - r.occupancy[j]) < 0.01);
    }
}

TEST_CASE("simulated reward reproduces the analytic objective") {
    const QueueSpec spec{19.9, 20.0, 30, ServiceLaw::Exponential};
    const ShowupModel model = kopach_model(0.4);
    const EconomicParams econ{1.5, 0.5, 0.0, 20.0};
    const SimResult r = simulate(short_run(spec, model, econ, 2025));

    // Component identity holds path by path, not just in expectation.
    CHECK(r.reward_per_day ==
          doctest::Approx(r.visit_rate + r.ancillary_rate -
                          econ.theta * r.rejection_rate)
              .epsilon(1e-12));
    CHECK(r.ancillary_rate ==
          doctest::Approx(econ.xi * (spec.mu - r.visit_rate)).epsilon(1e-12));

    const RewardBreakdown analytic = net_reward(stationary_distribution(spec), econ, model);
    CHECK(z_score(r.reward_per_day, analytic.total, r.reward_se) < 3.5);
}

TEST_CASE("daily occupancy is recorded only on request") {
    SimConfig cfg = short_run({10.0, 20.0, 3, ServiceLaw::Exponential},
                              kopach_model(0.2), EconomicParams{0.0, 0.0, 0.0, 20.0}, 3);
    cfg.horizon_days = 500.0;
    cfg.warmup_days = 100.0;
    CHECK(simulate(cfg).daily_occupancy.empty());

    cfg.record_daily_occupancy = true;
    const SimResult r = simulate(cfg);
    CHECK(r.daily_occupancy.size() == 500);
    double mean = 0.0;
    for (double occ : r.daily_occupancy) {
        CHECK(occ >= 0.0);
        CHECK(occ <= 3.0);
        mean += occ;
    }
    mean /= static_cast<double>(r.daily_occupancy.size());
    CHECK(mean == doctest::Approx(mm1k_distribution(10.0, 20.0, 3).mean()).epsilon(0.25));
}

TEST_CASE("simulation config validation mirrors the analytic preconditions") {
    SimConfig cfg = short_run({10.0, 20.0, 3, ServiceLaw::Exponential},
                              kopach_model(0.2), EconomicParams{0.0, 0.0, 0.0, 20.0}, 1);
    CHECK_NOTHROW(cfg.validate());

    SimConfig bad = cfg;
    bad.warmup_days = bad.horizon_days;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.batches = 1;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.spec.capacity.reset();
    bad.spec.lambda = 25.0;
    CHECK_THROWS_AS(bad.validate(), StabilityError);
    bad = cfg;
    bad.horizon_days = -1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
