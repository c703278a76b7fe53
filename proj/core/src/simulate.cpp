#include "schedwin/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <random>
#include <stdexcept>

namespace schedwin {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Draws are hand-rolled on top of the raw engine so that results are
// identical across standard library implementations.
struct Draws {
    std::mt19937_64 rng;

    explicit Draws(std::uint64_t seed) : rng(seed) {}

    double u01() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }
    double exponential(double rate) { return -std::log1p(-u01()) / rate; }
    bool bernoulli(double p) { return u01() < p; }
};

double stddev(const std::vector<double>& v) {
    const double n = static_cast<double>(v.size());
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= n;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / (n - 1.0));
}

}  // namespace

void SimConfig::validate() const {
    spec.validate();
    showup.validate();
    econ.validate();
    if (!(horizon_days > 0.0) || !std::isfinite(horizon_days)) {
        throw std::invalid_argument("simulate: horizon_days must be finite and > 0");
    }
    if (!(warmup_days >= 0.0) || warmup_days >= horizon_days) {
        throw std::invalid_argument("simulate: need 0 <= warmup_days < horizon_days");
    }
    if (batches < 2) throw std::invalid_argument("simulate: batches must be >= 2");
    if (!spec.capacity && spec.rho() >= 1.0) {
        throw StabilityError("simulate: unbounded queue needs lambda < mu");
    }
}

SimResult simulate(const SimConfig& config) {
    config.validate();

    const double lambda = config.spec.lambda;
    const double mu = config.spec.mu;
    const double theta = config.econ.theta;
    const double xi = config.econ.xi;
    const bool bounded = config.spec.capacity.has_value();
    const std::int64_t cap = bounded ? *config.spec.capacity : 0;
    const bool deterministic = config.spec.service_law == ServiceLaw::Deterministic;

    const double horizon = config.horizon_days;
    const double warmup = config.warmup_days;
    const int b_count = config.batches;
    const double batch_len = (horizon - warmup) / b_count;

    Draws draws(config.seed);
    const auto service_time = [&] {
        return deterministic ? 1.0 / mu : draws.exponential(mu);
    };

    std::size_t levels = bounded ? static_cast<std::size_t>(cap) + 1 : 64;
    std::vector<double> occ_time(levels, 0.0);
    std::vector<std::vector<double>> batch_occ(
        static_cast<std::size_t>(b_count), std::vector<double>(levels, 0.0));
    std::vector<double> arrival_hist(levels, 0.0);
    std::vector<double> batch_visits(static_cast<std::size_t>(b_count), 0.0);
    std::vector<double> batch_anc(static_cast<std::size_t>(b_count), 0.0);
    std::vector<double> batch_rej(static_cast<std::size_t>(b_count), 0.0);

    const auto ensure_levels = [&](std::size_t need) {
        if (need < levels) return;
        levels = need + 17;
        occ_time.resize(levels, 0.0);
        arrival_hist.resize(levels, 0.0);
        for (auto& h : batch_occ) h.resize(levels, 0.0);
    };
    const auto batch_of = [&](double when) {
        const double idx = (when - warmup) / batch_len;
        return std::min<std::size_t>(static_cast<std::size_t>(b_count) - 1,
                                     static_cast<std::size_t>(std::max(0.0, idx)));
    };

    double t = 0.0;
    std::int64_t n = 0;
    std::deque<bool> show_tags;  // admission order; front departs next
    double arrive_at = lambda > 0.0 ? draws.exponential(lambda) : kInf;
    double depart_at = kInf;

    SimResult res;
    std::vector<double> daily;
    if (config.record_daily_occupancy) {
        daily.assign(static_cast<std::size_t>(std::ceil(horizon)) + 1, 0.0);
    }

    // Time the system spends at occupancy n between t0 and t1, cut at the
    // warmup boundary and sliced across batch windows.
    const auto accrue = [&](double t0, double t1) {
        if (config.record_daily_occupancy) {
            double s0 = t0;
            while (s0 < t1) {
                const auto day = static_cast<std::size_t>(s0);
                const double day_end = std::min(t1, std::floor(s0) + 1.0);
                daily[day] += static_cast<double>(n) * (day_end - s0);
                s0 = day_end;
            }
        }
        double s = std::max(t0, warmup);
        if (t1 <= s) return;
        ensure_levels(static_cast<std::size_t>(n));
        while (s < t1) {
            const std::size_t b = batch_of(s);
            const double b_end =
                b + 1 == static_cast<std::size_t>(b_count)
                    ? horizon
                    : warmup + static_cast<double>(b + 1) * batch_len;
            const double e = std::min(t1, b_end);
            const double dur = e - s;
            occ_time[static_cast<std::size_t>(n)] += dur;
            batch_occ[b][static_cast<std::size_t>(n)] += dur;
            s = e;
        }
    };

    while (t < horizon) {
        const double t_next = std::min({arrive_at, depart_at, horizon});
        accrue(t, t_next);
        t = t_next;
        if (t >= horizon) break;

        if (depart_at <= arrive_at) {
            // Departure first on ties so a simultaneous arrival sees the
            // freed slot.
            const bool showed = show_tags.front();
            show_tags.pop_front();
            --n;
            if (t >= warmup) {
                if (showed) {
                    ++res.shows;
                    batch_visits[batch_of(t)] += 1.0;
                } else {
                    ++res.noshows;
                }
            }
            depart_at = n > 0 ? t + service_time() : kInf;
        } else {
            const bool measured = t >= warmup;
            if (measured) {
                ++res.arrivals;
                ensure_levels(static_cast<std::size_t>(n));
                arrival_hist[static_cast<std::size_t>(n)] += 1.0;
            }
            if (bounded && n == cap) {
                if (measured) {
                    ++res.rejected;
                    batch_rej[batch_of(t)] += 1.0;
                }
            } else {
                // A request finding n in the system books the (n+1)-th slot;
                // its show-up odds are fixed by that position now.
                const bool will_show =
                    draws.bernoulli(config.showup.at_position(n, mu));
                show_tags.push_back(will_show);
                ++n;
                if (measured) ++res.admitted;
                if (n == 1) depart_at = t + service_time();
            }
            arrive_at = t + draws.exponential(lambda);
        }
    }

    const double duration = horizon - warmup;
    res.duration_days = duration;

    res.occupancy.resize(levels);
    res.occupancy_se.resize(levels);
    res.arrival_seen.resize(levels);
    std::vector<double> batch_frac(static_cast<std::size_t>(b_count));
    for (std::size_t j = 0; j < levels; ++j) {
        res.occupancy[j] = occ_time[j] / duration;
        for (std::size_t b = 0; b < static_cast<std::size_t>(b_count); ++b) {
            batch_frac[b] = batch_occ[b][j] / batch_len;
        }
        res.occupancy_se[j] = stddev(batch_frac) / std::sqrt(static_cast<double>(b_count));
        res.arrival_seen[j] =
            res.arrivals > 0 ? arrival_hist[j] / static_cast<double>(res.arrivals) : 0.0;
    }

    double visits = 0.0;
    double anc = 0.0;
    double rej = 0.0;
    std::vector<double> batch_rate(static_cast<std::size_t>(b_count));
    for (std::size_t b = 0; b < static_cast<std::size_t>(b_count); ++b) {
        // Ancillary revenue accrues on the capacity left unused by completed
        // visits, mirroring the analytic objective's xi (mu - visit rate).
        batch_anc[b] = xi * (mu * batch_len - batch_visits[b]);
        visits += batch_visits[b];
        anc += batch_anc[b];
        rej += batch_rej[b];
        batch_rate[b] = (batch_visits[b] + batch_anc[b] - theta * batch_rej[b]) / batch_len;
    }
    res.visit_rate = visits / duration;
    res.ancillary_rate = anc / duration;
    res.rejection_rate = rej / duration;
    res.reward_per_day = (visits + anc - theta * rej) / duration;
    res.reward_se = stddev(batch_rate) / std::sqrt(static_cast<double>(b_count));

    if (config.record_daily_occupancy) {
        const auto day_count = static_cast<std::size_t>(std::ceil(horizon));
        res.daily_occupancy.resize(day_count);
        for (std::size_t d = 0; d < day_count; ++d) {
            const double overlap = std::min(horizon, static_cast<double>(d) + 1.0) -
                                   static_cast<double>(d);
            res.daily_occupancy[d] = daily[d] / overlap;
        }
    }
    return res;
}

}  // namespace schedwin
