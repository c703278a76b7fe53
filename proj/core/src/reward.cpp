#include "schedwin/reward.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace schedwin {

namespace {

// Show-up probabilities at consecutive queue positions. The affine form
// q_j = offset + scale * g^j allows one multiply per step; the exponential
// is re-evaluated exactly every 64 steps so drift stays ~eps over arbitrarily
// long sweeps.
class PositionShowup {
public:
    PositionShowup(const ShowupModel& model, double mu)
        : f_(model.affine_exp()),
          delta_(model.delay_map == DelayMap::SlotsAsDays ? 1.0 : 1.0 / mu),
          offset_(static_cast<double>(model.position_offset)),
          growth_(std::exp(-f_.rate * delta_)) {}

    double next() {
        if ((j_ & 63) == 0) {
            e_ = std::exp(-f_.rate * delta_ * (static_cast<double>(j_) + offset_));
        }
        const double q = f_.offset + f_.scale * e_;
        e_ *= growth_;
        ++j_;
        return q;
    }

private:
    AffineExp f_;
    double delta_;
    double offset_;
    double growth_;
    double e_ = 1.0;
    std::uint64_t j_ = 0;
};

struct Accumulator {
    double sum = 0.0;
    double carry = 0.0;

    void add(double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) {
            carry += (sum - t) + v;
        } else {
            carry += (v - t) + sum;
        }
        sum = t;
    }
    double value() const { return sum + carry; }
};

}  // namespace

void EconomicParams::validate() const {
    if (!(theta >= 0.0) || !std::isfinite(theta)) {
        throw std::invalid_argument("economics: theta must be finite and >= 0");
    }
    if (!(xi >= 0.0) || !std::isfinite(xi)) {
        throw std::invalid_argument("economics: xi must be finite and >= 0");
    }
    if (!(overtime_a >= 0.0) || !std::isfinite(overtime_a)) {
        throw std::invalid_argument("economics: overtime_a must be finite and >= 0");
    }
    if (!(regular_capacity_M > 0.0) || !std::isfinite(regular_capacity_M)) {
        throw std::invalid_argument("economics: regular_capacity_M must be finite and > 0");
    }
}

double overtime_cost(double mu, const EconomicParams& econ) {
    const double above = std::max(0.0, mu - econ.regular_capacity_M);
    return econ.overtime_a * above * above;
}

RewardBreakdown net_reward(const StationaryDistribution& dist,
                           const EconomicParams& econ,
                           const ShowupModel& model) {
    econ.validate();
    model.validate();
    if (!dist.spec.capacity) {
        return net_reward_infinite(dist, econ, model);
    }

    const double lambda = dist.spec.lambda;
    const double mu = dist.spec.mu;
    const std::size_t k = static_cast<std::size_t>(*dist.spec.capacity);

    PositionShowup q(model, mu);
    Accumulator visits;
    for (std::size_t j = 0; j < k; ++j) {
        visits.add(dist.probs[j] * q.next());
    }

    RewardBreakdown r;
    r.visit_revenue = lambda * visits.value();
    r.ancillary_revenue = econ.xi * (mu - r.visit_revenue);
    r.rejection_cost = lambda * econ.theta * dist.probs[k];
    r.total = r.visit_revenue + r.ancillary_revenue - r.rejection_cost;
    r.occupancy_zero = dist.probs[0];
    r.idle_fraction = dist.probs[0];
    return r;
}

RewardBreakdown net_reward_infinite(const StationaryDistribution& unbounded,
                                    const EconomicParams& econ,
                                    const ShowupModel& model) {
    econ.validate();
    model.validate();
    if (unbounded.spec.capacity) {
        throw std::invalid_argument("net_reward_infinite: distribution has a capacity bound");
    }

    const double lambda = unbounded.spec.lambda;
    const double mu = unbounded.spec.mu;
    const double rho = unbounded.spec.rho();

    PositionShowup q(model, mu);
    Accumulator visits;
    for (double p : unbounded.probs) {
        visits.add(p * q.next());
    }

    RewardBreakdown r;
    r.visit_revenue = lambda * visits.value();
    r.ancillary_revenue = econ.xi * (mu - r.visit_revenue);
    r.rejection_cost = 0.0;
    r.total = r.visit_revenue + r.ancillary_revenue;
    r.occupancy_zero = unbounded.probs.empty() ? 0.0 : unbounded.probs[0];
    r.idle_fraction = 1.0 - rho;
    // Only the visit sum is truncated, and the total depends on it through
    // the factor (1 - xi); each missing state contributes at most lambda*pi_j.
    r.truncation_error_bound = std::abs(1.0 - econ.xi) * lambda * unbounded.tail_mass;
    return r;
}

RewardBreakdown net_reward_infinite(ServiceLaw law, double lambda, double mu,
                                    const EconomicParams& econ,
                                    const ShowupModel& model,
                                    double tail_tol) {
    const StationaryDistribution dist =
        law == ServiceLaw::Exponential ? mm1_distribution(lambda, mu, tail_tol)
                                       : md1_distribution(lambda, mu, tail_tol);
    return net_reward_infinite(dist, econ, model);
}

double net_reward_infinite_closed(ServiceLaw law, double lambda, double mu,
                                  const EconomicParams& econ,
                                  const ShowupModel& model) {
    econ.validate();
    model.validate();
    QueueSpec spec{lambda, mu, std::nullopt, law};
    spec.validate();
    const double rho = spec.rho();
    if (rho >= 1.0) {
        throw StabilityError("closed-form reward: requires lambda < mu");
    }

    const AffineExp f = model.affine_exp();
    const double delta = model.delay_map == DelayMap::SlotsAsDays ? 1.0 : 1.0 / mu;
    // q_j = offset + scale * z^(j + position_offset) with z in (0, 1]
    const double z = std::exp(-f.rate * delta);
    const double head = f.scale * std::pow(z, static_cast<double>(model.position_offset));

    double decayed;  // sum_j pi_j z^j
    if (law == ServiceLaw::Exponential) {
        decayed = (1.0 - rho) / (1.0 - rho * z);
    } else {
        // PGF of M/D/1 occupancy: P(z) = (1-rho)(1-z)A(z)/(A(z)-z) with
        // A(z) = exp(rho(z-1)); written via expm1 so the denominator stays
        // accurate as z -> 1.
        const double u = z - 1.0;
        if (u == 0.0) {
            decayed = 1.0;
        } else {
            decayed = (1.0 - rho) * (-u) * std::exp(rho * u) / (std::expm1(rho * u) - u);
        }
    }
    const double mean_q = f.offset + head * decayed;

    const double visit = lambda * mean_q;
    return visit + econ.xi * (mu - visit);
}

double service_level(const StationaryDistribution& unbounded, std::int64_t k_star) {
    if (k_star < 1) throw std::invalid_argument("service_level: k_star must be >= 1");
    if (unbounded.spec.capacity) {
        throw std::invalid_argument("service_level: expects the unbounded distribution");
    }
    return unbounded.cumulative(k_star);
}

RewardCurve::RewardCurve(ServiceLaw law, double lambda, double mu,
                         const EconomicParams& econ, const ShowupModel& model,
                         std::int64_t k_max)
    : law_(law), lambda_(lambda), mu_(mu), econ_(econ), model_(model), k_max_(k_max) {
    econ_.validate();
    model_.validate();
    if (k_max < 1) throw std::invalid_argument("reward curve: k_max must be >= 1");
    QueueSpec{lambda, mu, k_max, law}.validate();

    const std::size_t count = static_cast<std::size_t>(k_max) + 1;
    auto w = detail::OccupancyWeights::build(law, lambda, mu, count);
    x_ = std::move(w.x);
    sum_x_ = std::move(w.prefix);

    PositionShowup q(model_, mu_);
    sum_xq_.resize(count);
    Accumulator acc;
    for (std::size_t j = 0; j < count; ++j) {
        acc.add(x_[j] * q.next());
        sum_xq_[j] = acc.value();
    }
}

RewardBreakdown RewardCurve::breakdown(std::int64_t k) const {
    if (k < 1 || k > k_max_) {
        throw std::invalid_argument("reward curve: k outside constructed range");
    }
    const std::size_t kk = static_cast<std::size_t>(k);

    RewardBreakdown r;
    if (law_ == ServiceLaw::Exponential) {
        const double d = sum_x_[kk];
        r.visit_revenue = lambda_ * sum_xq_[kk - 1] / d;
        r.rejection_cost = lambda_ * econ_.theta * (x_[kk] / d);
        r.occupancy_zero = x_[0] / d;
    } else {
        const double s = sum_x_[kk - 1];
        const double rho = lambda_ / mu_;
        const double d = rho * s + x_[0];
        r.visit_revenue = lambda_ * sum_xq_[kk - 1] / d;
        r.rejection_cost = lambda_ * econ_.theta * std::max(0.0, 1.0 - s / d);
        r.occupancy_zero = x_[0] / d;
    }
    r.ancillary_revenue = econ_.xi * (mu_ - r.visit_revenue);
    r.idle_fraction = r.occupancy_zero;
    r.total = r.visit_revenue + r.ancillary_revenue - r.rejection_cost;
    return r;
}

double RewardCurve::total(std::int64_t k) const {
    return breakdown(k).total;
}

}  // namespace schedwin
