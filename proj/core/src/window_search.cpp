#include "schedwin/window_search.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace schedwin {

void WindowGrid::validate() const {
    if (k_min < 1) throw std::invalid_argument("window grid: k_min must be >= 1");
    if (k_max < k_min) throw std::invalid_argument("window grid: k_max must be >= k_min");
    if (k_step < 1) throw std::invalid_argument("window grid: k_step must be >= 1");
}

std::vector<std::int64_t> WindowGrid::points() const {
    validate();
    std::vector<std::int64_t> pts;
    pts.reserve(static_cast<std::size_t>((k_max - k_min) / k_step) + 2);
    for (std::int64_t k = k_min; k <= k_max; k += k_step) pts.push_back(k);
    if (pts.back() != k_max) pts.push_back(k_max);
    return pts;
}

double WindowSearchResult::best_value() const {
    return unbounded() ? *t_at_infinity : t_at_k_star;
}

std::optional<std::int64_t> argmax_smallest_k(
    const std::vector<std::pair<std::int64_t, double>>& trace) {
    std::optional<std::int64_t> best;
    double best_t = 0.0;
    for (const auto& [k, t] : trace) {
        if (!best || t > best_t) {
            best = k;
            best_t = t;
        }
    }
    return best;
}

WindowSearchResult optimal_window_on_curve(const RewardCurve& curve,
                                           const WindowGrid& grid,
                                           double infinity_tolerance,
                                           std::optional<double> t_infinity) {
    grid.validate();
    if (grid.k_max > curve.k_max()) {
        throw std::invalid_argument("window search: grid exceeds curve range");
    }

    WindowSearchResult res;
    res.infinity_tolerance = infinity_tolerance;
    res.t_at_infinity = t_infinity;

    const auto points = grid.points();
    res.trace.reserve(points.size());
    for (std::int64_t k : points) {
        res.trace.emplace_back(k, curve.total(k));
    }

    const auto k_best = argmax_smallest_k(res.trace);
    double t_best = 0.0;
    for (const auto& [k, t] : res.trace) {
        if (k == *k_best) {
            t_best = t;
            break;
        }
    }
    res.k_star = k_best;
    res.t_at_k_star = t_best;

    // Leave the queue unbounded when doing so costs less than the tolerance;
    // the tolerance must stay well above both the truncation error of
    // t_infinity and the accumulation error of the curve sums.
    if (t_infinity) {
        const double slack = infinity_tolerance * std::max(1.0, std::abs(*t_infinity));
        if (*t_infinity >= t_best - slack) res.k_star.reset();
    }
    return res;
}

WindowSearchResult optimal_window(ServiceLaw law, double lambda, double mu,
                                  const EconomicParams& econ,
                                  const ShowupModel& model,
                                  const WindowGrid& grid,
                                  double infinity_tolerance,
                                  double tail_tol) {
    const RewardCurve curve(law, lambda, mu, econ, model, grid.k_max);
    std::optional<double> t_inf;
    if (lambda < mu) {
        t_inf = net_reward_infinite(law, lambda, mu, econ, model, tail_tol).total;
    }
    return optimal_window_on_curve(curve, grid, infinity_tolerance, t_inf);
}

double efficiency_gain_vs_reference(const WindowSearchResult& result, double t_reference) {
    if (result.unbounded()) return 0.0;
    if (!(t_reference > 0.0)) {
        throw std::invalid_argument("efficiency gain: baseline reward must be positive");
    }
    return 100.0 * (result.t_at_k_star - t_reference) / t_reference;
}

double efficiency_gain_vs_infinite(const WindowSearchResult& result) {
    if (result.unbounded()) return 0.0;
    if (!result.t_at_infinity) {
        throw StabilityError("efficiency gain: no unbounded baseline exists for rho >= 1");
    }
    return efficiency_gain_vs_reference(result, *result.t_at_infinity);
}

double efficiency_gain_md_vs_mm(double t_md_at_kd, double t_md_at_km,
                                std::int64_t k_d,
                                bool literal_window_denominator) {
    if (literal_window_denominator) {
        if (k_d < 1) throw std::invalid_argument("efficiency gain: window must be >= 1");
        return 100.0 * (t_md_at_kd - t_md_at_km) / static_cast<double>(k_d);
    }
    if (!(t_md_at_kd > 0.0)) {
        throw std::invalid_argument("efficiency gain: baseline reward must be positive");
    }
    return 100.0 * (t_md_at_kd - t_md_at_km) / t_md_at_kd;
}

}  // namespace schedwin
