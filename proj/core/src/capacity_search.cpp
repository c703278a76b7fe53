#include "schedwin/capacity_search.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace schedwin {

namespace {

// Ascending grid lo, lo+step, ..., hi with hi always included; index-based so
// no drift accumulates across steps.
std::vector<double> linear_grid(double lo, double hi, double step) {
    std::vector<double> pts;
    if (hi <= lo) {
        pts.push_back(lo);
        return pts;
    }
    const double span = hi - lo;
    const auto n = static_cast<std::size_t>(std::floor(span / step + 1e-9));
    pts.reserve(n + 2);
    for (std::size_t i = 0; i <= n; ++i) pts.push_back(lo + static_cast<double>(i) * step);
    if (pts.back() < hi - step * 1e-9) pts.push_back(hi);
    return pts;
}

// Unbounded objective: reward with nothing ever rejected, net of overtime.
double panel_objective(ServiceLaw law, double lambda, double mu,
                       const EconomicParams& econ, const ShowupModel& model) {
    return net_reward_infinite_closed(law, lambda, mu, econ, model) -
           overtime_cost(mu, econ);
}

struct LambdaBest {
    double lambda = 0.0;
    double objective = 0.0;
};

// Coarse sweep over the full panel range, fine sweep around the coarse
// winner. Ascending order plus strict improvement keeps the smallest
// maximiser on ties.
LambdaBest best_lambda_at_mu(ServiceLaw law, double mu, const EconomicParams& econ,
                             const ShowupModel& model, const LambdaGrid& grid,
                             std::vector<CapacityTracePoint>* coarse_trace) {
    const double hi = mu - grid.margin;
    if (hi < grid.lo) {
        throw std::invalid_argument("capacity search: empty panel grid, mu too small");
    }

    LambdaBest best;
    bool have = false;
    for (double lambda : linear_grid(grid.lo, hi, grid.coarse_step)) {
        const double obj = panel_objective(law, lambda, mu, econ, model);
        if (coarse_trace) coarse_trace->push_back({lambda, mu, std::nullopt, obj});
        if (!have || obj > best.objective) {
            best = {lambda, obj};
            have = true;
        }
    }

    const double fine_lo = std::max(grid.lo, best.lambda - grid.coarse_step);
    const double fine_hi = std::min(hi, best.lambda + grid.coarse_step);
    for (double lambda : linear_grid(fine_lo, fine_hi, grid.fine_step)) {
        const double obj = panel_objective(law, lambda, mu, econ, model);
        if (obj > best.objective) best = {lambda, obj};
    }
    return best;
}

}  // namespace

void LambdaGrid::validate() const {
    if (!(lo > 0.0)) throw std::invalid_argument("lambda grid: lo must be > 0");
    if (!(margin > 0.0)) throw std::invalid_argument("lambda grid: margin must be > 0");
    if (!(coarse_step > 0.0) || !(fine_step > 0.0)) {
        throw std::invalid_argument("lambda grid: steps must be > 0");
    }
    if (fine_step > coarse_step) {
        throw std::invalid_argument("lambda grid: fine_step must not exceed coarse_step");
    }
}

void MuGrid::validate() const {
    if (!(lo > 0.0)) throw std::invalid_argument("mu grid: lo must be > 0");
    if (hi < lo) throw std::invalid_argument("mu grid: hi must be >= lo");
    if (!(step > 0.0)) throw std::invalid_argument("mu grid: step must be > 0");
}

std::vector<double> MuGrid::points() const {
    validate();
    return linear_grid(lo, hi, step);
}

CapacitySearchResult optimal_panel(CapacityMode mode, ServiceLaw law,
                                   const EconomicParams& econ,
                                   const ShowupModel& model,
                                   const LambdaGrid& lambda_grid,
                                   const MuGrid& mu_grid) {
    if (mode == CapacityMode::Joint) {
        throw std::invalid_argument("optimal_panel: use joint_optimal for the joint mode");
    }
    lambda_grid.validate();
    econ.validate();
    model.validate();

    CapacitySearchResult res;
    res.mode = mode;
    res.k_applicable = false;

    if (mode == CapacityMode::FixedMu) {
        const double mu = econ.regular_capacity_M;
        const LambdaBest best =
            best_lambda_at_mu(law, mu, econ, model, lambda_grid, &res.trace);
        res.lambda_star = best.lambda;
        res.mu_star = mu;
        res.objective = best.objective;
        return res;
    }

    bool have = false;
    for (double mu : mu_grid.points()) {
        const LambdaBest best = best_lambda_at_mu(law, mu, econ, model, lambda_grid, nullptr);
        res.trace.push_back({best.lambda, mu, std::nullopt, best.objective});
        if (!have || best.objective > res.objective) {
            res.lambda_star = best.lambda;
            res.mu_star = mu;
            res.objective = best.objective;
            have = true;
        }
    }
    return res;
}

LeverReport levers_efficiency_report(const CapacitySearchResult& capacity,
                                     ServiceLaw law, const EconomicParams& econ,
                                     const ShowupModel& model,
                                     const WindowGrid& window_grid,
                                     double infinity_tolerance,
                                     std::optional<std::int64_t> reference_window) {
    const double lambda = capacity.lambda_star;
    const double mu = capacity.mu_star;

    const RewardCurve curve(law, lambda, mu, econ, model, window_grid.k_max);
    const double t_inf = net_reward_infinite_closed(law, lambda, mu, econ, model);

    LeverReport report;
    report.capacity = capacity;
    report.window =
        optimal_window_on_curve(curve, window_grid, infinity_tolerance, t_inf);

    if (report.window.unbounded()) {
        report.delta_e_percent = 0.0;
        report.service_level_alpha = 1.0;
        return report;
    }

    const std::int64_t k_star = *report.window.k_star;
    if (reference_window && *reference_window > curve.k_max()) {
        throw std::invalid_argument("levers: reference window outside curve range");
    }
    // The gain isolates the window's effect on the operating reward; the
    // overtime cost does not depend on K and cancels from the comparison.
    const double t_base = reference_window ? curve.total(*reference_window) : t_inf;
    if (!(t_base > 0.0)) {
        throw std::invalid_argument("levers: baseline reward must be positive");
    }
    report.delta_e_percent =
        100.0 * (report.window.t_at_k_star - t_base) / t_base;

    const StationaryDistribution unbounded =
        law == ServiceLaw::Exponential ? mm1_distribution(lambda, mu, 1e-12)
                                       : md1_distribution(lambda, mu, 1e-12);
    report.service_level_alpha = service_level(unbounded, k_star);
    return report;
}

CapacitySearchResult joint_optimal(ServiceLaw law, const EconomicParams& econ,
                                   const ShowupModel& model,
                                   const LambdaGrid& lambda_grid,
                                   const MuGrid& mu_grid,
                                   const WindowGrid& window_grid,
                                   double infinity_tolerance) {
    lambda_grid.validate();
    window_grid.validate();
    econ.validate();
    model.validate();

    // Two-stage baseline: pick (lambda, mu) for the unbounded system, then
    // add the best window on top of that choice.
    const CapacitySearchResult seq_panel =
        optimal_panel(CapacityMode::OptimizeMu, law, econ, model, lambda_grid, mu_grid);
    const LeverReport seq_levers = levers_efficiency_report(
        seq_panel, law, econ, model, window_grid, infinity_tolerance, std::nullopt);
    const double seq_objective =
        seq_levers.window.best_value() - overtime_cost(seq_panel.mu_star, econ);

    CapacitySearchResult res;
    res.mode = CapacityMode::Joint;
    res.k_applicable = true;
    res.sequential_objective = seq_objective;
    res.sequential_point = CapacityTracePoint{seq_panel.lambda_star, seq_panel.mu_star,
                                              seq_levers.window.k_star, seq_objective};

    const auto evaluate = [&](double lambda, double mu) {
        const RewardCurve curve(law, lambda, mu, econ, model, window_grid.k_max);
        const double t_inf = net_reward_infinite_closed(law, lambda, mu, econ, model);
        WindowSearchResult w =
            optimal_window_on_curve(curve, window_grid, infinity_tolerance, t_inf);
        CapacityTracePoint point;
        point.lambda = lambda;
        point.mu = mu;
        point.k = w.k_star;
        point.objective = w.best_value() - overtime_cost(mu, econ);
        return point;
    };

    bool have = false;
    for (double mu : mu_grid.points()) {
        const double hi = mu - lambda_grid.margin;
        if (hi < lambda_grid.lo) {
            throw std::invalid_argument("joint search: empty panel grid, mu too small");
        }

        CapacityTracePoint mu_best;
        bool mu_have = false;
        for (double lambda : linear_grid(lambda_grid.lo, hi, lambda_grid.coarse_step)) {
            const CapacityTracePoint p = evaluate(lambda, mu);
            if (!mu_have || p.objective > mu_best.objective) {
                mu_best = p;
                mu_have = true;
            }
        }
        // Fine pass around the coarse winner; the two-stage winner is also
        // injected so the joint result can never fall below the baseline.
        std::vector<double> fine = linear_grid(
            std::max(lambda_grid.lo, mu_best.lambda - lambda_grid.coarse_step),
            std::min(hi, mu_best.lambda + lambda_grid.coarse_step),
            lambda_grid.fine_step);
        if (seq_panel.lambda_star >= lambda_grid.lo && seq_panel.lambda_star <= hi) {
            fine.push_back(seq_panel.lambda_star);
        }
        for (double lambda : fine) {
            const CapacityTracePoint p = evaluate(lambda, mu);
            if (p.objective > mu_best.objective) mu_best = p;
        }

        res.trace.push_back(mu_best);
        if (!have || mu_best.objective > res.objective) {
            res.lambda_star = mu_best.lambda;
            res.mu_star = mu_best.mu;
            res.k_star = mu_best.k;
            res.objective = mu_best.objective;
            have = true;
        }
    }

    if (seq_objective > res.objective) {
        // The injected baseline point guarantees this cannot happen unless
        // the grids passed here differ from the ones the baseline used.
        throw NumericalError("joint search: baseline exceeded joint optimum");
    }
    if (std::abs(seq_objective) > 0.0) {
        res.gain_over_sequential_percent =
            100.0 * (res.objective - seq_objective) / std::abs(seq_objective);
    }
    return res;
}

}  // namespace schedwin
