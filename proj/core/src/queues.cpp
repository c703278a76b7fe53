#include "schedwin/queues.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace schedwin {

namespace {

constexpr double kRhoOneWindow = 1e-9;   // |rho - 1| below this: treat as rho == 1
constexpr double kRescaleAt = 1e280;     // rescale weights before they overflow
constexpr double kFlushBelow = 1e-300;   // weights this far under the peak are zero
constexpr double kBalanceResidualTol = 1e-10;
constexpr std::size_t kMaxUnboundedLevels = 8u << 20;

// Compensated (Neumaier) accumulator; running sums of many small positive
// terms must stay accurate to ~eps for the truncation stopping rules.
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

[[noreturn]] void fail_numeric(const char* where, const char* what) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s: %s", where, what);
    throw NumericalError(buf);
}

}  // namespace

void QueueSpec::validate() const {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw std::invalid_argument("queue: lambda must be finite and >= 0");
    }
    if (!(mu > 0.0) || !std::isfinite(mu)) {
        throw std::invalid_argument("queue: mu must be finite and > 0");
    }
    if (capacity && *capacity < 1) {
        throw std::invalid_argument("queue: capacity must be >= 1");
    }
}

double StationaryDistribution::mean() const {
    Accumulator acc;
    for (std::size_t j = 1; j < probs.size(); ++j) {
        acc.add(static_cast<double>(j) * probs[j]);
    }
    return acc.value();
}

double StationaryDistribution::cumulative(std::int64_t k) const {
    if (k < 0) return 0.0;
    Accumulator acc;
    const std::size_t stop = std::min<std::size_t>(probs.size(), static_cast<std::size_t>(k) + 1);
    for (std::size_t j = 0; j < stop; ++j) acc.add(probs[j]);
    return std::min(1.0, acc.value());
}

double StationaryDistribution::sum() const {
    Accumulator acc;
    for (double p : probs) acc.add(p);
    return acc.value();
}

namespace detail {

PoissonServiceKernel PoissonServiceKernel::build(double rho, std::size_t count) {
    if (!(rho >= 0.0) || !std::isfinite(rho)) {
        throw std::invalid_argument("poisson kernel: rho must be finite and >= 0");
    }
    PoissonServiceKernel k;
    k.rho = rho;
    k.mass.resize(count);
    k.tail.resize(count);
    if (count == 0) return k;

    if (rho < 700.0) {
        double a = std::exp(-rho);
        for (std::size_t n = 0; n < count; ++n) {
            k.mass[n] = a;
            a *= rho / static_cast<double>(n + 1);
        }
    } else {
        // exp(-rho) underflows; evaluate each term in log space
        for (std::size_t n = 0; n < count; ++n) {
            const double nn = static_cast<double>(n);
            k.mass[n] = std::exp(-rho + nn * std::log(rho) - std::lgamma(nn + 1.0));
        }
    }

    Accumulator total;
    for (double m : k.mass) total.add(m);
    double beyond = std::max(0.0, 1.0 - total.value());
    for (std::size_t n = count; n-- > 0;) {
        beyond += k.mass[n];
        k.tail[n] = std::min(1.0, beyond);
    }
    return k;
}

OccupancyWeights OccupancyWeights::build(ServiceLaw law, double lambda, double mu,
                                         std::size_t count) {
    OccupancyWeights w;
    w.law = law;
    w.lambda = lambda;
    w.mu = mu;
    w.rho = lambda / mu;
    w.x.resize(count);
    w.prefix.resize(count);
    if (count == 0) return w;

    const auto rescale = [&w](std::size_t upto) {
        for (std::size_t i = 0; i <= upto; ++i) {
            w.x[i] /= kRescaleAt;
            if (w.x[i] < kFlushBelow) w.x[i] = 0.0;
            w.prefix[i] /= kRescaleAt;
        }
    };

    if (law == ServiceLaw::Exponential) {
        w.x[0] = 1.0;
        Accumulator s;
        s.add(1.0);
        w.prefix[0] = 1.0;
        for (std::size_t n = 1; n < count; ++n) {
            w.x[n] = w.x[n - 1] * w.rho;
            if (w.x[n] > kRescaleAt) {
                rescale(n);
                s = Accumulator{};
                s.add(w.prefix[n - 1]);
                s.add(w.x[n]);
                w.prefix[n] = s.value();
                continue;
            }
            s.add(w.x[n]);
            w.prefix[n] = s.value();
        }
        return w;
    }

    const PoissonServiceKernel kernel = PoissonServiceKernel::build(w.rho, count);
    const double a0 = kernel.mass[0];
    if (!(a0 > 0.0)) fail_numeric("occupancy weights", "P(no arrivals in a service) is zero");

    // x_{n+1} a_0 = x_0 T_{n+1} + sum_{i=1..n} x_i T_{n+2-i}, T_m = P(N >= m).
    // Every term is nonnegative, so the recursion cannot amplify cancellation.
    w.x[0] = 1.0;
    w.prefix[0] = 1.0;
    Accumulator s;
    s.add(1.0);
    for (std::size_t n = 0; n + 1 < count; ++n) {
        Accumulator rhs;
        rhs.add(w.x[0] * kernel.tail[n + 1]);
        for (std::size_t i = 1; i <= n; ++i) {
            rhs.add(w.x[i] * kernel.tail[n + 2 - i]);
        }
        double next = rhs.value() / a0;
        if (!std::isfinite(next)) fail_numeric("occupancy weights", "weight overflow");
        w.x[n + 1] = next;
        if (next > kRescaleAt) {
            rescale(n + 1);
            s = Accumulator{};
            s.add(w.prefix[n]);
            s.add(w.x[n + 1]);
            w.prefix[n + 1] = s.value();
            continue;
        }
        s.add(next);
        w.prefix[n + 1] = s.value();
    }
    return w;
}

}  // namespace detail

StationaryDistribution mm1k_distribution(double lambda, double mu, std::int64_t capacity) {
    QueueSpec spec{lambda, mu, capacity, ServiceLaw::Exponential};
    spec.validate();
    const double rho = spec.rho();
    const std::size_t n = static_cast<std::size_t>(capacity) + 1;

    StationaryDistribution dist;
    dist.spec = spec;
    dist.probs.resize(n);

    if (std::abs(rho - 1.0) < kRhoOneWindow) {
        std::fill(dist.probs.begin(), dist.probs.end(), 1.0 / static_cast<double>(n));
        return dist;
    }
    if (rho < 1.0) {
        // pi_j = rho^j (1 - rho) / (1 - rho^(K+1)), built upward
        const double denom = -std::expm1(static_cast<double>(n) * std::log1p(rho - 1.0));
        double p = (1.0 - rho) / denom;
        for (std::size_t j = 0; j < n; ++j) {
            dist.probs[j] = p;
            p *= rho;
        }
        return dist;
    }
    // rho > 1: anchor at the full state with sigma = 1/rho < 1 so nothing overflows
    const double sigma = 1.0 / rho;
    const double denom = -std::expm1(static_cast<double>(n) * std::log1p(sigma - 1.0));
    double p = (1.0 - sigma) / denom;
    for (std::size_t j = n; j-- > 0;) {
        dist.probs[j] = p;
        p *= sigma;
    }
    return dist;
}

namespace {

// Time-stationary M/D/1/K occupancy from the departure-epoch weights.
// With S = x_0 + ... + x_{K-1} and D = rho S + x_0:
//   pi_j = x_j / D for j < K, pi_K = 1 - S / D
// (Gross, Shortle, Thompson & Harris, Fundamentals of Queueing Theory,
// 4th ed., sec. 6.1: the embedded chain only occupies 0..K-1 and carries
// over to clock time through the mean cycle length).
StationaryDistribution md1k_from_weights(const detail::OccupancyWeights& w,
                                         std::int64_t capacity) {
    const std::size_t k = static_cast<std::size_t>(capacity);
    StationaryDistribution dist;
    dist.spec = QueueSpec{w.lambda, w.mu, capacity, ServiceLaw::Deterministic};
    dist.probs.resize(k + 1);

    const double s = w.prefix[k - 1];
    const double d = w.rho * s + w.x[0];
    for (std::size_t j = 0; j < k; ++j) dist.probs[j] = w.x[j] / d;
    dist.probs[k] = std::max(0.0, 1.0 - s / d);
    return dist;
}

void check_embedded_balance(const detail::OccupancyWeights& w,
                            const detail::PoissonServiceKernel& kernel,
                            std::size_t count) {
    const double s = w.prefix[count - 1];
    if (!(s > 0.0) || !std::isfinite(s)) {
        fail_numeric("md1k", "embedded weights failed to normalise");
    }
    for (std::size_t n = 0; n + 1 < count; ++n) {
        Accumulator rhs;
        rhs.add(w.x[0] * kernel.mass[n]);
        for (std::size_t i = 1; i <= n + 1; ++i) {
            rhs.add(w.x[i] * kernel.mass[n + 1 - i]);
        }
        const double residual = std::abs(w.x[n] - rhs.value()) / s;
        if (!(residual <= kBalanceResidualTol)) {
            fail_numeric("md1k", "embedded balance residual above tolerance");
        }
    }
}

}  // namespace

StationaryDistribution md1k_distribution(double lambda, double mu, std::int64_t capacity) {
    QueueSpec spec{lambda, mu, capacity, ServiceLaw::Deterministic};
    spec.validate();
    const std::size_t count = static_cast<std::size_t>(capacity);

    const auto w = detail::OccupancyWeights::build(ServiceLaw::Deterministic,
                                                   lambda, mu, count);
    if (count >= 2) {
        const auto kernel = detail::PoissonServiceKernel::build(w.rho, count);
        check_embedded_balance(w, kernel, count);
    }
    return md1k_from_weights(w, capacity);
}

StationaryDistribution mm1_distribution(double lambda, double mu, double tail_tol) {
    QueueSpec spec{lambda, mu, std::nullopt, ServiceLaw::Exponential};
    spec.validate();
    const double rho = spec.rho();
    if (rho >= 1.0) {
        throw StabilityError("mm1: no stationary distribution for rho >= 1 without a capacity bound");
    }

    StationaryDistribution dist;
    dist.spec = spec;
    if (rho == 0.0) {
        dist.probs = {1.0};
        dist.truncation_level = 0;
        dist.tail_mass = 0.0;
        return dist;
    }
    // smallest n with rho^(n+1) <= tail_tol
    const std::size_t n =
        static_cast<std::size_t>(std::max(0.0, std::ceil(std::log(tail_tol) / std::log(rho) - 1.0)));
    dist.probs.resize(n + 1);
    double p = 1.0 - rho;
    for (std::size_t j = 0; j <= n; ++j) {
        dist.probs[j] = p;
        p *= rho;
    }
    dist.truncation_level = static_cast<std::int64_t>(n);
    dist.tail_mass = std::pow(rho, static_cast<double>(n) + 1.0);
    return dist;
}

StationaryDistribution md1_distribution(double lambda, double mu, double tail_tol) {
    QueueSpec spec{lambda, mu, std::nullopt, ServiceLaw::Deterministic};
    spec.validate();
    const double rho = spec.rho();
    if (rho >= 1.0) {
        throw StabilityError("md1: no stationary distribution for rho >= 1 without a capacity bound");
    }

    StationaryDistribution dist;
    dist.spec = spec;
    if (rho == 0.0) {
        dist.probs = {1.0};
        dist.truncation_level = 0;
        dist.tail_mass = 0.0;
        return dist;
    }

    // For an unbounded M/G/1 queue the departure-epoch occupancy law equals
    // the time-stationary law, so the embedded weights normalise directly:
    // pi_j = (1 - rho) x_j. Grow until the unaccounted tail drops under
    // tail_tol.
    const double pi0 = 1.0 - rho;
    std::size_t block = 256;
    std::vector<double> x{1.0};
    Accumulator cum;
    cum.add(pi0);
    detail::PoissonServiceKernel kernel;

    while (1.0 - cum.value() > tail_tol) {
        if (x.size() >= kMaxUnboundedLevels) {
            fail_numeric("md1", "truncation tolerance unreachable");
        }
        const std::size_t want = x.size() + block;
        if (kernel.mass.size() < want + 1) {
            kernel = detail::PoissonServiceKernel::build(rho, want + 1);
        }
        const double a0 = kernel.mass[0];
        while (x.size() < want && 1.0 - cum.value() > tail_tol) {
            const std::size_t n = x.size() - 1;
            Accumulator rhs;
            rhs.add(x[0] * kernel.tail[n + 1]);
            for (std::size_t i = 1; i <= n; ++i) {
                rhs.add(x[i] * kernel.tail[n + 2 - i]);
            }
            const double next = rhs.value() / a0;
            x.push_back(next);
            cum.add(pi0 * next);
        }
        block = std::min<std::size_t>(block * 2, 1u << 16);
    }

    dist.probs.resize(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) dist.probs[j] = pi0 * x[j];
    dist.truncation_level = static_cast<std::int64_t>(x.size()) - 1;
    dist.tail_mass = std::max(0.0, 1.0 - cum.value());
    return dist;
}

StationaryDistribution stationary_distribution(const QueueSpec& spec, double tail_tol) {
    spec.validate();
    if (spec.capacity) {
        return spec.service_law == ServiceLaw::Exponential
                   ? mm1k_distribution(spec.lambda, spec.mu, *spec.capacity)
                   : md1k_distribution(spec.lambda, spec.mu, *spec.capacity);
    }
    return spec.service_law == ServiceLaw::Exponential
               ? mm1_distribution(spec.lambda, spec.mu, tail_tol)
               : md1_distribution(spec.lambda, spec.mu, tail_tol);
}

}  // namespace schedwin
