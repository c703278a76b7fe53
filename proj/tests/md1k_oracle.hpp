#pragma once

// Dense long-double reference for the bounded deterministic-service queue.
// Independent of the production recursion: solves the departure-epoch chain
// by Gaussian elimination, then maps to time-stationary probabilities.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace oracle {

// Poisson(rho) pmf values a_0..a_count.
inline std::vector<long double> poisson_pmf(long double rho, std::size_t count) {
    std::vector<long double> a(count + 1);
    a[0] = std::exp(-rho);
    for (std::size_t n = 1; n <= count; ++n) {
        a[n] = a[n - 1] * rho / static_cast<long double>(n);
    }
    return a;
}

// Solves M x = b in place with partial pivoting.
inline std::vector<long double> solve_dense(std::vector<std::vector<long double>> m,
                                            std::vector<long double> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::fabs(m[r][col]) > std::fabs(m[pivot][col])) pivot = r;
        }
        if (m[pivot][col] == 0.0L) throw std::runtime_error("oracle: singular system");
        std::swap(m[pivot], m[col]);
        std::swap(b[pivot], b[col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const long double f = m[r][col] / m[col][col];
            if (f == 0.0L) continue;
            for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<long double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        long double s = b[i];
        for (std::size_t c = i + 1; c < n; ++c) s -= m[i][c] * x[c];
        x[i] = s / m[i][i];
    }
    return x;
}

// Stationary vector of the chain embedded at departures: state = customers
// left behind, 0..K-1. From i >= 1 the next state is i-1+min(A, K-i) with
// A ~ Poisson(rho); state 0 behaves like state 1 (the arrival that ends the
// idle period starts service at once).
inline std::vector<long double> md1k_embedded_chain(long double rho, int capacity) {
    if (capacity < 1) throw std::invalid_argument("oracle: capacity must be >= 1");
    const auto k = static_cast<std::size_t>(capacity);
    const std::vector<long double> a = poisson_pmf(rho, k);

    std::vector<std::vector<long double>> p(k, std::vector<long double>(k, 0.0L));
    const auto fill_from = [&](std::size_t row, std::size_t in_system) {
        long double tail = 1.0L;
        for (std::size_t arrivals = 0; in_system + arrivals < k; ++arrivals) {
            p[row][in_system - 1 + arrivals] += a[arrivals];
            tail -= a[arrivals];
        }
        p[row][k - 1] += tail;
    };
    fill_from(0, 1);
    for (std::size_t i = 1; i < k; ++i) fill_from(i, i);

    // (P^T - I) pi = 0 with the last row replaced by the normalisation.
    std::vector<std::vector<long double>> m(k, std::vector<long double>(k));
    std::vector<long double> b(k, 0.0L);
    for (std::size_t r = 0; r < k; ++r) {
        for (std::size_t c = 0; c < k; ++c) m[r][c] = p[c][r] - (r == c ? 1.0L : 0.0L);
    }
    for (std::size_t c = 0; c < k; ++c) m[k - 1][c] = 1.0L;
    b[k - 1] = 1.0L;
    return solve_dense(std::move(m), std::move(b));
}

// Time-stationary occupancy Pi_0..Pi_K from the departure-epoch vector:
// Pi_j = p_j / (p_0 + rho) for j < K, Pi_K closes the normalisation.
inline std::vector<double> md1k_occupancy(double lambda, double mu, int capacity) {
    if (!(mu > 0.0) || !(lambda >= 0.0)) throw std::invalid_argument("oracle: bad rates");
    const long double rho = static_cast<long double>(lambda) / mu;
    const std::vector<long double> p = md1k_embedded_chain(rho, capacity);
    const long double denom = p[0] + rho;
    std::vector<double> pi(static_cast<std::size_t>(capacity) + 1);
    for (int j = 0; j < capacity; ++j) {
        pi[static_cast<std::size_t>(j)] =
            static_cast<double>(p[static_cast<std::size_t>(j)] / denom);
    }
    pi[static_cast<std::size_t>(capacity)] = static_cast<double>(1.0L - 1.0L / denom);
    return pi;
}

}  // namespace oracle
