#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <thread>
#include <vector>

namespace hwl {

inline double mean(const std::vector<double>& xs) {
    if (xs.empty()) throw std::invalid_argument("mean: empty sample");
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

inline double sample_variance(const std::vector<double>& xs) {
    if (xs.size() < 2) throw std::invalid_argument("sample_variance: need at least 2 points");
    const double m = mean(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return s / static_cast<double>(xs.size() - 1);
}

inline double std_error(const std::vector<double>& xs) {
    return std::sqrt(sample_variance(xs) / static_cast<double>(xs.size()));
}

// se of an empirical proportion p over m trials.
inline double binomial_std_error(double p, std::size_t m) {
    if (m == 0) throw std::invalid_argument("binomial_std_error: m = 0");
    return std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(m));
}

inline double quantile_of_sample(std::vector<double> xs, double q) {
    if (xs.empty()) throw std::invalid_argument("quantile_of_sample: empty sample");
    std::sort(xs.begin(), xs.end());
    const double pos = q * static_cast<double>(xs.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, xs.size() - 1);
    const double w = pos - static_cast<double>(lo);
    return (1.0 - w) * xs[lo] + w * xs[hi];
}

inline double median_of_sample(const std::vector<double>& xs) {
    return quantile_of_sample(xs, 0.5);
}

// Two-sample Kolmogorov-Smirnov distance sup_x |F_a(x) - F_b(x)|.
inline double two_sample_ks(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("two_sample_ks: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

// Runs fn(i) for i in [0, n). Results must be written to per-index slots so
// the outcome does not depend on scheduling.
inline void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const int t = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(t));
    for (int w = 0; w < t; ++w) {
        pool.emplace_back([&, w]() {
            for (std::size_t i = static_cast<std::size_t>(w); i < n; i += static_cast<std::size_t>(t)) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace hwl
