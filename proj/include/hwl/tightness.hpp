#pragma once

#include <cstdint>
#include <vector>

#include "hwl/process.hpp"

namespace hwl {

// Monte Carlo evaluation of the dyadic tightness sum
//   n * sum_{k=1}^{log2 floor(n delta)} 2^-k mu{max_{1<=i<=2^k} |S_i| > eps 2^(k alpha) n^(1/p)}
// with alpha = 1/2 - 1/p and empirical probabilities over m paths. One path
// per replicate is evaluated at every level (common random numbers), and the
// per-replicate seed depends only on (seed, replicate), so estimates with
// the same seed are comparable across delta and eps.
struct TightnessLevel {
    int k = 0;
    double empirical_prob = 0.0;
    double contribution = 0.0;  // 2^-k * empirical_prob
    double std_error = 0.0;     // binomial, of the probability
};

struct TightnessEstimate {
    std::uint64_t n = 0;
    double delta = 0.0;
    double eps = 0.0;
    double p = 0.0;
    double alpha = 0.0;
    std::uint64_t paths = 0;
    std::vector<TightnessLevel> per_level;
    double value = 0.0;      // n * sum of contributions
    double std_error = 0.0;  // propagated per-level binomial errors
    bool degenerate = false; // floor(n delta) < 2: no levels
};

TightnessEstimate tightness_sum(const ProcessModel& model, std::uint64_t n, double delta,
                                double eps, double p, std::uint64_t m_paths, std::uint64_t seed,
                                int threads = 1);

} // namespace hwl
