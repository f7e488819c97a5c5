#include "hwl/tightness.hpp"

#include <cmath>
#include <stdexcept>

#include "hwl/rng.hpp"
#include "hwl/stats.hpp"

namespace hwl {

TightnessEstimate tightness_sum(const ProcessModel& model, std::uint64_t n, double delta,
                                double eps, double p, std::uint64_t m_paths, std::uint64_t seed,
                                int threads) {
    if (n < 4) throw std::invalid_argument("tightness_sum: n >= 4 required");
    if (!(delta > 0.0) || !(delta <= 1.0))
        throw std::invalid_argument("tightness_sum: delta must lie in (0,1]");
    if (!(eps > 0.0)) throw std::invalid_argument("tightness_sum: eps must be > 0");
    if (!(p > 2.0)) throw std::invalid_argument("tightness_sum: p > 2 required");
    if (m_paths < 100) throw std::invalid_argument("tightness_sum: at least 100 paths required");

    TightnessEstimate est;
    est.n = n;
    est.delta = delta;
    est.eps = eps;
    est.p = p;
    est.alpha = 0.5 - 1.0 / p;
    est.paths = m_paths;

    const auto ndelta = static_cast<std::uint64_t>(std::floor(static_cast<double>(n) * delta));
    if (ndelta < 2) {
        est.degenerate = true;
        return est;
    }
    int k_max = 0;
    while ((std::uint64_t(2) << k_max) <= ndelta) ++k_max;  // 2^(k_max+1) > n delta >= 2^k_max
    const std::uint64_t prefix = std::uint64_t(1) << k_max;

    const double n_root = std::pow(static_cast<double>(n), 1.0 / p);
    std::vector<double> thresholds(static_cast<std::size_t>(k_max) + 1);
    for (int k = 1; k <= k_max; ++k)
        thresholds[static_cast<std::size_t>(k)] =
            eps * std::pow(2.0, static_cast<double>(k) * est.alpha) * n_root;

    // counts[r * k_max + (k-1)] would be wasteful; accumulate per-thread-free
    // per-replicate bitmasks instead (k_max <= 62).
    std::vector<std::uint64_t> exceed_mask(m_paths, 0);
    parallel_for(m_paths, threads, [&](std::size_t r) {
        std::vector<double> buf;
        sample_path_into(model, prefix, derive_seed(seed, r), buf);
        long double s = 0.0L;
        double run_max = 0.0;
        std::uint64_t mask = 0;
        std::uint64_t next_mark = 2;
        int k = 1;
        for (std::uint64_t i = 1; i <= prefix; ++i) {
            s += buf[static_cast<std::size_t>(i - 1)];
            run_max = std::max(run_max, std::abs(static_cast<double>(s)));
            if (i == next_mark) {
                if (run_max > thresholds[static_cast<std::size_t>(k)])
                    mask |= std::uint64_t(1) << (k - 1);
                ++k;
                next_mark <<= 1;
            }
        }
        exceed_mask[r] = mask;
    });

    est.per_level.resize(static_cast<std::size_t>(k_max));
    double total = 0.0, var = 0.0;
    for (int k = 1; k <= k_max; ++k) {
        std::uint64_t fires = 0;
        for (auto m : exceed_mask)
            if (m & (std::uint64_t(1) << (k - 1))) ++fires;
        auto& lv = est.per_level[static_cast<std::size_t>(k - 1)];
        lv.k = k;
        lv.empirical_prob = static_cast<double>(fires) / static_cast<double>(m_paths);
        lv.std_error = binomial_std_error(lv.empirical_prob, m_paths);
        const double w = std::pow(2.0, -static_cast<double>(k));
        lv.contribution = w * lv.empirical_prob;
        total += lv.contribution;
        var += w * w * lv.std_error * lv.std_error;
    }
    est.value = static_cast<double>(n) * total;
    est.std_error = static_cast<double>(n) * std::sqrt(var);
    return est;
}

} // namespace hwl
