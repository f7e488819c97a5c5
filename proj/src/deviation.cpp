#include "hwl/deviation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hwl/condition.hpp"
#include "hwl/quadrature.hpp"
#include "hwl/rng.hpp"
#include "hwl/stats.hpp"

namespace hwl {

double s_n_squared(const ProcessModel& model, std::uint64_t n_terms) {
    if (n_terms < 1) throw std::invalid_argument("s_n_squared: N >= 1 required");
    const double n = static_cast<double>(n_terms);
    double acc = n * std::abs(model.cov_at_lag(0));
    for (std::uint64_t k = 1; k < n_terms; ++k) {
        const double ck = std::abs(model.cov_at_lag(static_cast<std::int64_t>(k)));
        acc += 2.0 * (n - static_cast<double>(k)) * ck;
        if (n * ck < 1e-18 * acc) break;  // geometric tails contribute nothing further
    }
    return acc;
}

double s_n_squared_tau_bound(const QuantileFn& q, const DecaySeq& tau, std::uint64_t n_terms) {
    const DecaySeq half = tau.halved();
    const double h1 = q.integrated(1.0);  // ||f||_1
    // Plateau decomposition: (tau/2)^{-1} = k exactly on [delta_k, delta_{k-1});
    // the mass above delta_0 has inverse 0 and contributes nothing.
    double acc = 0.0;
    double upper = std::min(half.value(0), h1);
    const std::int64_t k_cap = 4000;
    std::int64_t k_stop = k_cap;
    for (std::int64_t k = 1; k <= k_cap; ++k) {
        const double dk = half.value(k);
        const double lo = std::min(dk, h1);
        if (upper > lo) {
            const double piece = integrate(
                [&](double u) { return q(q.integrated_inverse(u)); }, lo, upper, 1e-9);
            acc += static_cast<double>(k) * piece;
        }
        upper = lo;
        if (upper <= 1e-30) {
            k_stop = k;
            break;
        }
    }
    if (upper > 1e-30) {
        // Decay did not reach zero within the plateau budget. Close the
        // integral with the Abel remainder bound
        //   int_0^{delta_k0} inv(u) Q(G(u)) du
        //     <= Q(G(delta_k0)) ((k0+1) delta_k0 + sum_{k>k0} delta_k).
        const double qk = q(q.integrated_inverse(upper));
        double tail_sum = 0.0;
        bool summable = false;
        for (std::int64_t k = k_stop + 1; k <= 4000000; ++k) {
            const double dk = half.value(k);
            tail_sum += dk;
            if (dk < 1e-16 * std::max(1.0, tail_sum)) {
                summable = true;
                break;
            }
        }
        if (!summable) return std::numeric_limits<double>::infinity();
        acc += qk * (static_cast<double>(k_stop + 1) * upper + tail_sum);
    }
    return 4.0 * static_cast<double>(n_terms) * acc;
}

double fuk_nagaev_bound(const FukNagaevInput& in) {
    if (!(in.lambda > 0.0)) throw std::invalid_argument("fuk_nagaev_bound: lambda > 0 required");
    if (!(in.r >= 1.0)) throw std::invalid_argument("fuk_nagaev_bound: r >= 1 required");
    if (!(in.s2 >= 0.0)) throw std::invalid_argument("fuk_nagaev_bound: s_N^2 >= 0 required");
    if (in.n < 1) throw std::invalid_argument("fuk_nagaev_bound: N >= 1 required");
    double first = 0.0;
    if (in.s2 > 0.0)
        first = 4.0 * std::pow(1.0 + in.lambda * in.lambda / (in.r * in.s2), -in.r / 2.0);
    DecayQuantileProfile r_profile(DecayQuantileProfile::Kind::tau, in.q, in.tau);
    const double u_star = r_profile.exceedance_sup(in.lambda / in.r);
    const double second =
        4.0 * static_cast<double>(in.n) / in.lambda * in.q.integrated(u_star);
    return first + second;
}

double shao_threshold_a(double x, std::uint64_t n_terms, const QuantileFn& dist) {
    if (!(x > 0.0)) throw std::invalid_argument("shao_threshold_a: x > 0 required");
    const double budget = x / (2.0 * static_cast<double>(n_terms));
    if (dist.truncated_mean_above(0.0) <= budget) return 0.0;
    double hi = 1.0;
    int guard = 0;
    while (dist.truncated_mean_above(hi) > budget) {
        hi *= 2.0;
        if (++guard > 400) throw std::domain_error("shao_threshold_a: truncated mean does not vanish");
    }
    double lo = hi > 1.0 ? hi / 2.0 : 0.0;
    for (int it = 0; it < 200 && hi - lo > 1e-10 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (dist.truncated_mean_above(mid) <= budget) hi = mid; else lo = mid;
    }
    return hi;
}

namespace {

double rho_dyadic_sum(const DecaySeq& rho, std::uint64_t n_terms, double exponent, RhoSumMode mode) {
    const int kmax = mode == RhoSumMode::dyadic_partial
                         ? static_cast<int>(std::floor(std::log2(static_cast<double>(n_terms))))
                         : 120;
    double acc = 0.0;
    std::int64_t arg = 1;
    for (int i = 0; i <= kmax; ++i) {
        const double term = std::pow(rho.value(arg), exponent);
        acc += term;
        if (mode == RhoSumMode::infinite && term < 1e-10) break;
        if (arg > (std::int64_t(1) << 61)) break;
        arg <<= 1;
    }
    return acc;
}

} // namespace

double shao_bound(const ShaoInput& in) {
    if (!(in.q_moment >= 2.0)) throw std::domain_error("shao_bound: q >= 2 required");
    if (!(in.x > 0.0)) throw std::invalid_argument("shao_bound: x > 0 required");
    if (!(in.k_const > 0.0)) throw std::invalid_argument("shao_bound: K > 0 required");
    if (!(in.a >= 0.0)) throw std::invalid_argument("shao_bound: A >= 0 required");
    const double n = static_cast<double>(in.n);
    const double q = in.q_moment;
    const double s1 = rho_dyadic_sum(in.rho, in.n, 1.0, in.mode);
    const double s2 = rho_dyadic_sum(in.rho, in.n, 2.0 / q, in.mode);
    const double l2q = std::pow(in.dist.second_moment(), q / 2.0);
    const double trunc_q = in.dist.truncated_moment_below(q, in.a);
    const double head = n * in.dist.tail_prob_geq(in.a);
    const double body = in.k_const * std::pow(in.x, -q) *
                        (std::pow(n, q / 2.0) * std::exp(in.k_const * s1) * l2q +
                         n * std::exp(in.k_const * s2) * trunc_q);
    return head + body;
}

std::vector<MaxTail> empirical_max_tail(const ProcessModel& model, std::uint64_t n_terms,
                                        const std::vector<double>& thresholds,
                                        std::uint64_t m_paths, std::uint64_t seed, int threads) {
    if (m_paths < 2) throw std::invalid_argument("empirical_max_tail: need at least 2 paths");
    std::vector<double> run_max(m_paths, 0.0);
    parallel_for(m_paths, threads, [&](std::size_t r) {
        std::vector<double> buf;
        sample_path_into(model, n_terms, derive_seed(seed, r), buf);
        long double s = 0.0L;
        double mx = 0.0;
        for (double x : buf) {
            s += x;
            mx = std::max(mx, std::abs(static_cast<double>(s)));
        }
        run_max[r] = mx;
    });
    std::vector<MaxTail> out;
    out.reserve(thresholds.size());
    for (double t : thresholds) {
        std::uint64_t c = 0;
        for (double m : run_max)
            if (m >= t) ++c;
        MaxTail mt;
        mt.p_hat = static_cast<double>(c) / static_cast<double>(m_paths);
        mt.std_error = binomial_std_error(mt.p_hat, m_paths);
        out.push_back(mt);
    }
    return out;
}

ShaoCalibration calibrate_shao_k(const ProcessModel& model, double q_moment,
                                 const std::vector<std::uint64_t>& n_grid,
                                 const std::vector<double>& x_multipliers, std::uint64_t m_paths,
                                 std::uint64_t seed, int threads) {
    const auto rho = model.declared_rho();
    if (!rho) throw std::invalid_argument("calibrate_shao_k: model has no declared rho sequence");
    const auto dist = model.marginal_abs_quantile();
    const double l2 = std::sqrt(dist.second_moment());

    ShaoCalibration cal;
    for (int j = 0; j <= 30; ++j) cal.k_grid.push_back(0.125 * std::pow(2.0, 0.5 * j));

    struct Cell {
        std::uint64_t n;
        double x, a, emp, se;
    };
    std::vector<Cell> cells;
    for (std::size_t gi = 0; gi < n_grid.size(); ++gi) {
        const std::uint64_t n = n_grid[gi];
        std::vector<double> xs;
        for (double m : x_multipliers) xs.push_back(m * std::sqrt(static_cast<double>(n)) * l2);
        const auto tails = empirical_max_tail(model, n, xs, m_paths, derive_seed(seed, gi), threads);
        for (std::size_t xi = 0; xi < xs.size(); ++xi) {
            Cell c;
            c.n = n;
            c.x = xs[xi];
            // A policy: at least the minimal admissible threshold, but grow
            // with x so both tail terms vanish for large x.
            c.a = std::max(shao_threshold_a(c.x, n, dist), 0.25 * c.x);
            c.emp = tails[xi].p_hat;
            c.se = tails[xi].std_error;
            cells.push_back(c);
        }
    }

    for (double k : cal.k_grid) {
        bool ok = true;
        for (const auto& c : cells) {
            ShaoInput in{c.x, c.n, q_moment, k, *rho, dist, c.a, RhoSumMode::dyadic_partial};
            if (shao_bound(in) < c.emp + 3.0 * c.se) {
                ok = false;
                break;
            }
        }
        if (ok) {
            cal.found = true;
            cal.k_const = k;
            for (const auto& c : cells) {
                ShaoInput in{c.x, c.n, q_moment, k, *rho, dist, c.a, RhoSumMode::dyadic_partial};
                DominationRow row;
                row.n = c.n;
                row.threshold = c.x;
                row.bound = shao_bound(in);
                row.empirical = c.emp;
                row.std_error = c.se;
                row.dominated = c.emp + 3.0 * c.se <= row.bound;
                cal.table.push_back(row);
            }
            break;
        }
    }
    return cal;
}

} // namespace hwl
