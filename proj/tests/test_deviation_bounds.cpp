#include "doctest.h"

#include <cmath>
#include <vector>

#include "hwl/deviation.hpp"
#include "hwl/process.hpp"

using namespace hwl;

TEST_CASE("s_n_squared closed forms") {
    CHECK(s_n_squared(make_preset("iid-gauss"), 64) == doctest::Approx(64.0));
    // AR(1) phi = 0.5, N = 2: Var = 4/3, |Cov(1)| = 2/3: 2*(4/3) + 2*(2/3) = 4
    CHECK(s_n_squared(make_preset("ar1:0.5"), 2) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK_THROWS_AS(s_n_squared(make_preset("counterexample:3"), 8), std::domain_error);
}

TEST_CASE("integral bound dominates the exact s_N^2 on the Bernoulli shift") {
    const auto model = make_preset("bernoulli-shift");
    const auto q = model.marginal_abs_quantile();
    const auto tau = *model.declared_tau();
    for (std::uint64_t n : {8ull, 64ull, 512ull}) {
        const double exact = s_n_squared(model, n);
        const double bound = s_n_squared_tau_bound(q, tau, n);
        CHECK(exact <= bound);
        CHECK(std::isfinite(bound));
    }
}

TEST_CASE("fuk_nagaev_bound shapes") {
    const auto model = make_preset("bernoulli-shift");
    const auto q = model.marginal_abs_quantile();
    const auto tau = *model.declared_tau();
    const double s2 = s_n_squared(model, 512);

    // decreasing to 0 along a lambda grid
    double prev = std::numeric_limits<double>::infinity();
    for (double lam : {1.0, 2.0, 4.0, 8.0, 16.0, 64.0, 256.0}) {
        const double b = fuk_nagaev_bound({lam, 512, 8.0, q, tau, s2});
        CHECK(b <= prev + 1e-12);
        prev = b;
    }
    CHECK(prev <= 1e-3);

    // independent bounded case: R = 0, only the sub-Gaussian term remains
    const auto qb = QuantileFn::bounded(1.0);
    const double lam = 40.0;
    const double b = fuk_nagaev_bound({lam, 256, 4.0, qb, DecaySeq::zero(), 256.0});
    CHECK(b == doctest::Approx(4.0 * std::pow(1.0 + lam * lam / (4.0 * 256.0), -2.0)).epsilon(1e-12));

    // non-increasing in r once lambda^2 >= r s_N^2
    const double lam2 = 3.0 * std::sqrt(s2);
    double prev_r = std::numeric_limits<double>::infinity();
    for (double r : {1.0, 2.0, 4.0, 8.0}) {
        const double br = fuk_nagaev_bound({lam2, 512, r, q, tau, s2});
        CHECK(br <= prev_r + 1e-12);
        prev_r = br;
    }

    CHECK_THROWS_AS(fuk_nagaev_bound({0.0, 8, 2.0, q, tau, 1.0}), std::invalid_argument);
}

TEST_CASE("fuk_nagaev Monte Carlo domination on the Bernoulli shift") {
    const auto model = make_preset("bernoulli-shift");
    const auto q = model.marginal_abs_quantile();
    const auto tau = *model.declared_tau();
    const std::uint64_t n = 512;
    const double s2 = s_n_squared(model, n);
    const double l2 = std::sqrt(model.cov_at_lag(0));
    std::vector<double> lams, events;
    for (double c : {1.0, 2.0, 4.0, 8.0}) {
        lams.push_back(c * l2 * std::sqrt(static_cast<double>(n)));
        events.push_back(5.0 * lams.back());
    }
    const auto tails = empirical_max_tail(model, n, events, 2000, 31, 2);
    for (std::size_t i = 0; i < lams.size(); ++i) {
        const double bound = fuk_nagaev_bound({lams[i], n, 8.0, q, tau, s2});
        CHECK(tails[i].p_hat + 3.0 * tails[i].std_error <= bound);
    }
}

TEST_CASE("shao_threshold_a closed forms") {
    // bounded |f| <= c with tiny x: A = c
    CHECK(shao_threshold_a(1e-6, 16, QuantileFn::bounded(2.5)) == doctest::Approx(2.5).epsilon(1e-8));
    // Pareto(1, 3): E[|f| 1{|f|>=A}] = 1.5 A^-2 for A >= 1, so A = sqrt(3N/x)
    const auto q3 = QuantileFn::pareto(1.0, 3.0);
    const std::uint64_t n = 64;
    const double x = 2.0;
    CHECK(shao_threshold_a(x, n, q3) ==
          doctest::Approx(std::sqrt(3.0 * static_cast<double>(n) / x)).epsilon(1e-8));
    // x >= 2N E|f| admits A = 0
    CHECK(shao_threshold_a(2.0 * 16 * 1.5 + 1.0, 16, q3) == 0.0);
    // the constraint holds with equality-or-boundary at the bisection tolerance
    for (double xx : {0.5, 2.0, 31.0}) {
        const double a = shao_threshold_a(xx, n, q3);
        CHECK(2.0 * static_cast<double>(n) * q3.truncated_mean_above(a) <= xx * (1.0 + 1e-9));
        if (a > 1e-9)
            CHECK(2.0 * static_cast<double>(n) * q3.truncated_mean_above(a * (1.0 - 1e-7)) >=
                  xx * (1.0 - 1e-6));
    }
}

TEST_CASE("shao_bound: finite, decreasing in x, vanishing tail") {
    const auto dist = QuantileFn::abs_gaussian(1.0);
    const auto rho = DecaySeq::geometric(1.0, 0.5);
    const std::uint64_t n = 256;
    double prev = std::numeric_limits<double>::infinity();
    for (double x : {8.0, 16.0, 32.0, 64.0, 128.0, 512.0, 4096.0}) {
        const double a = std::max(shao_threshold_a(x, n, dist), 0.25 * x);
        const ShaoInput in{x, n, 4.0, 1.0, rho, dist, a, RhoSumMode::dyadic_partial};
        const double b = shao_bound(in);
        CHECK(std::isfinite(b));
        CHECK(b <= prev * (1.0 + 1e-12));
        prev = b;
    }
    CHECK(prev <= 1e-4);

    // iid (rho = one-step-zero table), bounded f, K = 1: evaluate and check
    // finite and decreasing on a grid
    const auto qb = QuantileFn::bounded(1.0);
    const auto rho0 = DecaySeq::table({1.0, 0.0});
    double prev_b = std::numeric_limits<double>::infinity();
    for (double x : {4.0, 8.0, 16.0, 32.0}) {
        const double a = std::max(shao_threshold_a(x, n, qb), 0.25 * x);
        const double b = shao_bound({x, n, 4.0, 1.0, rho0, qb, a, RhoSumMode::dyadic_partial});
        CHECK(std::isfinite(b));
        CHECK(b <= prev_b);
        prev_b = b;
    }

    // infinite-sum variant is at least the dyadic partial sum variant
    const double a = 8.0;
    const ShaoInput part{32.0, n, 4.0, 1.0, rho, dist, a, RhoSumMode::dyadic_partial};
    ShaoInput inf_in = part;
    inf_in.mode = RhoSumMode::infinite;
    CHECK(shao_bound(inf_in) >= shao_bound(part));

    CHECK_THROWS_AS(shao_bound({1.0, 4, 1.5, 1.0, rho, dist, 0.0, RhoSumMode::dyadic_partial}),
                    std::domain_error);
}

TEST_CASE("calibrate_shao_k: finds a finite K, deterministic, stable in M") {
    const auto model = make_preset("ar1:0.5");
    const std::vector<std::uint64_t> n_grid{1 << 6, 1 << 8};
    const std::vector<double> x_mult{2.0, 4.0, 8.0};
    const auto cal = calibrate_shao_k(model, 4.0, n_grid, x_mult, 2000, 5, 2);
    REQUIRE(cal.found);
    CHECK(cal.k_const > 0.0);
    for (const auto& row : cal.table) CHECK(row.dominated);

    const auto again = calibrate_shao_k(model, 4.0, n_grid, x_mult, 2000, 5, 2);
    CHECK(again.k_const == cal.k_const);

    const auto bigger = calibrate_shao_k(model, 4.0, n_grid, x_mult, 8000, 5, 2);
    REQUIRE(bigger.found);
    // at most one grid step apart
    const auto idx_of = [&](double k) {
        for (std::size_t i = 0; i < cal.k_grid.size(); ++i)
            if (cal.k_grid[i] == k) return static_cast<int>(i);
        return -1;
    };
    CHECK(std::abs(idx_of(bigger.k_const) - idx_of(cal.k_const)) <= 1);
}
