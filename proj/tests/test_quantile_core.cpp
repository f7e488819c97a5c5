#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "hwl/condition.hpp"
#include "hwl/quantile.hpp"
#include "hwl/rng.hpp"
#include "hwl/stats.hpp"
#include "support/oracles.hpp"

using namespace hwl;

TEST_CASE("quantile_eval closed forms and inf definition") {
    const auto pareto2 = QuantileFn::pareto(1.0, 2.0);
    CHECK(pareto2(0.25) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(pareto2(1.0) == doctest::Approx(1.0).epsilon(1e-12));

    const auto c3 = QuantileFn::bounded(3.0);
    for (double u : {1e-9, 0.3, 0.7, 1.0}) CHECK(c3(u) == 3.0);

    const auto emp = QuantileFn::empirical({1.0, 2.0, 3.0, 4.0});
    CHECK(emp(0.5) == 2.0);
    CHECK(emp(0.5) == testing::empirical_quantile_by_scan({1.0, 2.0, 3.0, 4.0}, 0.5));
    // eval(k/m) is the (m-k)-th order statistic
    CHECK(emp(0.25) == 3.0);
    CHECK(emp(0.75) == 1.0);
    CHECK(emp(1.0) == 0.0);
    // random u agree with the scan oracle
    Rng rng(7);
    const std::vector<double> sample{0.5, 0.5, 1.25, 2.0, 7.5};
    const auto emp2 = QuantileFn::empirical(sample);
    for (int i = 0; i < 200; ++i) {
        const double u = rng.uniform_pos();
        CHECK(emp2(u) == testing::empirical_quantile_by_scan(sample, u));
    }

    CHECK_THROWS_AS(pareto2(0.0), std::domain_error);
    CHECK_THROWS_AS(pareto2(1.5), std::domain_error);
    CHECK_THROWS_AS(pareto2(-0.1), std::domain_error);
}

TEST_CASE("quantile_eval is non-increasing and nonnegative") {
    Rng rng(11);
    for (int rep = 0; rep < 40; ++rep) {
        const auto q = testing::random_quantile(rng);
        double prev = std::numeric_limits<double>::infinity();
        for (int k = 1; k <= 50; ++k) {
            const double u = static_cast<double>(k) / 50.0;
            const double v = q(u);
            CHECK(v >= 0.0);
            CHECK(v <= prev + 1e-12);
            prev = v;
        }
    }
}

TEST_CASE("decay_inverse examples") {
    CHECK(DecaySeq::geometric(1.0, 0.5).inverse(0.125) == 3);
    CHECK(DecaySeq::zero().inverse(0.0) == 0);
    CHECK(DecaySeq::power(1.0, 2.0).inverse(0.1) == 4);
    {
        // linear-scan oracle for the power case
        const auto d = DecaySeq::power(1.0, 2.0);
        std::int64_t k = 0;
        while (d.value(k) > 0.1) ++k;
        CHECK(k == 4);
    }
    // table with positive constant tail never reaches small u
    const auto t = DecaySeq::table({0.5, 0.25, 0.1});
    CHECK(t.inverse(0.05) == decay_infinite);
    CHECK(t.inverse(0.1) == 2);
    CHECK(t.inverse(0.75) == 0);
    CHECK_THROWS_AS(t.inverse(-1.0), std::domain_error);
}

TEST_CASE("decay_inverse Galois property on random pairs") {
    Rng rng(23);
    int checked = 0;
    for (int rep = 0; rep < 10000; ++rep) {
        const auto d = testing::random_decay(rng);
        const double u = rng.bit() ? rng.uniform() * 2.0 : std::pow(10.0, -8.0 * rng.uniform());
        const auto inv = d.inverse(u);
        for (std::int64_t k : {std::int64_t(0), std::int64_t(1), std::int64_t(2), std::int64_t(5),
                               std::int64_t(17), std::int64_t(1000)}) {
            const bool lhs = inv <= k;
            const bool rhs = d.value(k) <= u;
            CHECK(lhs == rhs);
            ++checked;
        }
        // inverse_real agrees with the integer inverse
        const double invr = d.inverse_real(u);
        if (inv == decay_infinite) {
            CHECK(std::isinf(invr));
        } else {
            CHECK(invr == static_cast<double>(inv));
        }
    }
    CHECK(checked >= 10000);
}

TEST_CASE("integrated_quantile closed forms, quadrature cross-check") {
    CHECK(integrated_quantile(QuantileFn::pareto(1.0, 2.0), 1.0) == doctest::Approx(2.0).epsilon(1e-12));
    const auto c = QuantileFn::bounded(1.7);
    CHECK(integrated_quantile(c, 0.3) == doctest::Approx(0.51).epsilon(1e-12));

    const auto p4 = QuantileFn::pareto(1.0, 4.0);
    const double quad = integrate([&](double u) { return p4(u); }, 0.0, 1.0, 1e-11, 24);
    CHECK(integrated_quantile(p4, 1.0) == doctest::Approx(4.0 / 3.0).epsilon(1e-9));
    CHECK(quad == doctest::Approx(4.0 / 3.0).epsilon(1e-8));
    // closed form (a/(a-1)) x^((a-1)/a) at interior points, against quadrature
    for (double x : {0.1, 0.37, 0.8}) {
        const double qx = integrate([&](double u) { return p4(u); }, 0.0, x, 1e-11, 24);
        CHECK(integrated_quantile(p4, x) == doctest::Approx(qx).epsilon(1e-8));
    }

    CHECK_THROWS_AS(integrated_quantile(QuantileFn::pareto(1.0, 1.0), 0.5), std::domain_error);
    CHECK_THROWS_AS(integrated_quantile(QuantileFn::pareto(1.0, 0.7), 0.5), std::domain_error);
}

TEST_CASE("integrated_quantile monotone, concave; inverse is a left inverse") {
    Rng rng(31);
    for (int rep = 0; rep < 30; ++rep) {
        const auto q = testing::random_quantile(rng);
        double prev = 0.0;
        for (int k = 1; k <= 64; ++k) {
            const double x = static_cast<double>(k) / 64.0;
            const double h = q.integrated(x);
            CHECK(h >= prev - 1e-12);
            prev = h;
        }
        for (int k = 1; k < 32; ++k) {
            const double x1 = static_cast<double>(k) / 33.0;
            const double x2 = static_cast<double>(k + 1) / 33.0;
            const double mid = q.integrated(0.5 * (x1 + x2));
            CHECK(mid >= 0.5 * (q.integrated(x1) + q.integrated(x2)) - 1e-10);
        }
        for (double x : {0.05, 0.33, 0.71, 1.0}) {
            if (q(x) <= 0.0) continue;  // identity only claimed where Q > 0
            const double y = q.integrated(x);
            CHECK(q.integrated_inverse(y) == doctest::Approx(x).epsilon(1e-9));
        }
    }
}

TEST_CASE("integrated_quantile_inverse examples") {
    CHECK(integrated_quantile_inverse(QuantileFn::pareto(1.0, 2.0), 2.0) == doctest::Approx(1.0));
    CHECK(integrated_quantile_inverse(QuantileFn::bounded(4.0), 1.0) == doctest::Approx(0.25).epsilon(1e-10));
    // bisection against the closed form (y/2)^2
    CHECK(integrated_quantile_inverse(QuantileFn::pareto(1.0, 2.0), 1.0) ==
          doctest::Approx(0.25).epsilon(1e-9));
    CHECK(integrated_quantile_inverse(QuantileFn::pareto(1.0, 2.0), 5.0) == 1.0);
    CHECK(integrated_quantile_inverse(QuantileFn::pareto(1.0, 2.0), 0.0) == 0.0);
}

TEST_CASE("condition_functional_tau: degenerate and oracle-checked values") {
    const auto q = QuantileFn::bounded(1.0);
    CHECK(condition_functional_tau(3.0, q, DecaySeq::zero(), 0.5) == 0.0);
    CHECK(condition_functional_tau(3.0, QuantileFn::pareto(1.0, 3.0), DecaySeq::zero(), 10.0) == 0.0);

    // BoundedConst(1), tau = Geometric(2, 1/2), p = 3, t = 10:
    // (tau/2)^{-1}(u) = ceil(-log2 u) and H(u) = u, so u*(10) = 2^-10 and the
    // value is 100 * 2^-10.
    const auto tau = DecaySeq::geometric(2.0, 0.5);
    const double fast = condition_functional_tau(3.0, q, tau, 10.0);
    CHECK(fast == doctest::Approx(100.0 / 1024.0).epsilon(1e-9));
    const double oracle =
        testing::raw_condition_integral(DecayQuantileProfile::Kind::tau, 3.0, q, tau, 10.0);
    CHECK(fast == doctest::Approx(oracle).epsilon(1e-6));

    // Pareto(1, a=4), tau = Geometric(1, 1/2), p = 3: the functional decays
    // like t^-1 log^3 t, so the trend toward 0 emerges from t ~ 10^2 on.
    const auto rep = condition_sweep(ConditionKind::tau, 3.0, QuantileFn::pareto(1.0, 4.0),
                                     DecaySeq::geometric(1.0, 0.5),
                                     {10.0, 1e2, 1e3, 1e4, 1e5});
    CHECK(rep.values[2] > rep.values[3]);
    CHECK(rep.values[3] > rep.values[4]);
    const double peak = *std::max_element(rep.values.begin(), rep.values.end());
    CHECK(rep.values.back() <= 0.25 * peak);
    CHECK(rep.verdict_hint == "decreasing");
    // each sweep point agrees with the raw-integrand oracle
    for (std::size_t i = 0; i < rep.t_grid.size(); ++i) {
        const double o = testing::raw_condition_integral(
            DecayQuantileProfile::Kind::tau, 3.0, QuantileFn::pareto(1.0, 4.0),
            DecaySeq::geometric(1.0, 0.5), rep.t_grid[i]);
        CHECK(rep.values[i] == doctest::Approx(o).epsilon(1e-6));
    }

    CHECK_THROWS_AS(condition_functional_tau(2.0, q, tau, 1.0), std::domain_error);
    CHECK_THROWS_AS(condition_functional_tau(3.0, q, tau, 0.0), std::domain_error);
}

TEST_CASE("condition_functional_alpha: degenerate cases and threshold behavior") {
    const auto q = QuantileFn::pareto(1.0, 4.0);
    CHECK(condition_functional_alpha(3.0, q, DecaySeq::zero(), 7.0) == 0.0);

    // bounded profile: alpha with finite support, bounded f
    const auto qb = QuantileFn::bounded(2.0);
    const auto a_fin = DecaySeq::table({0.3, 0.1, 0.0});
    CHECK(condition_functional_alpha(3.0, qb, a_fin, 5.0) == 0.0);

    // Remark 2.4 regime, a = 4, p = 3, threshold a(p-1)/(a-p) = 8:
    // theta = 1.2*8 decays toward 0, theta = 0.8*8 does not.
    const std::vector<double> tg{10.0, 100.0, 1000.0, 10000.0};
    const auto fast_rep = condition_sweep(ConditionKind::alpha, 3.0, q, DecaySeq::power(1.0, 9.6), tg);
    for (std::size_t i = 1; i < fast_rep.values.size(); ++i)
        CHECK(fast_rep.values[i] < fast_rep.values[i - 1]);
    CHECK(fast_rep.verdict_hint == "decreasing");

    const auto slow_rep = condition_sweep(ConditionKind::alpha, 3.0, q, DecaySeq::power(1.0, 6.4), tg);
    CHECK(slow_rep.values.back() > 0.9 * slow_rep.values.front());  // no decay toward 0
}

TEST_CASE("interval fast path equals raw quadrature on random configurations") {
    Rng rng(101);
    int done = 0;
    while (done < 100) {
        const auto q = testing::random_quantile(rng);
        const auto d = testing::random_decay(rng);
        const double p = 2.2 + 1.8 * rng.uniform();
        const double t = std::pow(10.0, -0.3 + 2.0 * rng.uniform());
        const auto kind = rng.bit() ? DecayQuantileProfile::Kind::tau : DecayQuantileProfile::Kind::alpha;
        const double fast = kind == DecayQuantileProfile::Kind::tau
                                ? condition_functional_tau(p, q, d, t)
                                : condition_functional_alpha(p, q, d, t);
        const double oracle = testing::raw_condition_integral(kind, p, q, d, t);
        const double scale = std::max({std::abs(oracle), std::abs(fast), 1e-12});
        CHECK(std::abs(fast - oracle) <= 1e-6 * scale);
        ++done;
    }
}

TEST_CASE("weak_lp_tail_functional closed forms") {
    const auto q3 = QuantileFn::pareto(1.0, 3.0);
    CHECK(weak_lp_tail_functional(2.5, q3, 4.0) == doctest::Approx(0.75).epsilon(1e-10));
    for (double t : {1.0, 4.0, 16.0, 64.0})
        CHECK(weak_lp_tail_functional(2.5, q3, t) ==
              doctest::Approx(1.5 / std::sqrt(t)).epsilon(1e-8));

    const auto qb = QuantileFn::bounded(2.0);
    CHECK(weak_lp_tail_functional(3.0, qb, 2.5) == 0.0);
    CHECK(weak_lp_tail_functional(3.0, qb, 2.0) == 0.0);

    // a = p: constant p/(p-1)
    const double p = 2.5;
    const auto qp = QuantileFn::pareto(1.0, p);
    for (double t : {1.0, 3.0, 10.0, 100.0})
        CHECK(weak_lp_tail_functional(p, qp, t) == doctest::Approx(p / (p - 1.0)).epsilon(1e-8));

    // exercises the internal tail-vs-quantile cross-check on all variants
    Rng rng(77);
    for (int rep = 0; rep < 60; ++rep) {
        const auto q = testing::random_quantile(rng);
        const double t = std::pow(10.0, -0.5 + 2.0 * rng.uniform());
        CHECK(weak_lp_tail_functional(3.0, q, t) >= 0.0);
    }
}

TEST_CASE("iid case: alpha functional with one-step-zero table matches weak Lp functional") {
    // alpha_0 = 1/4, alpha_k = 0 for k >= 1 makes R(u) = Q(u) 1{u < 1/4}; for
    // t >= Q(1/4) both functionals integrate Q over (0, tail_prob(t)).
    const auto alpha = DecaySeq::table({0.25, 0.0});
    const auto q = QuantileFn::pareto(1.0, 3.0);
    const double q_quarter = q(0.25);
    for (double t : {q_quarter, q_quarter + 0.5, 5.0, 50.0}) {
        const double lhs = condition_functional_alpha(3.0, q, alpha, t);
        const double rhs = weak_lp_tail_functional(3.0, q, t);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
    }
}

TEST_CASE("empirical quantile reproduces the sample distribution (KS)") {
    Rng rng(5);
    const std::size_t m = 10000;
    std::vector<double> sample(m);
    for (auto& x : sample) x = std::abs(rng.normal()) * (1.0 + rng.uniform());
    const auto q = QuantileFn::empirical(sample);
    std::vector<double> regen(m);
    for (auto& x : regen) x = q(rng.uniform_pos());
    CHECK(two_sample_ks(sample, regen) <= 0.02);
}

TEST_CASE("abs-gaussian quantile is consistent with its tail") {
    const auto q = QuantileFn::abs_gaussian(1.3);
    for (double u : {0.01, 0.2, 0.5, 0.9}) {
        CHECK(q.tail_prob(q(u)) == doctest::Approx(u).epsilon(1e-10));
    }
    CHECK(q(1.0) == 0.0);
    CHECK(q.integrated(1.0) == doctest::Approx(1.3 * std::sqrt(2.0 / M_PI)).epsilon(1e-12));
    const double quad = integrate([&](double u) { return q(u); }, 0.0, 1.0, 1e-11, 24);
    CHECK(q.integrated(1.0) == doctest::Approx(quad).epsilon(1e-8));
}
