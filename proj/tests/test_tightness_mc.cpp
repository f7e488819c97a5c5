#include "doctest.h"

#include <cmath>

#include "hwl/process.hpp"
#include "hwl/quantile.hpp"
#include "hwl/tightness.hpp"

using namespace hwl;

TEST_CASE("tightness_sum: degenerate and zero-process cases") {
    const auto gauss = make_preset("iid-gauss");
    const auto deg = tightness_sum(gauss, 8, 0.1, 1.0, 3.0, 100, 1);
    CHECK(deg.degenerate);
    CHECK(deg.value == 0.0);

    // identically zero process via a zero-coefficient causal model
    CausalLinear zero;
    zero.coeffs = {0.0};
    zero.innovation = InnovationKind::rademacher;
    zero.center = false;
    const ProcessModel zm(zero, "zero");
    const auto est = tightness_sum(zm, 1 << 8, 0.5, 1.0, 3.0, 200, 1);
    CHECK(est.value == 0.0);
    for (const auto& lv : est.per_level) CHECK(lv.empirical_prob == 0.0);
}

TEST_CASE("tightness_sum: level bookkeeping and invariants") {
    const auto gauss = make_preset("iid-gauss");
    const auto est = tightness_sum(gauss, 1 << 10, 0.5, 0.5, 3.0, 400, 7, 2);
    CHECK(est.alpha == doctest::Approx(0.5 - 1.0 / 3.0));
    // levels run k = 1..log2(floor(n delta)) = 9
    CHECK(est.per_level.size() == 9);
    double total = 0.0;
    for (const auto& lv : est.per_level) {
        CHECK(lv.empirical_prob >= 0.0);
        CHECK(lv.empirical_prob <= 1.0);
        CHECK(lv.contribution ==
              doctest::Approx(std::pow(2.0, -lv.k) * lv.empirical_prob).epsilon(1e-12));
        total += lv.contribution;
    }
    CHECK(est.value == doctest::Approx(static_cast<double>(est.n) * total).epsilon(1e-12));
}

TEST_CASE("tightness_sum: monotone in eps and in delta under common random numbers") {
    const auto gauss = make_preset("iid-gauss");
    const std::uint64_t n = 1 << 12, m = 2000, seed = 11;
    const auto e2 = tightness_sum(gauss, n, 0.5, 2.0, 3.0, m, seed, 2);
    const auto e4 = tightness_sum(gauss, n, 0.5, 4.0, 3.0, m, seed, 2);
    const auto e8 = tightness_sum(gauss, n, 0.5, 8.0, 3.0, m, seed, 2);
    CHECK(e2.value >= e4.value);
    CHECK(e4.value >= e8.value);
    // module example: strictly smaller at eps = 8 than at eps = 2
    CHECK(e8.value < e2.value);
    CHECK(e2.value > 0.0);

    // fewer levels at smaller delta, same paths: value can only shrink
    const auto d_small = tightness_sum(gauss, n, 0.05, 2.0, 3.0, m, seed, 2);
    CHECK(d_small.value <= e2.value);
    CHECK(d_small.per_level.size() < e2.per_level.size());
    for (std::size_t k = 0; k < d_small.per_level.size(); ++k)
        CHECK(d_small.per_level[k].empirical_prob ==
              doctest::Approx(e2.per_level[k].empirical_prob));
}

TEST_CASE("tightness_sum: counterexample stays bounded away from zero as delta shrinks") {
    const auto params = std::make_shared<TowerParams>(TowerParams::make(3.0, 2));
    const ProcessModel ce(CounterexampleModel{params, 0.0}, "counterexample-coboundary");
    const std::uint64_t n = static_cast<std::uint64_t>(params->N(2));
    const double eps = 0.6;
    double prev = -1.0;
    for (double delta : {std::pow(2.0, -9), std::pow(2.0, -7)}) {
        const auto est = tightness_sum(ce, n, delta, eps, 3.0, 4000, 3, 4);
        CHECK(est.value > 0.3);
        if (prev >= 0.0) CHECK(est.value >= prev);  // more levels, same paths
        prev = est.value;
    }
}
