#pragma once

#include <cstdint>
#include <vector>

#include "hwl/process.hpp"
#include "hwl/quantile.hpp"

namespace hwl {

// s_N^2 = sum_{i,j<=N} |Cov(X_i, X_j)| from the model's covariance formula.
double s_n_squared(const ProcessModel& model, std::uint64_t n_terms);

struct FukNagaevInput {
    double lambda = 0.0;   // > 0
    std::uint64_t n = 1;   // N >= 1
    double r = 1.0;        // >= 1
    QuantileFn q;          // quantile of |f|
    DecaySeq tau;          // tau-dependence sequence
    double s2 = 0.0;       // s_N^2, exact or via the integral bound
};

// 4 (1 + lambda^2 / (r s_N^2))^(-r/2) + (4N/lambda) int_0^{S(lambda/r)} Q,
// where S(v) = inf{u : R(u) <= v} and R = (tau/2)^{-1}(H(.)) Q(.). Bounds
// mu{max_{i<=N} |S_i| >= 5 lambda}.
double fuk_nagaev_bound(const FukNagaevInput& in);

// Upper bound on s_N^2: 4N int_0^{||f||_1} (tau/2)^{-1}(u) Q(G(u)) du.
double s_n_squared_tau_bound(const QuantileFn& q, const DecaySeq& tau, std::uint64_t n_terms);

// Minimal A >= 0 with 2N E[|f| 1{|f| >= A}] <= x.
double shao_threshold_a(double x, std::uint64_t n_terms, const QuantileFn& dist);

enum class RhoSumMode { dyadic_partial, infinite };

struct ShaoInput {
    double x = 0.0;        // > 0
    std::uint64_t n = 1;   // N >= 1
    double q_moment = 2.0; // q >= 2
    double k_const = 1.0;  // calibration constant K
    DecaySeq rho;          // rho-mixing sequence
    QuantileFn dist;       // quantile of |f|
    double a = 0.0;        // truncation threshold satisfying the (x, N) constraint
    RhoSumMode mode = RhoSumMode::dyadic_partial;
};

// N mu{|f| >= A} + K x^-q (N^(q/2) e^{K sum rho(2^i)} ||f||_2^q
//                          + N e^{K sum rho^(2/q)(2^i)} E[|f|^q 1{|f| <= A}]).
double shao_bound(const ShaoInput& in);

struct DominationRow {
    std::uint64_t n = 0;
    double threshold = 0.0;  // lambda or x
    double bound = 0.0;
    double empirical = 0.0;
    double std_error = 0.0;
    bool dominated = false;  // empirical + 3 se <= bound
};

// Empirical tail mu{max_{1<=i<=N} |S_i| >= threshold} over m paths.
struct MaxTail {
    double p_hat = 0.0;
    double std_error = 0.0;
};
std::vector<MaxTail> empirical_max_tail(const ProcessModel& model, std::uint64_t n_terms,
                                        const std::vector<double>& thresholds,
                                        std::uint64_t m_paths, std::uint64_t seed,
                                        int threads = 1);

struct ShaoCalibration {
    bool found = false;
    double k_const = 0.0;
    std::vector<double> k_grid;
    std::vector<DominationRow> table;  // at the calibrated K
};

// Smallest K on a geometric grid such that shao_bound dominates the
// empirical tail plus 3 binomial standard errors at every (N, x).
ShaoCalibration calibrate_shao_k(const ProcessModel& model, double q_moment,
                                 const std::vector<std::uint64_t>& n_grid,
                                 const std::vector<double>& x_multipliers, std::uint64_t m_paths,
                                 std::uint64_t seed, int threads = 1);

} // namespace hwl
