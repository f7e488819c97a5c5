#pragma once

#include <cstdint>
#include <vector>

#include "hwl/process.hpp"
#include "hwl/quantile.hpp"

namespace hwl {

// Joint law of two finite partitions: p(i, j) over rows (partition A) and
// columns (partition B).
class FinitePartitionPair {
public:
    FinitePartitionPair(std::size_t rows, std::size_t cols, std::vector<double> probs);

    static FinitePartitionPair independent(const std::vector<double>& row_marginal,
                                           const std::vector<double>& col_marginal);
    static FinitePartitionPair diagonal(const std::vector<double>& marginal);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double at(std::size_t i, std::size_t j) const { return p_[i * cols_ + j]; }

private:
    std::size_t rows_, cols_;
    std::vector<double> p_;
};

// sup over unions of rows A and unions of columns B of
// |mu(A inter B) - mu(A) mu(B)|; exact enumeration, sizes <= 12.
double alpha_exact(const FinitePartitionPair& pair);

// Maximal correlation: second singular value of p(i,j)/sqrt(p(i.)p(.j))
// with zero-mass rows/columns removed.
double rho_exact(const FinitePartitionPair& pair);

struct TauEstimate {
    std::int64_t lag = 0;
    double value = 0.0;
    double std_error = 0.0;
    int truncation_depth = 0;
    bool truncated_warn = false;  // residual coefficient mass beyond the depth > 1e-9
};

struct MonteCarloParams {
    std::uint64_t paths = 1000;
    std::uint64_t seed = 0;
    int threads = 1;
};

// tau(i) for a causal linear model: Monte Carlo average over sampled pasts
// of the L1 distance between the CDF of the conditional law of X_{p+i} given
// the truncated past and the marginal CDF. The conditional law is enumerated
// exactly for finite-valued innovations (and is Gaussian in the Gaussian
// case); the marginal uses the declared exact shape when available.
TauEstimate tau_estimate_1d(const ProcessModel& model, std::int64_t lag, int truncation_depth,
                            const MonteCarloParams& mc);

// Lemma-style comparison: tau_val <= 2 int_0^{min(1, 2 alpha_val)} Q(u) du.
bool tau_alpha_bound_check(double tau_val, double alpha_val, const QuantileFn& q);

} // namespace hwl
