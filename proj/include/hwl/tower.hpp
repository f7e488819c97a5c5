#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hwl/rng.hpp"

namespace hwl {

using u128 = unsigned __int128;

// Certificates for the admissibility of the level sequences (N_l), (K_l).
struct TowerValidity {
    bool checked = false;     // false when construction waived validation
    bool increasing = false;  // N_l, K_l strictly increasing
    bool cap_4k = false;      // 4 K_l <= N_l
    bool c312 = false;        // 4 N_l^(-1/p) l N_{l-1} < 1 for 2 <= l
    bool c313 = false;        // prefix sums of K_i^(1/2) bounded by K_{l+1}^(1/2)
    bool c314 = false;        // prefix sums of K_l / K_{l+1}^(1/2) below the declared bound
    bool c311_surrogate = false;  // N_l sum_{l'>l} K_l'/N_l' decreasing over levels
    double c314_prefix_bound = 2.0;
    double c314_prefix_max = 0.0;
    // Extrapolated per-step probability mass of omitted levels l > l_max and
    // the horizon below which omission risk stays under 1e-9. Advisory: the
    // realized process is exactly the finite-level one.
    double omitted_mass_per_step = 0.0;
    double advisory_horizon = 0.0;

    bool all_pass() const { return increasing && cap_4k && c312 && c313 && c314 && c311_surrogate; }
};

// Level sequences N_l = 2^(b_l), K_l = 2^(kb_l) of the coboundary
// construction, realized on the dyadic odometer (so powers of two only).
class TowerParams {
public:
    // Default strategy: N_1 = 16; N_l = smallest power of two strictly
    // greater than (4 l N_{l-1})^p; K_l = 2^(floor(b_l / 2)). Validates every
    // certificate and throws on violation.
    static TowerParams make(double p, int l_max);

    // Explicit level sequences, e.g. mini-towers for exhaustive tests.
    static TowerParams custom(double p, std::vector<int> bits, std::vector<int> kbits,
                              bool validate);

    double p() const { return p_; }
    int l_max() const { return static_cast<int>(b_.size()); }
    int bits(int l) const { return b_.at(static_cast<std::size_t>(l - 1)); }
    int kbits(int l) const { return kb_.at(static_cast<std::size_t>(l - 1)); }
    u128 N(int l) const { return u128(1) << bits(l); }
    u128 K(int l) const { return u128(1) << kbits(l); }

    // N_l^(1/p) / K_l^(1/2 + 1/p), the tent slope of level l.
    double scale(int l) const;
    // N_l^(1/p) K_l^(1/2 - 1/p), the tent peak of level l.
    double peak(int l) const;
    // N_l^(1/p) as a double.
    double n_root(int l) const;

    const TowerValidity& validity() const { return validity_; }

    std::string describe() const;

private:
    TowerParams(double p, std::vector<int> b, std::vector<int> kb);

    void validate_or_throw();
    void compute_advisories();

    double p_;
    std::vector<int> b_;
    std::vector<int> kb_;
    TowerValidity validity_;
};

// Point of the product space: the first `nbits` binary digits. The odometer
// T adds 1 with carry, so the position in tower l is the integer value of
// the first b_l bits and (j_l + i) mod N_l tracks T^i exactly.
struct OdometerState {
    u128 bits = 0;
    int nbits = 0;
};

OdometerState sample_state(const TowerParams& params, Rng& rng);

// Adding machine: +1 with carry on the stored bits.
OdometerState odometer_step(const OdometerState& s);

// j_l = value of the first b_l bits.
u128 level_position(const TowerParams& params, const OdometerState& s, int l);

// Value of g_l on rung m of tower l: with j = N_l - m, scale * j for
// 1 <= j <= K_l, scale * (2 K_l - j) for K_l < j <= 2 K_l - 1, else 0.
double g_level_value(const TowerParams& params, int l, u128 m);

// g(T^i omega) = sum over levels of the tent at position (j_l + i) mod N_l.
double eval_g(const TowerParams& params, const OdometerState& s, std::uint64_t i);

// One replicate of X_j = m_j + g(T^j) - g(T^(j+1)), j = 1..n, with an iid
// Rademacher * sigma_m martingale factor on an independent coordinate.
struct CoboundaryPathResult {
    std::vector<double> x;
    double g_first = 0.0;       // g(T^1)
    double g_after_last = 0.0;  // g(T^(n+1))
    double martingale_sum = 0.0;
};

CoboundaryPathResult sample_coboundary_path(const TowerParams& params, double sigma_m,
                                            std::uint64_t n, std::uint64_t seed);

// Indicator of {max_{1<=i<i'<=N_l} |g(T^i') - g(T^i)| / (i'-i)^(1/2-1/p)
// >= N_l^(1/p) / 2} for one state, decided exactly from the tent support
// windows (plus one lower-level period of buffer).
bool holder_event_indicator(const TowerParams& params, int l, const OdometerState& s);

// Brute-force oracle for the same indicator; O(N_l^2), guarded.
bool holder_event_indicator_brute(const TowerParams& params, int l, const OdometerState& s);

struct EventProbability {
    double p_hat = 0.0;
    double std_error = 0.0;
    std::uint64_t fires = 0;
    std::uint64_t paths = 0;
};

EventProbability holder_event_probability(const TowerParams& params, int l, std::uint64_t m_paths,
                                          std::uint64_t seed, int threads = 1);

struct LpRatioRow {
    std::uint64_t n = 0;
    double ratio = 0.0;        // estimate of E|S_n(f)|^p / n^(p/2)
    double std_error = 0.0;
    double cobound_norm = 0.0; // ||g - g o T^n||_p / sqrt(n) (the sigma_m = 0 part)
};

std::vector<LpRatioRow> lp_ratio(const TowerParams& params, double p, double sigma_m,
                                 const std::vector<std::uint64_t>& n_grid, std::uint64_t m_paths,
                                 std::uint64_t seed, int threads = 1);

} // namespace hwl
