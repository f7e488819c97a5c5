#pragma once

#include <cstdint>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

namespace hwl {

// Partial sums S_0..S_n with S_0 = 0.
struct PartialSumPath {
    std::vector<double> sums;

    // Accumulates in long double so that sparse coboundary paths keep the
    // telescoping identity well below 1e-9.
    static PartialSumPath from_increments(const std::vector<double>& xs);

    int n() const { return static_cast<int>(sums.size()) - 1; }
};

// S^pl(t) = S_{floor(nt)} + (nt - floor(nt)) X_{floor(nt)+1} for t in [0,1].
double polygonal_eval(const PartialSumPath& path, double t);

enum class HolderMethod { exact, dyadic };

struct HolderStat {
    double value = 0.0;
    double alpha = 0.0;
    HolderMethod method = HolderMethod::exact;
    std::optional<std::pair<int, int>> argmax;  // (i, i') with 1 <= i < i' <= n
};

// Bracket constant: dyadic <= exact <= C(alpha) * dyadic.
inline double dyadic_bracket_constant(double alpha) {
    return 2.0 / (1.0 - std::pow(2.0, alpha - 1.0));
}

// max over 1 <= i < i' <= n of |S_i' - S_i| / (i'-i)^alpha, O(n^2).
HolderStat holder_stat_exact(const PartialSumPath& path, double alpha);

// O(n) statistic over dyadic grid blocks; see dyadic_bracket_constant.
HolderStat holder_stat_dyadic(const PartialSumPath& path, double alpha);

struct ScaledModulus {
    double value = 0.0;
    bool degenerate = false;  // delta * n < 1: no admissible pair
};

// n^(alpha - 1/2) * max over pairs with i' - i < delta * n.
ScaledModulus scaled_holder_modulus(const PartialSumPath& path, double alpha, double delta);

// Scaled statistic of a standard Gaussian walk (the discrete Brownian
// reference): n^(alpha-1/2) times the chosen grid statistic.
HolderStat sample_bm_reference(int n, double alpha, std::uint64_t seed,
                               HolderMethod method = HolderMethod::dyadic);

} // namespace hwl
