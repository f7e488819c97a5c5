#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hwl/holder.hpp"
#include "hwl/quantile.hpp"
#include "hwl/tower.hpp"

namespace hwl {

// X = sign * Q(U) with U uniform on (0,1]; with symmetrize the sign is an
// independent Rademacher variable, giving a centered symmetric law.
struct IidModel {
    QuantileFn dist;
    bool symmetrize = true;
};

enum class InnovationKind { fair_bit, rademacher, gaussian };

// X_k = sum_j a_j eps_{k-j} - center_shift, with a finite coefficient
// horizon (tail mass below 1e-12 by construction of the presets).
struct CausalLinear {
    std::vector<double> coeffs;
    InnovationKind innovation = InnovationKind::gaussian;
    bool center = true;  // subtract (sum a_j) E[eps]

    // Exact marginal shape when known (uniform for the dyadic fair-bit
    // shift); declared model metadata in the spirit of the AR(1) rho below.
    struct UniformMarginal {
        double lo, hi;
    };
    std::optional<UniformMarginal> uniform_marginal;
    std::optional<DecaySeq> declared_tau;
    std::optional<DecaySeq> declared_alpha;
};

struct GaussianAR1 {
    double phi;  // in (-1, 1); unit innovation variance
};

struct CounterexampleModel {
    std::shared_ptr<const TowerParams> params;
    double sigma_m = 1.0;
};

class ProcessModel {
public:
    using Variant = std::variant<IidModel, CausalLinear, GaussianAR1, CounterexampleModel>;

    ProcessModel(Variant v, std::string id);

    const Variant& variant() const { return v_; }
    const std::string& id() const { return id_; }

    const IidModel* as_iid() const { return std::get_if<IidModel>(&v_); }
    const CausalLinear* as_causal() const { return std::get_if<CausalLinear>(&v_); }
    const GaussianAR1* as_ar1() const { return std::get_if<GaussianAR1>(&v_); }
    const CounterexampleModel* as_counterexample() const {
        return std::get_if<CounterexampleModel>(&v_);
    }

    // Var(X_0) + 2 sum_k Cov(X_0, X_k); closed forms per variant.
    double long_run_variance() const;

    // Cov(X_0, X_k); throws for models without a covariance formula.
    double cov_at_lag(std::int64_t k) const;

    // Quantile function of |X_0|. Exact for iid and AR(1); for causal models
    // it requires a declared marginal (dense grid approximation).
    QuantileFn marginal_abs_quantile() const;

    // Declared dependence metadata.
    std::optional<DecaySeq> declared_rho() const;
    std::optional<DecaySeq> declared_tau() const;
    std::optional<DecaySeq> declared_alpha() const;

private:
    Variant v_;
    std::string id_;
};

struct Trajectory {
    std::vector<double> values;
    std::string model_id;
    std::uint64_t master_seed = 0;
    std::uint64_t n = 0;
};

// Stationary sample X_1..X_n; causal models burn in their coefficient
// horizon so the first value is already stationary.
Trajectory sample_path(const ProcessModel& model, std::uint64_t n, std::uint64_t seed);

// Same sample without the wrapper, reusing the caller's buffer.
void sample_path_into(const ProcessModel& model, std::uint64_t n, std::uint64_t seed,
                      std::vector<double>& out);

// One replicate of the counterexample process as trajectory + partial sums.
std::pair<Trajectory, PartialSumPath> sample_f_path(const TowerParams& params, double sigma_m,
                                                    std::uint64_t n, std::uint64_t seed);

// Model presets addressable by name: "iid-gauss", "iid-pareto:a",
// "bernoulli-shift", "ar1:phi", "counterexample:p".
ProcessModel make_preset(const std::string& name);

std::vector<std::string> preset_names();

} // namespace hwl
