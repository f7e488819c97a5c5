#include "hwl/process.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hwl/rng.hpp"

namespace hwl {

namespace {

double innovation_mean(InnovationKind k) {
    switch (k) {
        case InnovationKind::fair_bit: return 0.5;
        case InnovationKind::rademacher: return 0.0;
        case InnovationKind::gaussian: return 0.0;
    }
    return 0.0;
}

double innovation_variance(InnovationKind k) {
    switch (k) {
        case InnovationKind::fair_bit: return 0.25;
        case InnovationKind::rademacher: return 1.0;
        case InnovationKind::gaussian: return 1.0;
    }
    return 1.0;
}

double draw_innovation(InnovationKind k, Rng& rng) {
    switch (k) {
        case InnovationKind::fair_bit: return static_cast<double>(rng.bit());
        case InnovationKind::rademacher: return rng.rademacher();
        case InnovationKind::gaussian: return rng.normal();
    }
    return 0.0;
}

} // namespace

ProcessModel::ProcessModel(Variant v, std::string id) : v_(std::move(v)), id_(std::move(id)) {
    if (const auto* ar = std::get_if<GaussianAR1>(&v_)) {
        if (!(std::abs(ar->phi) < 1.0))
            throw std::invalid_argument("GaussianAR1: phi must lie in (-1,1)");
    }
    if (const auto* cl = std::get_if<CausalLinear>(&v_)) {
        if (cl->coeffs.empty())
            throw std::invalid_argument("CausalLinear: needs at least one coefficient");
    }
    if (const auto* ce = std::get_if<CounterexampleModel>(&v_)) {
        if (!ce->params) throw std::invalid_argument("CounterexampleModel: missing tower params");
        if (!(ce->sigma_m >= 0.0))
            throw std::invalid_argument("CounterexampleModel: sigma_m must be >= 0");
    }
}

double ProcessModel::long_run_variance() const {
    if (const auto* iid = as_iid()) {
        const double mean_x = iid->symmetrize ? 0.0 : iid->dist.integrated(1.0);
        return iid->dist.second_moment() - mean_x * mean_x;
    }
    if (const auto* ar = as_ar1()) return 1.0 / ((1.0 - ar->phi) * (1.0 - ar->phi));
    if (const auto* cl = as_causal()) {
        double s = 0.0;
        for (double a : cl->coeffs) s += a;
        return innovation_variance(cl->innovation) * s * s;
    }
    // f = m + g - g o T with bounded g (finitely many levels): Var(S_n)/n ->
    // sigma_m^2 exactly.
    const auto* ce = as_counterexample();
    return ce->sigma_m * ce->sigma_m;
}

double ProcessModel::cov_at_lag(std::int64_t k) const {
    if (k < 0) k = -k;
    if (as_iid()) return k > 0 ? 0.0 : long_run_variance();
    if (const auto* ar = as_ar1()) {
        const double var = 1.0 / (1.0 - ar->phi * ar->phi);
        return var * std::pow(ar->phi, static_cast<double>(k));
    }
    if (const auto* cl = as_causal()) {
        const auto& a = cl->coeffs;
        double s = 0.0;
        for (std::size_t j = 0; j + static_cast<std::size_t>(k) < a.size(); ++j)
            s += a[j] * a[j + static_cast<std::size_t>(k)];
        return innovation_variance(cl->innovation) * s;
    }
    throw std::domain_error("cov_at_lag: no covariance formula for this model");
}

QuantileFn ProcessModel::marginal_abs_quantile() const {
    if (const auto* iid = as_iid()) return iid->dist;
    if (const auto* ar = as_ar1())
        return QuantileFn::abs_gaussian(std::sqrt(1.0 / (1.0 - ar->phi * ar->phi)));
    if (const auto* cl = as_causal()) {
        if (cl->uniform_marginal) {
            // dense grid of |x| over the declared uniform marginal
            const double lo = cl->uniform_marginal->lo, hi = cl->uniform_marginal->hi;
            const std::size_t m = 20000;
            std::vector<double> xs(m);
            for (std::size_t i = 0; i < m; ++i) {
                const double x = lo + (static_cast<double>(i) + 0.5) * (hi - lo) / static_cast<double>(m);
                xs[i] = std::abs(x);
            }
            return QuantileFn::empirical(std::move(xs));
        }
        if (cl->innovation == InnovationKind::gaussian) {
            double s2 = 0.0;
            for (double a : cl->coeffs) s2 += a * a;
            return QuantileFn::abs_gaussian(std::sqrt(s2));
        }
        throw std::domain_error("marginal_abs_quantile: no declared marginal for this causal model");
    }
    throw std::domain_error("marginal_abs_quantile: not available for the counterexample model");
}

std::optional<DecaySeq> ProcessModel::declared_rho() const {
    if (const auto* ar = as_ar1()) {
        // maximal correlation of jointly Gaussian vectors is the absolute
        // correlation: rho(n) = |phi|^n
        if (ar->phi == 0.0) return DecaySeq::table({1.0, 0.0});
        return DecaySeq::geometric(1.0, std::abs(ar->phi));
    }
    if (as_iid()) return DecaySeq::table({1.0, 0.0});
    return std::nullopt;
}

std::optional<DecaySeq> ProcessModel::declared_tau() const {
    if (const auto* cl = as_causal()) return cl->declared_tau;
    if (as_iid()) return DecaySeq::zero();
    return std::nullopt;
}

std::optional<DecaySeq> ProcessModel::declared_alpha() const {
    if (const auto* cl = as_causal()) return cl->declared_alpha;
    if (as_iid()) return DecaySeq::table({0.25, 0.0});
    return std::nullopt;
}

void sample_path_into(const ProcessModel& model, std::uint64_t n, std::uint64_t seed,
                      std::vector<double>& out) {
    if (n < 1) throw std::invalid_argument("sample_path: n >= 1 required");
    out.resize(static_cast<std::size_t>(n));
    Rng rng(seed);
    if (const auto* iid = model.as_iid()) {
        for (auto& x : out) {
            const double v = iid->dist(rng.uniform_pos());
            x = iid->symmetrize ? v * rng.rademacher() : v;
        }
        return;
    }
    if (const auto* ar = model.as_ar1()) {
        double x = std::sqrt(1.0 / (1.0 - ar->phi * ar->phi)) * rng.normal();
        for (auto& v : out) {
            x = ar->phi * x + rng.normal();
            v = x;
        }
        return;
    }
    if (const auto* cl = model.as_causal()) {
        const auto& a = cl->coeffs;
        const std::size_t h = a.size();
        const double shift = [&] {
            if (!cl->center) return 0.0;
            double s = 0.0;
            for (double c : a) s += c;
            return s * innovation_mean(cl->innovation);
        }();
        // ring buffer of the last h innovations, pre-filled for burn-in
        std::vector<double> eps(h);
        for (auto& e : eps) e = draw_innovation(cl->innovation, rng);
        std::size_t head = 0;  // position of eps_k
        for (auto& v : out) {
            head = (head + 1) % h;
            eps[head] = draw_innovation(cl->innovation, rng);
            double s = 0.0;
            for (std::size_t j = 0; j < h; ++j) s += a[j] * eps[(head + h - j) % h];
            v = s - shift;
        }
        return;
    }
    const auto* ce = model.as_counterexample();
    const auto path = sample_coboundary_path(*ce->params, ce->sigma_m, n, seed);
    out = path.x;
}

Trajectory sample_path(const ProcessModel& model, std::uint64_t n, std::uint64_t seed) {
    Trajectory t;
    t.model_id = model.id();
    t.master_seed = seed;
    t.n = n;
    sample_path_into(model, n, seed, t.values);
    return t;
}

std::pair<Trajectory, PartialSumPath> sample_f_path(const TowerParams& params, double sigma_m,
                                                    std::uint64_t n, std::uint64_t seed) {
    const auto path = sample_coboundary_path(params, sigma_m, n, seed);
    Trajectory t;
    t.model_id = "counterexample";
    t.master_seed = seed;
    t.n = n;
    t.values = path.x;
    return {std::move(t), PartialSumPath::from_increments(path.x)};
}

namespace {

std::vector<double> dyadic_coefficients() {
    // a_j = 2^(-j-1) until the tail mass drops below 1e-13
    std::vector<double> a;
    for (int j = 0; j < 42; ++j) a.push_back(std::pow(0.5, j + 1));
    return a;
}

} // namespace

ProcessModel make_preset(const std::string& name) {
    const auto colon = name.find(':');
    const std::string head = name.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : name.substr(colon + 1);
    auto need_arg = [&](const char* what) {
        if (arg.empty()) throw std::invalid_argument(std::string("preset ") + head + " needs :" + what);
        return std::stod(arg);
    };
    if (head == "iid-gauss") {
        return ProcessModel(IidModel{QuantileFn::abs_gaussian(1.0), true}, name);
    }
    if (head == "iid-pareto") {
        const double a = need_arg("a");
        return ProcessModel(IidModel{QuantileFn::pareto(1.0, a), true}, name);
    }
    if (head == "bernoulli-shift") {
        CausalLinear cl;
        cl.coeffs = dyadic_coefficients();
        cl.innovation = InnovationKind::fair_bit;
        cl.center = true;
        cl.uniform_marginal = CausalLinear::UniformMarginal{-0.5, 0.5};
        // tau(i) = 2^-i / 3 exactly for the dyadic fair-bit shift (the
        // conditional law is the uniform lattice of mesh 2^-i; see the
        // dependence tests for the enumeration oracle); alpha(i) = 1/4.
        cl.declared_tau = DecaySeq::geometric(1.0 / 3.0, 0.5);
        cl.declared_alpha = DecaySeq::table({0.25});
        return ProcessModel(std::move(cl), name);
    }
    if (head == "ar1") {
        const double phi = need_arg("phi");
        return ProcessModel(GaussianAR1{phi}, name);
    }
    if (head == "counterexample") {
        const double p = need_arg("p");
        auto params = std::make_shared<TowerParams>(TowerParams::make(p, 2));
        return ProcessModel(CounterexampleModel{std::move(params), 1.0}, name);
    }
    throw std::invalid_argument("unknown model preset: " + name);
}

std::vector<std::string> preset_names() {
    return {"iid-gauss", "iid-pareto:a", "bernoulli-shift", "ar1:phi", "counterexample:p"};
}

} // namespace hwl
