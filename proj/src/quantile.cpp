#include "hwl/quantile.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <numeric>
#include <sstream>

#include "hwl/quadrature.hpp"

namespace hwl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Overload {
    template <typename... Fs>
    struct Set : Fs... {
        using Fs::operator()...;
    };
};
template <typename... Fs>
auto overload(Fs... fs) {
    return Overload::Set<Fs...>{fs...};
}

} // namespace

void QuantileFn::require_integrable() const {
    if (const auto* p = std::get_if<ParetoTail>(&v_)) {
        if (p->index <= 1.0)
            throw std::domain_error("QuantileFn: Pareto index <= 1 has a divergent integral");
    }
}

double QuantileFn::operator()(double u) const {
    if (!(u > 0.0) || !(u <= 1.0))
        throw std::domain_error("quantile_eval: u must lie in (0,1]");
    return std::visit(overload(
        [&](const ParetoTail& p) { return p.scale * std::pow(u, -1.0 / p.index); },
        [&](const BoundedConst& b) { return b.value; },
        [&](const AbsGaussian& g) {
            return u >= 1.0 ? 0.0 : g.sigma * std::sqrt(2.0) * boost::math::erfc_inv(u);
        },
        [&](const Empirical& e) {
            const std::size_t m = e.values.size();
            const auto r = static_cast<std::size_t>(std::floor(static_cast<double>(m) * u));
            if (r >= m) return 0.0;
            return e.values[m - r - 1];
        }),
        v_);
}

double QuantileFn::tail_prob(double t) const {
    if (!(t >= 0.0)) throw std::domain_error("tail_prob: t must be >= 0");
    return std::visit(overload(
        [&](const ParetoTail& p) { return t <= p.scale ? 1.0 : std::pow(p.scale / t, p.index); },
        [&](const BoundedConst& b) { return t < b.value ? 1.0 : 0.0; },
        [&](const AbsGaussian& g) { return std::erfc(t / (g.sigma * std::sqrt(2.0))); },
        [&](const Empirical& e) {
            const auto it = std::upper_bound(e.values.begin(), e.values.end(), t);
            return static_cast<double>(e.values.end() - it) / static_cast<double>(e.values.size());
        }),
        v_);
}

double QuantileFn::tail_prob_geq(double t) const {
    if (!(t >= 0.0)) throw std::domain_error("tail_prob_geq: t must be >= 0");
    return std::visit(overload(
        [&](const ParetoTail& p) { return t <= p.scale ? 1.0 : std::pow(p.scale / t, p.index); },
        [&](const BoundedConst& b) { return t <= b.value ? 1.0 : 0.0; },
        [&](const AbsGaussian& g) { return std::erfc(t / (g.sigma * std::sqrt(2.0))); },
        [&](const Empirical& e) {
            const auto it = std::lower_bound(e.values.begin(), e.values.end(), t);
            return static_cast<double>(e.values.end() - it) / static_cast<double>(e.values.size());
        }),
        v_);
}

double QuantileFn::integrated(double x) const {
    if (!(x >= 0.0) || !(x <= 1.0))
        throw std::domain_error("integrated_quantile: x must lie in [0,1]");
    require_integrable();
    if (x == 0.0) return 0.0;
    return std::visit(overload(
        [&](const ParetoTail& p) {
            const double a = p.index;
            return p.scale * (a / (a - 1.0)) * std::pow(x, (a - 1.0) / a);
        },
        [&](const BoundedConst& b) { return b.value * x; },
        [&](const AbsGaussian& g) {
            // int_0^x Q = E[|X| 1{|X| > Q(x)}] for a continuous tail.
            const double z = x >= 1.0 ? 0.0 : std::sqrt(2.0) * boost::math::erfc_inv(x);
            return g.sigma * std::sqrt(2.0 / M_PI) * std::exp(-0.5 * z * z);
        },
        [&](const Empirical& e) {
            const std::size_t m = e.values.size();
            const double mx = static_cast<double>(m) * x;
            const auto j = std::min(static_cast<std::size_t>(std::floor(mx)), m);
            double s = e.top_prefix[j] / static_cast<double>(m);
            if (j < m) s += (x - static_cast<double>(j) / static_cast<double>(m)) * e.values[m - 1 - j];
            return s;
        }),
        v_);
}

double QuantileFn::integrated_inverse(double y) const {
    if (!(y >= 0.0)) throw std::domain_error("integrated_quantile_inverse: y must be >= 0");
    require_integrable();
    if (y == 0.0) return 0.0;
    if (y >= integrated(1.0)) return 1.0;
    double lo = 0.0, hi = 1.0;  // H(lo) < y <= H(hi)
    for (int it = 0; it < 90; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (integrated(mid) >= y) hi = mid; else lo = mid;
    }
    return hi;
}

double QuantileFn::truncated_mean_above(double a) const {
    if (!(a >= 0.0)) throw std::domain_error("truncated_mean_above: a must be >= 0");
    require_integrable();
    return std::visit(overload(
        [&](const ParetoTail& p) {
            const double c = p.scale, idx = p.index;
            if (a <= c) return c * idx / (idx - 1.0);
            return std::pow(c, idx) * std::pow(a, 1.0 - idx) * idx / (idx - 1.0);
        },
        [&](const BoundedConst& b) { return a <= b.value ? b.value : 0.0; },
        [&](const AbsGaussian& g) {
            return g.sigma * std::sqrt(2.0 / M_PI) * std::exp(-0.5 * a * a / (g.sigma * g.sigma));
        },
        [&](const Empirical& e) {
            const auto it = std::lower_bound(e.values.begin(), e.values.end(), a);
            double s = std::accumulate(it, e.values.end(), 0.0);
            return s / static_cast<double>(e.values.size());
        }),
        v_);
}

double QuantileFn::tail_integral(double t) const {
    if (!(t >= 0.0)) throw std::domain_error("tail_integral: t must be >= 0");
    require_integrable();
    return std::visit(overload(
        [&](const ParetoTail& p) {
            const double c = p.scale, a = p.index;
            if (t >= c) return std::pow(c, a) * std::pow(t, 1.0 - a) / (a - 1.0);
            return (c - t) + c / (a - 1.0);
        },
        [&](const BoundedConst& b) { return std::max(b.value - t, 0.0); },
        [&](const AbsGaussian&) { return truncated_mean_above(t) - t * tail_prob(t); },
        [&](const Empirical& e) {
            double s = 0.0;
            for (double x : e.values) s += std::max(x - t, 0.0);
            return s / static_cast<double>(e.values.size());
        }),
        v_);
}

double QuantileFn::second_moment() const {
    return std::visit(overload(
        [&](const ParetoTail& p) {
            if (p.index <= 2.0)
                throw std::domain_error("second_moment: Pareto index <= 2 has infinite variance");
            return p.scale * p.scale * p.index / (p.index - 2.0);
        },
        [&](const BoundedConst& b) { return b.value * b.value; },
        [&](const AbsGaussian& g) { return g.sigma * g.sigma; },
        [&](const Empirical& e) {
            double s = 0.0;
            for (double x : e.values) s += x * x;
            return s / static_cast<double>(e.values.size());
        }),
        v_);
}

double QuantileFn::truncated_moment_below(double q, double a) const {
    if (!(q >= 1.0)) throw std::domain_error("truncated_moment_below: q must be >= 1");
    if (!(a >= 0.0)) throw std::domain_error("truncated_moment_below: a must be >= 0");
    return std::visit(overload(
        [&](const ParetoTail& p) {
            const double c = p.scale, idx = p.index;
            if (a < c) return 0.0;  // |X| >= c almost surely
            const double ua = std::pow(c / a, idx);  // = tail_prob(a)
            const double e = 1.0 - q / idx;
            if (std::abs(e) < 1e-12) return std::pow(c, q) * std::log(1.0 / ua);
            return std::pow(c, q) * (1.0 - std::pow(ua, e)) / e;
        },
        [&](const BoundedConst& b) { return b.value <= a ? std::pow(b.value, q) : 0.0; },
        [&](const AbsGaussian&) {
            const double ua = tail_prob(a);
            if (ua >= 1.0) return 0.0;
            return integrate([&](double u) { return std::pow((*this)(u), q); }, ua, 1.0, 1e-10);
        },
        [&](const Empirical& e) {
            double s = 0.0;
            for (double x : e.values)
                if (x <= a) s += std::pow(x, q);
            return s / static_cast<double>(e.values.size());
        }),
        v_);
}

double QuantileFn::sup_value() const {
    return std::visit(overload(
        [&](const ParetoTail&) { return kInf; },
        [&](const BoundedConst& b) { return b.value; },
        [&](const AbsGaussian&) { return kInf; },
        [&](const Empirical& e) { return e.values.back(); }),
        v_);
}

std::string QuantileFn::describe() const {
    std::ostringstream os;
    std::visit(overload(
        [&](const ParetoTail& p) { os << "pareto(" << p.scale << "," << p.index << ")"; },
        [&](const BoundedConst& b) { os << "bounded(" << b.value << ")"; },
        [&](const AbsGaussian& g) { os << "abs-gauss(" << g.sigma << ")"; },
        [&](const Empirical& e) { os << "empirical(m=" << e.values.size() << ")"; }),
        v_);
    return os.str();
}

// ---------------------------------------------------------------------------

double DecaySeq::value(std::int64_t k) const {
    if (k < 0) throw std::domain_error("DecaySeq::value: k must be >= 0");
    return std::visit(overload(
        [&](const ZeroDecay&) { return 0.0; },
        [&](const PowerDecay& p) {
            return k == 0 ? p.c : p.c * std::pow(static_cast<double>(k), -p.theta);
        },
        [&](const GeometricDecay& g) { return g.c * std::pow(g.r, static_cast<double>(k)); },
        [&](const TableDecay& t) {
            const auto idx = std::min<std::size_t>(static_cast<std::size_t>(k), t.values.size() - 1);
            return t.values[idx];
        }),
        v_);
}

namespace {

// Shared refinement: given a guess, walk to the exact infimum.
std::int64_t refine_inverse(const DecaySeq& d, double u, std::int64_t guess) {
    std::int64_t k = std::max<std::int64_t>(guess, 0);
    while (d.value(k) > u) ++k;
    while (k > 0 && d.value(k - 1) <= u) --k;
    return k;
}

} // namespace

std::int64_t DecaySeq::inverse(double u) const {
    if (!(u >= 0.0)) throw std::domain_error("decay_inverse: u must be >= 0");
    return std::visit(overload(
        [&](const ZeroDecay&) -> std::int64_t { return 0; },
        [&](const PowerDecay& p) -> std::int64_t {
            if (p.c <= u) return 0;
            if (u == 0.0) return decay_infinite;  // c k^(-theta) > 0 for all k
            const double k0 = std::pow(u / p.c, -1.0 / p.theta);
            if (k0 > 4.0e18) throw std::overflow_error("decay_inverse: index exceeds 64-bit range");
            return refine_inverse(*this, u, static_cast<std::int64_t>(k0) - 2);
        },
        [&](const GeometricDecay& g) -> std::int64_t {
            if (g.c <= u) return 0;
            if (u == 0.0) return decay_infinite;
            const double k0 = std::ceil(std::log(u / g.c) / std::log(g.r) - 1e-12);
            if (k0 > 4.0e18) throw std::overflow_error("decay_inverse: index exceeds 64-bit range");
            return refine_inverse(*this, u, static_cast<std::int64_t>(k0) - 2);
        },
        [&](const TableDecay& t) -> std::int64_t {
            for (std::size_t i = 0; i < t.values.size(); ++i)
                if (t.values[i] <= u) return static_cast<std::int64_t>(i);
            return decay_infinite;
        }),
        v_);
}

double DecaySeq::inverse_real(double u) const {
    if (!(u >= 0.0)) throw std::domain_error("decay_inverse: u must be >= 0");
    return std::visit(overload(
        [&](const ZeroDecay&) { return 0.0; },
        [&](const PowerDecay& p) {
            if (p.c <= u) return 0.0;
            if (u == 0.0) return kInf;
            const double k0 = std::pow(u / p.c, -1.0 / p.theta);
            if (k0 > 4.0e18) return std::ceil(k0);
            return static_cast<double>(refine_inverse(*this, u, static_cast<std::int64_t>(k0) - 2));
        },
        [&](const GeometricDecay& g) {
            if (g.c <= u) return 0.0;
            if (u == 0.0) return kInf;
            const double k0 = std::ceil(std::log(u / g.c) / std::log(g.r) - 1e-12);
            if (k0 > 4.0e18) return k0;
            return static_cast<double>(refine_inverse(*this, u, static_cast<std::int64_t>(k0) - 2));
        },
        [&](const TableDecay& t) {
            for (std::size_t i = 0; i < t.values.size(); ++i)
                if (t.values[i] <= u) return static_cast<double>(i);
            return kInf;
        }),
        v_);
}

DecaySeq DecaySeq::halved() const {
    return std::visit(overload(
        [&](const ZeroDecay&) { return DecaySeq::zero(); },
        [&](const PowerDecay& p) { return DecaySeq::power(0.5 * p.c, p.theta); },
        [&](const GeometricDecay& g) { return DecaySeq::geometric(0.5 * g.c, g.r); },
        [&](const TableDecay& t) {
            std::vector<double> v = t.values;
            for (double& x : v) x *= 0.5;
            return DecaySeq::table(std::move(v));
        }),
        v_);
}

} // namespace hwl
