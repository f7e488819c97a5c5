#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace hwl {

// Upper-tail quantile of |X|: Q(u) = inf{t >= 0 : mu{|X| > t} <= u}.
//
// ParetoTail(C, a) means mu{|X| > t} = min(1, (C/t)^a), so Q(u) = C u^(-1/a)
// on all of (0,1]: (C/t)^a <= u iff t >= C u^(-1/a), no saturation clipping.
struct ParetoTail {
    double scale;  // C > 0
    double index;  // a > 0
};

struct BoundedConst {
    double value;  // |X| = c almost surely, c >= 0
};

struct AbsGaussian {
    double sigma;  // |X| with X ~ N(0, sigma^2)
};

struct Empirical {
    std::vector<double> values;      // sorted ascending, nonnegative
    std::vector<double> top_prefix;  // top_prefix[k] = sum of the k largest values (cached)
};

class QuantileFn {
public:
    using Variant = std::variant<ParetoTail, BoundedConst, AbsGaussian, Empirical>;

    explicit QuantileFn(ParetoTail p) : v_(validate(p)) {}
    explicit QuantileFn(BoundedConst b) : v_(validate(b)) {}
    explicit QuantileFn(AbsGaussian g) : v_(validate(g)) {}
    explicit QuantileFn(Empirical e) : v_(validate(std::move(e))) {}

    static QuantileFn pareto(double scale, double index) { return QuantileFn(ParetoTail{scale, index}); }
    static QuantileFn bounded(double c) { return QuantileFn(BoundedConst{c}); }
    static QuantileFn abs_gaussian(double sigma) { return QuantileFn(AbsGaussian{sigma}); }
    static QuantileFn empirical(std::vector<double> values) { return QuantileFn(Empirical{std::move(values)}); }

    const Variant& variant() const { return v_; }

    // Q(u) for u in (0,1].
    double operator()(double u) const;

    // mu{|X| > t} for t >= 0.
    double tail_prob(double t) const;

    // mu{|X| >= t}; differs from tail_prob only at atoms.
    double tail_prob_geq(double t) const;

    // H(x) = int_0^x Q(u) du, closed form per variant.
    double integrated(double x) const;

    // G(y) = inf{x : H(x) >= y}, capped at 1; bisection against integrated().
    double integrated_inverse(double y) const;

    // E[|X| 1{|X| >= a}].
    double truncated_mean_above(double a) const;

    // int_t^inf mu{|X| > u} du = E[(|X| - t)^+].
    double tail_integral(double t) const;

    // E[|X|^2].
    double second_moment() const;

    // E[|X|^q 1{|X| <= a}], q >= 1.
    double truncated_moment_below(double q, double a) const;

    // Q(0+); may be +inf.
    double sup_value() const;

    std::string describe() const;

private:
    static ParetoTail validate(ParetoTail p) {
        if (!(p.scale > 0.0) || !(p.index > 0.0))
            throw std::invalid_argument("ParetoTail: requires scale > 0 and index > 0");
        return p;
    }
    static BoundedConst validate(BoundedConst b) {
        if (!(b.value >= 0.0)) throw std::invalid_argument("BoundedConst: requires c >= 0");
        return b;
    }
    static AbsGaussian validate(AbsGaussian g) {
        if (!(g.sigma > 0.0)) throw std::invalid_argument("AbsGaussian: requires sigma > 0");
        return g;
    }
    static Empirical validate(Empirical e) {
        if (e.values.empty()) throw std::invalid_argument("Empirical: requires a nonempty sample");
        for (double x : e.values)
            if (!(x >= 0.0)) throw std::invalid_argument("Empirical: sample values must be nonnegative");
        std::sort(e.values.begin(), e.values.end());
        e.top_prefix.assign(e.values.size() + 1, 0.0);
        for (std::size_t k = 1; k <= e.values.size(); ++k)
            e.top_prefix[k] = e.top_prefix[k - 1] + e.values[e.values.size() - k];
        return e;
    }

    void require_integrable() const;

    Variant v_;
};

// Operation-style aliases matching the module surface.
inline double quantile_eval(const QuantileFn& q, double u) { return q(u); }
inline double integrated_quantile(const QuantileFn& q, double x) { return q.integrated(x); }
inline double integrated_quantile_inverse(const QuantileFn& q, double y) { return q.integrated_inverse(y); }

// ---------------------------------------------------------------------------
// Non-increasing nonnegative decay sequences k |-> delta_k with the
// generalized inverse delta^{-1}(u) = inf{k in N : delta_k <= u}.

struct ZeroDecay {};

struct PowerDecay {
    double c;      // delta_k = c k^(-theta) for k >= 1; delta_0 = c
    double theta;  // > 0
};

struct GeometricDecay {
    double c;  // delta_k = c r^k
    double r;  // in (0,1)
};

struct TableDecay {
    std::vector<double> values;  // non-increasing; constant tail = values.back()
};

// Sentinel for "delta never reaches u"; condition functionals treat it as
// indicator true (inf over the empty set).
inline constexpr std::int64_t decay_infinite = std::numeric_limits<std::int64_t>::max();

class DecaySeq {
public:
    using Variant = std::variant<ZeroDecay, PowerDecay, GeometricDecay, TableDecay>;

    DecaySeq() : v_(ZeroDecay{}) {}
    explicit DecaySeq(ZeroDecay z) : v_(z) {}
    explicit DecaySeq(PowerDecay p) : v_(validate(p)) {}
    explicit DecaySeq(GeometricDecay g) : v_(validate(g)) {}
    explicit DecaySeq(TableDecay t) : v_(validate(std::move(t))) {}

    static DecaySeq zero() { return DecaySeq(ZeroDecay{}); }
    static DecaySeq power(double c, double theta) { return DecaySeq(PowerDecay{c, theta}); }
    static DecaySeq geometric(double c, double r) { return DecaySeq(GeometricDecay{c, r}); }
    static DecaySeq table(std::vector<double> values) { return DecaySeq(TableDecay{std::move(values)}); }

    const Variant& variant() const { return v_; }

    double value(std::int64_t k) const;

    // inf{k : delta_k <= u}; decay_infinite if no such k.
    std::int64_t inverse(double u) const;

    // Same infimum as a double, +inf when no index exists. Avoids 64-bit
    // overflow for very slow decays probed at tiny u.
    double inverse_real(double u) const;

    // The sequence with every term halved (tau/2 in the condition functionals).
    DecaySeq halved() const;

private:
    static PowerDecay validate(PowerDecay p) {
        if (!(p.c >= 0.0) || !(p.theta > 0.0))
            throw std::invalid_argument("PowerDecay: requires c >= 0 and theta > 0");
        return p;
    }
    static GeometricDecay validate(GeometricDecay g) {
        if (!(g.c >= 0.0) || !(g.r > 0.0) || !(g.r < 1.0))
            throw std::invalid_argument("GeometricDecay: requires c >= 0 and r in (0,1)");
        return g;
    }
    static TableDecay validate(TableDecay t) {
        if (t.values.empty()) throw std::invalid_argument("TableDecay: requires a nonempty table");
        for (std::size_t i = 0; i < t.values.size(); ++i) {
            if (!(t.values[i] >= 0.0)) throw std::invalid_argument("TableDecay: entries must be nonnegative");
            if (i > 0 && t.values[i] > t.values[i - 1] + 1e-12)
                throw std::invalid_argument("TableDecay: entries must be non-increasing");
        }
        return t;
    }

    Variant v_;
};

inline std::int64_t decay_inverse(const DecaySeq& d, double u) { return d.inverse(u); }

} // namespace hwl
