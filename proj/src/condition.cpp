#include "hwl/condition.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace hwl {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTinyU = 1e-300;

void check_p_t(double p, double t) {
    if (!(p > 2.0)) throw std::domain_error("condition functional: requires p > 2");
    if (!(t > 0.0)) throw std::domain_error("condition functional: requires t > 0");
}
} // namespace

DecayQuantileProfile::DecayQuantileProfile(Kind kind, const QuantileFn& q, const DecaySeq& seq)
    : kind_(kind), q_(&q), seq_(kind == Kind::tau ? seq.halved() : seq) {}

double DecayQuantileProfile::operator()(double u) const {
    const double arg = kind_ == Kind::tau ? q_->integrated(u) : u;
    const double inv = seq_.inverse_real(arg);
    const double qu = (*q_)(u);
    if (std::isinf(inv)) return qu > 0.0 ? kInf : 0.0;
    return inv * qu;
}

double DecayQuantileProfile::exceedance_sup(double t) const {
    if (!((*this)(kTinyU) > t)) return 0.0;  // profile never exceeds t
    if ((*this)(1.0) > t) return 1.0;
    double lo = kTinyU, hi = 1.0;  // R(lo) > t >= R(hi)
    for (int it = 0; it < 90; ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((*this)(mid) > t) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

double condition_functional_tau(double p, const QuantileFn& q, const DecaySeq& tau, double t) {
    check_p_t(p, t);
    DecayQuantileProfile r(DecayQuantileProfile::Kind::tau, q, tau);
    return std::pow(t, p - 1.0) * q.integrated(r.exceedance_sup(t));
}

double condition_functional_alpha(double p, const QuantileFn& q, const DecaySeq& alpha, double t) {
    check_p_t(p, t);
    DecayQuantileProfile r(DecayQuantileProfile::Kind::alpha, q, alpha);
    return std::pow(t, p - 1.0) * q.integrated(r.exceedance_sup(t));
}

double weak_lp_tail_functional(double p, const QuantileFn& q, double t) {
    check_p_t(p, t);
    const double tp = std::pow(t, p - 1.0);
    const double primary = tp * (t * q.tail_prob(t) + q.tail_integral(t));
    // Quantile route: {Q(u) > t} = (0, mu{|f| > t}), so the integral is
    // H(tail_prob(t)).
    const double cross = tp * q.integrated(q.tail_prob(t));
    const double scale = std::max({std::abs(primary), std::abs(cross), 1e-300});
    if (std::abs(primary - cross) > 1e-6 * scale)
        throw std::logic_error("weak_lp_tail_functional: tail and quantile routes disagree");
    return primary;
}

ConditionReport condition_sweep(ConditionKind kind, double p, const QuantileFn& q,
                                const DecaySeq& seq, const std::vector<double>& t_grid) {
    if (t_grid.empty()) throw std::invalid_argument("condition_sweep: empty t grid");
    ConditionReport rep;
    rep.p = p;
    rep.t_grid = t_grid;
    rep.values.reserve(t_grid.size());
    for (double t : t_grid) {
        double v = 0.0;
        switch (kind) {
            case ConditionKind::tau: v = condition_functional_tau(p, q, seq, t); break;
            case ConditionKind::alpha: v = condition_functional_alpha(p, q, seq, t); break;
            case ConditionKind::iid_weak_lp: v = weak_lp_tail_functional(p, q, t); break;
        }
        rep.values.push_back(v);
    }
    const double first = rep.values.front();
    const double last = rep.values.back();
    if (first < 1e-300 && last < 1e-300) {
        rep.verdict_hint = "flat";
    } else if (last < 0.9 * first) {
        rep.verdict_hint = "decreasing";
    } else if (last > 1.1 * first) {
        rep.verdict_hint = "increasing";
    } else {
        rep.verdict_hint = "flat";
    }
    return rep;
}

} // namespace hwl
