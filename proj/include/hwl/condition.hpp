#pragma once

#include <string>
#include <vector>

#include "hwl/quantile.hpp"

namespace hwl {

// The non-increasing profile R(u) behind the integral conditions:
//   tau form:   R(u) = (tau/2)^{-1}(H_f(u)) * Q_f(u)
//   alpha form: R(u) = alpha^{-1}(u) * Q_f(u)
// The tau form uses the identity G_f^{-1} = H_f on the range where Q > 0.
class DecayQuantileProfile {
public:
    enum class Kind { tau, alpha };

    DecayQuantileProfile(Kind kind, const QuantileFn& q, const DecaySeq& seq);

    double operator()(double u) const;

    // sup{u in (0,1] : R(u) > t}; 0 if the set is empty. Bisection on the
    // non-increasing profile, resolved to ~1e-12.
    double exceedance_sup(double t) const;

private:
    Kind kind_;
    const QuantileFn* q_;
    DecaySeq seq_;  // already halved for the tau form
};

// t^(p-1) * int_0^1 Q(u) 1{R(u) > t} du, evaluated as t^(p-1) H(u*(t)).
double condition_functional_tau(double p, const QuantileFn& q, const DecaySeq& tau, double t);
double condition_functional_alpha(double p, const QuantileFn& q, const DecaySeq& alpha, double t);

// t^(p-1) E[|f| 1{|f| > t}] via the tail decomposition
// t^(p-1) (t mu{|f|>t} + int_t^inf mu{|f|>u} du); cross-checked internally
// against t^(p-1) int_0^1 Q 1{Q > t} to relative 1e-6.
double weak_lp_tail_functional(double p, const QuantileFn& q, double t);

struct ConditionReport {
    double p = 0.0;
    std::vector<double> t_grid;
    std::vector<double> values;
    std::string verdict_hint;  // "decreasing" / "flat" / "increasing"
};

enum class ConditionKind { tau, alpha, iid_weak_lp };

ConditionReport condition_sweep(ConditionKind kind, double p, const QuantileFn& q,
                                const DecaySeq& seq, const std::vector<double>& t_grid);

} // namespace hwl
