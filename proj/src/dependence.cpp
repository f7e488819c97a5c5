#include "hwl/dependence.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hwl/quadrature.hpp"
#include "hwl/rng.hpp"
#include "hwl/stats.hpp"

namespace hwl {

namespace {
constexpr std::size_t kMaxPartition = 12;
}

FinitePartitionPair::FinitePartitionPair(std::size_t rows, std::size_t cols,
                                         std::vector<double> probs)
    : rows_(rows), cols_(cols), p_(std::move(probs)) {
    if (rows_ == 0 || cols_ == 0 || p_.size() != rows_ * cols_)
        throw std::invalid_argument("FinitePartitionPair: shape mismatch");
    double total = 0.0;
    for (double x : p_) {
        if (!(x >= 0.0)) throw std::invalid_argument("FinitePartitionPair: negative probability");
        total += x;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("FinitePartitionPair: probabilities must sum to 1");
}

FinitePartitionPair FinitePartitionPair::independent(const std::vector<double>& row_marginal,
                                                     const std::vector<double>& col_marginal) {
    std::vector<double> p;
    p.reserve(row_marginal.size() * col_marginal.size());
    for (double r : row_marginal)
        for (double c : col_marginal) p.push_back(r * c);
    return FinitePartitionPair(row_marginal.size(), col_marginal.size(), std::move(p));
}

FinitePartitionPair FinitePartitionPair::diagonal(const std::vector<double>& marginal) {
    const std::size_t m = marginal.size();
    std::vector<double> p(m * m, 0.0);
    for (std::size_t i = 0; i < m; ++i) p[i * m + i] = marginal[i];
    return FinitePartitionPair(m, m, std::move(p));
}

double alpha_exact(const FinitePartitionPair& pair) {
    const std::size_t r = pair.rows(), c = pair.cols();
    if (r > kMaxPartition || c > kMaxPartition)
        throw std::length_error("alpha_exact: partitions larger than 12 cells");
    std::vector<double> col_total(c, 0.0);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) col_total[j] += pair.at(i, j);

    // Gray-code walk over row subsets; for each, Gray-code walk over column
    // subsets with O(1) updates of mu(A inter B) and mu(B).
    std::vector<double> a_colmass(c, 0.0);
    double pa = 0.0;
    std::uint32_t rowset = 0;
    double best = 0.0;
    const std::uint32_t nrow = 1u << r, ncol = 1u << c;
    for (std::uint32_t gr = 0; gr < nrow; ++gr) {
        const std::uint32_t target = gr ^ (gr >> 1);
        const std::uint32_t flip = target ^ rowset;
        if (flip) {
            const int i = __builtin_ctz(flip);
            const double sgn = (target >> i) & 1u ? 1.0 : -1.0;
            for (std::size_t j = 0; j < c; ++j) a_colmass[j] += sgn * pair.at(static_cast<std::size_t>(i), j);
            double row_sum = 0.0;
            for (std::size_t j = 0; j < c; ++j) row_sum += pair.at(static_cast<std::size_t>(i), j);
            pa += sgn * row_sum;
            rowset = target;
        }
        double pb = 0.0, pab = 0.0;
        std::uint32_t colset = 0;
        for (std::uint32_t gc = 0; gc < ncol; ++gc) {
            const std::uint32_t ct = gc ^ (gc >> 1);
            const std::uint32_t cf = ct ^ colset;
            if (cf) {
                const int j = __builtin_ctz(cf);
                const double sgn = (ct >> j) & 1u ? 1.0 : -1.0;
                pb += sgn * col_total[static_cast<std::size_t>(j)];
                pab += sgn * a_colmass[static_cast<std::size_t>(j)];
                colset = ct;
            }
            best = std::max(best, std::abs(pab - pa * pb));
        }
    }
    return best;
}

double rho_exact(const FinitePartitionPair& pair) {
    const std::size_t r = pair.rows(), c = pair.cols();
    if (r > kMaxPartition || c > kMaxPartition)
        throw std::length_error("rho_exact: partitions larger than 12 cells");
    std::vector<double> row_total(r, 0.0), col_total(c, 0.0);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) {
            row_total[i] += pair.at(i, j);
            col_total[j] += pair.at(i, j);
        }
    std::vector<std::size_t> ri, cj;
    for (std::size_t i = 0; i < r; ++i)
        if (row_total[i] > 0.0) ri.push_back(i);
    for (std::size_t j = 0; j < c; ++j)
        if (col_total[j] > 0.0) cj.push_back(j);
    if (ri.size() < 2 || cj.size() < 2) return 0.0;  // degenerate partition

    Eigen::MatrixXd m(ri.size(), cj.size());
    for (std::size_t a = 0; a < ri.size(); ++a)
        for (std::size_t b = 0; b < cj.size(); ++b)
            m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                pair.at(ri[a], cj[b]) / std::sqrt(row_total[ri[a]] * col_total[cj[b]]);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& sv = svd.singularValues();
    if (sv.size() < 2) return 0.0;
    return std::min(sv(1), 1.0);  // first singular value is 1 (the constants)
}

// ---------------------------------------------------------------------------

namespace {

// L1 distance between the CDF of a discrete law (sorted atoms, weights
// summing to 1) and a reference CDF.

struct DiscreteLaw {
    std::vector<double> atoms;    // sorted
    std::vector<double> weights;  // aligned with atoms
};

// |q - F_u| integrated over [x1, x2] against the uniform CDF on [lo, hi].
double seg_against_uniform(double q, double x1, double x2, double lo, double hi) {
    if (x2 <= x1) return 0.0;
    auto fu = [&](double x) { return x <= lo ? 0.0 : (x >= hi ? 1.0 : (x - lo) / (hi - lo)); };
    // split at lo, hi and the crossing point of q with the linear piece
    std::vector<double> cuts{x1, x2};
    for (double cut : {lo, hi, lo + q * (hi - lo)})
        if (cut > x1 && cut < x2) cuts.push_back(cut);
    std::sort(cuts.begin(), cuts.end());
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i], b = cuts[i + 1];
        // |q - fu| is linear here: trapezoid
        acc += 0.5 * (std::abs(q - fu(a)) + std::abs(q - fu(b))) * (b - a);
    }
    return acc;
}

double w1_vs_uniform(const DiscreteLaw& d, double lo, double hi) {
    double acc = 0.0;
    double q = 0.0;
    // before the first atom: F_d = 0; after the last atom both CDFs reach 1
    double x_prev = std::min(lo, d.atoms.front());
    for (std::size_t i = 0; i < d.atoms.size(); ++i) {
        acc += seg_against_uniform(q, x_prev, d.atoms[i], lo, hi);
        q += d.weights[i];
        x_prev = d.atoms[i];
    }
    acc += seg_against_uniform(q, x_prev, std::max(hi, d.atoms.back()), lo, hi);
    return acc;
}

double w1_discrete(const DiscreteLaw& a, const DiscreteLaw& b) {
    double acc = 0.0, fa = 0.0, fb = 0.0;
    std::size_t i = 0, j = 0;
    double x_prev = std::min(a.atoms.front(), b.atoms.front());
    while (i < a.atoms.size() || j < b.atoms.size()) {
        const double x = (i < a.atoms.size() && (j >= b.atoms.size() || a.atoms[i] <= b.atoms[j]))
                             ? a.atoms[i]
                             : b.atoms[j];
        acc += std::abs(fa - fb) * (x - x_prev);
        while (i < a.atoms.size() && a.atoms[i] == x) fa += a.weights[i++];
        while (j < b.atoms.size() && b.atoms[j] == x) fb += b.weights[j++];
        x_prev = x;
    }
    return acc;
}

double w1_two_gaussians(double m1, double s1, double m2, double s2) {
    const double lo = std::min(m1 - 9.0 * s1, m2 - 9.0 * s2);
    const double hi = std::max(m1 + 9.0 * s1, m2 + 9.0 * s2);
    auto phi = [](double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); };
    return integrate(
        [&](double x) { return std::abs(phi((x - m1) / s1) - phi((x - m2) / s2)); }, lo, hi, 1e-9);
}

DiscreteLaw sorted_law(std::vector<double> atoms, std::vector<double> weights) {
    std::vector<std::size_t> idx(atoms.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return atoms[a] < atoms[b]; });
    DiscreteLaw out;
    out.atoms.reserve(atoms.size());
    out.weights.reserve(atoms.size());
    for (std::size_t i : idx) {
        out.atoms.push_back(atoms[i]);
        out.weights.push_back(weights[i]);
    }
    return out;
}

std::vector<double> innovation_atoms(InnovationKind k) {
    switch (k) {
        case InnovationKind::fair_bit: return {0.0, 1.0};
        case InnovationKind::rademacher: return {-1.0, 1.0};
        case InnovationKind::gaussian: return {};
    }
    return {};
}

} // namespace

TauEstimate tau_estimate_1d(const ProcessModel& model, std::int64_t lag, int truncation_depth,
                            const MonteCarloParams& mc) {
    const auto* cl = model.as_causal();
    if (!cl) throw std::invalid_argument("tau_estimate_1d: model must be causal linear");
    if (lag < 1) throw std::invalid_argument("tau_estimate_1d: lag must be >= 1");
    if (truncation_depth < 1) throw std::invalid_argument("tau_estimate_1d: depth must be >= 1");
    if (mc.paths < 2) throw std::invalid_argument("tau_estimate_1d: need at least 2 paths");

    const auto& a = cl->coeffs;
    const auto i = static_cast<std::size_t>(lag);
    const double mean_shift = [&] {
        if (!cl->center) return 0.0;
        double s = 0.0;
        for (double coef : a) s += coef;
        const double m = cl->innovation == InnovationKind::fair_bit ? 0.5 : 0.0;
        return s * m;
    }();

    TauEstimate est;
    est.lag = lag;
    est.truncation_depth = truncation_depth;
    double residual = 0.0;
    for (std::size_t j = i + static_cast<std::size_t>(truncation_depth); j < a.size(); ++j)
        residual += std::abs(a[j]);
    est.truncated_warn = residual > 1e-9;

    const bool gaussian = cl->innovation == InnovationKind::gaussian;
    const auto atoms = innovation_atoms(cl->innovation);

    // conditional spread: the lag future innovations
    double cond_var = 0.0;
    for (std::size_t j = 0; j < std::min(i, a.size()); ++j) cond_var += a[j] * a[j];

    // marginal law
    double marg_var = 0.0;
    for (double coef : a) marg_var += coef * coef;
    DiscreteLaw marginal_enum;
    bool marginal_is_uniform = false, marginal_is_gauss = false;
    double mu_lo = 0.0, mu_hi = 0.0;
    if (cl->uniform_marginal) {
        marginal_is_uniform = true;
        mu_lo = cl->uniform_marginal->lo;
        mu_hi = cl->uniform_marginal->hi;
    } else if (gaussian) {
        marginal_is_gauss = true;
    } else {
        if (a.size() > 20)
            throw std::length_error(
                "tau_estimate_1d: finite-valued model without declared marginal and horizon > 20");
        std::vector<double> ma, mw;
        const std::size_t combos = std::size_t(1) << a.size();
        const double w = 1.0 / static_cast<double>(combos);
        for (std::size_t mask = 0; mask < combos; ++mask) {
            double v = -mean_shift;
            for (std::size_t j = 0; j < a.size(); ++j) v += a[j] * atoms[(mask >> j) & 1u];
            ma.push_back(v);
            mw.push_back(w);
        }
        marginal_enum = sorted_law(std::move(ma), std::move(mw));
    }

    if (!gaussian && i > 20)
        throw std::length_error("tau_estimate_1d: conditional enumeration needs lag <= 20");

    std::vector<double> w1(mc.paths);
    parallel_for(mc.paths, mc.threads, [&](std::size_t r) {
        Rng rng(derive_seed(mc.seed, r));
        // past contribution c = sum_{j >= lag} a_j eps, truncated at depth
        double past = 0.0;
        for (int d = 0; d < truncation_depth; ++d) {
            const std::size_t j = i + static_cast<std::size_t>(d);
            if (j >= a.size()) break;
            const double e = gaussian ? rng.normal()
                                      : atoms[static_cast<std::size_t>(rng.bit())];
            past += a[j] * e;
        }
        const double center = past - mean_shift;
        if (gaussian) {
            w1[r] = w1_two_gaussians(center, std::sqrt(cond_var), 0.0, std::sqrt(marg_var));
            return;
        }
        const std::size_t fut = std::min(i, a.size());
        const std::size_t combos = std::size_t(1) << fut;
        std::vector<double> ca(combos), cw(combos, 1.0 / static_cast<double>(combos));
        for (std::size_t mask = 0; mask < combos; ++mask) {
            double v = center;
            for (std::size_t j = 0; j < fut; ++j) v += a[j] * atoms[(mask >> j) & 1u];
            ca[mask] = v;
        }
        const auto cond = sorted_law(std::move(ca), std::move(cw));
        if (marginal_is_uniform)
            w1[r] = w1_vs_uniform(cond, mu_lo, mu_hi);
        else
            w1[r] = w1_discrete(cond, marginal_enum);
    });
    (void)marginal_is_gauss;
    est.value = mean(w1);
    est.std_error = std_error(w1);
    return est;
}

bool tau_alpha_bound_check(double tau_val, double alpha_val, const QuantileFn& q) {
    if (!(tau_val >= 0.0)) throw std::invalid_argument("tau_alpha_bound_check: tau must be >= 0");
    if (!(alpha_val >= 0.0) || !(alpha_val <= 0.25))
        throw std::invalid_argument("tau_alpha_bound_check: alpha must lie in [0, 1/4]");
    return tau_val <= 2.0 * q.integrated(std::min(1.0, 2.0 * alpha_val));
}

} // namespace hwl
