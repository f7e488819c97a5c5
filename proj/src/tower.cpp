#include "hwl/tower.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "hwl/stats.hpp"

namespace hwl {

namespace {

constexpr int kMaxBits = 120;        // u128 arithmetic budget
constexpr int kEventBitsGuard = 62;  // event horizon must fit u64 time indices
constexpr int kBruteBitsGuard = 12;

double exp2d(double e) { return std::exp2(e); }

} // namespace

TowerParams::TowerParams(double p, std::vector<int> b, std::vector<int> kb)
    : p_(p), b_(std::move(b)), kb_(std::move(kb)) {
    if (!(p_ > 2.0)) throw std::invalid_argument("TowerParams: requires p > 2");
    if (b_.empty() || b_.size() != kb_.size())
        throw std::invalid_argument("TowerParams: level vectors must be nonempty and aligned");
    for (std::size_t i = 0; i < b_.size(); ++i) {
        if (b_[i] < 2 || b_[i] > kMaxBits)
            throw std::length_error("TowerParams: level bits outside the big-integer budget");
        if (kb_[i] < 0 || kb_[i] >= b_[i])
            throw std::invalid_argument("TowerParams: K_l must satisfy 1 <= K_l < N_l");
    }
}

TowerParams TowerParams::make(double p, int l_max) {
    if (!(p > 2.0)) throw std::invalid_argument("make_tower_params: requires p > 2");
    if (l_max < 1) throw std::invalid_argument("make_tower_params: requires l_max >= 1");
    std::vector<int> b, kb;
    b.push_back(4);  // N_1 = 16
    for (int l = 2; l <= l_max; ++l) {
        // smallest power of two strictly greater than (4 l N_{l-1})^p
        const double target = p * (2.0 + std::log2(static_cast<double>(l)) + b.back());
        const int next = static_cast<int>(std::floor(target)) + 1;
        if (next > kMaxBits) {
            std::ostringstream os;
            os << "make_tower_params: level " << l << " needs 2^" << next
               << "; largest feasible l_max here is " << (l - 1);
            throw std::length_error(os.str());
        }
        b.push_back(next);
    }
    for (int bi : b) kb.push_back(bi / 2);
    TowerParams t(p, std::move(b), std::move(kb));
    t.compute_advisories();
    t.validate_or_throw();
    return t;
}

TowerParams TowerParams::custom(double p, std::vector<int> bits, std::vector<int> kbits,
                                bool validate) {
    TowerParams t(p, std::move(bits), std::move(kbits));
    t.compute_advisories();
    if (validate)
        t.validate_or_throw();
    else
        t.validity_.checked = false;
    return t;
}

void TowerParams::compute_advisories() {
    // Extrapolate three levels past l_max with the default rule and add up
    // their per-step tent mass 2 K / N.
    double mass = 0.0;
    double bl = b_.back();
    for (int extra = 1; extra <= 3; ++extra) {
        const int l = l_max() + extra;
        bl = std::floor(p_ * (2.0 + std::log2(static_cast<double>(l)) + bl)) + 1.0;
        mass += exp2d(1.0 + std::floor(bl / 2.0) - bl);
    }
    validity_.omitted_mass_per_step = mass;
    validity_.advisory_horizon =
        mass > 0.0 ? 1e-9 / mass : std::numeric_limits<double>::infinity();
}

void TowerParams::validate_or_throw() {
    TowerValidity& v = validity_;
    v.checked = true;
    v.increasing = true;
    v.cap_4k = true;
    for (std::size_t i = 0; i < b_.size(); ++i) {
        if (i > 0 && (b_[i] <= b_[i - 1] || kb_[i] <= kb_[i - 1])) v.increasing = false;
        if (kb_[i] + 2 > b_[i]) v.cap_4k = false;
    }
    v.c312 = true;
    for (int l = 2; l <= l_max(); ++l) {
        const double lhs = 2.0 + std::log2(static_cast<double>(l)) + bits(l - 1);
        if (!(lhs < static_cast<double>(bits(l)) / p_)) v.c312 = false;
    }
    v.c313 = true;
    double prefix_sqrt_k = 0.0;
    for (int l = 1; l < l_max(); ++l) {
        prefix_sqrt_k += exp2d(kbits(l) / 2.0);
        if (!(prefix_sqrt_k <= exp2d(kbits(l + 1) / 2.0))) v.c313 = false;
    }
    v.c314 = true;
    double prefix314 = 0.0;
    for (int l = 1; l < l_max(); ++l) {
        prefix314 += exp2d(static_cast<double>(kbits(l)) - kbits(l + 1) / 2.0);
        v.c314_prefix_max = std::max(v.c314_prefix_max, prefix314);
        if (!(prefix314 <= v.c314_prefix_bound)) v.c314 = false;
    }
    v.c311_surrogate = true;
    double prev_t = std::numeric_limits<double>::infinity();
    for (int l = 1; l <= l_max(); ++l) {
        double tail = 0.0;
        for (int lp = l + 1; lp <= l_max(); ++lp)
            tail += exp2d(static_cast<double>(kbits(lp)) - bits(lp));
        const double tl = exp2d(static_cast<double>(bits(l))) * tail;
        if (!(tl <= prev_t)) v.c311_surrogate = false;
        prev_t = tl;
    }
    if (!v.all_pass()) {
        std::ostringstream os;
        os << "TowerParams: certificate violation:";
        if (!v.increasing) os << " increasing";
        if (!v.cap_4k) os << " 4K<=N";
        if (!v.c312) os << " (3.12)";
        if (!v.c313) os << " (3.13)";
        if (!v.c314) os << " (3.14)";
        if (!v.c311_surrogate) os << " (3.11-surrogate)";
        throw std::invalid_argument(os.str());
    }
}

double TowerParams::scale(int l) const {
    return exp2d(bits(l) / p_ - kbits(l) * (0.5 + 1.0 / p_));
}

double TowerParams::peak(int l) const {
    return exp2d(bits(l) / p_ + kbits(l) * (0.5 - 1.0 / p_));
}

double TowerParams::n_root(int l) const { return exp2d(bits(l) / p_); }

std::string TowerParams::describe() const {
    std::ostringstream os;
    os << "tower(p=" << p_ << ",levels=";
    for (int l = 1; l <= l_max(); ++l) os << (l > 1 ? "," : "") << "2^" << bits(l) << "/2^" << kbits(l);
    os << ")";
    return os.str();
}

OdometerState sample_state(const TowerParams& params, Rng& rng) {
    OdometerState s;
    s.nbits = std::min(params.bits(params.l_max()) + 2, 126);
    const u128 hi = static_cast<u128>(rng.next());
    const u128 lo = static_cast<u128>(rng.next());
    const u128 mask = (u128(1) << s.nbits) - 1;
    s.bits = ((hi << 64) | lo) & mask;
    return s;
}

OdometerState odometer_step(const OdometerState& s) {
    OdometerState out = s;
    for (int pos = 0; pos < s.nbits; ++pos) {
        const u128 bit = u128(1) << pos;
        if (out.bits & bit) {
            out.bits &= ~bit;  // carry
        } else {
            out.bits |= bit;
            return out;
        }
    }
    return out;  // wrapped to all zeros
}

u128 level_position(const TowerParams& params, const OdometerState& s, int l) {
    if (s.nbits < params.bits(l))
        throw std::invalid_argument("level_position: state has too few bits");
    return s.bits & (params.N(l) - 1);
}

double g_level_value(const TowerParams& params, int l, u128 m) {
    const u128 n = params.N(l);
    if (m >= n) throw std::domain_error("g_level_value: rung index out of range");
    const u128 j = n - m;  // m = 0 gives j = N, outside the tent
    const u128 k = params.K(l);
    if (j <= k) return params.scale(l) * static_cast<double>(static_cast<std::uint64_t>(j));
    if (j <= 2 * k - 1)
        return params.scale(l) * static_cast<double>(static_cast<std::uint64_t>(2 * k - j));
    return 0.0;
}

double eval_g(const TowerParams& params, const OdometerState& s, std::uint64_t i) {
    double g = 0.0;
    for (int l = 1; l <= params.l_max(); ++l) {
        const u128 mask = params.N(l) - 1;
        const u128 m = (static_cast<u128>(s.bits & mask) + i) & mask;
        const u128 j = params.N(l) - m;
        const u128 k = params.K(l);
        if (j <= 2 * k - 1) {
            const auto jj = static_cast<double>(static_cast<std::uint64_t>(j));
            const auto kk = static_cast<double>(static_cast<std::uint64_t>(k));
            g += params.scale(l) * (j <= k ? jj : 2.0 * kk - jj);
        }
    }
    return g;
}

CoboundaryPathResult sample_coboundary_path(const TowerParams& params, double sigma_m,
                                            std::uint64_t n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample_coboundary_path: n >= 1 required");
    if (!(sigma_m >= 0.0)) throw std::invalid_argument("sample_coboundary_path: sigma_m >= 0 required");
    Rng rng(seed);
    const OdometerState s = sample_state(params, rng);
    CoboundaryPathResult out;
    out.x.resize(static_cast<std::size_t>(n));
    double g_prev = eval_g(params, s, 1);
    out.g_first = g_prev;
    long double msum = 0.0L;
    for (std::uint64_t j = 1; j <= n; ++j) {
        const double g_next = eval_g(params, s, j + 1);
        double m = 0.0;
        if (sigma_m > 0.0) {
            m = sigma_m * rng.rademacher();
            msum += m;
        }
        out.x[static_cast<std::size_t>(j - 1)] = m + g_prev - g_next;
        g_prev = g_next;
    }
    out.g_after_last = g_prev;
    out.martingale_sum = static_cast<double>(msum);
    return out;
}

// ---------------------------------------------------------------------------
// Holder event on [1, N_l]

namespace {

using i128 = __int128;

struct Interval {
    std::uint64_t lo, hi;  // inclusive
};

// Times t in [1, horizon] with (j + t) mod n on the tent support arc
// [n - 2k, n - 1] union {0}. The arc recurs with period n and may wrap, so
// scan shifted copies from base = -n upward.
void support_intervals(const i128 n, const i128 k, const i128 j, const std::uint64_t horizon,
                       std::vector<Interval>& out) {
    const i128 arc_len = 2 * k + 1;  // rungs n-2k .. n-1 and rung 0
    i128 t0 = ((n - 2 * k) - (j % n)) % n;
    if (t0 < 0) t0 += n;
    for (i128 base = -n; base <= static_cast<i128>(horizon); base += n) {
        const i128 lo = base + t0;
        const i128 hi = lo + arc_len - 1;
        if (hi < 1) continue;
        if (lo > static_cast<i128>(horizon)) break;
        out.push_back(Interval{static_cast<std::uint64_t>(std::max<i128>(lo, 1)),
                               static_cast<std::uint64_t>(
                                   std::min<i128>(hi, static_cast<i128>(horizon)))});
    }
}

void expand_and_merge(std::vector<Interval>& ivs, std::uint64_t buffer, std::uint64_t horizon) {
    for (auto& iv : ivs) {
        iv.lo = iv.lo > buffer ? iv.lo - buffer : 1;
        iv.hi = std::min(horizon, iv.hi + buffer);
    }
    std::sort(ivs.begin(), ivs.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> merged;
    for (const auto& iv : ivs) {
        if (!merged.empty() && iv.lo <= merged.back().hi + 1)
            merged.back().hi = std::max(merged.back().hi, iv.hi);
        else
            merged.push_back(iv);
    }
    ivs.swap(merged);
}

} // namespace

bool holder_event_indicator(const TowerParams& params, int l, const OdometerState& s) {
    if (l < 1 || l > params.l_max())
        throw std::invalid_argument("holder_event_indicator: level out of range");
    if (params.bits(l) > kEventBitsGuard)
        throw std::length_error("holder_event_indicator: N_l exceeds the simulation budget");
    const double alpha = 0.5 - 1.0 / params.p();
    const double thr = 0.5 * params.n_root(l);
    const std::uint64_t horizon = static_cast<std::uint64_t>(params.N(l));

    // Levels below l must be unable to fire on their own, otherwise the
    // window restriction is not exact.
    double low_peaks = 0.0;
    for (int lp = 1; lp < l; ++lp) low_peaks += params.peak(lp);
    if (!(2.0 * low_peaks < thr)) {
        if (params.bits(l) <= kBruteBitsGuard) return holder_event_indicator_brute(params, l, s);
        throw std::domain_error(
            "holder_event_indicator: interference certificate fails; sparse decision not exact");
    }

    std::vector<Interval> ivs;
    for (int lp = l; lp <= params.l_max(); ++lp) {
        if (params.bits(lp) > 119)
            throw std::length_error("holder_event_indicator: level beyond the arithmetic budget");
        support_intervals(static_cast<i128>(params.N(lp)), static_cast<i128>(params.K(lp)),
                          static_cast<i128>(level_position(params, s, lp)), horizon, ivs);
    }
    std::uint64_t buffer = 2;
    if (l >= 2)
        buffer = static_cast<std::uint64_t>(params.N(l - 1)) +
                 2 * static_cast<std::uint64_t>(params.K(l - 1));
    expand_and_merge(ivs, buffer, horizon);

    std::vector<std::uint64_t> times;
    std::size_t total = 0;
    for (const auto& iv : ivs) total += static_cast<std::size_t>(iv.hi - iv.lo + 1);
    if (total > (std::size_t(1) << 22))
        throw std::length_error("holder_event_indicator: candidate set exceeds budget");
    times.reserve(total);
    for (const auto& iv : ivs)
        for (std::uint64_t t = iv.lo; t <= iv.hi; ++t) times.push_back(t);

    std::vector<double> g(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) g[i] = eval_g(params, s, times[i]);

    // Full pairwise maximum over the candidate set with early exit.
    for (std::size_t i = 0; i < times.size(); ++i) {
        for (std::size_t jx = i + 1; jx < times.size(); ++jx) {
            const double span = static_cast<double>(times[jx] - times[i]);
            if (std::abs(g[jx] - g[i]) >= thr * std::pow(span, alpha)) return true;
        }
    }
    return false;
}

bool holder_event_indicator_brute(const TowerParams& params, int l, const OdometerState& s) {
    if (params.bits(l) > kBruteBitsGuard)
        throw std::length_error("holder_event_indicator_brute: N_l too large for O(N^2)");
    const auto n = static_cast<std::uint64_t>(params.N(l));
    const double alpha = 0.5 - 1.0 / params.p();
    const double thr = 0.5 * params.n_root(l);
    std::vector<double> g(n + 1), lvl(n, 0.0);
    for (std::uint64_t t = 1; t <= n; ++t) g[t] = eval_g(params, s, t);
    for (std::uint64_t d = 1; d < n; ++d) lvl[d] = thr * std::pow(static_cast<double>(d), alpha);
    for (std::uint64_t i = 1; i < n; ++i)
        for (std::uint64_t j = i + 1; j <= n; ++j)
            if (std::abs(g[j] - g[i]) >= lvl[j - i]) return true;
    return false;
}

EventProbability holder_event_probability(const TowerParams& params, int l, std::uint64_t m_paths,
                                          std::uint64_t seed, int threads) {
    if (m_paths < 1) throw std::invalid_argument("holder_event_probability: need paths >= 1");
    std::vector<char> fired(m_paths, 0);
    parallel_for(m_paths, threads, [&](std::size_t r) {
        Rng rng(derive_seed(seed, r));
        const OdometerState s = sample_state(params, rng);
        fired[r] = holder_event_indicator(params, l, s) ? 1 : 0;
    });
    EventProbability out;
    out.paths = m_paths;
    for (char c : fired) out.fires += static_cast<std::uint64_t>(c);
    out.p_hat = static_cast<double>(out.fires) / static_cast<double>(m_paths);
    out.std_error = binomial_std_error(out.p_hat, m_paths);
    return out;
}

std::vector<LpRatioRow> lp_ratio(const TowerParams& params, double p, double sigma_m,
                                 const std::vector<std::uint64_t>& n_grid, std::uint64_t m_paths,
                                 std::uint64_t seed, int threads) {
    if (m_paths < 2) throw std::invalid_argument("lp_ratio: need paths >= 2");
    std::vector<LpRatioRow> rows;
    rows.reserve(n_grid.size());
    for (std::size_t gi = 0; gi < n_grid.size(); ++gi) {
        const std::uint64_t n = n_grid[gi];
        std::vector<double> abs_p(m_paths), cob_p(m_paths);
        parallel_for(m_paths, threads, [&](std::size_t r) {
            Rng rng(derive_seed(seed ^ (0xABCDu + gi), r));
            const OdometerState s = sample_state(params, rng);
            const double dg = eval_g(params, s, 1) - eval_g(params, s, n + 1);
            double msum = 0.0;
            if (sigma_m > 0.0) {
                std::binomial_distribution<long long> bin(static_cast<long long>(n), 0.5);
                const long long heads = bin(rng);
                msum = sigma_m * static_cast<double>(2 * heads - static_cast<long long>(n));
            }
            abs_p[r] = std::pow(std::abs(msum + dg), p);
            cob_p[r] = std::pow(std::abs(dg), p);
        });
        LpRatioRow row;
        row.n = n;
        const double scale = std::pow(static_cast<double>(n), p / 2.0);
        row.ratio = mean(abs_p) / scale;
        row.std_error = std_error(abs_p) / scale;
        row.cobound_norm = std::pow(mean(cob_p), 1.0 / p) / std::sqrt(static_cast<double>(n));
        rows.push_back(row);
    }
    return rows;
}

} // namespace hwl
