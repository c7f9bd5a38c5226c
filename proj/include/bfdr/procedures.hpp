#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "bfdr/exact.hpp"
#include "bfdr/pvalues.hpp"

namespace bfdr {

/// Outcome of a top-k decision rule on a test sample.
struct RejectionResult {
    int k_hat = 0;                       // number of rejections, in [0,m]
    std::vector<int> rejected;           // 0-based test indices, ascending
    std::optional<int> boundary_index;   // sigma(k_hat); empty when k_hat = 0
    double threshold_score = std::numeric_limits<double>::infinity();
    Rat adjusted_level = 0;              // level effectively driving the objective
    std::optional<Rat> pi0_hat;          // set by the adaptive variants
};

/// Storey estimator parameter s0 in [0, n-1]; threshold is (s0+1)/(n+1).
struct StoreyConfig {
    int s0 = 0;

    static StoreyConfig defaulted(int n) { return StoreyConfig{(n + 1) / 2 - 1}; }

    void validate(int n) const {
        if (s0 < 0 || s0 > n - 1)
            throw ConfigError("s0 must lie in [0, n-1]");
    }
};

namespace detail {

/// max argmin_{0<=k<=K} { r_k/(n+1) - k*slope } over entries with r_k <= rank_cap
/// (k = 0 always admitted, r_0 = 0). Evaluated as cleared-denominator integers
/// val(k) = r_k*den(slope) - k*num(slope)*(n+1), so argmin ties resolve exactly
/// to the largest k. ranks_sorted must be nondecreasing with values >= 1.
inline int max_argmin_support_line(const std::vector<int>& ranks_sorted, int n,
                                   const Rat& slope, int rank_cap) {
    const Int u = rat_num(slope);
    const Int v = rat_den(slope);
    const Int step = u * (n + 1);
    Int best = 0;  // val(0)
    int best_k = 0;
    Int line = 0;
    for (int k = 1; k <= static_cast<int>(ranks_sorted.size()); ++k) {
        const int r = ranks_sorted[k - 1];
        if (r > rank_cap) break;  // ranks nondecreasing: all later k inadmissible
        line += step;
        Int val = r * v - line;
        if (val <= best) {
            best = std::move(val);
            best_k = k;
        }
    }
    return best_k;
}

inline std::vector<int> sorted_ranks(const PValueVector& pv) {
    std::vector<int> r(pv.m);
    for (int k = 1; k <= pv.m; ++k) r[k - 1] = pv.sorted_rank(k);
    return r;
}

/// Packages a top-k decision on the full test sample.
inline RejectionResult make_top_k(const PValueVector& pv, int k_hat, Rat adjusted_level,
                                  std::optional<Rat> pi0 = std::nullopt) {
    RejectionResult res;
    res.k_hat = k_hat;
    res.adjusted_level = std::move(adjusted_level);
    res.pi0_hat = std::move(pi0);
    if (k_hat > 0) {
        res.rejected.assign(pv.sigma.begin(), pv.sigma.begin() + k_hat);
        std::sort(res.rejected.begin(), res.rejected.end());
        res.boundary_index = pv.sigma[k_hat - 1];
        res.threshold_score = pv.sorted_scores[k_hat - 1];
    }
    return res;
}

}  // namespace detail

/// Benjamini-Hochberg: k_hat = max{k : p_{sigma(k)} <= alpha*k/m}, rejecting the
/// k_hat smallest p-values. Comparison r_k*m*den <= num*k*(n+1), exact.
inline RejectionResult bh(const PValueVector& pv, const Level& alpha) {
    const Int num = alpha.num();
    const Int den = alpha.den();
    const Int lhs_unit = Int(pv.m) * den;
    const Int rhs_unit = num * (pv.n + 1);
    int k_hat = 0;
    for (int k = pv.m; k >= 1; --k) {
        if (Int(pv.sorted_rank(k)) * lhs_unit <= Int(k) * rhs_unit) {
            k_hat = k;
            break;
        }
    }
    return detail::make_top_k(pv, k_hat, alpha.value());
}

/// Support line: k_hat = max argmin_k { p_{sigma(k)} - alpha*k/m }.
inline RejectionResult sl(const PValueVector& pv, const Level& alpha) {
    Rat slope = alpha.value() / pv.m;
    int k_hat = detail::max_argmin_support_line(detail::sorted_ranks(pv), pv.n, slope, pv.n + 1);
    return detail::make_top_k(pv, k_hat, alpha.value());
}

/// Support line conformal: SL at the adjusted per-k slope (alpha/m - 1/(n+1))+,
/// no discovery when the adjustment is not strictly positive.
inline RejectionResult slc(const PValueVector& pv, const Level& alpha) {
    Rat slope = positive_part(alpha.value() / pv.m - Rat(1, pv.n + 1));
    int k_hat = detail::max_argmin_support_line(detail::sorted_ranks(pv), pv.n, slope, pv.n + 1);
    return detail::make_top_k(pv, k_hat, positive_part(alpha.value() - Rat(pv.m, pv.n + 1)));
}

/// Storey null-proportion estimate
/// pi0_hat = (1 + #{i : p_i >= (s0+1)/(n+1)}) / (m*(1 - (s0+1)/(n+1))).
/// Deliberately not capped at 1.
inline Rat storey_pi0(const PValueVector& pv, const StoreyConfig& cfg) {
    cfg.validate(pv.n);
    int count = 0;
    for (int r : pv.ranks)
        if (r >= cfg.s0 + 1) ++count;
    return Rat(Int(1 + count) * (pv.n + 1), Int(pv.m) * (pv.n - cfg.s0));
}

/// Adaptive support line: slope alpha/(m*pi0_hat), argmin restricted to
/// p_{sigma(k)} <= s0/(n+1) (k = 0 always admitted).
inline RejectionResult asl(const PValueVector& pv, const Level& alpha, const StoreyConfig& cfg) {
    Rat pi0 = storey_pi0(pv, cfg);
    Rat slope = alpha.value() / (pi0 * pv.m);
    int k_hat = detail::max_argmin_support_line(detail::sorted_ranks(pv), pv.n, slope, cfg.s0);
    return detail::make_top_k(pv, k_hat, alpha.value() / pi0, pi0);
}

/// Adaptive SLC: slope (alpha/(m*pi0_hat) - 1/(n+1))+, unrestricted k.
inline RejectionResult aslc(const PValueVector& pv, const Level& alpha, const StoreyConfig& cfg) {
    Rat pi0 = storey_pi0(pv, cfg);
    Rat slope = positive_part(alpha.value() / (pi0 * pv.m) - Rat(1, pv.n + 1));
    int k_hat = detail::max_argmin_support_line(detail::sorted_ranks(pv), pv.n, slope, pv.n + 1);
    return detail::make_top_k(pv, k_hat,
                              positive_part(alpha.value() / pi0 - Rat(pv.m, pv.n + 1)), pi0);
}

/// SL with gap: keep SL's rejections only when its minimum is separated from
/// every other objective value by at least 1/(n+1).
inline RejectionResult slg(const PValueVector& pv, const Level& alpha) {
    RejectionResult base = sl(pv, alpha);
    if (base.k_hat == 0)
        return detail::make_top_k(pv, 0, alpha.value());

    // Same cleared-denominator scale as the SL argmin: objective times (n+1)*m*den.
    const Int num = alpha.num();
    const Int den = alpha.den();
    const Int step = num * (pv.n + 1);
    const Int gap = Int(pv.m) * den;  // 1/(n+1) on this scale
    auto scaled = [&](int k) { return Int(pv.sorted_rank(k)) * pv.m * den - Int(k) * step; };

    Int best_other;
    bool have_other = false;
    for (int k = 0; k <= pv.m; ++k) {
        if (k == base.k_hat) continue;
        Int val = scaled(k);
        if (!have_other || val < best_other) {
            best_other = std::move(val);
            have_other = true;
        }
    }
    bool separated = have_other && scaled(base.k_hat) + gap <= best_other;
    if (!separated)
        return detail::make_top_k(pv, 0, alpha.value());
    return base;
}

}  // namespace bfdr
