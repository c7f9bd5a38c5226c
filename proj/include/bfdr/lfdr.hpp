#pragma once

#include <utility>
#include <vector>

#include "bfdr/procedures.hpp"

namespace bfdr {

/// Local-fdr estimates on the shifted p-value grid, all exact rationals.
/// Indexing: p_tilde and gcm run over k = 0..m, the lfdr vectors over k = 1..m
/// (element k-1). grenander_pmf covers the full grid {1/(n+1),...,(m+n+1)/(n+1)}
/// as (grid point, mass) pairs with zero mass beyond p_tilde[m].
struct LfdrCurve {
    std::vector<Rat> p_tilde;
    std::vector<Rat> lfdr_raw;
    std::vector<Rat> lfdr_iso;
    std::vector<Rat> lfdr_gren;
    std::vector<Rat> gcm;
    std::vector<std::pair<Rat, Rat>> grenander_pmf;
};

/// Raw per-bin estimate lfdr_raw(k) = m * (p~_(k) - p~_(k-1)).
inline std::vector<Rat> lfdr_raw(const PValueVector& pv) {
    std::vector<Rat> out(pv.m);
    for (int k = 1; k <= pv.m; ++k) {
        int gap = pv.shifted_numerator(k) - pv.shifted_numerator(k - 1);
        out[k - 1] = Rat(Int(pv.m) * gap, pv.n + 1);
    }
    return out;
}

namespace detail {

// Shifted-increment block: sum of (t_k - t_{k-1}) and length, so the pooled
// value is m*sum/(len*(n+1)). Integers stay far below 64 bits here.
struct PavaBlock {
    long long sum;
    int len;
};

inline std::vector<PavaBlock> pava_blocks(const std::vector<long long>& increments) {
    std::vector<PavaBlock> blocks;
    blocks.reserve(increments.size());
    for (long long inc : increments) {
        PavaBlock cur{inc, 1};
        // pool adjacent violators: merge while the previous mean exceeds ours
        while (!blocks.empty() &&
               blocks.back().sum * cur.len >= cur.sum * blocks.back().len) {
            cur.sum += blocks.back().sum;
            cur.len += blocks.back().len;
            blocks.pop_back();
        }
        blocks.push_back(cur);
    }
    return blocks;
}

inline std::vector<long long> shifted_increments(const PValueVector& pv) {
    std::vector<long long> inc(pv.m);
    for (int k = 1; k <= pv.m; ++k)
        inc[k - 1] = pv.shifted_numerator(k) - pv.shifted_numerator(k - 1);
    return inc;
}

// Upper concave hull (least concave majorant) of integer points sorted by x.
inline std::vector<std::pair<long long, long long>> upper_hull(
    const std::vector<std::pair<long long, long long>>& pts) {
    std::vector<std::pair<long long, long long>> hull;
    for (const auto& p : pts) {
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull[hull.size() - 1];
            // drop b unless it makes a strict right turn (keeps concavity)
            long long cross = (b.first - a.first) * (p.second - a.second) -
                              (b.second - a.second) * (p.first - a.first);
            if (cross < 0) break;
            hull.pop_back();
        }
        hull.push_back(p);
    }
    return hull;
}

}  // namespace detail

/// Isotonic lfdr: PAVA over lfdr_raw with uniform weights, equivalently m times
/// the left slopes of the greatest convex minorant of {(k/m, p~_(k))}.
inline std::vector<Rat> lfdr_iso(const PValueVector& pv) {
    std::vector<Rat> out;
    out.reserve(pv.m);
    for (const auto& block : detail::pava_blocks(detail::shifted_increments(pv))) {
        Rat value(Int(pv.m) * block.sum, Int(block.len) * (pv.n + 1));
        for (int i = 0; i < block.len; ++i) out.push_back(value);
    }
    return out;
}

/// Grenander lfdr: g_hat is the nonincreasing pmf given by the increments of
/// the least concave majorant of the shifted empirical cdf on the grid
/// {1/(n+1),...,(m+n+1)/(n+1)}; lfdr_gren(k) = (1/(n+1)) / g_hat(p~_(k)).
inline std::pair<std::vector<Rat>, std::vector<std::pair<Rat, Rat>>> lfdr_grenander(
    const PValueVector& pv) {
    const int grid_max = pv.m + pv.n + 1;

    // cdf points (t_k, k) plus the anchors; intermediate grid points lie below.
    std::vector<std::pair<long long, long long>> pts;
    pts.emplace_back(0, 0);
    for (int k = 1; k <= pv.m; ++k) pts.emplace_back(pv.shifted_numerator(k), k);
    if (pts.back().first < grid_max) pts.emplace_back(grid_max, pv.m);
    auto hull = detail::upper_hull(pts);

    // per-grid-point slope of the hull segment covering (j-1, j]
    std::vector<Rat> slope(grid_max + 1);  // slope[j], j in [1, grid_max]
    std::size_t seg = 0;
    for (int j = 1; j <= grid_max; ++j) {
        while (seg + 1 < hull.size() && hull[seg + 1].first < j) ++seg;
        long long dx = hull[seg + 1].first - hull[seg].first;
        long long dy = hull[seg + 1].second - hull[seg].second;
        slope[j] = Rat(dy, dx);
    }

    std::vector<std::pair<Rat, Rat>> pmf;
    pmf.reserve(grid_max);
    for (int j = 1; j <= grid_max; ++j)
        pmf.emplace_back(Rat(j, pv.n + 1), slope[j] / pv.m);

    std::vector<Rat> lfdr(pv.m);
    for (int k = 1; k <= pv.m; ++k) {
        const Rat& s = slope[pv.shifted_numerator(k)];
        lfdr[k - 1] = Rat(Int(pv.m) * rat_den(s), Int(pv.n + 1) * rat_num(s));
    }
    return {std::move(lfdr), std::move(pmf)};
}

/// All lfdr representations at once; gcm is the cumulative form of lfdr_iso,
/// i.e. the greatest convex minorant values at k = 0..m.
inline LfdrCurve lfdr_curve(const PValueVector& pv) {
    LfdrCurve curve;
    curve.p_tilde.resize(pv.m + 1);
    for (int k = 0; k <= pv.m; ++k)
        curve.p_tilde[k] = Rat(pv.shifted_numerator(k), pv.n + 1);
    curve.lfdr_raw = lfdr_raw(pv);
    curve.lfdr_iso = lfdr_iso(pv);
    auto gren = lfdr_grenander(pv);
    curve.lfdr_gren = std::move(gren.first);
    curve.grenander_pmf = std::move(gren.second);
    curve.gcm.resize(pv.m + 1);
    curve.gcm[0] = 0;
    for (int k = 1; k <= pv.m; ++k)
        curve.gcm[k] = curve.gcm[k - 1] + curve.lfdr_iso[k - 1] / pv.m;
    return curve;
}

/// Number of SLC rejections recovered from the shifted argmin
/// max argmin_k { p~_(k) - alpha*k/m }; only meaningful when alpha/m > 1/(n+1).
inline int slc_kmax_shifted(const PValueVector& pv, const Level& alpha) {
    std::vector<int> shifted(pv.m);
    for (int k = 1; k <= pv.m; ++k) shifted[k - 1] = pv.shifted_numerator(k);
    return detail::max_argmin_support_line(shifted, pv.n, alpha.value() / pv.m,
                                           pv.n + 1 + pv.m);
}

enum class LfdrKind { kIso, kGren };

/// Number of SLC rejections via the lfdr threshold max{k : lfdr(k) <= alpha}.
/// Requires alpha/m > 1/(n+1), the regime where SLC can reject at all.
inline int slc_kmax_via_lfdr(const PValueVector& pv, const Level& alpha, LfdrKind which) {
    if (!(alpha.value() / pv.m > Rat(1, pv.n + 1)))
        throw PreconditionError("slc_kmax_via_lfdr requires alpha/m > 1/(n+1)");
    std::vector<Rat> lfdr =
        which == LfdrKind::kIso ? lfdr_iso(pv) : lfdr_grenander(pv).first;
    for (int k = pv.m; k >= 1; --k)
        if (lfdr[k - 1] <= alpha.value()) return k;
    return 0;
}

}  // namespace bfdr
