#pragma once

// Shared test utilities: independent oracle implementations (naive rank
// counting, rational objective sweeps, brute-force isotonic fits) and random
// instance generators. Oracles stay on the straightforward O(nm) / full-Rat
// code paths so they share nothing with the cleared-denominator routines they
// check.

#include <algorithm>
#include <vector>

#include "bfdr/bfdr.hpp"

namespace testutil {

using bfdr::Int;
using bfdr::Labels;
using bfdr::Level;
using bfdr::PValueVector;
using bfdr::Rat;
using bfdr::Rng;
using bfdr::ScoreSample;

/// O(nm) double-loop rank oracle for conformal p-values.
inline std::vector<int> naive_ranks(const ScoreSample& sample) {
    std::vector<int> ranks(sample.test.size());
    for (std::size_t i = 0; i < sample.test.size(); ++i) {
        int count = 0;
        for (double c : sample.calib)
            if (c >= sample.test[i]) ++count;
        ranks[i] = 1 + count;
    }
    return ranks;
}

/// Full-rational sweep of max argmin_k { p_(k) - k*slope } with an optional
/// admissibility cap on the rank.
inline int oracle_max_argmin(const PValueVector& pv, const Rat& slope, int rank_cap) {
    Rat best = 0;
    int best_k = 0;
    for (int k = 1; k <= pv.m; ++k) {
        if (pv.sorted_rank(k) > rank_cap) continue;
        Rat obj = Rat(pv.sorted_rank(k), pv.n + 1) - slope * k;
        if (obj <= best) {
            best = obj;
            best_k = k;
        }
    }
    return best_k;
}

inline int oracle_sl(const PValueVector& pv, const Level& alpha) {
    return oracle_max_argmin(pv, Rat(alpha.value()) / pv.m, pv.n + 1);
}

inline int oracle_slc(const PValueVector& pv, const Level& alpha) {
    Rat slope = alpha.value() / pv.m - Rat(1, pv.n + 1);
    if (slope < 0) slope = 0;
    return oracle_max_argmin(pv, slope, pv.n + 1);
}

inline int oracle_bh(const PValueVector& pv, const Level& alpha) {
    int best = 0;
    for (int k = 1; k <= pv.m; ++k)
        if (Rat(pv.sorted_rank(k), pv.n + 1) <= alpha.value() * k / pv.m) best = k;
    return best;
}

inline Rat oracle_storey(const PValueVector& pv, int s0) {
    Rat threshold(s0 + 1, pv.n + 1);
    int count = 0;
    for (int r : pv.ranks)
        if (Rat(r, pv.n + 1) >= threshold) ++count;
    return Rat(1 + count) / (Rat(pv.m) * (1 - threshold));
}

inline int oracle_slg(const PValueVector& pv, const Level& alpha) {
    int k_hat = oracle_sl(pv, alpha);
    if (k_hat == 0) return 0;
    auto objective = [&](int k) {
        return Rat(pv.sorted_rank(k), pv.n + 1) - alpha.value() * k / pv.m;
    };
    Rat min_other;
    bool have = false;
    for (int k = 0; k <= pv.m; ++k) {
        if (k == k_hat) continue;
        Rat obj = objective(k);
        if (!have || obj < min_other) {
            min_other = obj;
            have = true;
        }
    }
    if (objective(k_hat) + Rat(1, pv.n + 1) <= min_other) return k_hat;
    return 0;
}

/// Grid-level argmin: max argmin over l in [0, n+1] of
/// l/(n+1) - (alpha/m)*#{j : p_j <= l/(n+1)}.
inline int oracle_grid_argmin(const PValueVector& pv, const Level& alpha) {
    Rat best = 0;
    int best_l = 0;
    for (int l = 1; l <= pv.n + 1; ++l) {
        int count = 0;
        for (int r : pv.ranks)
            if (r <= l) ++count;
        Rat obj = Rat(l, pv.n + 1) - alpha.value() * count / pv.m;
        if (obj <= best) {
            best = obj;
            best_l = l;
        }
    }
    return best_l;
}

/// Exact isotonic-fit oracle: enumerates contiguous partitions of the raw
/// sequence (the optimum is blockwise-constant at block means), keeps the
/// monotone ones, and returns the minimal sum of squared errors.
inline Rat oracle_isotonic_best_sse(const std::vector<Rat>& raw) {
    const int m = static_cast<int>(raw.size());
    Rat best_sse;
    bool have = false;
    for (unsigned mask = 0; mask < (1u << (m - 1)); ++mask) {
        // bit j set = block boundary between j and j+1
        std::vector<Rat> fit(m);
        int start = 0;
        bool monotone = true;
        Rat prev_mean;
        bool have_prev = false;
        for (int j = 0; j <= m - 1; ++j) {
            bool boundary = j == m - 1 || (mask & (1u << j));
            if (!boundary) continue;
            Rat sum = 0;
            for (int t = start; t <= j; ++t) sum += raw[t];
            Rat mean = sum / (j - start + 1);
            if (have_prev && mean < prev_mean) {
                monotone = false;
                break;
            }
            for (int t = start; t <= j; ++t) fit[t] = mean;
            prev_mean = mean;
            have_prev = true;
            start = j + 1;
        }
        if (!monotone) continue;
        Rat sse = 0;
        for (int t = 0; t < m; ++t) sse += (fit[t] - raw[t]) * (fit[t] - raw[t]);
        if (!have || sse < best_sse) {
            best_sse = sse;
            have = true;
        }
    }
    return best_sse;
}

/// Random sample with continuous scores; alternatives (if any) are drawn from
/// a shifted distribution so instances have some signal.
inline ScoreSample random_sample(Rng& rng, int n, int m, int m1, double shift = 0.8) {
    ScoreSample s;
    s.calib.resize(n);
    for (double& x : s.calib) x = rng.next_double();
    s.test.resize(m);
    for (int i = 0; i < m; ++i)
        s.test[i] = i < m - m1 ? rng.next_double() : shift + rng.next_double();
    return s;
}

inline Level random_level(Rng& rng) {
    // two-digit decimals in [0.05, 0.95]
    int hundredths = 5 + static_cast<int>(rng.next_below(91));
    std::string text = "0." + std::string(hundredths < 10 ? "0" : "") + std::to_string(hundredths);
    return Level::parse(text);
}

}  // namespace testutil
