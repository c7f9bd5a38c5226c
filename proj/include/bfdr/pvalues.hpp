#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "bfdr/errors.hpp"

namespace bfdr {

enum class TiePolicy {
    kRejectInput,   // strict mode: any tie across calib+test is an error
    kBreakByIndex,  // deterministic: tied test scores ordered by original index
};

/// Calibration scores (null examples) plus test scores.
struct ScoreSample {
    std::vector<double> calib;
    std::vector<double> test;
    TiePolicy tie_policy = TiePolicy::kBreakByIndex;

    int n() const { return static_cast<int>(calib.size()); }
    int m() const { return static_cast<int>(test.size()); }
};

/// Ground-truth indicator per test point: 1 = novelty, 0 = null.
struct Labels {
    std::vector<int> h;

    int m() const { return static_cast<int>(h.size()); }
    int m0() const { return static_cast<int>(std::count(h.begin(), h.end(), 0)); }
    int m1() const { return m() - m0(); }
    double pi0() const { return static_cast<double>(m0()) / m(); }
};

/// Conformal p-values as integer ranks over n+1, together with the score
/// ordering permutation. p_i = ranks[i]/(n+1); sigma lists 0-based test
/// indices by decreasing score (ties broken by smaller index).
struct PValueVector {
    std::vector<int> ranks;          // per test index, in [1, n+1]
    std::vector<int> sigma;          // sigma[k-1] = test index at sorted position k
    std::vector<double> sorted_scores;  // test scores in sigma order
    int n = 0;
    int m = 0;
    bool ties_broken = false;

    /// Rank of the k-th sorted p-value, k in [0,m]; r_0 = 0 encodes the
    /// p_{sigma(0)} := 0 convention.
    int sorted_rank(int k) const { return k == 0 ? 0 : ranks[sigma[k - 1]]; }

    /// Numerator of the shifted value p~_(k) = (r_k + k)/(n+1); strictly
    /// increasing in k.
    int shifted_numerator(int k) const { return sorted_rank(k) + k; }

    double p_value(int test_index) const {
        return static_cast<double>(ranks[test_index]) / (n + 1);
    }
};

namespace detail {

inline void validate_finite(const std::vector<double>& scores, const char* which) {
    for (double s : scores)
        if (!std::isfinite(s))
            throw InvalidScore(std::string(which) + " scores must be finite");
}

inline bool has_duplicate(std::vector<double> pooled) {
    std::sort(pooled.begin(), pooled.end());
    return std::adjacent_find(pooled.begin(), pooled.end()) != pooled.end();
}

}  // namespace detail

/// Conformal p-values of the test scores against the calibration sample:
/// ranks[i] = 1 + #{j in [n] : S_j >= S_{n+i}}. O((n+m) log(n+m)).
inline PValueVector conformal_p_values(const ScoreSample& sample) {
    if (sample.calib.empty() || sample.test.empty())
        throw InvalidScore("need at least one calibration and one test score");
    detail::validate_finite(sample.calib, "calibration");
    detail::validate_finite(sample.test, "test");

    std::vector<double> pooled = sample.calib;
    pooled.insert(pooled.end(), sample.test.begin(), sample.test.end());
    const bool tied = detail::has_duplicate(std::move(pooled));
    if (tied && sample.tie_policy == TiePolicy::kRejectInput)
        throw TiesError("tied scores in calib+test under reject_input policy");

    const int n = sample.n();
    const int m = sample.m();
    std::vector<double> calib_sorted = sample.calib;
    std::sort(calib_sorted.begin(), calib_sorted.end());

    PValueVector pv;
    pv.n = n;
    pv.m = m;
    pv.ties_broken = tied;
    pv.ranks.resize(m);
    for (int i = 0; i < m; ++i) {
        auto it = std::lower_bound(calib_sorted.begin(), calib_sorted.end(), sample.test[i]);
        int count_ge = static_cast<int>(calib_sorted.end() - it);
        pv.ranks[i] = 1 + count_ge;
    }

    pv.sigma.resize(m);
    std::iota(pv.sigma.begin(), pv.sigma.end(), 0);
    std::sort(pv.sigma.begin(), pv.sigma.end(), [&](int a, int b) {
        if (sample.test[a] != sample.test[b]) return sample.test[a] > sample.test[b];
        return a < b;
    });
    pv.sorted_scores.resize(m);
    for (int k = 0; k < m; ++k) pv.sorted_scores[k] = sample.test[pv.sigma[k]];
    return pv;
}

/// Shifted p-values p~_(k) = p_{sigma(k)} + k/(n+1) for k = 0..m (p~_(0) = 0).
inline std::vector<double> shifted_p_values(const PValueVector& pv) {
    std::vector<double> out(pv.m + 1);
    for (int k = 0; k <= pv.m; ++k)
        out[k] = static_cast<double>(pv.shifted_numerator(k)) / (pv.n + 1);
    return out;
}

}  // namespace bfdr
