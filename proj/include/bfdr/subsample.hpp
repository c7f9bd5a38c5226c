#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "bfdr/procedures.hpp"
#include "bfdr/rng.hpp"

namespace bfdr {

/// Tuning for the subsampled procedure family. When `s` is unset the size is
/// taken from the rule of thumb max{s_min, min{m, floor(rho*alpha*(n+1))}}.
struct SubsampleSpec {
    std::optional<int> s;
    int B = 51;            // odd by default so the median needs no interpolation
    Rat gamma = Rat(1, 2); // quantile of the per-subsample rejection counts
    bool halve = false;    // run the multi-subsample variants at alpha/2
    Rat rho = Rat(1, 5);
    int s_min = 100;
    std::uint64_t seed = 0;

    void validate(int m) const {
        if (s && (*s < 1 || *s > m)) throw ConfigError("subsample size s must lie in [1, m]");
        if (B < 1) throw ConfigError("B must be >= 1");
        if (!(gamma > 0 && gamma <= 1)) throw ConfigError("gamma must lie in (0, 1]");
        if (s_min < 1) throw ConfigError("s_min must be >= 1");
        if (!(rho > 0)) throw ConfigError("rho must be positive");
    }
};

/// Rule-of-thumb subsample size, clamped to [1, m].
inline int recommended_subsample_size(int n, int m, const Level& alpha, const Rat& rho,
                                      int s_min) {
    Int floored = (rat_num(rho) * alpha.num() * (n + 1)) / (rat_den(rho) * alpha.den());
    long long f = floored.convert_to<long long>();
    long long s = std::max<long long>(s_min, std::min<long long>(m, f));
    return static_cast<int>(std::clamp<long long>(s, 1, m));
}

namespace detail {

inline int resolve_subsample_size(const PValueVector& pv, const Level& alpha,
                                  const SubsampleSpec& spec) {
    spec.validate(pv.m);
    return spec.s ? *spec.s
                  : recommended_subsample_size(pv.n, pv.m, alpha, spec.rho, spec.s_min);
}

/// One subsample draw: runs the support-line argmin on the drawn positions and
/// extends the threshold to the whole test sample. Returns |R|, the number of
/// full-sample scores at or above the subsample boundary.
inline int subsample_rejection_count(const PValueVector& pv, int s, const Rat& slope,
                                     int rank_cap, Rng& rng) {
    // A uniform subsample of test indices is a uniform subsample of sorted
    // positions, so we draw positions directly and sort them by score order.
    std::vector<int> positions = rng.sample_without_replacement(pv.m, s);
    std::sort(positions.begin(), positions.end());
    std::vector<int> ranks(s);
    for (int k = 0; k < s; ++k) ranks[k] = pv.sorted_rank(positions[k] + 1);
    int k_sub = max_argmin_support_line(ranks, pv.n, slope, rank_cap);
    if (k_sub == 0) return 0;
    return positions[k_sub - 1] + 1;  // boundary's position in the full ordering
}

}  // namespace detail

/// Single-subsampled SLC: the SLC argmin on a random size-s subsample (with
/// full-calibration p-values), threshold extended to the full test sample.
inline RejectionResult slc_plus(const PValueVector& pv, const Level& alpha,
                                const SubsampleSpec& spec, Rng& rng) {
    const int s = detail::resolve_subsample_size(pv, alpha, spec);
    Rat slope = positive_part(alpha.value() / s - Rat(1, pv.n + 1));
    int k_full = detail::subsample_rejection_count(pv, s, slope, pv.n + 1, rng);
    return detail::make_top_k(pv, k_full, positive_part(alpha.value() - Rat(s, pv.n + 1)));
}

/// Single-subsampled ASLC: pi0_hat from the whole test sample, then the
/// adaptive argmin restricted to the subsample.
inline RejectionResult aslc_plus(const PValueVector& pv, const Level& alpha,
                                 const StoreyConfig& cfg, const SubsampleSpec& spec, Rng& rng) {
    const int s = detail::resolve_subsample_size(pv, alpha, spec);
    Rat pi0 = storey_pi0(pv, cfg);
    Rat slope = positive_part(alpha.value() / (pi0 * s) - Rat(1, pv.n + 1));
    int k_full = detail::subsample_rejection_count(pv, s, slope, cfg.s0, rng);
    return detail::make_top_k(pv, k_full,
                              positive_part(alpha.value() / pi0 - Rat(s, pv.n + 1)), pi0);
}

enum class SubsampleVariant { kSlc, kAslc };

/// Final count of a multi-subsample run: the order statistic r_(ceil(gamma*B))
/// of the decreasingly sorted per-run counts (gamma = 1/2 is the median).
inline int gamma_order_statistic(std::vector<int> counts, const Rat& gamma) {
    if (counts.empty()) throw ConfigError("no subsample counts");
    if (!(gamma > 0 && gamma <= 1)) throw ConfigError("gamma must lie in (0, 1]");
    std::sort(counts.begin(), counts.end(), std::greater<int>());
    Int idx_num = rat_num(gamma) * static_cast<int>(counts.size());
    Int idx_den = rat_den(gamma);
    int idx = ((idx_num + idx_den - 1) / idx_den).convert_to<int>();
    return counts[idx - 1];
}

/// Multi-subsampled variants (SLC++ / ASLC++ and their halved forms): B
/// independent single-subsample runs, final rejection count is the gamma
/// order statistic of the decreasingly sorted per-run counts r_b.
/// Run b uses the substream rng.substream(b).
inline RejectionResult multi_subsample(const PValueVector& pv, const Level& alpha,
                                       const SubsampleSpec& spec, SubsampleVariant variant,
                                       const StoreyConfig& cfg, const Rng& rng) {
    spec.validate(pv.m);
    // the size rule keys on the target level; halving touches the objective only
    const int s = detail::resolve_subsample_size(pv, alpha, spec);
    const Level level = spec.halve ? Level::from_rational(alpha.value() / 2) : alpha;

    std::optional<Rat> pi0;
    Rat slope;
    int rank_cap = pv.n + 1;
    if (variant == SubsampleVariant::kAslc) {
        pi0 = storey_pi0(pv, cfg);
        slope = positive_part(level.value() / (*pi0 * s) - Rat(1, pv.n + 1));
        rank_cap = cfg.s0;
    } else {
        slope = positive_part(level.value() / s - Rat(1, pv.n + 1));
    }

    std::vector<int> counts(spec.B);
    for (int b = 0; b < spec.B; ++b) {
        Rng stream = rng.substream(static_cast<std::uint64_t>(b));
        counts[b] = detail::subsample_rejection_count(pv, s, slope, rank_cap, stream);
    }
    int r_final = gamma_order_statistic(std::move(counts), spec.gamma);

    Rat adjusted = variant == SubsampleVariant::kAslc
                       ? positive_part(level.value() / *pi0 - Rat(s, pv.n + 1))
                       : positive_part(level.value() - Rat(s, pv.n + 1));
    return detail::make_top_k(pv, r_final, std::move(adjusted), std::move(pi0));
}

// Convenience overloads starting from raw scores.
inline RejectionResult slc_plus(const ScoreSample& sample, const Level& alpha,
                                const SubsampleSpec& spec, Rng& rng) {
    return slc_plus(conformal_p_values(sample), alpha, spec, rng);
}

inline RejectionResult aslc_plus(const ScoreSample& sample, const Level& alpha,
                                 const StoreyConfig& cfg, const SubsampleSpec& spec, Rng& rng) {
    return aslc_plus(conformal_p_values(sample), alpha, cfg, spec, rng);
}

}  // namespace bfdr
