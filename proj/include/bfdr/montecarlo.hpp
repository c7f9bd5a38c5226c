#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "bfdr/method.hpp"
#include "bfdr/pvalues.hpp"
#include "bfdr/rng.hpp"

namespace bfdr {

/// Sampling distribution for synthetic scores.
struct DistSpec {
    enum class Kind { kUniform, kBeta };
    Kind kind = Kind::kUniform;
    double a = 0.0;
    double b = 1.0;

    double sample(Rng& rng) const {
        return kind == Kind::kUniform ? rng.uniform(a, b) : rng.beta(a, b);
    }

    std::string to_string() const {
        const char* name = kind == Kind::kUniform ? "uniform" : "beta";
        return std::string(name) + "(" + std::to_string(a) + "," + std::to_string(b) + ")";
    }

    static DistSpec uniform(double a, double b) { return {Kind::kUniform, a, b}; }
    static DistSpec beta(double a, double b) { return {Kind::kBeta, a, b}; }
};

/// Trial generator: n calibration + m0 null test scores from null_dist,
/// m - m0 alternative test scores from alt_dist, all independent.
struct GeneratorSpec {
    DistSpec null_dist;
    DistSpec alt_dist;
    int n = 1;
    int m = 1;
    int m0 = 0;

    void validate() const {
        if (n < 1 || m < 1) throw ConfigError("generator needs n >= 1 and m >= 1");
        if (m0 < 0 || m0 > m) throw ConfigError("generator needs 0 <= m0 <= m");
        if (null_dist.kind == DistSpec::Kind::kBeta && (null_dist.a <= 0 || null_dist.b <= 0))
            throw ConfigError("beta parameters must be positive");
        if (alt_dist.kind == DistSpec::Kind::kBeta && (alt_dist.a <= 0 || alt_dist.b <= 0))
            throw ConfigError("beta parameters must be positive");
    }
};

/// One synthetic trial; alternatives sit at test indices m0..m-1 (the
/// procedures only look at scores, so label placement is immaterial).
inline std::pair<ScoreSample, Labels> generate_trial(const GeneratorSpec& spec, Rng& rng) {
    ScoreSample sample;
    sample.calib.resize(spec.n);
    for (int i = 0; i < spec.n; ++i) sample.calib[i] = spec.null_dist.sample(rng);
    sample.test.resize(spec.m);
    Labels labels;
    labels.h.resize(spec.m);
    for (int i = 0; i < spec.m; ++i) {
        bool is_alt = i >= spec.m0;
        sample.test[i] = is_alt ? spec.alt_dist.sample(rng) : spec.null_dist.sample(rng);
        labels.h[i] = is_alt ? 1 : 0;
    }
    return {std::move(sample), std::move(labels)};
}

struct TrialStats {
    double fdp = 0.0;
    bool boundary_is_null = false;
    int rej_count = 0;
};

/// FDP and boundary status of one decision against ground truth. A trial with
/// no rejections contributes fdp = 0 and boundary_is_null = false (H_0 := 1).
inline TrialStats evaluate_trial(const RejectionResult& result, const Labels& labels) {
    TrialStats stats;
    stats.rej_count = result.k_hat;
    int false_rejections = 0;
    for (int i : result.rejected)
        if (labels.h[i] == 0) ++false_rejections;
    stats.fdp = static_cast<double>(false_rejections) / std::max(1, result.k_hat);
    stats.boundary_is_null =
        result.boundary_index.has_value() && labels.h[*result.boundary_index] == 0;
    return stats;
}

/// Distribution-free control bound for the given procedure at level alpha
/// (the BH row carries its FDR bound; all others are bFDR bounds).
inline double theoretical_bound(const GeneratorSpec& gen, const ProcedureSpec& proc,
                                const Level& alpha) {
    const double a = alpha.as_double();
    const double pi0 = static_cast<double>(gen.m0) / gen.m;
    const double leak = static_cast<double>(gen.m0) / (gen.n + 1);
    switch (proc.method) {
        case Method::kBh: return a * pi0;
        case Method::kSl: return a * pi0 + leak;
        case Method::kSlc:
        case Method::kSlg:
        case Method::kSlcPlus: return a * pi0;
        case Method::kAsl: return a + leak;
        case Method::kAslc:
        case Method::kAslcPlus: return a;
        case Method::kSlcMulti:
        case Method::kSlcMultiHalved:
        case Method::kAslcMulti:
        case Method::kAslcMultiHalved: {
            // gamma-quantile bound level_used*m0/(gamma*m); adaptive: level_used/gamma
            double level = proc.subsample.halve ||
                                   proc.method == Method::kSlcMultiHalved ||
                                   proc.method == Method::kAslcMultiHalved
                               ? a / 2
                               : a;
            double gamma = to_double(proc.subsample.gamma);
            return is_adaptive(proc.method) ? level / gamma : level * pi0 / gamma;
        }
    }
    throw UnknownMethod("no bound for unhandled method");
}

/// One (method, alpha) cell of a simulation.
struct SummaryRow {
    std::string method;
    std::string alpha;
    int trials = 0;
    double bfdr = 0, bfdr_se = 0;
    double fdr = 0, fdr_se = 0;
    double mean_rej_frac = 0, sd_rej_frac = 0;
    double mean_pi0_hat = std::numeric_limits<double>::quiet_NaN();
    double bound = 0;
};

struct SimulationSummary {
    std::vector<SummaryRow> rows;  // methods-major, alphas-minor
};

namespace detail {

struct CellAccumulator {
    // per-trial raw values, filled independently then reduced in trial order
    std::vector<double> fdp;
    std::vector<double> bnull;
    std::vector<double> rej_frac;
    std::vector<double> pi0;
};

inline void mean_sd(const std::vector<double>& xs, double& mean, double& sd) {
    const std::size_t t = xs.size();
    double sum = 0;
    for (double x : xs) sum += x;
    mean = sum / t;
    double ss = 0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    sd = t > 1 ? std::sqrt(ss / (t - 1)) : 0.0;
}

constexpr std::uint64_t kDataStream = 0xDA7A;
constexpr std::uint64_t kMethodStream = 0x3E7;

}  // namespace detail

/// Monte Carlo estimates of bFDR, FDR and rejection fraction for every
/// (method, alpha) cell. Each trial's score sample is shared across all cells
/// (paired comparison); subsampling randomness is drawn fresh per cell and
/// trial from its own stream, so results are bit-identical for a fixed seed
/// regardless of thread count.
inline SimulationSummary run_monte_carlo(const GeneratorSpec& gen,
                                         const std::vector<ProcedureSpec>& methods,
                                         const std::vector<Level>& alphas, int trials,
                                         std::uint64_t seed, int threads = 0) {
    gen.validate();
    if (trials < 1) throw ConfigError("trials must be >= 1");
    const int cells = static_cast<int>(methods.size() * alphas.size());
    std::vector<detail::CellAccumulator> acc(cells);
    for (auto& a : acc) {
        a.fdp.resize(trials);
        a.bnull.resize(trials);
        a.rej_frac.resize(trials);
        a.pi0.resize(trials);
    }

    const Rng master(seed);
    auto run_block = [&](int t_begin, int t_end) {
        for (int t = t_begin; t < t_end; ++t) {
            Rng data_rng = master.substream({detail::kDataStream, static_cast<std::uint64_t>(t)});
            auto [sample, labels] = generate_trial(gen, data_rng);
            PValueVector pv = conformal_p_values(sample);
            for (std::size_t mi = 0; mi < methods.size(); ++mi) {
                for (std::size_t ai = 0; ai < alphas.size(); ++ai) {
                    const int cell = static_cast<int>(mi * alphas.size() + ai);
                    Rng method_rng = master.substream({detail::kMethodStream,
                                                       static_cast<std::uint64_t>(t),
                                                       static_cast<std::uint64_t>(cell)});
                    RejectionResult res = run_procedure(pv, methods[mi], alphas[ai], method_rng);
                    TrialStats stats = evaluate_trial(res, labels);
                    acc[cell].fdp[t] = stats.fdp;
                    acc[cell].bnull[t] = stats.boundary_is_null ? 1.0 : 0.0;
                    acc[cell].rej_frac[t] = static_cast<double>(stats.rej_count) / gen.m;
                    acc[cell].pi0[t] = res.pi0_hat ? to_double(*res.pi0_hat) : 0.0;
                }
            }
        }
    };

    int nthreads = threads > 0 ? threads
                               : static_cast<int>(std::thread::hardware_concurrency());
    nthreads = std::clamp(nthreads, 1, std::min(trials, 16));
    if (nthreads == 1) {
        run_block(0, trials);
    } else {
        std::vector<std::thread> pool;
        int chunk = (trials + nthreads - 1) / nthreads;
        for (int w = 0; w < nthreads; ++w) {
            int lo = w * chunk;
            int hi = std::min(trials, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(run_block, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    SimulationSummary summary;
    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
        for (std::size_t ai = 0; ai < alphas.size(); ++ai) {
            const auto& cell = acc[mi * alphas.size() + ai];
            SummaryRow row;
            row.method = method_name(methods[mi].method);
            row.alpha = alphas[ai].text();
            row.trials = trials;
            double sd;
            detail::mean_sd(cell.bnull, row.bfdr, sd);
            row.bfdr_se = sd / std::sqrt(trials);
            detail::mean_sd(cell.fdp, row.fdr, sd);
            row.fdr_se = sd / std::sqrt(trials);
            detail::mean_sd(cell.rej_frac, row.mean_rej_frac, row.sd_rej_frac);
            if (is_adaptive(methods[mi].method)) {
                double unused;
                detail::mean_sd(cell.pi0, row.mean_pi0_hat, unused);
            }
            row.bound = theoretical_bound(gen, methods[mi], alphas[ai]);
            summary.rows.push_back(std::move(row));
        }
    }
    return summary;
}

}  // namespace bfdr
