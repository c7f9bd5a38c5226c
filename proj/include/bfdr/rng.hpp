#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <vector>

namespace bfdr {

/// Counter-based pseudo-random generator (SplitMix64 output function over a
/// Weyl sequence). State is (key, counter); the i-th output depends only on
/// those, so independent streams are cheap and schedule-independent.
///
/// Stream splitting rule: substream(id) re-mixes the parent key with the
/// stream id through the same finalizer, i.e. key' = mix(key ^ mix(id)).
/// Trials, Monte Carlo cells and subsample draws each get their own stream.
class Rng {
  public:
    explicit Rng(std::uint64_t key) : key_(mix(key ^ kKeyTweak)), counter_(0) {}

    /// Derived stream for (id...); order of ids matters.
    Rng substream(std::initializer_list<std::uint64_t> ids) const {
        std::uint64_t k = key_;
        for (std::uint64_t id : ids) k = mix(k ^ mix(id));
        return Rng(k, 0);
    }
    Rng substream(std::uint64_t id) const { return substream({id}); }

    std::uint64_t next_u64() {
        std::uint64_t z = key_ + (++counter_) * kGamma;
        return mix(z);
    }

    /// Uniform on [0,1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform on {0,...,bound-1}, unbiased by rejection.
    std::uint64_t next_below(std::uint64_t bound) {
        std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            std::uint64_t x = next_u64();
            if (x >= threshold) return x % bound;
        }
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    /// Standard normal via Box-Muller (no cached spare, to keep the
    /// counter/output mapping simple).
    double normal() {
        double u1 = next_double();
        double u2 = next_double();
        while (u1 <= 0.0) u1 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    /// Gamma(shape, 1), Marsaglia-Tsang for shape >= 1, boosted for shape < 1.
    double gamma(double shape) {
        if (shape < 1.0) {
            double u = next_double();
            while (u <= 0.0) u = next_double();
            return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
        }
        double d = shape - 1.0 / 3.0;
        double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x = normal();
            double v = 1.0 + c * x;
            if (v <= 0.0) continue;
            v = v * v * v;
            double u = next_double();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    double beta(double a, double b) {
        if (b == 1.0) return std::pow(next_double(), 1.0 / a);
        if (a == 1.0) return 1.0 - std::pow(next_double(), 1.0 / b);
        double x = gamma(a);
        double y = gamma(b);
        return x / (x + y);
    }

    /// Draws `count` distinct values from {0,...,population-1} by partial
    /// Fisher-Yates; result order is the draw order.
    std::vector<int> sample_without_replacement(int population, int count) {
        std::vector<int> pool(population);
        std::iota(pool.begin(), pool.end(), 0);
        std::vector<int> out(count);
        for (int i = 0; i < count; ++i) {
            std::uint64_t j = i + next_below(static_cast<std::uint64_t>(population - i));
            std::swap(pool[i], pool[j]);
            out[i] = pool[i];
        }
        return out;
    }

  private:
    Rng(std::uint64_t key, std::uint64_t counter) : key_(key), counter_(counter) {}

    // SplitMix64 finalizer (Steele-Lea-Flood mixing constants).
    static std::uint64_t mix(std::uint64_t z) {
        z += kGamma;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
    static constexpr std::uint64_t kKeyTweak = 0x8e2f9d4b1c6a3e75ULL;

    std::uint64_t key_;
    std::uint64_t counter_;
};

}  // namespace bfdr
