#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "bfdr/procedures.hpp"
#include "bfdr/subsample.hpp"

namespace bfdr {

enum class Method {
    kBh,
    kSl,
    kSlc,
    kAsl,
    kAslc,
    kSlg,
    kSlcPlus,
    kAslcPlus,
    kSlcMulti,
    kAslcMulti,
    kSlcMultiHalved,
    kAslcMultiHalved,
};

inline const char* method_name(Method m) {
    switch (m) {
        case Method::kBh: return "bh";
        case Method::kSl: return "sl";
        case Method::kSlc: return "slc";
        case Method::kAsl: return "asl";
        case Method::kAslc: return "aslc";
        case Method::kSlg: return "slg";
        case Method::kSlcPlus: return "slc+";
        case Method::kAslcPlus: return "aslc+";
        case Method::kSlcMulti: return "slc++";
        case Method::kAslcMulti: return "aslc++";
        case Method::kSlcMultiHalved: return "slc++/2";
        case Method::kAslcMultiHalved: return "aslc++/2";
    }
    return "?";
}

inline Method parse_method(std::string_view name) {
    for (Method m : {Method::kBh, Method::kSl, Method::kSlc, Method::kAsl, Method::kAslc,
                     Method::kSlg, Method::kSlcPlus, Method::kAslcPlus, Method::kSlcMulti,
                     Method::kAslcMulti, Method::kSlcMultiHalved, Method::kAslcMultiHalved})
        if (name == method_name(m)) return m;
    throw UnknownMethod("unknown method '" + std::string(name) + "'");
}

inline bool is_adaptive(Method m) {
    return m == Method::kAsl || m == Method::kAslc || m == Method::kAslcPlus ||
           m == Method::kAslcMulti || m == Method::kAslcMultiHalved;
}

inline bool is_randomized(Method m) {
    return m == Method::kSlcPlus || m == Method::kAslcPlus || m == Method::kSlcMulti ||
           m == Method::kAslcMulti || m == Method::kSlcMultiHalved ||
           m == Method::kAslcMultiHalved;
}

inline bool is_multi_subsampled(Method m) {
    return m == Method::kSlcMulti || m == Method::kAslcMulti ||
           m == Method::kSlcMultiHalved || m == Method::kAslcMultiHalved;
}

/// A fully specified procedure: which rule plus all of its tuning knobs.
struct ProcedureSpec {
    Method method = Method::kSlc;
    std::optional<int> s0;    // Storey parameter; default (n+1)/2 - 1
    SubsampleSpec subsample;  // consulted by the subsampled variants only

    StoreyConfig storey(int n) const {
        StoreyConfig cfg = s0 ? StoreyConfig{*s0} : StoreyConfig::defaulted(n);
        cfg.validate(n);
        return cfg;
    }
};

/// Dispatches to the requested procedure. `rng` is consumed only by the
/// randomized (subsampled) variants.
inline RejectionResult run_procedure(const PValueVector& pv, const ProcedureSpec& spec,
                                     const Level& alpha, Rng& rng) {
    switch (spec.method) {
        case Method::kBh: return bh(pv, alpha);
        case Method::kSl: return sl(pv, alpha);
        case Method::kSlc: return slc(pv, alpha);
        case Method::kAsl: return asl(pv, alpha, spec.storey(pv.n));
        case Method::kAslc: return aslc(pv, alpha, spec.storey(pv.n));
        case Method::kSlg: return slg(pv, alpha);
        case Method::kSlcPlus: return slc_plus(pv, alpha, spec.subsample, rng);
        case Method::kAslcPlus:
            return aslc_plus(pv, alpha, spec.storey(pv.n), spec.subsample, rng);
        case Method::kSlcMulti:
        case Method::kAslcMulti:
        case Method::kSlcMultiHalved:
        case Method::kAslcMultiHalved: {
            SubsampleSpec sub = spec.subsample;
            if (spec.method == Method::kSlcMultiHalved ||
                spec.method == Method::kAslcMultiHalved)
                sub.halve = true;
            SubsampleVariant variant = is_adaptive(spec.method) ? SubsampleVariant::kAslc
                                                                : SubsampleVariant::kSlc;
            StoreyConfig cfg =
                is_adaptive(spec.method) ? spec.storey(pv.n) : StoreyConfig{0};
            return multi_subsample(pv, alpha, sub, variant, cfg, rng);
        }
    }
    throw UnknownMethod("unhandled method");
}

}  // namespace bfdr
