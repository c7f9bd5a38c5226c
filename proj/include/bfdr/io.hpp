#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bfdr/lfdr.hpp"
#include "bfdr/montecarlo.hpp"

namespace bfdr {

struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> read_single_column_csv(const std::string& path,
                                                       const std::string& header) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || trim(line) != header)
        throw IoError("'" + path + "': expected header '" + header + "'");
    std::vector<std::string> values;
    while (std::getline(in, line)) {
        std::string v = trim(line);
        if (!v.empty()) values.push_back(std::move(v));
    }
    return values;
}

inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

}  // namespace detail

/// Single-column CSV with header `score`.
inline std::vector<double> read_score_csv(const std::string& path) {
    std::vector<double> scores;
    for (const std::string& v : detail::read_single_column_csv(path, "score")) {
        try {
            std::size_t used = 0;
            double x = std::stod(v, &used);
            if (used != v.size()) throw std::invalid_argument(v);
            scores.push_back(x);
        } catch (const std::exception&) {
            throw IoError("'" + path + "': bad score value '" + v + "'");
        }
    }
    if (scores.empty()) throw IoError("'" + path + "': no scores");
    return scores;
}

/// Single-column CSV with header `label`, values 0/1.
inline Labels read_label_csv(const std::string& path) {
    Labels labels;
    for (const std::string& v : detail::read_single_column_csv(path, "label")) {
        if (v != "0" && v != "1") throw IoError("'" + path + "': bad label '" + v + "'");
        labels.h.push_back(v == "1" ? 1 : 0);
    }
    if (labels.h.empty()) throw IoError("'" + path + "': no labels");
    return labels;
}

/// Simulation summary CSV (one row per (method, alpha) cell).
inline void write_summary_csv(std::ostream& out, const SimulationSummary& summary) {
    out << "method,alpha,trials,bfdr,bfdr_se,fdr,fdr_se,mean_rej_frac,sd_rej_frac,bound\n";
    for (const SummaryRow& r : summary.rows) {
        out << r.method << ',' << r.alpha << ',' << r.trials << ','
            << detail::format_double(r.bfdr) << ',' << detail::format_double(r.bfdr_se) << ','
            << detail::format_double(r.fdr) << ',' << detail::format_double(r.fdr_se) << ','
            << detail::format_double(r.mean_rej_frac) << ','
            << detail::format_double(r.sd_rej_frac) << ','
            << detail::format_double(r.bound) << '\n';
    }
}

/// Plot-ready lfdr curve CSV plus a footer comment carrying the SLC rejection
/// count under its four equivalent representations (or a precondition marker).
inline void write_lfdr_csv(std::ostream& out, const PValueVector& pv, const LfdrCurve& curve,
                           const Level& alpha) {
    out << "k,p_sorted,p_tilde,lfdr_raw,lfdr_iso,lfdr_gren,gcm\n";
    out << "0,0,0,,,,0\n";
    for (int k = 1; k <= pv.m; ++k) {
        out << k << ','
            << detail::format_double(static_cast<double>(pv.sorted_rank(k)) / (pv.n + 1)) << ','
            << detail::format_double(to_double(curve.p_tilde[k])) << ','
            << detail::format_double(to_double(curve.lfdr_raw[k - 1])) << ','
            << detail::format_double(to_double(curve.lfdr_iso[k - 1])) << ','
            << detail::format_double(to_double(curve.lfdr_gren[k - 1])) << ','
            << detail::format_double(to_double(curve.gcm[k])) << '\n';
    }
    if (alpha.value() / pv.m > Rat(1, pv.n + 1)) {
        int k_orig = slc(pv, alpha).k_hat;
        int k_shift = slc_kmax_shifted(pv, alpha);
        int k_iso = slc_kmax_via_lfdr(pv, alpha, LfdrKind::kIso);
        int k_gren = slc_kmax_via_lfdr(pv, alpha, LfdrKind::kGren);
        out << "# slc_k_hat original=" << k_orig << " shifted=" << k_shift
            << " iso=" << k_iso << " gren=" << k_gren << '\n';
    } else {
        out << "# slc_k_hat precondition unmet (alpha/m <= 1/(n+1))\n";
    }
}

}  // namespace bfdr
