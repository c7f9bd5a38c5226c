// Command line front end: batch detection on score files, Monte Carlo
// simulation from a JSON config, and lfdr curve export.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "bfdr/bfdr.hpp"
#include "bfdr/parse.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitTies = 3;

std::string rat_string(const bfdr::Rat& r) {
    return bfdr::rat_num(r).str() + "/" + bfdr::rat_den(r).str();
}

bfdr::Rat rat_from_string(const std::string& s) { return bfdr::parse_rational(s); }

struct DetectOptions {
    std::string calib_path;
    std::string test_path;
    std::string labels_path;
    std::string method = "slc";
    std::string alpha = "0.1";
    std::optional<int> s0;
    std::optional<int> subsample_size;
    std::string subsample_ratio = "1/5";
    int s_min = 100;
    int B = 51;
    std::string gamma = "1/2";
    bool halve = false;
    std::uint64_t seed = 0;
    bool strict_ties = false;
    std::string output_path;
    std::string verify_path;
};

bfdr::ProcedureSpec make_spec(const DetectOptions& opt) {
    bfdr::ProcedureSpec spec;
    spec.method = bfdr::parse_method(opt.method);
    spec.s0 = opt.s0;
    spec.subsample.s = opt.subsample_size;
    spec.subsample.B = opt.B;
    spec.subsample.gamma = rat_from_string(opt.gamma);
    spec.subsample.halve = opt.halve;
    spec.subsample.rho = rat_from_string(opt.subsample_ratio);
    spec.subsample.s_min = opt.s_min;
    spec.subsample.seed = opt.seed;
    return spec;
}

json report_json(const DetectOptions& opt, const bfdr::PValueVector& pv,
                 const bfdr::RejectionResult& res) {
    json rep;
    rep["method"] = opt.method;
    rep["alpha"] = opt.alpha;
    rep["adjusted_level"] = rat_string(res.adjusted_level);
    rep["n"] = pv.n;
    rep["m"] = pv.m;
    rep["k_hat"] = res.k_hat;
    rep["threshold_score"] =
        res.k_hat > 0 ? json(res.threshold_score) : json(nullptr);
    rep["boundary_index"] =
        res.boundary_index ? json(*res.boundary_index) : json(nullptr);
    rep["rejected"] = res.rejected;
    if (res.pi0_hat) rep["pi0_hat"] = rat_string(*res.pi0_hat);
    rep["seed"] = opt.seed;
    rep["ties_broken"] = pv.ties_broken;
    return rep;
}

int run_detect(const DetectOptions& opt_in) {
    DetectOptions opt = opt_in;

    if (!opt.verify_path.empty()) {
        // Re-run with the parameters recorded in an earlier report.
        std::ifstream in(opt.verify_path);
        if (!in) {
            std::cerr << "error: cannot open '" << opt.verify_path << "'\n";
            return kExitUsage;
        }
        json rep = json::parse(in);
        opt.method = rep.at("method").get<std::string>();
        opt.alpha = rep.at("alpha").get<std::string>();
        opt.seed = rep.at("seed").get<std::uint64_t>();
        opt.output_path.clear();

        bfdr::ScoreSample sample{bfdr::read_score_csv(opt.calib_path),
                                 bfdr::read_score_csv(opt.test_path),
                                 opt.strict_ties ? bfdr::TiePolicy::kRejectInput
                                                 : bfdr::TiePolicy::kBreakByIndex};
        bfdr::PValueVector pv = bfdr::conformal_p_values(sample);
        bfdr::ProcedureSpec spec = make_spec(opt);
        spec.subsample.seed = opt.seed;
        bfdr::Rng rng(opt.seed);
        bfdr::RejectionResult res =
            bfdr::run_procedure(pv, spec, bfdr::Level::parse(opt.alpha), rng);
        int expected = rep.at("k_hat").get<int>();
        if (res.k_hat != expected ||
            res.rejected != rep.at("rejected").get<std::vector<int>>()) {
            std::cerr << "verify: MISMATCH (recomputed k_hat=" << res.k_hat
                      << ", report k_hat=" << expected << ")\n";
            return kExitUsage;
        }
        std::cout << "verify: ok (k_hat=" << res.k_hat << ")\n";
        return kExitOk;
    }

    bfdr::ScoreSample sample{bfdr::read_score_csv(opt.calib_path),
                             bfdr::read_score_csv(opt.test_path),
                             opt.strict_ties ? bfdr::TiePolicy::kRejectInput
                                             : bfdr::TiePolicy::kBreakByIndex};
    bfdr::PValueVector pv = bfdr::conformal_p_values(sample);
    bfdr::ProcedureSpec spec = make_spec(opt);
    bfdr::Rng rng(opt.seed);
    bfdr::RejectionResult res =
        bfdr::run_procedure(pv, spec, bfdr::Level::parse(opt.alpha), rng);

    json rep = report_json(opt, pv, res);
    if (!opt.labels_path.empty()) {
        bfdr::Labels labels = bfdr::read_label_csv(opt.labels_path);
        if (labels.m() != pv.m) {
            std::cerr << "error: labels length " << labels.m() << " != m " << pv.m << "\n";
            return kExitUsage;
        }
        bfdr::TrialStats stats = bfdr::evaluate_trial(res, labels);
        rep["fdp"] = stats.fdp;
        rep["boundary_is_null"] = stats.boundary_is_null;
    }

    if (!opt.output_path.empty()) {
        std::ofstream out(opt.output_path);
        if (!out) {
            std::cerr << "error: cannot write '" << opt.output_path << "'\n";
            return kExitUsage;
        }
        out << rep.dump(2) << '\n';
    } else {
        std::cout << rep.dump(2) << '\n';
    }
    std::cout << "k_hat=" << res.k_hat << " rejections=" << res.rejected.size() << '\n';
    return kExitOk;
}

bfdr::DistSpec parse_dist(const std::string& text) {
    std::size_t open = text.find('(');
    std::size_t close = text.rfind(')');
    if (open == std::string::npos || close == std::string::npos || close < open)
        throw bfdr::ConfigError("bad distribution '" + text + "' (want name(a,b))");
    std::string name = text.substr(0, open);
    std::string args = text.substr(open + 1, close - open - 1);
    std::size_t comma = args.find(',');
    if (comma == std::string::npos)
        throw bfdr::ConfigError("bad distribution '" + text + "' (want name(a,b))");
    double a = std::stod(args.substr(0, comma));
    double b = std::stod(args.substr(comma + 1));
    if (name == "uniform") return bfdr::DistSpec::uniform(a, b);
    if (name == "beta") return bfdr::DistSpec::beta(a, b);
    throw bfdr::ConfigError("unknown distribution '" + name + "'");
}

bfdr::ProcedureSpec parse_method_entry(const json& entry) {
    bfdr::ProcedureSpec spec;
    if (entry.is_string()) {
        spec.method = bfdr::parse_method(entry.get<std::string>());
        return spec;
    }
    if (!entry.is_object())
        throw bfdr::ConfigError("methods entries must be strings or objects");
    spec.method = bfdr::parse_method(entry.at("name").get<std::string>());
    if (entry.contains("s0")) spec.s0 = entry["s0"].get<int>();
    if (entry.contains("s")) spec.subsample.s = entry["s"].get<int>();
    if (entry.contains("B")) spec.subsample.B = entry["B"].get<int>();
    if (entry.contains("gamma"))
        spec.subsample.gamma = rat_from_string(entry["gamma"].get<std::string>());
    if (entry.contains("rho"))
        spec.subsample.rho = rat_from_string(entry["rho"].get<std::string>());
    if (entry.contains("s_min")) spec.subsample.s_min = entry["s_min"].get<int>();
    if (entry.contains("halve")) spec.subsample.halve = entry["halve"].get<bool>();
    return spec;
}

int run_simulate(const std::string& config_path, const std::string& output_path,
                 int threads, int trials_override) {
    std::ifstream in(config_path);
    if (!in) {
        std::cerr << "error: cannot open '" << config_path << "'\n";
        return kExitUsage;
    }
    json cfg = json::parse(in);

    const json& gen_cfg = cfg.at("generator");
    bfdr::GeneratorSpec gen;
    gen.null_dist = parse_dist(gen_cfg.at("null").get<std::string>());
    gen.alt_dist = parse_dist(gen_cfg.at("alt").get<std::string>());
    gen.n = gen_cfg.at("n").get<int>();
    gen.m = gen_cfg.at("m").get<int>();
    gen.m0 = gen_cfg.at("m0").get<int>();
    gen.validate();

    std::vector<bfdr::ProcedureSpec> methods;
    for (const json& entry : cfg.at("methods")) methods.push_back(parse_method_entry(entry));
    if (methods.empty()) throw bfdr::ConfigError("methods must be non-empty");

    std::vector<bfdr::Level> alphas;
    for (const json& a : cfg.at("alphas")) {
        // numbers are accepted through their shortest round-trip decimal form
        std::string text = a.is_string() ? a.get<std::string>() : a.dump();
        alphas.push_back(bfdr::Level::parse(text));
    }
    if (alphas.empty()) throw bfdr::ConfigError("alphas must be non-empty");

    int trials = trials_override > 0 ? trials_override : cfg.at("trials").get<int>();
    std::uint64_t seed = cfg.value("seed", std::uint64_t{0});

    bfdr::SimulationSummary summary =
        bfdr::run_monte_carlo(gen, methods, alphas, trials, seed, threads);

    std::ofstream out(output_path);
    if (!out) {
        std::cerr << "error: cannot write '" << output_path << "'\n";
        return kExitUsage;
    }
    bfdr::write_summary_csv(out, summary);
    std::cout << "wrote " << summary.rows.size() << " rows to " << output_path << '\n';
    return kExitOk;
}

int run_lfdr(const std::string& calib_path, const std::string& test_path,
             const std::string& alpha_text, const std::string& output_path) {
    bfdr::ScoreSample sample{bfdr::read_score_csv(calib_path),
                             bfdr::read_score_csv(test_path),
                             bfdr::TiePolicy::kBreakByIndex};
    bfdr::PValueVector pv = bfdr::conformal_p_values(sample);
    bfdr::Level alpha = bfdr::Level::parse(alpha_text);
    bfdr::LfdrCurve curve = bfdr::lfdr_curve(pv);
    std::ofstream out(output_path);
    if (!out) {
        std::cerr << "error: cannot write '" << output_path << "'\n";
        return kExitUsage;
    }
    bfdr::write_lfdr_csv(out, pv, curve, alpha);
    std::cout << "wrote lfdr curve (m=" << pv.m << ") to " << output_path << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Conformal novelty detection with boundary-FDR control"};
    app.require_subcommand(1);

    DetectOptions det;
    CLI::App* detect = app.add_subcommand("detect", "run a procedure on score CSV files");
    detect->add_option("--calib", det.calib_path, "calibration scores CSV")->required();
    detect->add_option("--test", det.test_path, "test scores CSV")->required();
    detect->add_option("--labels", det.labels_path, "optional 0/1 labels CSV");
    detect->add_option("--method", det.method,
                       "bh|sl|slc|asl|aslc|slg|slc+|aslc+|slc++|aslc++|slc++/2|aslc++/2");
    detect->add_option("--alpha", det.alpha, "target level, decimal in (0,1)");
    detect->add_option("--s0", det.s0, "Storey parameter (default (n+1)/2-1)");
    detect->add_option("--subsample-size", det.subsample_size, "explicit subsample size s");
    detect->add_option("--subsample-ratio", det.subsample_ratio, "rule-of-thumb ratio rho");
    detect->add_option("--s-min", det.s_min, "minimal subsample size");
    detect->add_option("--B", det.B, "number of subsamples for ++ variants");
    detect->add_option("--gamma", det.gamma, "quantile for ++ variants (default 1/2)");
    detect->add_flag("--halve", det.halve, "use alpha/2 in the ++ variants");
    detect->add_option("--seed", det.seed, "RNG seed for subsampled variants");
    detect->add_flag("--strict-ties", det.strict_ties, "reject tied inputs (exit 3)");
    detect->add_option("--output", det.output_path, "JSON report path (default stdout)");
    detect->add_option("--verify", det.verify_path,
                       "recompute from an existing report and compare k_hat");

    std::string sim_config, sim_output;
    int sim_threads = 0;
    int sim_trials = 0;
    CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo run from a JSON config");
    simulate->add_option("--config", sim_config, "JSON config path")->required();
    simulate->add_option("--output", sim_output, "summary CSV path")->required();
    simulate->add_option("--threads", sim_threads, "worker threads (0 = auto)");
    simulate->add_option("--trials", sim_trials, "override the config's trial count");

    std::string lf_calib, lf_test, lf_alpha = "0.5", lf_output;
    CLI::App* lfdr_cmd = app.add_subcommand("lfdr", "export the lfdr curve as CSV");
    lfdr_cmd->add_option("--calib", lf_calib, "calibration scores CSV")->required();
    lfdr_cmd->add_option("--test", lf_test, "test scores CSV")->required();
    lfdr_cmd->add_option("--alpha", lf_alpha, "level for the equivalence footer");
    lfdr_cmd->add_option("--output", lf_output, "output CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (detect->parsed()) return run_detect(det);
        if (simulate->parsed())
            return run_simulate(sim_config, sim_output, sim_threads, sim_trials);
        if (lfdr_cmd->parsed()) return run_lfdr(lf_calib, lf_test, lf_alpha, lf_output);
    } catch (const bfdr::TiesError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitTies;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
