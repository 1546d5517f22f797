// Command-line front end: code inspection, spectrum enumeration, ROC runs
// with the Monte-Carlo / analytic / brute-force engines, and the error
// exponent bound. Emits CSV or JSON plus a run manifest for reproduction.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <dht/analysis.hpp>
#include <dht/sim.hpp>

using nlohmann::json;

namespace {

constexpr const char* kVersion = "dht 0.1.0";

// exit codes: 0 success, 2 usage, 3 scope violation, 4 budget exceeded
constexpr int kExitUsage = 2;
constexpr int kExitScope = 3;
constexpr int kExitBudget = 4;

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::uint64_t parse_seed(const std::string& text) {
    try {
        if (text.rfind("0x", 0) == 0 || text.rfind("0X", 0) == 0)
            return std::stoull(text.substr(2), nullptr, 16);
        return std::stoull(text, nullptr, 10);
    } catch (const std::exception&) {
        throw dht::contract_error("bad seed literal: " + text);
    }
}

std::vector<double> parse_thresholds(const std::string& text) {
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        double lo = 0, step = 0, hi = 0;
        char c1 = 0, c2 = 0;
        std::istringstream in(text);
        if (!(in >> lo >> c1 >> step >> c2 >> hi) || c1 != ':' || c2 != ':' || step <= 0)
            throw dht::contract_error("bad threshold range (want lo:step:hi): " + text);
        for (double v = lo; v <= hi + 1e-12; v += step) out.push_back(v);
        return out;
    }
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) out.push_back(std::stod(item));
    }
    if (out.empty()) throw dht::contract_error("empty threshold list");
    return out;
}

std::optional<dht::SpectrumCache> resolve_cache(const std::string& flag) {
    if (!flag.empty()) return dht::SpectrumCache(flag);
    if (auto env = dht::SpectrumCache::from_env()) return env;
    if (const char* home = std::getenv("HOME"); home != nullptr && *home != '\0')
        return dht::SpectrumCache(std::filesystem::path(home) / ".cache" / "dht");
    return dht::SpectrumCache(".dht-cache");
}

const char* scheme_name(dht::SchemeKind k) {
    switch (k) {
        case dht::SchemeKind::Separate: return "separate";
        case dht::SchemeKind::Truncation: return "truncation";
        case dht::SchemeKind::Quantization: return "quantization";
        case dht::SchemeKind::QuantizeBinning: return "qb";
    }
    return "?";
}

const char* engine_name(dht::Engine e) {
    switch (e) {
        case dht::Engine::MonteCarlo: return "montecarlo";
        case dht::Engine::Analytic: return "analytic";
        case dht::Engine::BruteForce: return "bruteforce";
    }
    return "?";
}

struct RocOptions {
    std::string scheme = "quantization";
    std::string setup = "asym";
    std::string code;
    std::string bin_code;
    int trunc_len = 0;
    double p0 = 0.5, p1 = 0.5, c0 = 0.1, c1 = 0.5;
    std::uint64_t trials = 10000;
    std::string seed_text = "1";
    std::string engine = "montecarlo";
    std::string thresholds;
    std::string out;
    std::string format = "csv";
    std::uint64_t calib_trials = 100000;
};

json manifest_json(const std::string& command, const json& params, std::uint64_t seed,
                   const json& codes, double duration_s) {
    json m;
    m["artifact"] = kVersion;
    m["command"] = command;
    m["parameters"] = params;
    m["seed"] = seed;
    m["codes"] = codes;
    m["duration_seconds"] = duration_s;
    return m;
}

void write_curve_csv(std::ostream& out, const dht::RocCurve& curve, const char* setup) {
    out << "scheme,setup,n,rate,threshold,alpha,beta,alpha_ci,beta_ci,trials,engine,seed\n";
    for (const dht::RocPoint& p : curve.points) {
        out << scheme_name(curve.kind) << ',' << setup << ',' << curve.n << ','
            << fmt_double(curve.rate) << ',' << fmt_double(p.threshold) << ','
            << fmt_double(p.alpha) << ',' << fmt_double(p.beta) << ',' << fmt_double(p.alpha_ci)
            << ',' << fmt_double(p.beta_ci) << ',' << p.trials_h0 << ',' << engine_name(curve.engine)
            << ',' << curve.seed << '\n';
    }
}

json curve_points_json(const dht::RocCurve& curve, const char* setup) {
    json rows = json::array();
    for (const dht::RocPoint& p : curve.points) {
        json row;
        row["scheme"] = scheme_name(curve.kind);
        row["setup"] = setup;
        row["n"] = curve.n;
        row["rate"] = curve.rate;
        row["threshold"] = p.threshold;
        row["alpha"] = p.alpha;
        row["beta"] = p.beta;
        row["alpha_ci"] = p.alpha_ci;
        row["beta_ci"] = p.beta_ci;
        row["trials"] = p.trials_h0;
        row["engine"] = engine_name(curve.engine);
        row["seed"] = curve.seed;
        rows.push_back(row);
    }
    return rows;
}

int cmd_code_info(const std::string& code_spec, const std::string& cache_dir) {
    const dht::LinearCode code = dht::make_code(code_spec);
    std::cout << "code: " << code.name() << "\n";
    std::cout << "n: " << code.n() << "\nk: " << code.k() << "\n";
    std::cout << "rate: " << fmt_double(static_cast<double>(code.k()) / code.n()) << "\n";

    if (code.k() <= 26) {
        const dht::WeightDistribution dist = dht::weight_distribution(code);
        int dmin = 0;
        for (int w = 1; w <= code.n(); ++w)
            if (dist.counts[static_cast<std::size_t>(w)] > 0) {
                dmin = w;
                break;
            }
        std::cout << "d_min: " << dmin << "\n";
        std::cout << "weight_distribution:";
        for (std::size_t w = 0; w < dist.counts.size(); ++w)
            std::cout << (w == 0 ? " " : ",") << dist.counts[w];
        std::cout << "\n";
    } else {
        std::cout << "d_min: - (dimension too large for exhaustive search)\n";
        std::cout << "weight_distribution: - (dimension too large)\n";
    }

    if (code.has_syndrome_table()) {
        std::cout << "covering_radius: " << code.syndrome_table()->max_leader_weight << "\n";
    } else {
        const auto cache = resolve_cache(cache_dir);
        const auto cached =
            cache ? cache->load_spectrum("cosets", code.content_hash()) : std::nullopt;
        if (cached)
            std::cout << "covering_radius: " << cached->d_max << "\n";
        else
            std::cout << "covering_radius: - (no syndrome table or cached spectrum)\n";
    }
    return 0;
}

int cmd_enumerate(const std::string& code_spec, const std::string& bin_spec,
                  const std::string& what, const std::string& cache_dir, int threads) {
    const auto cache = resolve_cache(cache_dir);
    const dht::SpectrumCache* cache_ptr = cache ? &*cache : nullptr;
    const dht::LinearCode code = dht::make_code(code_spec);

    if (what == "weights") {
        const dht::WeightDistribution dist = dht::weight_distribution(code);
        std::cout << "code: " << code.name() << "\nweight count\n";
        for (std::size_t w = 0; w < dist.counts.size(); ++w)
            if (dist.counts[w] > 0) std::cout << w << ' ' << dist.counts[w] << '\n';
        std::cout << "total: " << dist.total << "\n";
        return 0;
    }
    if (what == "cosets") {
        const dht::CosetSpectrum s = dht::coset_leader_spectrum(code, dht::TieRule::LexMinError, cache_ptr);
        std::cout << "code: " << code.name() << "\ngamma count\n";
        for (std::size_t w = 0; w < s.counts.size(); ++w)
            if (s.counts[w] > 0) std::cout << w << ' ' << s.counts[w] << '\n';
        std::cout << "N0: " << s.total << "\nd_max: " << s.d_max << "\n";
        return 0;
    }
    if (what == "zero-region") {
        if (bin_spec.empty())
            throw dht::contract_error("zero-region enumeration needs --bin-code");
        const dht::LinearCode bin = dht::make_code(bin_spec);
        const dht::QbSpectra qb =
            dht::qb_spectra(code, bin.parity_check(), dht::TieRule::LexMinError, cache_ptr, threads);
        std::cout << "code: " << code.name() << "\nbinning: parity-check of " << bin.name() << " ("
                  << bin.parity_check().rows() << "x" << bin.parity_check().cols() << ")\n";
        std::cout << "nu count\n";
        for (std::size_t w = 0; w < qb.region.counts.size(); ++w)
            if (qb.region.counts[w] > 0) std::cout << w << ' ' << qb.region.counts[w] << '\n';
        std::cout << "total: " << qb.region.total << "\nd_max: " << qb.region.d_max << "\n";
        return 0;
    }
    throw dht::contract_error("unknown enumeration kind: " + what);
}

int cmd_roc(const RocOptions& opt, const std::string& cache_dir, int threads) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::uint64_t seed = parse_seed(opt.seed_text);
    const dht::HypothesisPair pair(opt.p0, opt.c0, opt.p1, opt.c1);

    dht::SchemeConfig config;
    if (opt.scheme == "separate")
        config.kind = dht::SchemeKind::Separate;
    else if (opt.scheme == "truncation")
        config.kind = dht::SchemeKind::Truncation;
    else if (opt.scheme == "quantization")
        config.kind = dht::SchemeKind::Quantization;
    else if (opt.scheme == "qb")
        config.kind = dht::SchemeKind::QuantizeBinning;
    else
        throw dht::contract_error("unknown scheme: " + opt.scheme);
    if (opt.setup == "asym")
        config.setup = dht::Setup::Asymmetric;
    else if (opt.setup == "sym")
        config.setup = dht::Setup::Symmetric;
    else
        throw dht::contract_error("unknown setup: " + opt.setup);

    json codes = json::array();
    int n = 0;
    if (config.kind == dht::SchemeKind::Separate || config.kind == dht::SchemeKind::Truncation) {
        if (opt.code.empty()) throw dht::contract_error("--n-bits is set via --code identity-N or --l/--code");
    }
    if (!opt.code.empty()) {
        auto code = std::make_shared<const dht::LinearCode>(dht::make_code(opt.code));
        n = code->n();
        json c;
        c["name"] = code->name();
        c["n"] = code->n();
        c["k"] = code->k();
        char h[17];
        std::snprintf(h, sizeof h, "%016llx", static_cast<unsigned long long>(code->content_hash()));
        c["content_hash"] = h;
        codes.push_back(c);
        if (config.kind == dht::SchemeKind::Quantization || config.kind == dht::SchemeKind::QuantizeBinning)
            config.quantizer = code;
    }
    if (config.kind == dht::SchemeKind::QuantizeBinning) {
        if (opt.bin_code.empty()) throw dht::contract_error("quantize-binning needs --bin-code");
        const dht::LinearCode bin = dht::make_code(opt.bin_code);
        config.binning = bin.parity_check();
        json c;
        c["name"] = bin.name();
        c["role"] = "binning (parity check)";
        c["rows"] = config.binning->rows();
        c["cols"] = config.binning->cols();
        codes.push_back(c);
    }
    if (config.kind == dht::SchemeKind::Truncation) config.trunc_len = opt.trunc_len;
    if (n == 0) throw dht::contract_error("block length undetermined; pass --code (identity-N works for uncoded schemes)");
    config.validate(n);

    const auto cache = resolve_cache(cache_dir);
    const dht::SpectrumCache* cache_ptr = cache ? &*cache : nullptr;

    const bool weighted = (config.kind == dht::SchemeKind::Quantization ||
                           config.kind == dht::SchemeKind::QuantizeBinning) &&
                          pair.p0 != pair.p1;
    if (weighted && opt.engine != "analytic")
        config.nuisance = dht::estimate_nuisance(config, pair, n, opt.calib_trials, seed);

    std::vector<double> thresholds;
    if (!opt.thresholds.empty()) {
        thresholds = parse_thresholds(opt.thresholds);
    } else if (opt.engine == "analytic" && config.kind != dht::SchemeKind::Truncation) {
        for (int t = 1; t <= n + 1; ++t) thresholds.push_back(t);
    } else {
        thresholds = dht::threshold_grid(config, pair, n);
    }

    dht::RocCurve curve;
    if (opt.engine == "montecarlo")
        curve = dht::run_roc(config, pair, n, thresholds, opt.trials, seed, threads);
    else if (opt.engine == "analytic")
        curve = dht::analytic_curve(config, pair, n, thresholds, cache_ptr, threads);
    else if (opt.engine == "bruteforce")
        curve = dht::brute_force_curve(config, pair, n, thresholds);
    else
        throw dht::contract_error("unknown engine: " + opt.engine);
    curve.seed = seed;

    const double duration =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    json params;
    params["scheme"] = opt.scheme;
    params["setup"] = opt.setup;
    params["n"] = n;
    params["p0"] = opt.p0;
    params["p1"] = opt.p1;
    params["c0"] = opt.c0;
    params["c1"] = opt.c1;
    params["trials"] = opt.trials;
    params["engine"] = opt.engine;
    params["thresholds"] = opt.thresholds.empty() ? "default" : opt.thresholds;
    params["l"] = opt.trunc_len;
    params["calib_trials"] = opt.calib_trials;
    if (config.nuisance) {
        params["nuisance"] = {{"p0_hat", config.nuisance->p0_hat},
                              {"c0_hat", config.nuisance->c0_hat},
                              {"p1_hat", config.nuisance->p1_hat},
                              {"c1_hat", config.nuisance->c1_hat}};
    }
    const json manifest = manifest_json("roc", params, seed, codes, duration);

    if (opt.out.empty()) {
        write_curve_csv(std::cout, curve, opt.setup.c_str());
        return 0;
    }
    if (opt.format == "csv") {
        std::ofstream out(opt.out);
        if (!out) throw dht::contract_error("cannot write " + opt.out);
        write_curve_csv(out, curve, opt.setup.c_str());
        std::ofstream mout(opt.out + ".manifest.json");
        mout << manifest.dump(2) << "\n";
    } else if (opt.format == "json") {
        json doc;
        doc["manifest"] = manifest;
        doc["points"] = curve_points_json(curve, opt.setup.c_str());
        std::ofstream out(opt.out);
        if (!out) throw dht::contract_error("cannot write " + opt.out);
        out << doc.dump(2) << "\n";
    } else {
        throw dht::contract_error("unknown format: " + opt.format);
    }
    std::cout << "wrote " << curve.points.size() << " points to " << opt.out << " (rate "
              << fmt_double(curve.rate) << ", " << duration << " s)\n";
    return 0;
}

int cmd_exponent(double p0, double p1, double r1, double grid_step, const std::string& base_text,
                 const std::vector<int>& ns, const std::vector<double>& deltas) {
    const dht::LogBase base = base_text == "nats" ? dht::LogBase::Nats : dht::LogBase::Bits;
    const dht::ExponentBound bound = dht::exponent_bound(p0, p1, r1, grid_step, base);
    std::cout << "theta (" << (base == dht::LogBase::Bits ? "bits" : "nats")
              << "-valued expression): " << fmt_double(bound.theta) << "\n";
    std::cout << "delta_star: " << fmt_double(bound.delta_star) << "\n";
    for (const double d : deltas)
        std::cout << "inner_min(delta=" << fmt_double(d)
                  << "): " << fmt_double(dht::exponent_inner_min(p0, p1, r1, d, base)) << "\n";
    if (!ns.empty()) {
        std::cout << "note: the bound's log base is ambiguous in print; both readings follow\n";
        for (const int n : ns) {
            std::cout << "n=" << n << " beta ~ exp(-n*theta) [theta read in nats]: "
                      << fmt_double(std::exp(-static_cast<double>(n) * bound.theta))
                      << "   beta ~ 2^(-n*theta) [theta in bits]: "
                      << fmt_double(std::exp2(-static_cast<double>(n) * bound.theta)) << "\n";
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"short-length coding schemes for binary distributed hypothesis testing"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::string cache_dir;
    int threads = 0;
    app.add_option("--cache-dir", cache_dir, "spectrum cache directory (default: DHT_CACHE_DIR)");
    app.add_option("--threads", threads, "worker thread cap (0 = hardware)");

    auto* info = app.add_subcommand("code-info", "print code parameters");
    std::string info_code;
    info->add_option("--code", info_code, "built-in name or generator file")->required();

    auto* enumerate = app.add_subcommand("enumerate", "enumerate spectra into the cache");
    std::string enum_code, enum_bin, enum_what = "cosets";
    enumerate->add_option("--code", enum_code, "quantizer code")->required();
    enumerate->add_option("--bin-code", enum_bin, "binning code (its parity check bins messages)");
    enumerate->add_option("--what", enum_what, "cosets | weights | zero-region");

    auto* roc = app.add_subcommand("roc", "run a ROC sweep");
    RocOptions opt;
    roc->add_option("--scheme", opt.scheme, "separate | truncation | quantization | qb")->required();
    roc->add_option("--setup", opt.setup, "asym | sym");
    roc->add_option("--code", opt.code, "quantizer code, or identity-N to fix n for uncoded schemes");
    roc->add_option("--bin-code", opt.bin_code, "binning code for qb");
    roc->add_option("--l", opt.trunc_len, "truncation length");
    roc->add_option("--p0", opt.p0, "P(X=1) under H0");
    roc->add_option("--p1", opt.p1, "P(X=1) under H1");
    roc->add_option("--c0", opt.c0, "crossover under H0");
    roc->add_option("--c1", opt.c1, "crossover under H1");
    roc->add_option("--trials", opt.trials, "Monte-Carlo trials per threshold per hypothesis");
    roc->add_option("--seed", opt.seed_text, "64-bit seed, decimal or 0x-hex");
    roc->add_option("--engine", opt.engine, "montecarlo | analytic | bruteforce");
    roc->add_option("--thresholds", opt.thresholds, "comma list or lo:step:hi (default: full grid)");
    roc->add_option("--out", opt.out, "output file (stdout when omitted)");
    roc->add_option("--format", opt.format, "csv | json");
    roc->add_option("--calib-trials", opt.calib_trials, "nuisance-calibration trials per hypothesis");

    auto* exponent = app.add_subcommand("exponent", "error-exponent bound");
    double e_p0 = 0.05, e_p1 = 0.5, e_r1 = 0.4, e_step = 1e-3;
    std::string e_base = "bits";
    std::vector<int> e_ns;
    std::vector<double> e_deltas;
    exponent->add_option("--p0", e_p0, "P(X=1) under H0")->required();
    exponent->add_option("--p1", e_p1, "P(X=1) under H1")->required();
    exponent->add_option("--r1", e_r1, "rate R1")->required();
    exponent->add_option("--grid-step", e_step, "delta grid spacing");
    exponent->add_option("--base", e_base, "bits | nats");
    exponent->add_option("--n", e_ns, "block lengths for the beta prediction");
    exponent->add_option("--delta", e_deltas, "also print the inner min at these delta values");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (*info) return cmd_code_info(info_code, cache_dir);
        if (*enumerate) return cmd_enumerate(enum_code, enum_bin, enum_what, cache_dir, threads);
        if (*roc) return cmd_roc(opt, cache_dir, threads);
        if (*exponent) return cmd_exponent(e_p0, e_p1, e_r1, e_step, e_base, e_ns, e_deltas);
    } catch (const dht::scope_error& e) {
        std::cerr << "scope error: " << e.what() << "\n";
        return kExitScope;
    } catch (const dht::budget_error& e) {
        std::cerr << "budget error: " << e.what() << "\n";
        return kExitBudget;
    } catch (const dht::contract_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
