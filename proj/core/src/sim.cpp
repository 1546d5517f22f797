#include "dht/sim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <thread>
#include <unordered_map>

namespace dht {

namespace {

constexpr std::uint64_t kRocTag = 0x524f43ull;  // evaluation stream label

std::string scheme_label(const SchemeConfig& config) {
    switch (config.kind) {
        case SchemeKind::Separate:
            return "separate";
        case SchemeKind::Truncation:
            return "truncation[l=" + std::to_string(config.trunc_len) + "]";
        case SchemeKind::Quantization:
            return "quantization[" + config.quantizer->name() + "]";
        case SchemeKind::QuantizeBinning:
            return "qb[" + config.quantizer->name() + "+bin" + std::to_string(config.binning->rows()) +
                   "x" + std::to_string(config.binning->cols()) + "]";
    }
    return "?";
}

bool pure_weight_mode(const SchemeConfig& config, const HypothesisPair& pair) {
    return (config.kind == SchemeKind::Quantization || config.kind == SchemeKind::QuantizeBinning) &&
           pair.p0 == pair.p1;
}

// Statistic of one trial through the actual encode/decode path. The
// decision is statistic-vs-threshold: strict '<' for the pure-weight and
// uncoded tests, '<=' for the weighted tests.
double trial_statistic(const SchemeConfig& config, const HypothesisPair& pair,
                       const SourcePair& src) {
    switch (config.kind) {
        case SchemeKind::Separate:
            return src.x.weight();
        case SchemeKind::Truncation:
            return truncation_statistic(src.x, src.y, config.trunc_len, pair);
        case SchemeKind::Quantization: {
            const BitVector xq = quantize(*config.quantizer, src.x).codeword;
            const BitVector other = config.setup == Setup::Symmetric
                                        ? quantize(*config.quantizer, src.y).codeword
                                        : src.y;
            const BitVector v = xq ^ other;
            if (pair.p0 == pair.p1) return v.weight();
            return quant_statistic(xq, v, *config.nuisance);
        }
        case SchemeKind::QuantizeBinning: {
            const BitVector r = qb_encode(*config.quantizer, *config.binning, src.x);
            BitVector xq = BitVector::zeros(src.x.len());
            BitVector other = src.y;
            if (config.setup == Setup::Symmetric) {
                const BitVector s = qb_encode(*config.quantizer, *config.binning, src.y);
                const auto [u_hat, t_hat] =
                    joint_constrained_decode(*config.quantizer, *config.binning, r, s);
                xq = config.quantizer->encode(u_hat);
                other = config.quantizer->encode(t_hat);
            } else {
                xq = config.quantizer->encode(
                    constrained_ml_decode(*config.quantizer, *config.binning, r, src.y));
            }
            const BitVector v = xq ^ other;
            if (pair.p0 == pair.p1) return v.weight();
            return quant_statistic(xq, v, *config.nuisance);
        }
    }
    return 0.0;
}

int resolve_threads(int threads) {
    if (threads > 0) return threads;
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

double ci3(double p, std::uint64_t trials) {
    return 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

}  // namespace

RocCurve run_roc(const SchemeConfig& config, const HypothesisPair& pair, int n,
                 const std::vector<double>& thresholds, std::uint64_t trials, std::uint64_t seed,
                 int threads) {
    config.validate(n);
    if (trials < 1) throw contract_error("run_roc: need at least one trial");
    const bool weighted = (config.kind == SchemeKind::Quantization ||
                           config.kind == SchemeKind::QuantizeBinning) &&
                          pair.p0 != pair.p1;
    if (weighted && !config.nuisance)
        throw contract_error("run_roc: weighted tests need estimated nuisance parameters");
    const bool strict = strict_threshold(config, pair);

    RocCurve curve;
    curve.kind = config.kind;
    curve.setup = config.setup;
    curve.engine = Engine::MonteCarlo;
    curve.n = n;
    curve.rate = config.rate(n);
    curve.seed = seed;
    curve.label = scheme_label(config);

    const int nthreads = resolve_threads(threads);
    for (std::size_t ti = 0; ti < thresholds.size(); ++ti) {
        const double tau = thresholds[ti];
        std::uint64_t h0_accepts = 0;  // H0 decisions in the H0 arm
        std::uint64_t h1_accepts = 0;  // H0 decisions in the H1 arm
        for (const Hypothesis h : {Hypothesis::H0, Hypothesis::H1}) {
            const std::uint64_t harm = h == Hypothesis::H0 ? 0 : 1;
            std::vector<std::uint64_t> partial(static_cast<std::size_t>(nthreads), 0);
            std::vector<std::thread> pool;
            for (int w = 0; w < nthreads; ++w) {
                pool.emplace_back([&, w]() {
                    const std::uint64_t lo = trials * static_cast<std::uint64_t>(w) /
                                             static_cast<std::uint64_t>(nthreads);
                    const std::uint64_t hi = trials * static_cast<std::uint64_t>(w + 1) /
                                             static_cast<std::uint64_t>(nthreads);
                    std::uint64_t acc = 0;
                    for (std::uint64_t t = lo; t < hi; ++t) {
                        const auto src = sample_pair(
                            pair, h, n,
                            derive_stream(seed, {kRocTag, static_cast<std::uint64_t>(ti), harm, t}));
                        const double stat = trial_statistic(config, pair, src);
                        const bool accept = strict ? stat < tau : stat <= tau;
                        if (accept) ++acc;
                    }
                    partial[static_cast<std::size_t>(w)] = acc;
                });
            }
            for (auto& th : pool) th.join();
            std::uint64_t total = 0;
            for (const std::uint64_t p : partial) total += p;
            if (h == Hypothesis::H0)
                h0_accepts = total;
            else
                h1_accepts = total;
        }
        RocPoint pt;
        pt.threshold = tau;
        pt.alpha = 1.0 - static_cast<double>(h0_accepts) / static_cast<double>(trials);
        pt.beta = static_cast<double>(h1_accepts) / static_cast<double>(trials);
        pt.alpha_ci = ci3(pt.alpha, trials);
        pt.beta_ci = ci3(pt.beta, trials);
        pt.trials_h0 = trials;
        pt.trials_h1 = trials;
        curve.points.push_back(pt);
    }
    return curve;
}

RocCurve analytic_curve(const SchemeConfig& config, const HypothesisPair& pair, int n,
                        const std::vector<double>& thresholds, const SpectrumCache* cache,
                        int threads) {
    config.validate(n);
    RocCurve curve;
    curve.kind = config.kind;
    curve.setup = config.setup;
    curve.engine = Engine::Analytic;
    curve.n = n;
    curve.rate = config.rate(n);
    curve.seed = 0;
    curve.label = scheme_label(config);

    const bool coded =
        config.kind == SchemeKind::Quantization || config.kind == SchemeKind::QuantizeBinning;
    if (coded) {
        if (config.setup == Setup::Symmetric)
            throw scope_error("analytic engine: asymmetric setup only for the coded schemes");
        if (pair.p0 != pair.p1)
            throw scope_error("analytic engine: the coded-scheme expressions require p0 = p1");
    }

    CosetSpectrum q_spectrum;
    QbSpectra qb;
    if (config.kind == SchemeKind::Quantization || config.kind == SchemeKind::QuantizeBinning)
        q_spectrum = coset_leader_spectrum(*config.quantizer, TieRule::LexMinError, cache);
    if (config.kind == SchemeKind::QuantizeBinning)
        qb = qb_spectra(*config.quantizer, *config.binning, TieRule::LexMinError, cache, threads);

    for (const double tau : thresholds) {
        ErrorPair e;
        switch (config.kind) {
            case SchemeKind::Separate: {
                const int g1 = static_cast<int>(std::ceil(tau)) - 1;
                if (g1 < 0)
                    e = {1.0, 0.0, tau};
                else
                    e = separate_errors(n, pair.p0, pair.p1, std::min(g1, n));
                break;
            }
            case SchemeKind::Truncation:
                e = truncation_errors(config.trunc_len, pair, tau);
                break;
            case SchemeKind::Quantization: {
                const int lam = static_cast<int>(std::ceil(tau)) - 1;
                if (lam < 0)
                    e = {1.0, 0.0, tau};
                else
                    e = quantization_errors(q_spectrum, n, pair.c0, pair.c1, std::min(lam, n));
                break;
            }
            case SchemeKind::QuantizeBinning: {
                const int lam = static_cast<int>(std::ceil(tau)) - 1;
                if (lam < 0)
                    e = {1.0, 0.0, tau};
                else
                    e = qb_errors(q_spectrum, qb, n, pair.c0, pair.c1, std::min(lam, n));
                break;
            }
        }
        RocPoint pt;
        pt.threshold = tau;
        pt.alpha = e.alpha;
        pt.beta = e.beta;
        curve.points.push_back(pt);
    }
    return curve;
}

namespace {

// Exact statistic distribution under both hypotheses, accumulated over
// every outcome through the real scheme path.
struct StatDist {
    std::map<double, std::pair<double, double>> mass;  // value -> (P0, P1)
    bool strict = true;

    void add(double value, double m0, double m1) {
        auto& cell = mass[value];
        cell.first += m0;
        cell.second += m1;
    }

    ErrorPair at(double tau) const {
        ErrorPair e;
        e.threshold = tau;
        for (const auto& [v, m] : mass) {
            const bool accept = strict ? v < tau : v <= tau;
            if (!accept) e.alpha += m.first;
            if (accept) e.beta += m.second;
        }
        return e;
    }
};

// per-pattern probabilities indexed by pattern weight
std::vector<double> pattern_mass(int n, double p) {
    std::vector<double> m(static_cast<std::size_t>(n) + 1);
    for (int w = 0; w <= n; ++w) m[static_cast<std::size_t>(w)] = std::pow(p, w) * std::pow(1.0 - p, n - w);
    return m;
}

StatDist brute_force_distribution(const SchemeConfig& config, const HypothesisPair& pair, int n) {
    config.validate(n);
    StatDist dist;
    dist.strict = strict_threshold(config, pair);

    switch (config.kind) {
        case SchemeKind::Separate: {
            if (n > 20) throw budget_error("separate oracle: n > 20");
            const auto m0 = pattern_mass(n, pair.p0);
            const auto m1 = pattern_mass(n, pair.p1);
            for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
                const int w = std::popcount(x);
                dist.add(w, m0[static_cast<std::size_t>(w)], m1[static_cast<std::size_t>(w)]);
            }
            break;
        }
        case SchemeKind::Truncation: {
            const int l = config.trunc_len;
            if (l > 15) throw budget_error("truncation oracle: l > 15");
            const auto x0 = pattern_mass(l, pair.p0), x1 = pattern_mass(l, pair.p1);
            const auto z0 = pattern_mass(l, pair.c0), z1 = pattern_mass(l, pair.c1);
            for (std::uint64_t xb = 0; xb < (std::uint64_t{1} << l); ++xb) {
                const BitVector x(xb, l);
                const double mx0 = x0[static_cast<std::size_t>(x.weight())];
                const double mx1 = x1[static_cast<std::size_t>(x.weight())];
                for (std::uint64_t zb = 0; zb < (std::uint64_t{1} << l); ++zb) {
                    const BitVector y(xb ^ zb, l);
                    const int wz = std::popcount(zb);
                    const double stat = truncation_statistic(x, y, l, pair);
                    dist.add(stat, mx0 * z0[static_cast<std::size_t>(wz)],
                             mx1 * z1[static_cast<std::size_t>(wz)]);
                }
            }
            break;
        }
        case SchemeKind::Quantization:
        case SchemeKind::QuantizeBinning: {
            if (n > 15) throw budget_error("coded-scheme oracle: n > 15");
            const bool weighted = pair.p0 != pair.p1;
            if (weighted && !config.nuisance)
                throw contract_error("oracle: weighted tests need estimated nuisance parameters");
            const LinearCode& code = *config.quantizer;
            const std::uint64_t space = std::uint64_t{1} << n;
            std::vector<std::uint64_t> qdec(space);
            for (std::uint64_t w = 0; w < space; ++w)
                qdec[w] = quantize(code, BitVector(w, n)).codeword.bits();

            std::vector<std::uint64_t> rbits;
            std::unordered_map<std::uint64_t, std::uint64_t> cdec;    // (r, y) -> decoded codeword
            std::unordered_map<std::uint64_t, std::uint64_t> jdec;    // (r, s) -> packed pair
            const bool qb = config.kind == SchemeKind::QuantizeBinning;
            int ell = 0;
            if (qb) {
                ell = config.binning->rows();
                rbits.resize(space);
                for (std::uint64_t w = 0; w < space; ++w)
                    rbits[w] = mat_vec_mul(*config.binning, code.message_of(BitVector(qdec[w], n))).bits();
            }
            auto constrained = [&](std::uint64_t r, std::uint64_t y) {
                const std::uint64_t key = (r << n) | y;
                auto it = cdec.find(key);
                if (it != cdec.end()) return it->second;
                const BitVector u = constrained_ml_decode(code, *config.binning, BitVector(r, ell),
                                                          BitVector(y, n));
                const std::uint64_t c = code.encode(u).bits();
                cdec.emplace(key, c);
                return c;
            };
            auto joint = [&](std::uint64_t r, std::uint64_t s) {
                const std::uint64_t key = (r << ell) | s;
                auto it = jdec.find(key);
                if (it != jdec.end()) return it->second;
                const auto [u, t] = joint_constrained_decode(code, *config.binning, BitVector(r, ell),
                                                             BitVector(s, ell));
                const std::uint64_t packed =
                    (code.encode(u).bits() << n) | code.encode(t).bits();
                jdec.emplace(key, packed);
                return packed;
            };

            const auto mx0 = pattern_mass(n, pair.p0), mx1 = pattern_mass(n, pair.p1);
            const auto mz0 = pattern_mass(n, pair.c0), mz1 = pattern_mass(n, pair.c1);
            const double wlp = weighted ? config.nuisance->log_weight_p() : 0.0;
            const double wlc = weighted ? config.nuisance->log_weight_c() : 0.0;
            for (std::uint64_t x = 0; x < space; ++x) {
                const double px0 = mx0[static_cast<std::size_t>(std::popcount(x))];
                const double px1 = mx1[static_cast<std::size_t>(std::popcount(x))];
                for (std::uint64_t z = 0; z < space; ++z) {
                    const std::uint64_t y = x ^ z;
                    std::uint64_t xq = 0, other = y;
                    if (!qb) {
                        xq = qdec[x];
                        if (config.setup == Setup::Symmetric) other = qdec[y];
                    } else {
                        if (config.setup == Setup::Symmetric) {
                            const std::uint64_t packed = joint(rbits[x], rbits[y]);
                            xq = packed >> n;
                            other = packed & BitVector::mask(n);
                        } else {
                            xq = constrained(rbits[x], y);
                        }
                    }
                    const int wv = std::popcount(xq ^ other);
                    const double stat =
                        weighted ? std::popcount(xq) * wlp + wv * wlc : static_cast<double>(wv);
                    const int wz = std::popcount(z);
                    dist.add(stat, px0 * mz0[static_cast<std::size_t>(wz)],
                             px1 * mz1[static_cast<std::size_t>(wz)]);
                }
            }
            break;
        }
    }
    return dist;
}

}  // namespace

ErrorPair brute_force_errors(const SchemeConfig& config, const HypothesisPair& pair, int n,
                             double threshold) {
    return brute_force_distribution(config, pair, n).at(threshold);
}

RocCurve brute_force_curve(const SchemeConfig& config, const HypothesisPair& pair, int n,
                           const std::vector<double>& thresholds) {
    const StatDist dist = brute_force_distribution(config, pair, n);
    RocCurve curve;
    curve.kind = config.kind;
    curve.setup = config.setup;
    curve.engine = Engine::BruteForce;
    curve.n = n;
    curve.rate = config.rate(n);
    curve.label = scheme_label(config);
    for (const double tau : thresholds) {
        const ErrorPair e = dist.at(tau);
        RocPoint pt;
        pt.threshold = tau;
        pt.alpha = e.alpha;
        pt.beta = e.beta;
        curve.points.push_back(pt);
    }
    return curve;
}

DominanceReport compare_curves(const RocCurve& a, const RocCurve& b,
                               const std::vector<double>& alphas) {
    if (a.n != b.n) throw contract_error("compare_curves: curves disagree on n");
    auto best_beta = [](const RocCurve& c, double level, double& beta, double& ci) {
        bool found = false;
        for (const RocPoint& p : c.points) {
            if (p.alpha <= level && (!found || p.beta < beta)) {
                beta = p.beta;
                ci = p.beta_ci;
                found = true;
            }
        }
        return found;
    };
    DominanceReport report;
    for (const double level : alphas) {
        DominanceLevel row;
        row.alpha = level;
        const bool fa = best_beta(a, level, row.beta_a, row.ci_a);
        const bool fb = best_beta(b, level, row.beta_b, row.ci_b);
        if (!fa && !fb)
            throw contract_error("compare_curves: alpha level outside both curves' attained ranges");
        if (row.beta_a < row.beta_b)
            row.winner = -1;
        else if (row.beta_b < row.beta_a)
            row.winner = +1;
        if (row.winner == -1) row.significant = row.beta_a + row.ci_a < row.beta_b - row.ci_b;
        if (row.winner == +1) row.significant = row.beta_b + row.ci_b < row.beta_a - row.ci_a;
        report.levels.push_back(row);
    }
    return report;
}

}  // namespace dht
