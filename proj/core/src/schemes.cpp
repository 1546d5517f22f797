#include "dht/schemes.hpp"

#include <algorithm>
#include <cmath>

#include "dht/mathutil.hpp"

namespace dht {

namespace {

constexpr std::uint64_t kCalibTag = 0x43414c4942ull;  // calibration stream label

}  // namespace

double EstimatedParams::log_weight_p() const { return log2_odds_ratio(p0_hat, p1_hat); }
double EstimatedParams::log_weight_c() const { return log2_odds_ratio(c0_hat, c1_hat); }

void SchemeConfig::validate(int n) const {
    switch (kind) {
        case SchemeKind::Separate:
            break;
        case SchemeKind::Truncation:
            if (trunc_len < 1 || trunc_len > n)
                throw contract_error("truncation: need 1 <= l <= n");
            break;
        case SchemeKind::Quantization:
            if (!quantizer) throw contract_error("quantization: quantizer code required");
            if (quantizer->n() != n) throw contract_error("quantization: code length mismatch");
            break;
        case SchemeKind::QuantizeBinning:
            if (!quantizer) throw contract_error("quantize-binning: quantizer code required");
            if (quantizer->n() != n) throw contract_error("quantize-binning: code length mismatch");
            if (!binning) throw contract_error("quantize-binning: binning matrix required");
            if (binning->cols() != quantizer->k())
                throw contract_error("quantize-binning: binning columns must equal quantizer k");
            if (binning->rows() < 1) throw contract_error("quantize-binning: binning matrix is empty");
            break;
    }
}

int SchemeConfig::transmitted_bits(int n) const {
    switch (kind) {
        case SchemeKind::Separate:
            return 1;
        case SchemeKind::Truncation:
            return trunc_len;
        case SchemeKind::Quantization:
            return quantizer->k();
        case SchemeKind::QuantizeBinning:
            return rank(*binning);
    }
    return n;
}

double SchemeConfig::rate(int n) const { return static_cast<double>(transmitted_bits(n)) / n; }

Decision separate_decide(const BitVector& x, const BitVector& y, int lambda1, int lambda2) {
    const bool b1 = x.weight() < lambda1;
    const bool b2 = y.weight() < lambda2;
    if (b1 == b2) return b1 ? Decision::H0 : Decision::H1;
    return b1 ? Decision::H0 : Decision::H1;  // disagreement: Encoder 1 prevails
}

double truncation_statistic(const BitVector& x, const BitVector& y, int l,
                            const HypothesisPair& pair) {
    if (l < 1 || l > x.len() || x.len() != y.len())
        throw contract_error("truncation_statistic: bad truncation length");
    const double wp = log2_odds_ratio(pair.p0, pair.p1);
    const double wc = log2_odds_ratio(pair.c0, pair.c1);
    if (wp == 0.0 && wc == 0.0)
        throw degenerate_test("truncation: p0 = p1 and c0 = c1 leave an empty statistic");
    const BitVector xl = x.prefix(l);
    const BitVector zl = xl ^ y.prefix(l);
    return xl.weight() * wp + zl.weight() * wc;
}

Decision truncation_decide(const BitVector& x, const BitVector& y, int l,
                           const HypothesisPair& pair, double tau) {
    return truncation_statistic(x, y, l, pair) < tau ? Decision::H0 : Decision::H1;
}

QuantizeResult quantize(const LinearCode& code, const BitVector& x) {
    auto [u, c] = ml_decode(code, x);
    return {u, c};
}

double quant_statistic(const BitVector& x_q, const BitVector& v, const EstimatedParams& params) {
    return x_q.weight() * params.log_weight_p() + v.weight() * params.log_weight_c();
}

Decision quant_test(const BitVector& x_q, const BitVector& y_or_yq, const EstimatedParams& params,
                    double tau) {
    if (x_q.len() != y_or_yq.len()) throw contract_error("quant_test: length mismatch");
    const BitVector v = x_q ^ y_or_yq;
    if (params.pure_weight()) return v.weight() < tau ? Decision::H0 : Decision::H1;
    return quant_statistic(x_q, v, params) <= tau ? Decision::H0 : Decision::H1;
}

BitVector qb_encode(const LinearCode& code, const Gf2Matrix& hb, const BitVector& x) {
    if (hb.cols() != code.k()) throw contract_error("qb_encode: binning columns must equal k");
    if (hb.rows() < 1) throw contract_error("qb_encode: binning matrix is empty");
    return mat_vec_mul(hb, quantize(code, x).message);
}

Decision qb_decide_asym(const LinearCode& code, const Gf2Matrix& hb, const BitVector& r,
                        const BitVector& y, const EstimatedParams& params, double tau) {
    const BitVector u_hat = constrained_ml_decode(code, hb, r, y);
    return quant_test(code.encode(u_hat), y, params, tau);
}

Decision qb_decide_sym(const LinearCode& code, const Gf2Matrix& hb, const BitVector& r,
                       const BitVector& s, const EstimatedParams& params, double tau) {
    const auto [u_hat, t_hat] = joint_constrained_decode(code, hb, r, s);
    return quant_test(code.encode(u_hat), code.encode(t_hat), params, tau);
}

EstimatedParams estimate_nuisance(const SchemeConfig& config, const HypothesisPair& pair, int n,
                                  std::uint64_t trials, std::uint64_t seed) {
    if (trials < 1) throw contract_error("estimate_nuisance: need at least one trial");
    if (config.kind != SchemeKind::Quantization && config.kind != SchemeKind::QuantizeBinning)
        throw contract_error("estimate_nuisance: only the coded schemes carry nuisance parameters");
    config.validate(n);

    double mean_w[2] = {0.0, 0.0};  // quantized-vector weight, per hypothesis
    double mean_v[2] = {0.0, 0.0};  // noise-vector weight, per hypothesis
    for (const Hypothesis h : {Hypothesis::H0, Hypothesis::H1}) {
        const int hi = h == Hypothesis::H0 ? 0 : 1;
        std::uint64_t sum_w = 0, sum_v = 0;
        for (std::uint64_t t = 0; t < trials; ++t) {
            const auto src =
                sample_pair(pair, h, n, derive_stream(seed, {kCalibTag, static_cast<std::uint64_t>(hi), t}));
            BitVector xq = BitVector::zeros(n);
            BitVector other = src.y;
            if (config.kind == SchemeKind::Quantization) {
                xq = quantize(*config.quantizer, src.x).codeword;
                if (config.setup == Setup::Symmetric)
                    other = quantize(*config.quantizer, src.y).codeword;
            } else {
                const BitVector r = qb_encode(*config.quantizer, *config.binning, src.x);
                if (config.setup == Setup::Symmetric) {
                    const BitVector s = qb_encode(*config.quantizer, *config.binning, src.y);
                    const auto [u_hat, t_hat] = joint_constrained_decode(*config.quantizer, *config.binning, r, s);
                    xq = config.quantizer->encode(u_hat);
                    other = config.quantizer->encode(t_hat);
                } else {
                    xq = config.quantizer->encode(
                        constrained_ml_decode(*config.quantizer, *config.binning, r, src.y));
                }
            }
            sum_w += static_cast<std::uint64_t>(xq.weight());
            sum_v += static_cast<std::uint64_t>((xq ^ other).weight());
        }
        mean_w[hi] = static_cast<double>(sum_w) / (static_cast<double>(trials) * n);
        mean_v[hi] = static_cast<double>(sum_v) / (static_cast<double>(trials) * n);
    }
    const double eps = 1.0 / (2.0 * static_cast<double>(trials) * n);
    auto clamp = [eps](double v) { return std::min(std::max(v, eps), 1.0 - eps); };
    return EstimatedParams(clamp(mean_w[0]), clamp(mean_v[0]), clamp(mean_w[1]), clamp(mean_v[1]));
}

bool strict_threshold(const SchemeConfig& config, const HypothesisPair& pair) {
    switch (config.kind) {
        case SchemeKind::Separate:
        case SchemeKind::Truncation:
            return true;
        case SchemeKind::Quantization:
        case SchemeKind::QuantizeBinning:
            // pure-weight regime: strict integer test; weighted: '<='
            return pair.p0 == pair.p1;
    }
    return true;
}

std::vector<double> threshold_grid(const SchemeConfig& config, const HypothesisPair& pair, int n) {
    config.validate(n);
    std::vector<double> grid;
    if (config.kind == SchemeKind::Separate ||
        ((config.kind == SchemeKind::Quantization || config.kind == SchemeKind::QuantizeBinning) &&
         pair.p0 == pair.p1)) {
        for (int t = 0; t <= n + 1; ++t) grid.push_back(t);
        return grid;
    }
    if (config.kind == SchemeKind::Truncation) {
        const int l = config.trunc_len;
        const double wp = log2_odds_ratio(pair.p0, pair.p1);
        const double wc = log2_odds_ratio(pair.c0, pair.c1);
        for (int a = 0; a <= l; ++a)
            for (int b = 0; b <= l; ++b) grid.push_back(a * wp + b * wc);
        std::sort(grid.begin(), grid.end());
        grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
        grid.push_back(grid.back() + 1.0);  // strict '<': one step past the maximum reaches (0,1)
        return grid;
    }
    // weighted quantization / quantize-binning: attainable superset over
    // weight pairs [0,n]^2
    if (!config.nuisance)
        throw contract_error("threshold_grid: weighted tests need estimated nuisance parameters");
    const double wp = config.nuisance->log_weight_p();
    const double wc = config.nuisance->log_weight_c();
    for (int a = 0; a <= n; ++a)
        for (int b = 0; b <= n; ++b) grid.push_back(a * wp + b * wc);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    grid.insert(grid.begin(), grid.front() - 1.0);  // '<=': one step below the minimum reaches (1,0)
    return grid;
}

}  // namespace dht
