#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "dht/codes.hpp"
#include "dht/sources.hpp"

namespace dht {

enum class SchemeKind { Separate, Truncation, Quantization, QuantizeBinning };
enum class Setup { Asymmetric, Symmetric };
enum class Decision { H0, H1 };

// Bernoulli parameters the decoder assumes for the quantized vectors when
// forming the weighted test; estimated by Monte-Carlo calibration. When
// p0_hat == p1_hat the weight term drops and the tests reduce to integer
// thresholds on the noise weight.
struct EstimatedParams {
    double p0_hat, c0_hat, p1_hat, c1_hat;

    EstimatedParams(double p0, double c0, double p1, double c1)
        : p0_hat(p0), c0_hat(c0), p1_hat(p1), c1_hat(c1) {
        for (const double v : {p0, c0, p1, c1})
            if (!(v > 0.0 && v < 1.0))
                throw contract_error("EstimatedParams: values must lie strictly inside (0,1)");
    }

    // Sentinel for the p0 = p1 regime: selects the pure-weight tests.
    static EstimatedParams pure() { return EstimatedParams(0.5, 0.25, 0.5, 0.25); }

    bool pure_weight() const { return p0_hat == p1_hat; }

    // log2 p1(1-p0) / p0(1-p1)
    double log_weight_p() const;
    // log2 c1(1-c0) / c0(1-c1)
    double log_weight_c() const;
};

struct SchemeConfig {
    SchemeKind kind = SchemeKind::Separate;
    Setup setup = Setup::Asymmetric;
    std::shared_ptr<const LinearCode> quantizer;  // Quantization, QuantizeBinning
    std::optional<Gf2Matrix> binning;             // QuantizeBinning
    int trunc_len = 0;                            // Truncation
    std::optional<EstimatedParams> nuisance;      // weighted tests

    void validate(int n) const;
    // Transmitted bits per source bit: 1/n, l/n, k/n, rank(Hb)/n.
    double rate(int n) const;
    // Bits sent per encoder per block.
    int transmitted_bits(int n) const;
};

// --- separate scheme -------------------------------------------------------
// Each encoder votes H0 iff its observed weight is under its threshold; the
// fusion rule falls back to Encoder 1 on disagreement, which makes the
// final decision equal Encoder 1's vote in every case.
Decision separate_decide(const BitVector& x, const BitVector& y, int lambda1, int lambda2);

// --- truncation scheme ------------------------------------------------------
// w(x^l) log2[p1(1-p0)/p0(1-p1)] + w(x^l xor y^l) log2[c1(1-c0)/c0(1-c1)];
// H0 is decided on value < tau (strict).
double truncation_statistic(const BitVector& x, const BitVector& y, int l,
                            const HypothesisPair& pair);
Decision truncation_decide(const BitVector& x, const BitVector& y, int l,
                           const HypothesisPair& pair, double tau);

// --- quantization scheme ----------------------------------------------------
struct QuantizeResult {
    BitVector message;   // u with u*G = codeword
    BitVector codeword;  // nearest codeword under the tie rule
};
QuantizeResult quantize(const LinearCode& code, const BitVector& x);

// Weighted test value of Eq-(26) form on (w(x_q), w(v)).
double quant_statistic(const BitVector& x_q, const BitVector& v, const EstimatedParams& params);

// H0 iff statistic <= tau; in the pure-weight regime the test is the
// strict integer threshold w(v) < tau on the noise weight alone.
Decision quant_test(const BitVector& x_q, const BitVector& y_or_yq, const EstimatedParams& params,
                    double tau);

// --- quantize-binning scheme -------------------------------------------------
// r = Hb * u_q, the transmitted syndrome of the quantized message.
BitVector qb_encode(const LinearCode& code, const Gf2Matrix& hb, const BitVector& x);

Decision qb_decide_asym(const LinearCode& code, const Gf2Matrix& hb, const BitVector& r,
                        const BitVector& y, const EstimatedParams& params, double tau);

Decision qb_decide_sym(const LinearCode& code, const Gf2Matrix& hb, const BitVector& r,
                       const BitVector& s, const EstimatedParams& params, double tau);

// --- calibration --------------------------------------------------------------
// Runs `trials` encode/decode rounds per hypothesis and returns the mean
// quantized weight and mean noise weight as Bernoulli estimates, clamped
// to [1/(2*trials*n), 1 - 1/(2*trials*n)].
EstimatedParams estimate_nuisance(const SchemeConfig& config, const HypothesisPair& pair, int n,
                                  std::uint64_t trials, std::uint64_t seed);

// Default threshold grid covering the full attainable statistic range:
// integers 0..n+1 for pure-weight tests, the sorted attainable values
// (plus the endpoint extension) for weighted tests.
std::vector<double> threshold_grid(const SchemeConfig& config, const HypothesisPair& pair, int n);

// True when the scheme decides H0 on a strict '<' comparison (pure-weight
// and truncation tests); the weighted tests use '<='.
bool strict_threshold(const SchemeConfig& config, const HypothesisPair& pair);

}  // namespace dht
