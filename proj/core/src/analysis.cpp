#include "dht/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace dht {

std::uint64_t gamma_coeff(int lambda, int j, int gamma, int n) {
    if (lambda < 0 || j < 0 || gamma < 0 || lambda > n || j > n || gamma > n) return 0;
    const int twice_u = lambda + j - gamma;
    if (twice_u < 0 || twice_u % 2 != 0) return 0;
    const int u = twice_u / 2;
    if (u > std::min(lambda, j)) return 0;
    return binomial(lambda, u) * binomial(n - lambda, j - u);
}

double delta_coeff(int lambda, int j, int gamma, int n) {
    const std::uint64_t g = gamma_coeff(lambda, j, gamma, n);
    if (g == 0) return 0.0;
    return static_cast<double>(g) / static_cast<double>(binomial(n, j));
}

std::vector<double> region_weight_pmf(const CosetSpectrum& spectrum, int n, double c) {
    if (spectrum.n() != n) throw contract_error("region_weight_pmf: spectrum length mismatch");
    if (spectrum.total == 0) throw contract_error("region_weight_pmf: empty spectrum");
    // per-pattern probability of a weight-j flip
    std::vector<double> flip(static_cast<std::size_t>(n) + 1);
    for (int j = 0; j <= n; ++j)
        flip[static_cast<std::size_t>(j)] = std::pow(c, j) * std::pow(1.0 - c, n - j);

    std::vector<double> pmf(static_cast<std::size_t>(n) + 1, 0.0);
    const double inv_total = 1.0 / static_cast<double>(spectrum.total);
    for (int g = 0; g <= spectrum.d_max; ++g) {
        const std::uint64_t count = spectrum.counts[static_cast<std::size_t>(g)];
        if (count == 0) continue;
        const double pg = static_cast<double>(count) * inv_total;
        for (int w = 0; w <= n; ++w) {
            double s = 0.0;
            for (int j = 0; j <= n; ++j) {
                const std::uint64_t gc = gamma_coeff(g, j, w, n);
                if (gc != 0) s += static_cast<double>(gc) * flip[static_cast<std::size_t>(j)];
            }
            pmf[static_cast<std::size_t>(w)] += pg * s;
        }
    }
    return pmf;
}

ErrorPair separate_errors(int n, double p0, double p1, int gamma1) {
    if (gamma1 < 0 || gamma1 > n) throw contract_error("separate_errors: gamma1 must be in [0,n]");
    ErrorPair e;
    e.threshold = gamma1;
    for (int k = gamma1 + 1; k <= n; ++k) e.alpha += binomial_pmf(n, k, p0);
    for (int k = 0; k <= gamma1; ++k) e.beta += binomial_pmf(n, k, p1);
    return e;
}

ErrorPair truncation_errors(int l, const HypothesisPair& pair, double tau, bool printed_boundary) {
    if (l < 1 || l > 64) throw contract_error("truncation_errors: bad truncation length");
    const double wp = log2_odds_ratio(pair.p0, pair.p1);
    const double wc = log2_odds_ratio(pair.c0, pair.c1);
    if (wp == 0.0 && wc == 0.0)
        throw degenerate_test("truncation_errors: p0 = p1 and c0 = c1 leave an empty statistic");

    std::vector<double> x0(static_cast<std::size_t>(l) + 1), x1(x0), z0(x0), z1(x0);
    for (int a = 0; a <= l; ++a) {
        x0[static_cast<std::size_t>(a)] = binomial_pmf(l, a, pair.p0);
        x1[static_cast<std::size_t>(a)] = binomial_pmf(l, a, pair.p1);
        z0[static_cast<std::size_t>(a)] = binomial_pmf(l, a, pair.c0);
        z1[static_cast<std::size_t>(a)] = binomial_pmf(l, a, pair.c1);
    }
    ErrorPair e;
    e.threshold = tau;
    for (int a = 0; a <= l; ++a) {
        for (int b = 0; b <= l; ++b) {
            const double t = a * wp + b * wc;
            if (t >= tau) e.alpha += x0[static_cast<std::size_t>(a)] * z0[static_cast<std::size_t>(b)];
            const bool in_beta = printed_boundary ? (t <= tau) : (t < tau);
            if (in_beta) e.beta += x1[static_cast<std::size_t>(a)] * z1[static_cast<std::size_t>(b)];
        }
    }
    return e;
}

ErrorPair quantization_errors(const CosetSpectrum& spectrum, int n, double c0, double c1,
                              int lambda_q) {
    if (lambda_q < 0 || lambda_q > n) throw contract_error("quantization_errors: lambda_q in [0,n]");
    if (spectrum.n() != n) throw contract_error("quantization_errors: spectrum length mismatch");
    const std::vector<double> w0 = region_weight_pmf(spectrum, n, c0);
    const std::vector<double> w1 = region_weight_pmf(spectrum, n, c1);
    ErrorPair e;
    e.threshold = lambda_q;
    for (int w = lambda_q + 1; w <= n; ++w) e.alpha += w0[static_cast<std::size_t>(w)];
    for (int w = 0; w <= lambda_q; ++w) e.beta += w1[static_cast<std::size_t>(w)];
    return e;
}

namespace {

// P(correct retrieval and accept) + P(wrong codeword and accept) under
// noise level delta, at the inclusive threshold lambda.
double qb_accept_probability(const CosetSpectrum& q_spectrum, const QbSpectra& qb, int n,
                             double delta, int lambda) {
    const std::vector<double> w = region_weight_pmf(q_spectrum, n, delta);
    double p_correct = 0.0;
    const int top = std::min(qb.region.d_max, lambda);
    for (int v = 0; v <= top; ++v) {
        const std::uint64_t e = qb.region.counts[static_cast<std::size_t>(v)];
        if (e != 0)
            p_correct += static_cast<double>(e) / static_cast<double>(binomial(n, v)) *
                         w[static_cast<std::size_t>(v)];
    }
    double p_wrong = 0.0;
    for (int v = 0; v <= lambda; ++v) {
        for (int i = 0; i <= n; ++i) {
            const std::uint64_t m = qb.cross[static_cast<std::size_t>(v)][static_cast<std::size_t>(i)];
            if (m != 0)
                p_wrong += static_cast<double>(m) / static_cast<double>(binomial(n, i)) *
                           w[static_cast<std::size_t>(i)];
        }
    }
    return p_correct + p_wrong;
}

}  // namespace

ErrorPair qb_errors(const CosetSpectrum& q_spectrum, const QbSpectra& qb, int n, double c0,
                    double c1, int lambda_qb) {
    if (lambda_qb < 0 || lambda_qb > n) throw contract_error("qb_errors: lambda_qb in [0,n]");
    if (q_spectrum.n() != n || qb.region.n() != n)
        throw contract_error("qb_errors: spectra length mismatch");
    ErrorPair e;
    e.threshold = lambda_qb;
    e.alpha = 1.0 - qb_accept_probability(q_spectrum, qb, n, c0, lambda_qb);
    e.beta = qb_accept_probability(q_spectrum, qb, n, c1, lambda_qb);
    if (e.alpha < 0.0) e.alpha = 0.0;  // guard rounding at the (0,1) endpoint
    return e;
}

double exponent_inner_min(double p0, double p1, double r1, double delta, LogBase base) {
    const double a = binary_convolve(p0, delta);
    const double b = binary_convolve(p1, delta);
    const double rate_term = r1 - (binary_entropy(a, base) - binary_entropy(delta, base));
    const double div_term = binary_divergence(a, b, base);
    return std::min(rate_term, div_term);
}

ExponentBound exponent_bound(double p0, double p1, double r1, double grid_step, LogBase base) {
    if (!(grid_step > 0.0 && grid_step <= 0.5)) throw contract_error("exponent_bound: bad grid step");
    ExponentBound out;
    out.base = base;
    double best = 0.0;
    double best_delta = 0.0;
    const long steps = std::lround(1.0 / grid_step);
    for (long i = 0; i <= steps; ++i) {
        const double delta = std::min(1.0, static_cast<double>(i) * grid_step);
        const double v = exponent_inner_min(p0, p1, r1, delta, base);
        if (v > best) {
            best = v;
            best_delta = delta;
        }
    }
    out.theta = best;
    out.delta_star = best_delta;
    return out;
}

}  // namespace dht
