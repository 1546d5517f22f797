#pragma once

#include <cmath>

#include "dht/binom.hpp"

namespace dht {

// log2 of the likelihood-ratio weight a1(1-a0) / a0(1-a1). Shared by the
// scheme statistics and the analytic error sums so both sides compare
// bit-identical doubles against the same thresholds.
inline double log2_odds_ratio(double a0, double a1) {
    return std::log2(a1 * (1.0 - a0)) - std::log2(a0 * (1.0 - a1));
}

// Binomial point mass C(n,k) p^k (1-p)^(n-k); exact integer binomial,
// plain double powers (n <= 64 keeps everything in range).
inline double binomial_pmf(int n, int k, double p) {
    return static_cast<double>(binomial(n, k)) * std::pow(p, k) * std::pow(1.0 - p, n - k);
}

enum class LogBase { Bits, Nats };

inline double log_in(double x, LogBase base) {
    return base == LogBase::Bits ? std::log2(x) : std::log(x);
}

inline double binary_entropy(double x, LogBase base = LogBase::Bits) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    return -x * log_in(x, base) - (1.0 - x) * log_in(1.0 - x, base);
}

// Crossover probability of two cascaded binary symmetric channels.
inline double binary_convolve(double x, double y) { return (1.0 - x) * y + (1.0 - y) * x; }

// D(Bern(a) || Bern(b)) in the requested base; a, b strictly interior.
inline double binary_divergence(double a, double b, LogBase base = LogBase::Bits) {
    return a * log_in(a / b, base) + (1.0 - a) * log_in((1.0 - a) / (1.0 - b), base);
}

}  // namespace dht
