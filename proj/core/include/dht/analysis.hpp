#pragma once

#include <vector>

#include "dht/mathutil.hpp"
#include "dht/sources.hpp"
#include "dht/spectra.hpp"

namespace dht {

struct ErrorPair {
    double alpha = 0.0;
    double beta = 0.0;
    double threshold = 0.0;
};

// Number of words of weight `gamma` at Hamming distance `j` from a fixed
// word of weight `lambda`: C(lambda, u) * C(n - lambda, j - u) with
// u = (lambda + j - gamma) / 2, zero when u is fractional or out of range.
std::uint64_t gamma_coeff(int lambda, int j, int gamma, int n);

// gamma_coeff normalized by the number of weight-j flip patterns, C(n, j)
// (the Vandermonde value of the defining sum); a row-stochastic kernel.
double delta_coeff(int lambda, int j, int gamma, int n);

// P(w(Y) = w) for Y = X xor Z with X uniform over the decision region
// described by `spectrum` and Z i.i.d. Bern(c). The kernel enters as
// gamma_coeff(region-word weight, flip count, observed weight); note the
// printed proposition transposes these indices against its own Gamma
// definition, and only this orientation reproduces the brute-force oracle.
std::vector<double> region_weight_pmf(const CosetSpectrum& spectrum, int n, double c);

// Separate scheme: alpha = P0(w(X) > gamma1), beta = P1(w(X) <= gamma1);
// the simulator's strict test at lambda1 corresponds to gamma1 = lambda1-1.
ErrorPair separate_errors(int n, double p0, double p1, int gamma1);

// Truncation scheme over the T(a, b) = a*wp + b*wc statistic grid. With
// the default convention alpha sums T >= tau and beta sums T < tau, the
// exact complement split of the strict decision rule; `printed_boundary`
// restores the published convention that also counts T = tau inside beta.
ErrorPair truncation_errors(int l, const HypothesisPair& pair, double tau,
                            bool printed_boundary = false);

// Asymmetric quantization with p0 = p1 = 1/2: exact (alpha, beta) at the
// inclusive integer threshold lambda_q (the strict simulator test at t
// matches lambda_q = t - 1).
ErrorPair quantization_errors(const CosetSpectrum& spectrum, int n, double c0, double c1,
                              int lambda_q);

// Asymmetric quantize-binning with p0 = p1 = 1/2. The correct-codeword
// term weights the region spectrum by the observed-weight pmf; the
// wrong-codeword term uses the exact cross enumerator of QbSpectra rather
// than a shell-uniform approximation of the region.
ErrorPair qb_errors(const CosetSpectrum& q_spectrum, const QbSpectra& qb, int n, double c0,
                    double c1, int lambda_qb);

struct ExponentBound {
    double theta = 0.0;       // per-symbol Type-II exponent, clamped at 0
    double delta_star = 0.0;  // maximizing grid point
    LogBase base = LogBase::Bits;
};

// min{R1 - [H2(p0*d) - H2(d)], D(p0*d || p1*d)} at a single grid point.
double exponent_inner_min(double p0, double p1, double r1, double delta,
                          LogBase base = LogBase::Bits);

// Maximizes the inner min over a uniform delta grid on [0, 1].
ExponentBound exponent_bound(double p0, double p1, double r1, double grid_step = 1e-3,
                             LogBase base = LogBase::Bits);

}  // namespace dht
