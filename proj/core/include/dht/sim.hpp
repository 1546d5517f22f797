#pragma once

#include <string>
#include <vector>

#include "dht/analysis.hpp"
#include "dht/schemes.hpp"

namespace dht {

enum class Engine { MonteCarlo, Analytic, BruteForce };

struct RocPoint {
    double threshold = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double alpha_ci = 0.0;  // 3-sigma binomial radius; 0 for exact engines
    double beta_ci = 0.0;
    std::uint64_t trials_h0 = 0;
    std::uint64_t trials_h1 = 0;
};

struct RocCurve {
    SchemeKind kind = SchemeKind::Separate;
    Setup setup = Setup::Asymmetric;
    Engine engine = Engine::MonteCarlo;
    int n = 0;
    double rate = 0.0;
    std::uint64_t seed = 0;
    std::string label;
    std::vector<RocPoint> points;  // ordered by threshold
};

// Monte-Carlo ROC sweep: `trials` fresh trials per hypothesis at every
// threshold, streams keyed by (seed, threshold index, hypothesis, trial).
// Output is identical for any `threads` value.
RocCurve run_roc(const SchemeConfig& config, const HypothesisPair& pair, int n,
                 const std::vector<double>& thresholds, std::uint64_t trials, std::uint64_t seed,
                 int threads = 0);

// Exact curves from the closed-form expressions; rejects configurations
// outside the analytical scope (symmetric setup; p0 != p1 for the coded
// schemes) with scope_error. Spectra come through `cache` when available.
RocCurve analytic_curve(const SchemeConfig& config, const HypothesisPair& pair, int n,
                        const std::vector<double>& thresholds, const SpectrumCache* cache = nullptr,
                        int threads = 0);

// Exhaustive oracle: walks every source/noise outcome through the actual
// encoder/decoder/statistic path and accumulates exact probabilities.
// Budget: 2^n * 2^n outcomes for the coded schemes (n <= 15), 2^n for the
// separate scheme (n <= 20), 2^l * 2^l for truncation (l <= 15).
ErrorPair brute_force_errors(const SchemeConfig& config, const HypothesisPair& pair, int n,
                             double threshold);
RocCurve brute_force_curve(const SchemeConfig& config, const HypothesisPair& pair, int n,
                           const std::vector<double>& thresholds);

struct DominanceLevel {
    double alpha = 0.0;    // requested Type-I budget
    double beta_a = 1.0;   // best guaranteed beta of curve a at that budget
    double beta_b = 1.0;
    double ci_a = 0.0;
    double ci_b = 0.0;
    int winner = 0;        // -1: a, +1: b, 0: tie
    bool significant = false;  // 3-sigma intervals disjoint
};

struct DominanceReport {
    std::vector<DominanceLevel> levels;
};

// Conservative staircase comparison: at each requested alpha level each
// curve contributes its smallest beta among points with alpha <= level
// (step interpolation, no line fitting).
DominanceReport compare_curves(const RocCurve& a, const RocCurve& b,
                               const std::vector<double>& alphas);

}  // namespace dht
