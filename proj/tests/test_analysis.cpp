#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <cmath>
#include <map>

#include <dht/analysis.hpp>
#include <dht/codes.hpp>
#include <dht/schemes.hpp>

using namespace dht;

namespace {

Gf2Matrix from_rows(std::vector<std::string> rows) {
    Gf2Matrix m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
    for (int r = 0; r < m.rows(); ++r) m.set_row(r, BitVector::parse(rows[static_cast<std::size_t>(r)]).bits());
    return m;
}

double pattern_prob(int n, int w, double p) { return std::pow(p, w) * std::pow(1.0 - p, n - w); }

// In-test oracle for the asymmetric quantization scheme: conditioned on the
// all-zero quantizer output, walk every (region word, noise word) outcome.
// Region membership comes from the actual decoder; no spectra involved.
std::vector<double> oracle_quant_weight_pmf(const LinearCode& code, double c) {
    const int n = code.n();
    std::vector<double> pmf(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<std::uint64_t> region;
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x)
        if (ml_decode(code, BitVector(x, n)).second.weight() == 0) region.push_back(x);
    for (const std::uint64_t x : region)
        for (std::uint64_t z = 0; z < (std::uint64_t{1} << n); ++z)
            pmf[static_cast<std::size_t>(std::popcount(x ^ z))] += pattern_prob(n, std::popcount(z), c);
    for (auto& v : pmf) v /= static_cast<double>(region.size());
    return pmf;
}

// In-test oracle for asymmetric quantize-binning: every (source, noise)
// outcome through quantize -> syndrome -> constrained decode -> statistic.
std::vector<double> oracle_qb_stat_pmf(const LinearCode& code, const Gf2Matrix& hb, double c) {
    const int n = code.n();
    const int ell = hb.rows();
    std::vector<double> pmf(static_cast<std::size_t>(n) + 1, 0.0);
    const std::uint64_t space = std::uint64_t{1} << n;
    std::map<std::pair<std::uint64_t, std::uint64_t>, std::uint64_t> memo;
    for (std::uint64_t x = 0; x < space; ++x) {
        const BitVector r = mat_vec_mul(hb, quantize(code, BitVector(x, n)).message);
        for (std::uint64_t z = 0; z < space; ++z) {
            const std::uint64_t y = x ^ z;
            const auto key = std::make_pair(r.bits(), y);
            auto it = memo.find(key);
            if (it == memo.end()) {
                const BitVector u = constrained_ml_decode(code, hb, BitVector(r.bits(), ell), BitVector(y, n));
                it = memo.emplace(key, code.encode(u).bits()).first;
            }
            const int stat = std::popcount(it->second ^ y);
            pmf[static_cast<std::size_t>(stat)] += pattern_prob(n, std::popcount(z), c) / static_cast<double>(space);
        }
    }
    return pmf;
}

}  // namespace

TEST_CASE("gamma coefficient basics") {
    // flipping j zeros of the zero word gives weight j
    for (int n = 1; n <= 10; ++n)
        for (int j = 0; j <= n; ++j)
            for (int g = 0; g <= n; ++g)
                CHECK(gamma_coeff(0, j, g, n) == (g == j ? binomial(n, j) : 0));

    // from a weight-1 word in n=3, one weight-1 flip reaches 000 once and
    // the two weight-2 words
    CHECK(gamma_coeff(1, 1, 0, 3) == 1);
    CHECK(gamma_coeff(1, 1, 2, 3) == 2);
    CHECK(gamma_coeff(1, 1, 1, 3) == 0);
}

TEST_CASE("gamma row sums hit C(n, j)") {
    for (int n = 1; n <= 12; ++n)
        for (int lam = 0; lam <= n; ++lam)
            for (int j = 0; j <= n; ++j) {
                std::uint64_t sum = 0;
                for (int g = 0; g <= n; ++g) sum += gamma_coeff(lam, j, g, n);
                CHECK(sum == binomial(n, j));
            }
}

TEST_CASE("delta kernel values and denominator identity") {
    CHECK(delta_coeff(1, 1, 0, 3) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    for (int n = 1; n <= 10; ++n)
        for (int j = 0; j <= n; ++j) CHECK(delta_coeff(0, j, j, n) == doctest::Approx(1.0));

    // the printed denominator sum_i C(lam,i) C(n-lam, j-i) telescopes to
    // C(n,j) regardless of lam
    for (int n = 1; n <= 12; ++n)
        for (int lam = 0; lam <= n; ++lam)
            for (int j = 0; j <= n; ++j) {
                std::uint64_t denom = 0;
                for (int i = 0; i <= std::max(lam, j); ++i)
                    denom += binomial(lam, i) * binomial(n - lam, j - i);
                CHECK(denom == binomial(n, j));
            }
}

TEST_CASE("gamma_coeff counts transitions exhaustively") {
    const int n = 8;
    for (int lam = 0; lam <= n; ++lam) {
        // fix the canonical weight-lam word: low bits set
        const std::uint64_t base = BitVector::mask(lam);
        std::map<std::pair<int, int>, std::uint64_t> count;
        for (std::uint64_t y = 0; y < (1u << n); ++y)
            ++count[{std::popcount(base ^ y), std::popcount(y)}];  // (distance j, weight gamma)
        for (int j = 0; j <= n; ++j)
            for (int g = 0; g <= n; ++g) {
                const auto it = count.find({j, g});
                const std::uint64_t want = it == count.end() ? 0 : it->second;
                CHECK(gamma_coeff(lam, j, g, n) == want);
            }
    }
}

TEST_CASE("separate scheme error expressions") {
    const ErrorPair end = separate_errors(30, 0.08, 0.5, 30);
    CHECK(end.alpha == 0.0);
    CHECK(end.beta == doctest::Approx(1.0).epsilon(1e-12));

    const ErrorPair zero = separate_errors(30, 0.08, 0.5, 0);
    CHECK(zero.alpha == doctest::Approx(1.0 - std::pow(0.92, 30)).epsilon(1e-12));
    CHECK(zero.beta == doctest::Approx(std::pow(0.5, 30)).epsilon(1e-12));

    // monotone in the threshold
    double prev_a = 2.0, prev_b = -1.0;
    for (int g = 0; g <= 30; ++g) {
        const ErrorPair e = separate_errors(30, 0.08, 0.5, g);
        CHECK(e.alpha <= prev_a + 1e-12);
        CHECK(e.beta >= prev_b - 1e-12);
        prev_a = e.alpha;
        prev_b = e.beta;
    }
}

TEST_CASE("truncation errors: endpoints, boundary convention, exhaustive check") {
    const HypothesisPair pair(0.08, 0.1, 0.5, 0.35);
    const int l = 6;
    const double wp = log2_odds_ratio(pair.p0, pair.p1);
    const double wc = log2_odds_ratio(pair.c0, pair.c1);
    const double tmax = l * wp + l * wc;

    const ErrorPair hi = truncation_errors(l, pair, tmax + 1.0);
    CHECK(hi.alpha == 0.0);
    CHECK(hi.beta == doctest::Approx(1.0).epsilon(1e-12));
    const ErrorPair lo = truncation_errors(l, pair, 0.0);
    CHECK(lo.alpha == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(lo.beta == 0.0);

    // exhaustive reference over all (x, z) pairs at a mid threshold
    for (const double tau : {2.0, wp + wc, 3.5}) {
        double alpha = 0.0, beta = 0.0, boundary_mass1 = 0.0;
        for (std::uint64_t xb = 0; xb < (1u << l); ++xb)
            for (std::uint64_t zb = 0; zb < (1u << l); ++zb) {
                const double t = std::popcount(xb) * wp + std::popcount(zb) * wc;
                const double m0 =
                    pattern_prob(l, std::popcount(xb), pair.p0) * pattern_prob(l, std::popcount(zb), pair.c0);
                const double m1 =
                    pattern_prob(l, std::popcount(xb), pair.p1) * pattern_prob(l, std::popcount(zb), pair.c1);
                if (t >= tau) alpha += m0;
                if (t < tau) beta += m1;
                if (t == tau) boundary_mass1 += m1;
            }
        const ErrorPair got = truncation_errors(l, pair, tau);
        CHECK(got.alpha == doctest::Approx(alpha).epsilon(1e-12));
        CHECK(got.beta == doctest::Approx(beta).epsilon(1e-12));

        // the published convention also counts the boundary inside beta
        const ErrorPair printed = truncation_errors(l, pair, tau, true);
        CHECK(printed.alpha == doctest::Approx(alpha).epsilon(1e-12));
        CHECK(printed.beta == doctest::Approx(beta + boundary_mass1).epsilon(1e-12));
    }

    // p0 = p1 drops the first term; the statistic is the noise weight alone
    const auto equal_p = HypothesisPair(0.5, 0.1, 0.5, 0.35);
    CHECK(log2_odds_ratio(equal_p.p0, equal_p.p1) == 0.0);
    CHECK_NOTHROW(truncation_errors(l, equal_p, 1.0));
    CHECK_THROWS_AS(truncation_errors(l, HypothesisPair::unchecked(0.5, 0.2, 0.5, 0.2), 1.0),
                    degenerate_test);
}

TEST_CASE("quantization errors equal the exhaustive oracle") {
    // perfect and non-perfect quantizers; the expression is exact for any
    // linear code
    const std::vector<LinearCode> codes = {
        make_code("hamming-7-4"), make_code("identity-3"), make_code("repetition-5"),
        LinearCode(from_rows({"11010000", "00110100", "00001011"}), "random-8-3")};
    for (const LinearCode& code : codes) {
        const int n = code.n();
        const CosetSpectrum spec = coset_leader_spectrum(code);
        CHECK(spec.total == std::uint64_t{1} << (n - code.k()));
        for (const double c0 : {0.05, 0.1, 0.2}) {
            for (const double c1 : {0.35, 0.5}) {
                const auto w0 = oracle_quant_weight_pmf(code, c0);
                const auto w1 = oracle_quant_weight_pmf(code, c1);
                for (int lam = 0; lam <= n; ++lam) {
                    const ErrorPair got = quantization_errors(spec, n, c0, c1, lam);
                    double alpha = 0.0, beta = 0.0;
                    for (int w = lam + 1; w <= n; ++w) alpha += w0[static_cast<std::size_t>(w)];
                    for (int w = 0; w <= lam; ++w) beta += w1[static_cast<std::size_t>(w)];
                    CHECK(std::abs(got.alpha - alpha) < 1e-12);
                    CHECK(std::abs(got.beta - beta) < 1e-12);
                }
            }
        }
    }
}

TEST_CASE("quantization normalization and endpoints") {
    const LinearCode code = make_code("hamming-7-4");
    const CosetSpectrum spec = coset_leader_spectrum(code);
    for (const double c : {0.07, 0.1, 0.35, 0.5}) {
        const auto pmf = region_weight_pmf(spec, 7, c);
        double total = 0.0;
        for (const double v : pmf) total += v;
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
    const ErrorPair end = quantization_errors(spec, 7, 0.1, 0.5, 7);
    CHECK(end.alpha == 0.0);
    CHECK(end.beta == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("qb errors equal the exhaustive oracle") {
    struct Case {
        LinearCode code;
        Gf2Matrix hb;
    };
    const std::vector<Case> cases = {
        {make_code("hamming-7-4"), from_rows({"1111"})},
        {make_code("hamming-7-4"), from_rows({"1100", "0011"})},
        {make_code("repetition-7"), from_rows({"1"})},
    };
    for (const auto& [code, hb] : cases) {
        const int n = code.n();
        const CosetSpectrum q = coset_leader_spectrum(code);
        const QbSpectra qb = qb_spectra(code, hb);
        for (const double c0 : {0.05, 0.1}) {
            const double c1 = 0.35;
            const auto s0 = oracle_qb_stat_pmf(code, hb, c0);
            const auto s1 = oracle_qb_stat_pmf(code, hb, c1);
            for (int lam = 0; lam <= n; ++lam) {
                const ErrorPair got = qb_errors(q, qb, n, c0, c1, lam);
                double accept0 = 0.0, accept1 = 0.0;
                for (int w = 0; w <= lam; ++w) {
                    accept0 += s0[static_cast<std::size_t>(w)];
                    accept1 += s1[static_cast<std::size_t>(w)];
                }
                CHECK(std::abs(got.alpha - (1.0 - accept0)) < 1e-12);
                CHECK(std::abs(got.beta - accept1) < 1e-12);
            }
        }
    }
}

TEST_CASE("qb with vacuous binning closes to (0,1) at the top threshold") {
    const LinearCode code = make_code("hamming-7-4");
    const CosetSpectrum q = coset_leader_spectrum(code);
    const QbSpectra qb = qb_spectra(code, Gf2Matrix(0, 4));
    const ErrorPair top = qb_errors(q, qb, 7, 0.1, 0.35, 7);
    CHECK(top.alpha == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(top.beta == doctest::Approx(1.0).epsilon(1e-12));
    // and matches plain quantization there
    const ErrorPair quant = quantization_errors(q, 7, 0.1, 0.35, 7);
    CHECK(std::abs(top.alpha - quant.alpha) < 1e-12);
    CHECK(std::abs(top.beta - quant.beta) < 1e-12);
}

TEST_CASE("error pairs are monotone in the threshold") {
    const LinearCode code = make_code("hamming-7-4");
    const CosetSpectrum q = coset_leader_spectrum(code);
    const QbSpectra qb = qb_spectra(code, from_rows({"1111"}));
    double pa = 2.0, pb = -1.0, qa = 2.0, qbv = -1.0;
    for (int lam = 0; lam <= 7; ++lam) {
        const ErrorPair e1 = quantization_errors(q, 7, 0.1, 0.5, lam);
        const ErrorPair e2 = qb_errors(q, qb, 7, 0.1, 0.35, lam);
        CHECK(e1.alpha <= pa + 1e-12);
        CHECK(e1.beta >= pb - 1e-12);
        CHECK(e2.alpha <= qa + 1e-12);
        CHECK(e2.beta >= qbv - 1e-12);
        pa = e1.alpha;
        pb = e1.beta;
        qa = e2.alpha;
        qbv = e2.beta;
    }
}

TEST_CASE("exponent bound") {
    // identical distributions carry no divergence
    CHECK(exponent_bound(0.3, 0.3, 0.5).theta == 0.0);

    // convolution fixed point at one half
    for (const double x : {0.0, 0.1, 0.37, 1.0}) CHECK(binary_convolve(x, 0.5) == doctest::Approx(0.5));

    // bits-valued inner min at delta = 0.1 for the reference parameters
    const double inner = exponent_inner_min(0.05, 0.5, 0.4, 0.1, LogBase::Bits);
    CHECK(inner > 0.27);
    CHECK(inner < 0.30);

    // nats-read prediction lands at the quoted magnitudes
    CHECK(std::exp(-50.0 * inner) > 1e-7);
    CHECK(std::exp(-50.0 * inner) < 1e-5);
    CHECK(std::exp(-100.0 * inner) > 1e-13);
    CHECK(std::exp(-100.0 * inner) < 1e-11);

    // grid refinement stability
    const ExponentBound coarse = exponent_bound(0.05, 0.5, 0.4, 1e-3);
    const ExponentBound fine = exponent_bound(0.05, 0.5, 0.4, 1e-4);
    CHECK(std::abs(coarse.theta - fine.theta) < 1e-4);
    CHECK(coarse.theta >= inner);  // the sup dominates any single grid point
}
