#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>

#include <dht/mathutil.hpp>
#include <dht/schemes.hpp>

using namespace dht;

namespace {

Gf2Matrix from_rows(std::vector<std::string> rows) {
    Gf2Matrix m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
    for (int r = 0; r < m.rows(); ++r) m.set_row(r, BitVector::parse(rows[static_cast<std::size_t>(r)]).bits());
    return m;
}

std::shared_ptr<const LinearCode> shared_code(const std::string& name) {
    return std::make_shared<const LinearCode>(make_code(name));
}

}  // namespace

TEST_CASE("separate decisions collapse to encoder 1") {
    CounterRng rng(derive_stream(3, {0}));
    for (int t = 0; t < 200; ++t) {
        const BitVector x(rng.next_u64(), 20);
        const BitVector y(rng.next_u64(), 20);
        const int l1 = static_cast<int>(rng.next_u64() % 22);
        const int l2 = static_cast<int>(rng.next_u64() % 22);
        const Decision d = separate_decide(x, y, l1, l2);
        CHECK(d == (x.weight() < l1 ? Decision::H0 : Decision::H1));
    }
    const BitVector any(0x155, 12), other(0x2aa, 12);
    CHECK(separate_decide(any, other, 13, 13) == Decision::H0);  // lambda = n+1: always H0
    CHECK(separate_decide(any, other, 0, 0) == Decision::H1);    // lambda = 0: always H1
}

TEST_CASE("truncation statistic") {
    const HypothesisPair pair(0.08, 0.1, 0.5, 0.35);
    CHECK(truncation_statistic(BitVector::zeros(16), BitVector::zeros(16), 15, pair) == 0.0);

    // p0 = p1: statistic proportional to the noise weight alone
    const HypothesisPair equal_p(0.5, 0.1, 0.5, 0.35);
    const double wc = log2_odds_ratio(0.1, 0.35);
    CounterRng rng(derive_stream(5, {1}));
    for (int t = 0; t < 100; ++t) {
        const BitVector x(rng.next_u64(), 20);
        const BitVector y(rng.next_u64(), 20);
        const int wz = (x.prefix(15) ^ y.prefix(15)).weight();
        CHECK(truncation_statistic(x, y, 15, equal_p) == doctest::Approx(wz * wc).epsilon(1e-15));
    }

    CHECK_THROWS_AS(
        truncation_statistic(BitVector::zeros(8), BitVector::zeros(8), 4,
                             HypothesisPair::unchecked(0.5, 0.2, 0.5, 0.2)),
        degenerate_test);
    CHECK(truncation_decide(BitVector::zeros(16), BitVector::zeros(16), 15, pair, 0.5) == Decision::H0);
}

TEST_CASE("quantize fixed points and covering radius") {
    const LinearCode hamming = make_code("hamming-7-4");
    for (std::uint64_t u = 0; u < 16; ++u) {
        const BitVector cw = hamming.encode(BitVector(u, 4));
        const QuantizeResult q = quantize(hamming, cw);
        CHECK(q.codeword == cw);
        CHECK(q.message == BitVector(u, 4));
    }
    for (std::uint64_t x = 0; x < 128; ++x) {
        const QuantizeResult q = quantize(hamming, BitVector(x, 7));
        CHECK((q.codeword ^ BitVector(x, 7)).weight() <= 1);  // covering radius 1
    }
    const LinearCode id = make_code("identity-6");
    for (std::uint64_t x = 0; x < 64; ++x) {
        const QuantizeResult q = quantize(id, BitVector(x, 6));
        CHECK(q.codeword == BitVector(x, 6));
        CHECK(q.message == BitVector(x, 6));
    }
}

TEST_CASE("quant_test pure and weighted regimes") {
    const EstimatedParams pure = EstimatedParams::pure();
    CHECK(pure.pure_weight());
    const BitVector xq = BitVector::parse("1010100");

    // x_q equal to y: statistic zero
    CHECK(quant_test(xq, xq, pure, 1.0) == Decision::H0);
    CHECK(quant_test(xq, xq, pure, 0.0) == Decision::H1);  // strict comparison

    // weighted regime
    const EstimatedParams est(0.3, 0.1, 0.5, 0.3);
    CHECK(!est.pure_weight());
    const BitVector y = BitVector::parse("1010001");
    const double stat = quant_statistic(xq, xq ^ y, est);
    CHECK(quant_test(xq, y, est, stat) == Decision::H0);          // inclusive at the boundary
    CHECK(quant_test(xq, y, est, stat - 1e-9) == Decision::H1);
}

TEST_CASE("pure-weight reduction: integer and weighted forms decide identically") {
    // with the p-term absent, w(v)*wc <= tau matches w(v) < floor(tau/wc)+1
    const EstimatedParams params(0.5, 0.1, 0.5, 0.35);
    const double wc = params.log_weight_c();
    REQUIRE(wc > 0.0);
    const int n = 31;
    for (int lam = 0; lam <= n + 1; ++lam) {
        // corresponding weighted threshold: largest attainable value below lam
        const double tau = (lam - 1) * wc;
        for (int wv = 0; wv <= n; ++wv) {
            const bool integer_form = wv < lam;
            const bool weighted_form = wv * wc <= tau + 1e-12;
            if (lam >= 1) CHECK(integer_form == weighted_form);
        }
    }
}

TEST_CASE("qb_encode basics") {
    const auto bch = shared_code("bch-31-16");
    const LinearCode rm = make_code("rm-16-5");
    const Gf2Matrix& hb = rm.parity_check();

    CHECK(qb_encode(*bch, hb, BitVector::zeros(31)).weight() == 0);
    CHECK(qb_encode(*bch, hb, BitVector::zeros(31)).len() == 11);
    CHECK(rank(hb) == 11);

    // linearity on codeword inputs: quantization is exact there
    CounterRng rng(derive_stream(7, {2}));
    for (int t = 0; t < 50; ++t) {
        const BitVector u1(rng.next_u64(), 16), u2(rng.next_u64(), 16);
        const BitVector r1 = qb_encode(*bch, hb, bch->encode(u1));
        const BitVector r2 = qb_encode(*bch, hb, bch->encode(u2));
        const BitVector r12 = qb_encode(*bch, hb, bch->encode(u1 ^ u2));
        CHECK(r12 == (r1 ^ r2));
    }
}

TEST_CASE("qb decisions") {
    const auto hamming = shared_code("hamming-7-4");
    const Gf2Matrix hb = from_rows({"1111"});
    const EstimatedParams pure = EstimatedParams::pure();

    // exact fit decodes to zero distance and accepts for any positive lambda
    const BitVector u = BitVector::parse("1100");
    const BitVector r = mat_vec_mul(hb, u);
    const BitVector y = hamming->encode(u);
    CHECK(qb_decide_asym(*hamming, hb, r, y, pure, 1.0) == Decision::H0);
    CHECK(qb_decide_asym(*hamming, hb, r, y, pure, 8.0) == Decision::H0);  // lambda = n+1: always H0

    // symmetric with equal syndromes reaches distance zero
    CHECK(qb_decide_sym(*hamming, hb, r, r, pure, 1.0) == Decision::H0);

    // identity binning pins the decoded words to the transmitted messages
    const Gf2Matrix id4 = Gf2Matrix::identity(4);
    const BitVector s = BitVector::parse("0110");
    const int dist = (hamming->encode(u) ^ hamming->encode(s)).weight();
    CHECK(qb_decide_sym(*hamming, id4, u, s, pure, dist + 1.0) == Decision::H0);
    CHECK(qb_decide_sym(*hamming, id4, u, s, pure, static_cast<double>(dist)) == Decision::H1);
}

TEST_CASE("estimate_nuisance pass-through and symmetry") {
    // identity quantizer, asymmetric: the estimates converge to the source
    // parameters themselves
    SchemeConfig config;
    config.kind = SchemeKind::Quantization;
    config.setup = Setup::Asymmetric;
    config.quantizer = shared_code("identity-16");
    const HypothesisPair pair(0.3, 0.1, 0.5, 0.35);
    const EstimatedParams est = estimate_nuisance(config, pair, 16, 20000, 77);
    CHECK(est.p0_hat == doctest::Approx(0.3).epsilon(0.05));
    CHECK(est.c0_hat == doctest::Approx(0.1).epsilon(0.08));
    CHECK(est.p1_hat == doctest::Approx(0.5).epsilon(0.05));
    CHECK(est.c1_hat == doctest::Approx(0.35).epsilon(0.05));

    // repetition quantizer at p = 0.5: symmetric code and source
    SchemeConfig rep;
    rep.kind = SchemeKind::Quantization;
    rep.setup = Setup::Asymmetric;
    rep.quantizer = shared_code("repetition-15");
    const HypothesisPair balanced(0.5, 0.1, 0.5, 0.35);
    const EstimatedParams rest = estimate_nuisance(rep, balanced, 15, 20000, 78);
    CHECK(rest.p0_hat == doctest::Approx(0.5).epsilon(0.02));
    CHECK(rest.p1_hat == doctest::Approx(0.5).epsilon(0.02));

    CHECK_THROWS_AS(estimate_nuisance(SchemeConfig{}, pair, 16, 100, 1), contract_error);
}

TEST_CASE("estimate_nuisance is stable across seeds") {
    SchemeConfig config;
    config.kind = SchemeKind::Quantization;
    config.setup = Setup::Asymmetric;
    config.quantizer = shared_code("bch-31-16");
    const HypothesisPair pair(0.5, 0.1, 0.5, 0.5);
    const EstimatedParams a = estimate_nuisance(config, pair, 31, 100000, 1001);
    const EstimatedParams b = estimate_nuisance(config, pair, 31, 100000, 2002);
    CHECK(std::abs(a.c0_hat - b.c0_hat) < 0.005);
    CHECK(std::abs(a.c1_hat - b.c1_hat) < 0.005);
}

TEST_CASE("rates are exact fractions") {
    SchemeConfig sep;
    sep.kind = SchemeKind::Separate;
    CHECK(sep.rate(31) == 1.0 / 31.0);

    SchemeConfig tr;
    tr.kind = SchemeKind::Truncation;
    tr.trunc_len = 16;
    CHECK(tr.rate(31) == 16.0 / 31.0);

    SchemeConfig q;
    q.kind = SchemeKind::Quantization;
    q.quantizer = shared_code("bch-31-16");
    CHECK(q.rate(31) == 16.0 / 31.0);

    SchemeConfig qb;
    qb.kind = SchemeKind::QuantizeBinning;
    qb.quantizer = shared_code("bch-31-16");
    qb.binning = make_code("rm-16-5").parity_check();
    CHECK(qb.rate(31) == 11.0 / 31.0);
    CHECK(qb.transmitted_bits(31) == 11);
}

TEST_CASE("config validation") {
    SchemeConfig config;
    config.kind = SchemeKind::Quantization;
    CHECK_THROWS_AS(config.validate(31), contract_error);  // missing quantizer

    config.quantizer = shared_code("bch-31-16");
    CHECK_THROWS_AS(config.validate(32), contract_error);  // length mismatch
    CHECK_NOTHROW(config.validate(31));

    config.kind = SchemeKind::QuantizeBinning;
    CHECK_THROWS_AS(config.validate(31), contract_error);  // missing binning
    config.binning = Gf2Matrix::identity(15);
    CHECK_THROWS_AS(config.validate(31), contract_error);  // wrong binning width
    config.binning = Gf2Matrix::identity(16);
    CHECK_NOTHROW(config.validate(31));

    SchemeConfig tr;
    tr.kind = SchemeKind::Truncation;
    tr.trunc_len = 0;
    CHECK_THROWS_AS(tr.validate(31), contract_error);
    tr.trunc_len = 32;
    CHECK_THROWS_AS(tr.validate(31), contract_error);

    CHECK_THROWS_AS(EstimatedParams(0.0, 0.5, 0.5, 0.5), contract_error);
    CHECK_THROWS_AS(EstimatedParams(0.3, 0.5, 1.0, 0.5), contract_error);
}

TEST_CASE("threshold grids") {
    const HypothesisPair balanced(0.5, 0.1, 0.5, 0.5);
    SchemeConfig q;
    q.kind = SchemeKind::Quantization;
    q.quantizer = shared_code("bch-31-16");
    const auto pure_grid = threshold_grid(q, balanced, 31);
    CHECK(pure_grid.size() == 33);  // integers 0..n+1
    CHECK(pure_grid.front() == 0.0);
    CHECK(pure_grid.back() == 32.0);
    CHECK(strict_threshold(q, balanced));

    SchemeConfig tr;
    tr.kind = SchemeKind::Truncation;
    tr.trunc_len = 4;
    const HypothesisPair pair(0.08, 0.1, 0.5, 0.35);
    const auto tgrid = threshold_grid(tr, pair, 31);
    CHECK(tgrid.size() <= 26);  // (l+1)^2 + endpoint, minus collisions
    for (std::size_t i = 1; i < tgrid.size(); ++i) CHECK(tgrid[i] > tgrid[i - 1]);
    CHECK(strict_threshold(tr, pair));

    // weighted quantization needs nuisance estimates for its grid
    const HypothesisPair skew(0.08, 0.1, 0.5, 0.35);
    CHECK_THROWS_AS(threshold_grid(q, skew, 31), contract_error);
    q.nuisance = EstimatedParams(0.1, 0.12, 0.45, 0.3);
    const auto wgrid = threshold_grid(q, skew, 31);
    CHECK(!strict_threshold(q, skew));
    for (std::size_t i = 1; i < wgrid.size(); ++i) CHECK(wgrid[i] > wgrid[i - 1]);
}
