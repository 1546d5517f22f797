#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <dht/sources.hpp>

using namespace dht;

TEST_CASE("pair validation") {
    CHECK_NOTHROW(HypothesisPair(0.08, 0.1, 0.5, 0.35));
    CHECK_THROWS_AS(HypothesisPair(0.0, 0.1, 0.5, 0.35), contract_error);   // p0 = 0
    CHECK_THROWS_AS(HypothesisPair(0.6, 0.1, 0.7, 0.35), contract_error);   // p0 > 0.5
    CHECK_THROWS_AS(HypothesisPair(0.3, 0.1, 0.2, 0.35), contract_error);   // p1 < p0
    CHECK_THROWS_AS(HypothesisPair(0.3, 0.4, 0.5, 0.35), contract_error);   // c1 < c0
    CHECK_THROWS_AS(HypothesisPair(0.3, 0.1, 0.5, 0.6), contract_error);    // c1 > 0.5
    CHECK_NOTHROW(HypothesisPair::unchecked(0.0, 0.0, 1.0, 0.5));           // test-only escape
}

TEST_CASE("reproducibility and stream separation") {
    const HypothesisPair pair(0.3, 0.1, 0.5, 0.35);
    const auto a = sample_pair(pair, Hypothesis::H0, 64, derive_stream(42, {1, 2, 3}));
    const auto b = sample_pair(pair, Hypothesis::H0, 64, derive_stream(42, {1, 2, 3}));
    CHECK(a.x == b.x);
    CHECK(a.y == b.y);
    const auto c = sample_pair(pair, Hypothesis::H0, 64, derive_stream(42, {1, 2, 4}));
    CHECK(a.x != c.x);  // astronomically unlikely to collide
    CHECK_THROWS_AS(sample_pair(pair, Hypothesis::H0, 0, 1), contract_error);
    CHECK_THROWS_AS(sample_pair(pair, Hypothesis::H0, 65, 1), contract_error);
}

TEST_CASE("degenerate parameters behave deterministically") {
    const auto clean = HypothesisPair::unchecked(0.3, 0.0, 0.3, 0.0);  // c = 0: y = x
    for (int t = 0; t < 50; ++t) {
        const auto s = sample_pair(clean, Hypothesis::H0, 16, derive_stream(7, {static_cast<std::uint64_t>(t)}));
        CHECK(s.x == s.y);
    }
    const auto zero = HypothesisPair::unchecked(0.0, 0.2, 0.0, 0.2);  // p = 0: x = 0
    for (int t = 0; t < 50; ++t) {
        const auto s = sample_pair(zero, Hypothesis::H1, 16, derive_stream(9, {static_cast<std::uint64_t>(t)}));
        CHECK(s.x.weight() == 0);
    }
}

TEST_CASE("law of large numbers for the noise weight") {
    const HypothesisPair pair(0.5, 0.1, 0.5, 0.35);
    const int n = 31;
    const int trials = 100000;
    double sum_z = 0.0;
    for (int t = 0; t < trials; ++t) {
        const auto s = sample_pair(pair, Hypothesis::H0, n, derive_stream(1234, {static_cast<std::uint64_t>(t)}));
        sum_z += (s.x ^ s.y).weight();
    }
    const double mean = sum_z / trials;
    const double se = std::sqrt(n * 0.1 * 0.9 / trials);
    CHECK(std::abs(mean - 3.1) <= 3.0 * se);
}

TEST_CASE("marginal of y matches the binary convolution") {
    const double p = 0.3, c = 0.2;
    const HypothesisPair pair(p, c, 0.5, 0.35);
    const int n = 16;
    const int trials = 100000;
    std::uint64_t ones = 0;
    for (int t = 0; t < trials; ++t) {
        const auto s = sample_pair(pair, Hypothesis::H0, n, derive_stream(99, {static_cast<std::uint64_t>(t)}));
        ones += static_cast<std::uint64_t>(s.y.weight());
    }
    const double want = (1 - p) * c + (1 - c) * p;  // 0.38
    const double got = static_cast<double>(ones) / (static_cast<double>(trials) * n);
    const double se = std::sqrt(want * (1 - want) / (static_cast<double>(trials) * n));
    CHECK(std::abs(got - want) <= 4.0 * se);
}
