#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>

#include <dht/binom.hpp>
#include <dht/sources.hpp>
#include <wenum.hpp>

using namespace dht;

namespace {

std::vector<std::uint64_t> random_columns(int n, int r, CounterRng& rng) {
    std::vector<std::uint64_t> cols(static_cast<std::size_t>(n));
    for (auto& c : cols) c = rng.next_u64() & BitVector::mask(r);
    return cols;
}

}  // namespace

TEST_CASE("walk_weight_level visits C(n,w) patterns in ascending lex order") {
    CounterRng rng(derive_stream(61, {0}));
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 4 + static_cast<int>(rng.next_u64() % 12);
        const auto cols = random_columns(n, 8, rng);
        const auto kc = detail::make_key_cols(n, cols);
        for (int w = 0; w <= n; ++w) {
            std::uint64_t count = 0;
            std::uint64_t prev_key = 0;
            bool first = true;
            detail::walk_weight_level(kc, w, [&](std::uint64_t pat, std::uint64_t syn) {
                CHECK(std::popcount(pat) == w);
                // syndrome consistent with the columns
                std::uint64_t want = 0;
                for (int i = 0; i < n; ++i)
                    if ((pat >> i) & 1) want ^= cols[static_cast<std::size_t>(i)];
                CHECK(syn == want);
                const std::uint64_t key = BitVector(pat, n).lex_key();
                if (!first) CHECK(key > prev_key);
                prev_key = key;
                first = false;
                ++count;
                return false;
            });
            CHECK(count == binomial(n, w));
        }
    }
}

TEST_CASE("find_at_weight equals the first matching pattern of the plain walk") {
    CounterRng rng(derive_stream(67, {1}));
    for (int trial = 0; trial < 15; ++trial) {
        const int n = 6 + static_cast<int>(rng.next_u64() % 10);
        const int r = 3 + static_cast<int>(rng.next_u64() % 6);
        const auto cols = random_columns(n, r, rng);
        const auto kc = detail::make_key_cols(n, cols);
        const detail::TailIndex idx(kc);
        for (std::uint64_t target = 0; target < (std::uint64_t{1} << r); ++target) {
            for (int w = 0; w <= std::min(n, 8); ++w) {
                std::uint64_t want = 0;
                bool want_found = false;
                detail::walk_weight_level(kc, w, [&](std::uint64_t pat, std::uint64_t syn) {
                    if (syn == target) {
                        want = pat;
                        want_found = true;
                        return true;
                    }
                    return false;
                });
                std::uint64_t got = 0;
                const bool got_found = detail::find_at_weight(kc, idx, w, target, got);
                CHECK(got_found == want_found);
                if (want_found) CHECK(got == want);
            }
        }
    }
}
