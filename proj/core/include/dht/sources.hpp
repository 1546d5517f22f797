#pragma once

#include <cstdint>
#include <initializer_list>

#include "dht/bitvec.hpp"

namespace dht {

enum class Hypothesis { H0, H1 };

// splitmix64 finalizer; the backbone of all seed derivation
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Counter-based stream derivation: a trial's random stream is a pure
// function of (master seed, labels), so parallel and sequential runs of
// the same configuration produce identical draws.
inline std::uint64_t derive_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> labels) {
    std::uint64_t k = mix64(seed);
    for (const std::uint64_t v : labels) k = mix64(k ^ v);
    return k;
}

class CounterRng {
  public:
    explicit CounterRng(std::uint64_t stream_key) : state_(stream_key) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        std::uint64_t x = state_;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
        return x ^ (x >> 31);
    }

    bool bernoulli(double p) {
        if (p <= 0.0) return false;
        if (p >= 1.0) return true;
        return next_u64() < static_cast<std::uint64_t>(p * 18446744073709551616.0);
    }

  private:
    std::uint64_t state_;
};

// The binary source model Y = X xor Z: X ~ Bern(p), Z ~ Bern(c)
// independent, i.i.d. over positions; (p, c) switches with the hypothesis.
struct HypothesisPair {
    double p0, c0, p1, c1;

    HypothesisPair(double p0_, double c0_, double p1_, double c1_)
        : p0(p0_), c0(c0_), p1(p1_), c1(c1_) {
        if (!(p0 > 0.0 && p0 <= 0.5)) throw contract_error("HypothesisPair: need 0 < p0 <= 0.5");
        if (!(p0 <= p1 && p1 <= 1.0)) throw contract_error("HypothesisPair: need p0 <= p1 <= 1");
        if (!(c0 > 0.0 && c0 <= c1 && c1 <= 0.5))
            throw contract_error("HypothesisPair: need 0 < c0 <= c1 <= 0.5");
    }

    // Degenerate parameters (p = 0, c = 0, ...) for trivial-case tests.
    static HypothesisPair unchecked(double p0, double c0, double p1, double c1) {
        HypothesisPair pair(0.5, 0.5, 0.5, 0.5);
        pair.p0 = p0;
        pair.c0 = c0;
        pair.p1 = p1;
        pair.c1 = c1;
        return pair;
    }

    double p(Hypothesis h) const { return h == Hypothesis::H0 ? p0 : p1; }
    double c(Hypothesis h) const { return h == Hypothesis::H0 ? c0 : c1; }
};

struct SourcePair {
    BitVector x;
    BitVector y;
};

// Draws x_i ~ Bern(p_h) and z_i ~ Bern(c_h), y = x xor z; fully
// deterministic given the stream key.
inline SourcePair sample_pair(const HypothesisPair& pair, Hypothesis h, int n,
                              std::uint64_t stream_key) {
    if (n < 1 || n > 64) throw contract_error("sample_pair: n must be in [1,64]");
    CounterRng rng(stream_key);
    const double p = pair.p(h);
    const double c = pair.c(h);
    std::uint64_t x = 0, z = 0;
    for (int i = 0; i < n; ++i)
        if (rng.bernoulli(p)) x |= std::uint64_t{1} << i;
    for (int i = 0; i < n; ++i)
        if (rng.bernoulli(c)) z |= std::uint64_t{1} << i;
    return {BitVector(x, n), BitVector(x ^ z, n)};
}

}  // namespace dht
