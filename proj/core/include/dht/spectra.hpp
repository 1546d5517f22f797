#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "dht/codes.hpp"

namespace dht {

// Weight enumerator of a zero-codeword decision region: counts[w] words of
// weight w whose ML decode (under the shared tie rule) is the zero
// codeword. Sum of counts = 2^(n - dim) for the code that carves the
// region; tie-breaking fixes membership but not the counts.
struct CosetSpectrum {
    std::vector<std::uint64_t> counts;  // indexed 0..n
    int d_max = 0;                      // largest weight with nonzero count
    std::uint64_t total = 0;            // sum of counts

    int n() const { return static_cast<int>(counts.size()) - 1; }
};

// counts[t] codewords of Hamming weight t; total = 2^dim.
struct WeightDistribution {
    std::vector<std::uint64_t> counts;
    std::uint64_t total = 0;
};

// Everything the quantize-binning error analysis consumes, produced by one
// sweep: the zero-region spectrum E_nu of the concatenated subcode, the
// subcode weight distribution A_t, and the cross enumerator
// cross[nu][i] = #{(c, v) : c nonzero subcode codeword, v region word,
// w(v) = nu, w(c ^ v) = i}. The cross table resolves the wrong-codeword
// decision event exactly instead of smearing the region uniformly over
// weight shells.
struct QbSpectra {
    CosetSpectrum region;
    WeightDistribution subcode_weights;
    std::vector<std::vector<std::uint64_t>> cross;
    std::uint64_t content_hash = 0;
};

// Directory-backed cache for the expensive enumerations, keyed by content
// hash of (G, H, Hb, tie rule). File layout (little-endian): magic
// "DHTSPEC1", 8-byte hash, 8-byte n, then n+1 64-bit counts. The QB cross
// table uses magic "DHTQBXS1" with (n+1)^2 counts.
class SpectrumCache {
  public:
    explicit SpectrumCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

    // DHT_CACHE_DIR, when set.
    static std::optional<SpectrumCache> from_env();

    const std::filesystem::path& dir() const { return dir_; }

    std::optional<CosetSpectrum> load_spectrum(const std::string& kind, std::uint64_t hash) const;
    void store_spectrum(const std::string& kind, std::uint64_t hash, const CosetSpectrum& s) const;

    std::optional<std::vector<std::vector<std::uint64_t>>> load_cross(std::uint64_t hash, int n) const;
    void store_cross(std::uint64_t hash, const std::vector<std::vector<std::uint64_t>>& cross) const;

  private:
    std::filesystem::path dir_;
};

// counts[t] = #{codewords of weight t}; exhaustive over 2^k messages,
// rejected above dimension 26.
WeightDistribution weight_distribution(const LinearCode& code);

// E_gamma = #{words of weight gamma decoding to the zero codeword} =
// number of cosets whose leader weight is gamma. Feasible for
// n - k <= 31; served from `cache` when possible.
CosetSpectrum coset_leader_spectrum(const LinearCode& code, TieRule tie = TieRule::LexMinError,
                                    const SpectrumCache* cache = nullptr);

// Zero-region spectrum of the constrained decoder (syndrome r = 0):
// E_nu = #{y of weight nu : the decoder restricted to Hb*u = 0 outputs 0}.
// Full 2^n sweep (n <= 31), parallelized over disjoint ranges; results are
// independent of the thread count.
CosetSpectrum zero_region_spectrum(const LinearCode& gq, const Gf2Matrix& hb,
                                   TieRule tie = TieRule::LexMinError,
                                   const SpectrumCache* cache = nullptr, int threads = 0);

// Region + subcode weights + cross enumerator in one pass (same budget and
// caching as zero_region_spectrum).
QbSpectra qb_spectra(const LinearCode& gq, const Gf2Matrix& hb, TieRule tie = TieRule::LexMinError,
                     const SpectrumCache* cache = nullptr, int threads = 0);

// Hash key of the (gq, hb, tie) triple used by the QB cache entries.
std::uint64_t qb_content_hash(const LinearCode& gq, const Gf2Matrix& hb, TieRule tie);

}  // namespace dht
