#include "dht/spectra.hpp"

#include <bit>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <thread>

#include "wenum.hpp"

namespace dht {

namespace {

constexpr char kSpectrumMagic[8] = {'D', 'H', 'T', 'S', 'P', 'E', 'C', '1'};
constexpr char kCrossMagic[8] = {'D', 'H', 'T', 'Q', 'B', 'X', 'S', '1'};

std::uint64_t fnv1a64(std::uint64_t h, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
        h ^= (v >> (8 * i)) & 0xffu;
        h *= 0x100000001b3ull;
    }
    return h;
}

void finalize(CosetSpectrum& s) {
    s.total = 0;
    s.d_max = 0;
    for (std::size_t w = 0; w < s.counts.size(); ++w) {
        s.total += s.counts[w];
        if (s.counts[w] > 0) s.d_max = static_cast<int>(w);
    }
}

void write_u64(std::ofstream& out, std::uint64_t v) {
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
    out.write(b, 8);
}

bool read_u64(std::ifstream& in, std::uint64_t& v) {
    char b[8];
    if (!in.read(b, 8)) return false;
    v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(b[i])) << (8 * i);
    return true;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

int resolve_threads(int threads) {
    if (threads > 0) return threads;
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

std::vector<std::uint64_t> nonzero_subcode_words(const LinearCode& gq, const Gf2Matrix& hb, int& dim) {
    std::vector<std::uint64_t> basis_words;
    if (hb.rows() == 0) {
        for (int r = 0; r < gq.k(); ++r) basis_words.push_back(gq.generator().row_word(r));
    } else {
        if (hb.cols() != gq.k()) throw contract_error("qb spectra: Hb columns must equal k");
        const Gf2Matrix basis = null_space_basis(hb);
        for (int r = 0; r < basis.rows(); ++r) basis_words.push_back(gq.encode(basis.row(r)).bits());
    }
    dim = static_cast<int>(basis_words.size());
    if (dim > 26) throw budget_error("subcode enumeration of 2^" + std::to_string(dim) + " codewords");
    std::vector<std::uint64_t> words;
    words.reserve((std::size_t{1} << dim) - 1);
    std::uint64_t cur = 0;
    for (std::uint64_t g = 1; g < (std::uint64_t{1} << dim); ++g) {
        cur ^= basis_words[static_cast<std::size_t>(std::countr_zero(g))];
        words.push_back(cur);
    }
    return words;  // Gray-code order, zero codeword excluded
}

}  // namespace

std::optional<SpectrumCache> SpectrumCache::from_env() {
    const char* dir = std::getenv("DHT_CACHE_DIR");
    if (dir == nullptr || *dir == '\0') return std::nullopt;
    return SpectrumCache(dir);
}

std::optional<CosetSpectrum> SpectrumCache::load_spectrum(const std::string& kind,
                                                          std::uint64_t hash) const {
    std::ifstream in(dir_ / (kind + "-" + hex64(hash) + ".dhtspec"), std::ios::binary);
    if (!in) return std::nullopt;
    char magic[8];
    if (!in.read(magic, 8) || std::memcmp(magic, kSpectrumMagic, 8) != 0) return std::nullopt;
    std::uint64_t file_hash = 0, n = 0;
    if (!read_u64(in, file_hash) || file_hash != hash) return std::nullopt;
    if (!read_u64(in, n) || n > 64) return std::nullopt;
    CosetSpectrum s;
    s.counts.resize(static_cast<std::size_t>(n) + 1);
    for (auto& c : s.counts)
        if (!read_u64(in, c)) return std::nullopt;
    finalize(s);
    return s;
}

void SpectrumCache::store_spectrum(const std::string& kind, std::uint64_t hash,
                                   const CosetSpectrum& s) const {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    std::ofstream out(dir_ / (kind + "-" + hex64(hash) + ".dhtspec"), std::ios::binary);
    if (!out) return;
    out.write(kSpectrumMagic, 8);
    write_u64(out, hash);
    write_u64(out, static_cast<std::uint64_t>(s.n()));
    for (auto c : s.counts) write_u64(out, c);
}

std::optional<std::vector<std::vector<std::uint64_t>>> SpectrumCache::load_cross(std::uint64_t hash,
                                                                                 int n) const {
    std::ifstream in(dir_ / ("qbcross-" + hex64(hash) + ".dhtspec"), std::ios::binary);
    if (!in) return std::nullopt;
    char magic[8];
    if (!in.read(magic, 8) || std::memcmp(magic, kCrossMagic, 8) != 0) return std::nullopt;
    std::uint64_t file_hash = 0, file_n = 0;
    if (!read_u64(in, file_hash) || file_hash != hash) return std::nullopt;
    if (!read_u64(in, file_n) || file_n != static_cast<std::uint64_t>(n)) return std::nullopt;
    std::vector<std::vector<std::uint64_t>> cross(static_cast<std::size_t>(n) + 1,
                                                  std::vector<std::uint64_t>(static_cast<std::size_t>(n) + 1));
    for (auto& row : cross)
        for (auto& c : row)
            if (!read_u64(in, c)) return std::nullopt;
    return cross;
}

void SpectrumCache::store_cross(std::uint64_t hash,
                                const std::vector<std::vector<std::uint64_t>>& cross) const {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    std::ofstream out(dir_ / ("qbcross-" + hex64(hash) + ".dhtspec"), std::ios::binary);
    if (!out) return;
    out.write(kCrossMagic, 8);
    write_u64(out, hash);
    write_u64(out, static_cast<std::uint64_t>(cross.size() - 1));
    for (const auto& row : cross)
        for (auto c : row) write_u64(out, c);
}

WeightDistribution weight_distribution(const LinearCode& code) {
    if (code.k() > 26)
        throw budget_error("weight distribution of " + code.name() + ": dimension " +
                           std::to_string(code.k()) + " exceeds the exhaustive budget (26)");
    WeightDistribution w;
    w.counts.assign(static_cast<std::size_t>(code.n()) + 1, 0);
    std::uint64_t cur = 0;
    w.counts[0] = 1;  // zero codeword
    for (std::uint64_t g = 1; g < (std::uint64_t{1} << code.k()); ++g) {
        cur ^= code.generator().row_word(std::countr_zero(g));
        ++w.counts[static_cast<std::size_t>(std::popcount(cur))];
    }
    w.total = std::uint64_t{1} << code.k();
    return w;
}

CosetSpectrum coset_leader_spectrum(const LinearCode& code, TieRule, const SpectrumCache* cache) {
    const int n = code.n();
    const int r = n - code.k();
    if (r > 31)
        throw budget_error("coset spectrum of " + code.name() + ": 2^" + std::to_string(r) +
                           " cosets exceed the enumeration budget");
    if (cache != nullptr)
        if (auto hit = cache->load_spectrum("cosets", code.content_hash())) return *hit;

    CosetSpectrum s;
    s.counts.assign(static_cast<std::size_t>(n) + 1, 0);
    if (code.has_syndrome_table()) {
        for (const std::uint64_t leader : code.syndrome_table()->leaders)
            ++s.counts[static_cast<std::size_t>(std::popcount(leader))];
    } else {
        // first-hit weight per syndrome; leader weights do not depend on the
        // tie rule, only region membership does
        std::vector<std::uint64_t> cols(static_cast<std::size_t>(n), 0);
        for (int c = 0; c < n; ++c) cols[static_cast<std::size_t>(c)] = code.syndrome_bits(std::uint64_t{1} << c);
        const auto kc = detail::make_key_cols(n, cols);
        const std::uint64_t size = std::uint64_t{1} << r;
        std::vector<bool> seen(size, false);
        std::uint64_t filled = 0;
        for (int w = 0; w <= n && filled < size; ++w) {
            detail::walk_weight_level(kc, w, [&](std::uint64_t, std::uint64_t syn) {
                if (!seen[syn]) {
                    seen[syn] = true;
                    ++s.counts[static_cast<std::size_t>(w)];
                    ++filled;
                }
                return filled == size;
            });
        }
    }
    finalize(s);
    if (cache != nullptr) cache->store_spectrum("cosets", code.content_hash(), s);
    return s;
}

std::uint64_t qb_content_hash(const LinearCode& gq, const Gf2Matrix& hb, TieRule tie) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    h = fnv1a64(h, gq.content_hash());
    h = fnv1a64(h, static_cast<std::uint64_t>(tie));
    h = fnv1a64(h, static_cast<std::uint64_t>(hb.rows()));
    h = fnv1a64(h, static_cast<std::uint64_t>(hb.cols()));
    for (int r = 0; r < hb.rows(); ++r) h = fnv1a64(h, hb.row_word(r));
    return h;
}

QbSpectra qb_spectra(const LinearCode& gq, const Gf2Matrix& hb, TieRule tie,
                     const SpectrumCache* cache, int threads) {
    const int n = gq.n();
    if (n > 31) throw budget_error("zero-region sweep of 2^" + std::to_string(n) + " words");

    QbSpectra out;
    out.content_hash = qb_content_hash(gq, hb, tie);

    int dim = 0;
    const std::vector<std::uint64_t> codewords = nonzero_subcode_words(gq, hb, dim);
    out.subcode_weights.counts.assign(static_cast<std::size_t>(n) + 1, 0);
    out.subcode_weights.counts[0] = 1;
    for (const std::uint64_t c : codewords)
        ++out.subcode_weights.counts[static_cast<std::size_t>(std::popcount(c))];
    out.subcode_weights.total = std::uint64_t{1} << dim;

    if (cache != nullptr) {
        auto region = cache->load_spectrum("zregion", out.content_hash);
        auto cross = cache->load_cross(out.content_hash, n);
        if (region && cross) {
            out.region = std::move(*region);
            out.cross = std::move(*cross);
            return out;
        }
    }

    const std::size_t rows = static_cast<std::size_t>(n) + 1;
    out.region.counts.assign(rows, 0);
    out.cross.assign(rows, std::vector<std::uint64_t>(rows, 0));

    // Full sweep: y is in the region iff the zero codeword beats every
    // other subcode codeword on (error weight, lexicographic error) order.
    const int nthreads = resolve_threads(threads);
    const std::uint64_t space = std::uint64_t{1} << n;
    struct Accum {
        std::vector<std::uint64_t> region;
        std::vector<std::vector<std::uint64_t>> cross;
    };
    std::vector<Accum> acc(static_cast<std::size_t>(nthreads));
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) {
        acc[static_cast<std::size_t>(t)].region.assign(rows, 0);
        acc[static_cast<std::size_t>(t)].cross.assign(rows, std::vector<std::uint64_t>(rows, 0));
        pool.emplace_back([&, t]() {
            Accum& a = acc[static_cast<std::size_t>(t)];
            const std::uint64_t lo = space * static_cast<std::uint64_t>(t) / static_cast<std::uint64_t>(nthreads);
            const std::uint64_t hi =
                space * static_cast<std::uint64_t>(t + 1) / static_cast<std::uint64_t>(nthreads);
            for (std::uint64_t y = lo; y < hi; ++y) {
                const int wy = std::popcount(y);
                std::uint64_t ykey = 0;
                bool have_key = false;
                bool member = true;
                for (const std::uint64_t c : codewords) {
                    const std::uint64_t e = y ^ c;
                    const int we = std::popcount(e);
                    if (we > wy) continue;
                    if (we < wy) {
                        member = false;
                        break;
                    }
                    if (!have_key) {
                        ykey = BitVector(y, n).lex_key();
                        have_key = true;
                    }
                    if (BitVector(e, n).lex_key() < ykey) {
                        member = false;
                        break;
                    }
                }
                if (!member) continue;
                ++a.region[static_cast<std::size_t>(wy)];
                for (const std::uint64_t c : codewords)
                    ++a.cross[static_cast<std::size_t>(wy)][static_cast<std::size_t>(std::popcount(y ^ c))];
            }
        });
    }
    for (auto& th : pool) th.join();
    for (const auto& a : acc) {
        for (std::size_t w = 0; w < rows; ++w) {
            out.region.counts[w] += a.region[w];
            for (std::size_t i = 0; i < rows; ++i) out.cross[w][i] += a.cross[w][i];
        }
    }
    finalize(out.region);

    if (cache != nullptr) {
        cache->store_spectrum("zregion", out.content_hash, out.region);
        cache->store_cross(out.content_hash, out.cross);
    }
    return out;
}

CosetSpectrum zero_region_spectrum(const LinearCode& gq, const Gf2Matrix& hb, TieRule tie,
                                   const SpectrumCache* cache, int threads) {
    if (cache != nullptr)
        if (auto hit = cache->load_spectrum("zregion", qb_content_hash(gq, hb, tie))) return *hit;
    return qb_spectra(gq, hb, tie, cache, threads).region;
}

}  // namespace dht
