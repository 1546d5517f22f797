#include "dht/codes.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>

#include "wenum.hpp"

namespace dht {

namespace {

std::uint64_t fnv1a64(std::uint64_t h, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
        h ^= (v >> (8 * i)) & 0xffu;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::uint64_t hash_matrix(std::uint64_t h, const Gf2Matrix& m) {
    h = fnv1a64(h, static_cast<std::uint64_t>(m.rows()));
    h = fnv1a64(h, static_cast<std::uint64_t>(m.cols()));
    for (int r = 0; r < m.rows(); ++r) h = fnv1a64(h, m.row_word(r));
    return h;
}

std::vector<std::uint64_t> column_syndromes(const Gf2Matrix& h) {
    std::vector<std::uint64_t> cols(static_cast<std::size_t>(h.cols()), 0);
    for (int r = 0; r < h.rows(); ++r) {
        const std::uint64_t row = h.row_word(r);
        for (int c = 0; c < h.cols(); ++c)
            if ((row >> c) & 1u) cols[static_cast<std::size_t>(c)] |= std::uint64_t{1} << r;
    }
    return cols;
}

}  // namespace

LinearCode::LinearCode(Gf2Matrix generator, std::string name)
    : g_(std::move(generator)), h_(0, g_.cols()), name_(std::move(name)) {
    const int k = g_.rows();
    const int n = g_.cols();
    if (k < 1 || k > n) throw contract_error("LinearCode: need 1 <= k <= n");

    // Row reduce [G | I_k] to get pivot columns and the message transform E
    // with rref(G) = E*G; message_of() then reads codeword bits at the
    // pivots and maps them back through E.
    std::vector<std::uint64_t> rows(static_cast<std::size_t>(k));
    std::vector<std::uint64_t> track(static_cast<std::size_t>(k));
    for (int r = 0; r < k; ++r) {
        rows[static_cast<std::size_t>(r)] = g_.row_word(r);
        track[static_cast<std::size_t>(r)] = std::uint64_t{1} << r;
    }
    std::size_t next = 0;
    for (int c = 0; c < n && next < rows.size(); ++c) {
        std::size_t pivot = next;
        while (pivot < rows.size() && !((rows[pivot] >> c) & 1u)) ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[next], rows[pivot]);
        std::swap(track[next], track[pivot]);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r != next && ((rows[r] >> c) & 1u)) {
                rows[r] ^= rows[next];
                track[r] ^= track[next];
            }
        }
        pivot_cols_.push_back(c);
        ++next;
    }
    if (static_cast<int>(next) != k) throw contract_error("LinearCode: rank-deficient generator");
    msg_rows_ = std::move(track);

    h_ = null_space_basis(g_);

    std::uint64_t h = 0xcbf29ce484222325ull;
    h = fnv1a64(h, static_cast<std::uint64_t>(TieRule::LexMinError));
    h = hash_matrix(h, g_);
    h = hash_matrix(h, h_);
    hash_ = h;

    if (n - k <= kTableBudgetBits)
        table_ = std::make_shared<const SyndromeTable>(build_syndrome_table(*this));
}

BitVector LinearCode::encode(const BitVector& u) const {
    if (u.len() != k()) throw contract_error("encode: message length mismatch");
    std::uint64_t c = 0;
    std::uint64_t bits = u.bits();
    while (bits) {
        const int i = std::countr_zero(bits);
        c ^= g_.row_word(i);
        bits &= bits - 1;
    }
    return BitVector(c, n());
}

BitVector LinearCode::syndrome(const BitVector& y) const {
    if (n() == k()) throw contract_error("syndrome: code has no redundancy");
    return mat_vec_mul(h_, y);
}

std::uint64_t LinearCode::syndrome_bits(std::uint64_t y) const {
    std::uint64_t s = 0;
    for (int r = 0; r < h_.rows(); ++r)
        s |= static_cast<std::uint64_t>(std::popcount(h_.row_word(r) & y) & 1) << r;
    return s;
}

BitVector LinearCode::message_of(const BitVector& codeword) const {
    if (codeword.len() != n()) throw contract_error("message_of: length mismatch");
    std::uint64_t u = 0;
    for (std::size_t j = 0; j < pivot_cols_.size(); ++j)
        if (codeword.get(pivot_cols_[j])) u ^= msg_rows_[j];
    return BitVector(u, k());
}

namespace {

Gf2Matrix hamming_7_4() {
    // systematic [I_4 | P]; parity positions 4..6
    const std::uint64_t parity[4] = {0b011, 0b101, 0b110, 0b111};
    std::vector<std::uint64_t> rows(4);
    for (int r = 0; r < 4; ++r) rows[static_cast<std::size_t>(r)] = (std::uint64_t{1} << r) | (parity[r] << 4);
    return Gf2Matrix(std::move(rows), 7);
}

Gf2Matrix reed_muller_16_5() {
    // first-order Reed-Muller of length 16: all-ones row plus the four
    // coordinate-indicator rows
    std::vector<std::uint64_t> rows;
    rows.push_back(0xffff);
    for (int v = 0; v < 4; ++v) {
        std::uint64_t row = 0;
        for (int p = 0; p < 16; ++p)
            if ((p >> v) & 1) row |= std::uint64_t{1} << p;
        rows.push_back(row);
    }
    return Gf2Matrix(std::move(rows), 16);
}

// Cyclic code from its generator polynomial (bit i = coefficient of x^i):
// row i of G is g(x) * x^i.
Gf2Matrix cyclic_generator(std::uint64_t gpoly, int n) {
    const int deg = 63 - std::countl_zero(gpoly);
    const int k = n - deg;
    std::vector<std::uint64_t> rows(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) rows[static_cast<std::size_t>(i)] = gpoly << i;
    return Gf2Matrix(std::move(rows), n);
}

// Narrow-sense BCH generator polynomials (octal, standard code tables).
constexpr std::uint64_t kBch31_16 = 0107657;      // designed distance 7
constexpr std::uint64_t kBch63_36 = 01033500423;  // designed distance 11

bool parse_sized_name(const std::string& spec, const std::string& prefix, int& len) {
    if (spec.rfind(prefix, 0) != 0) return false;
    const std::string tail = spec.substr(prefix.size());
    if (tail.empty() || tail.find_first_not_of("0123456789") != std::string::npos) return false;
    len = std::stoi(tail);
    if (len < 1 || len > 64) throw contract_error("code length must be in [1,64]: " + spec);
    return true;
}

}  // namespace

LinearCode make_code(const std::string& spec) {
    if (spec == "hamming-7-4") return LinearCode(hamming_7_4(), spec);
    if (spec == "rm-16-5") return LinearCode(reed_muller_16_5(), spec);
    if (spec == "bch-31-16") return LinearCode(cyclic_generator(kBch31_16, 31), spec);
    if (spec == "bch-63-36") return LinearCode(cyclic_generator(kBch63_36, 63), spec);
    int len = 0;
    if (parse_sized_name(spec, "identity-", len)) return LinearCode(Gf2Matrix::identity(len), spec);
    if (parse_sized_name(spec, "repetition-", len))
        return LinearCode(Gf2Matrix(std::vector<std::uint64_t>{BitVector::mask(len)}, len), spec);
    if (std::ifstream probe(spec); probe.good()) return load_code_file(spec);
    throw contract_error("unknown code spec: " + spec);
}

LinearCode load_code_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw contract_error("cannot open code file: " + path);
    auto next_line = [&in, &path](std::string& line) {
        while (std::getline(in, line)) {
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
                line.pop_back();
            if (!line.empty()) return;
        }
        throw contract_error("truncated code file: " + path);
    };
    std::string line;
    next_line(line);
    std::istringstream head(line);
    int n = 0, k = 0;
    if (!(head >> n >> k) || n < 1 || n > 64 || k < 1 || k > n)
        throw contract_error("bad code file header: " + path);
    std::vector<std::uint64_t> rows(static_cast<std::size_t>(k));
    for (int r = 0; r < k; ++r) {
        next_line(line);
        if (static_cast<int>(line.size()) != n) throw contract_error("bad generator row length: " + path);
        rows[static_cast<std::size_t>(r)] = BitVector::parse(line).bits();
    }
    return LinearCode(Gf2Matrix(std::move(rows), n), path);
}

SyndromeTable build_syndrome_table(const LinearCode& code, TieRule, int budget_bits) {
    const int n = code.n();
    const int r = n - code.k();
    if (r > budget_bits)
        throw budget_error("syndrome table for " + code.name() + " needs 2^" + std::to_string(r) +
                           " entries, over the 2^" + std::to_string(budget_bits) + " budget");
    SyndromeTable table;
    table.n = n;
    table.redundancy = r;
    const std::size_t size = std::size_t{1} << r;
    table.leaders.assign(size, 0);
    if (r == 0) return table;

    std::vector<bool> seen(size, false);
    const auto kc = detail::make_key_cols(n, column_syndromes(code.parity_check()));
    std::size_t filled = 0;
    for (int w = 0; w <= n && filled < size; ++w) {
        detail::walk_weight_level(kc, w, [&](std::uint64_t pat, std::uint64_t syn) {
            if (!seen[syn]) {
                seen[syn] = true;
                table.leaders[syn] = pat;
                table.max_leader_weight = w;
                ++filled;
            }
            return filled == size;
        });
    }
    return table;
}

namespace {

// Search structure for the table-less decode path, built once per code.
struct BoundedSearch {
    detail::KeyCols kc;
    detail::TailIndex idx;
    explicit BoundedSearch(const LinearCode& code)
        : kc(detail::make_key_cols(code.n(), column_syndromes(code.parity_check()))), idx(kc) {}
};

std::shared_ptr<const BoundedSearch> bounded_search_for(const LinearCode& code) {
    static std::mutex mu;
    static std::map<std::uint64_t, std::weak_ptr<const BoundedSearch>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[code.content_hash()];
    if (auto live = slot.lock()) return live;
    auto fresh = std::make_shared<const BoundedSearch>(code);
    slot = fresh;
    return fresh;
}

}  // namespace

std::pair<BitVector, BitVector> ml_decode(const LinearCode& code, const BitVector& y, TieRule) {
    if (y.len() != code.n()) throw contract_error("ml_decode: length mismatch");
    const int n = code.n();
    std::uint64_t e = 0;
    if (code.n() == code.k()) {
        e = 0;  // every word is a codeword
    } else if (code.has_syndrome_table()) {
        e = code.syndrome_table()->leader(code.syndrome_bits(y.bits()));
    } else {
        // lex-ordered bounded-weight search: the first hit over ascending
        // weight levels is the canonical coset leader
        const auto search = bounded_search_for(code);
        const std::uint64_t target = code.syndrome_bits(y.bits());
        for (int w = 0; w <= n; ++w)
            if (detail::find_at_weight(search->kc, search->idx, w, target, e)) break;
    }
    const BitVector codeword(y.bits() ^ e, n);
    return {code.message_of(codeword), codeword};
}

LinearCode concatenated_subcode(const LinearCode& gq, const Gf2Matrix& hb) {
    if (hb.cols() != gq.k()) throw contract_error("concatenated_subcode: Hb columns must equal k");
    if (hb.rows() == 0) return LinearCode(gq.generator(), gq.name() + "+nobin");
    const Gf2Matrix basis = null_space_basis(hb);
    if (basis.rows() == 0)
        throw contract_error("concatenated_subcode: binning constraint leaves only the zero word");
    std::vector<std::uint64_t> rows(static_cast<std::size_t>(basis.rows()));
    for (int r = 0; r < basis.rows(); ++r)
        rows[static_cast<std::size_t>(r)] = gq.encode(basis.row(r)).bits();
    return LinearCode(Gf2Matrix(std::move(rows), gq.n()), gq.name() + "+bin");
}

std::vector<BitVector> syndrome_coset(const Gf2Matrix& hb, const BitVector& r) {
    if (r.len() != hb.rows()) throw contract_error("syndrome_coset: syndrome length mismatch");
    const auto u0 = solve_linear(hb, r);
    if (!u0) throw invalid_syndrome("syndrome outside the column space of the binning matrix");
    const Gf2Matrix basis = null_space_basis(hb);
    const int d = basis.rows();
    if (d > 26) throw budget_error("syndrome coset of 2^" + std::to_string(d) + " messages");
    std::vector<BitVector> coset;
    coset.reserve(std::size_t{1} << d);
    // Gray-code walk over the null space
    std::uint64_t cur = u0->bits();
    coset.emplace_back(cur, hb.cols());
    for (std::uint64_t g = 1; g < (std::uint64_t{1} << d); ++g) {
        cur ^= basis.row_word(std::countr_zero(g));
        coset.emplace_back(cur, hb.cols());
    }
    return coset;
}

BitVector constrained_ml_decode(const LinearCode& gq, const Gf2Matrix& hb, const BitVector& r,
                                const BitVector& y, TieRule) {
    if (y.len() != gq.n()) throw contract_error("constrained_ml_decode: length mismatch");
    const auto coset = syndrome_coset(hb, r);
    const std::uint64_t ybits = y.bits();
    BitVector best = coset.front();
    std::uint64_t best_e = ybits ^ gq.encode(best).bits();
    for (std::size_t i = 1; i < coset.size(); ++i) {
        const std::uint64_t e = ybits ^ gq.encode(coset[i]).bits();
        const int dw = std::popcount(e) - std::popcount(best_e);
        if (dw < 0 || (dw == 0 && BitVector(e, gq.n()).lex_key() < BitVector(best_e, gq.n()).lex_key())) {
            best = coset[i];
            best_e = e;
        }
    }
    return best;
}

std::pair<BitVector, BitVector> joint_constrained_decode(const LinearCode& gq, const Gf2Matrix& hb,
                                                         const BitVector& r, const BitVector& s,
                                                         TieRule) {
    const auto coset_u = syndrome_coset(hb, r);
    const auto coset_t = syndrome_coset(hb, s);
    if (coset_u.size() * coset_t.size() > (std::size_t{1} << 30))
        throw budget_error("joint constrained search too large");

    std::vector<std::uint64_t> cw_u(coset_u.size()), cw_t(coset_t.size());
    for (std::size_t i = 0; i < coset_u.size(); ++i) cw_u[i] = gq.encode(coset_u[i]).bits();
    for (std::size_t j = 0; j < coset_t.size(); ++j) cw_t[j] = gq.encode(coset_t[j]).bits();

    int best_d = gq.n() + 1;
    std::size_t bi = 0, bj = 0;
    std::uint64_t bku = 0, bkt = 0;
    for (std::size_t i = 0; i < coset_u.size(); ++i) {
        const std::uint64_t ku = coset_u[i].lex_key();
        for (std::size_t j = 0; j < coset_t.size(); ++j) {
            const int d = std::popcount(cw_u[i] ^ cw_t[j]);
            if (d > best_d) continue;
            const std::uint64_t kt = coset_t[j].lex_key();
            if (d < best_d || ku < bku || (ku == bku && kt < bkt)) {
                best_d = d;
                bi = i;
                bj = j;
                bku = ku;
                bkt = kt;
            }
        }
    }
    return {coset_u[bi], coset_t[bj]};
}

}  // namespace dht
