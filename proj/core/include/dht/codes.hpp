#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dht/gf2.hpp"

namespace dht {

// Deterministic resolution of ML-decoding ties. The single rule used
// throughout: among equidistant candidates, pick the one whose error
// pattern (received word XOR codeword) is lexicographically smallest,
// bit 0 most significant. All spectra and decoders share it, so analytic
// decision regions and simulated decisions partition the space identically.
enum class TieRule { LexMinError };

// Syndrome-indexed coset-leader table; lookup + XOR implements exact ML
// decoding under the tie rule.
struct SyndromeTable {
    int n = 0;
    int redundancy = 0;                  // n - k
    int max_leader_weight = 0;           // covering radius
    std::vector<std::uint64_t> leaders;  // 2^redundancy entries

    std::uint64_t leader(std::uint64_t syndrome) const { return leaders[syndrome]; }
};

// Binary linear block code in row convention: codeword = u * G for a
// message row vector u. (Generator matrices written column-wise elsewhere
// are the transpose of this G.)
class LinearCode {
  public:
    LinearCode(Gf2Matrix generator, std::string name);

    int n() const { return g_.cols(); }
    int k() const { return g_.rows(); }
    const Gf2Matrix& generator() const { return g_; }
    const Gf2Matrix& parity_check() const { return h_; }
    const std::string& name() const { return name_; }

    BitVector encode(const BitVector& u) const;

    // H * y; zero exactly on codewords.
    BitVector syndrome(const BitVector& y) const;
    std::uint64_t syndrome_bits(std::uint64_t y) const;

    // Unique message with u * G = c; precondition: c is a codeword.
    BitVector message_of(const BitVector& codeword) const;

    bool has_syndrome_table() const { return table_ != nullptr; }
    const SyndromeTable* syndrome_table() const { return table_.get(); }

    // 64-bit content hash of (G, H, tie rule); keys spectrum caches.
    std::uint64_t content_hash() const { return hash_; }

    static constexpr int kTableBudgetBits = 24;

  private:
    Gf2Matrix g_;
    Gf2Matrix h_;
    std::string name_;
    std::vector<std::uint64_t> msg_rows_;  // message = XOR of rows at codeword pivot bits
    std::vector<int> pivot_cols_;
    std::uint64_t hash_ = 0;
    std::shared_ptr<const SyndromeTable> table_;  // present when n-k <= kTableBudgetBits
};

// Builds one of the built-in codes (hamming-7-4, bch-31-16, bch-63-36,
// rm-16-5, identity-N, repetition-N) or loads a generator-matrix file.
LinearCode make_code(const std::string& spec);

// Plain-text generator format: first line "n k", then k rows of n '0'/'1'
// characters; '#' starts a comment.
LinearCode load_code_file(const std::string& path);

// ML decode under the tie rule: returns (message, codeword) minimizing
// the Hamming distance to y. Uses the syndrome table when present, else a
// lex-ordered bounded-weight error-pattern search.
std::pair<BitVector, BitVector> ml_decode(const LinearCode& code, const BitVector& y,
                                          TieRule tie = TieRule::LexMinError);

// Builds the full coset-leader table; `budget_bits` guards the 2^(n-k)
// allocation. Construction already builds it when n-k <= 24; this entry
// point is the opt-in for larger codes.
SyndromeTable build_syndrome_table(const LinearCode& code, TieRule tie = TieRule::LexMinError,
                                   int budget_bits = LinearCode::kTableBudgetBits);

// The (n, k - rank(Hb)) subcode {u*G : Hb*u = 0}; its weight distribution
// is the A_t input of the quantize-binning error analysis.
LinearCode concatenated_subcode(const LinearCode& gq, const Gf2Matrix& hb);

// Minimizes d(u*G, y) subject to Hb*u = r, by exhaustive search over the
// solution coset. Throws invalid_syndrome when Hb*u = r has no solution.
BitVector constrained_ml_decode(const LinearCode& gq, const Gf2Matrix& hb, const BitVector& r,
                                const BitVector& y, TieRule tie = TieRule::LexMinError);

// Joint search of the symmetric-setup decoder: minimizes d(u*G, t*G) over
// the product of the two solution cosets; ties resolved by the smallest
// (u, t) pair under the lexicographic order on messages.
std::pair<BitVector, BitVector> joint_constrained_decode(const LinearCode& gq, const Gf2Matrix& hb,
                                                         const BitVector& r, const BitVector& s,
                                                         TieRule tie = TieRule::LexMinError);

// Enumerates the solution coset {u : Hb*u = r} (throws invalid_syndrome if
// empty). Used by the decoders above; exposed for the simulator.
std::vector<BitVector> syndrome_coset(const Gf2Matrix& hb, const BitVector& r);

}  // namespace dht
