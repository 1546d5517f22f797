#pragma once

#include <bit>
#include <cstdint>
#include <string>

#include "dht/errors.hpp"

namespace dht {

// Fixed-length binary word, 1..64 bits, packed into one machine word.
// Bit i of `bits` is position i of the vector; bits above `len` stay zero.
class BitVector {
  public:
    BitVector() = default;

    BitVector(std::uint64_t bits, int len) : bits_(bits), len_(len) {
        if (len < 1 || len > 64) throw contract_error("BitVector: length must be in [1,64]");
        bits_ &= mask(len);
    }

    static BitVector zeros(int len) { return BitVector(0, len); }

    static BitVector ones(int len) { return BitVector(~std::uint64_t{0}, len); }

    // Parses a string of '0'/'1'; character i is position i.
    static BitVector parse(const std::string& s) {
        if (s.empty() || s.size() > 64) throw contract_error("BitVector: bad literal length");
        std::uint64_t v = 0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '1')
                v |= std::uint64_t{1} << i;
            else if (s[i] != '0')
                throw contract_error("BitVector: literal must be '0'/'1'");
        }
        return BitVector(v, static_cast<int>(s.size()));
    }

    std::uint64_t bits() const { return bits_; }
    int len() const { return len_; }

    bool get(int i) const { return (bits_ >> i) & 1u; }

    void set(int i, bool v) {
        if (v)
            bits_ |= std::uint64_t{1} << i;
        else
            bits_ &= ~(std::uint64_t{1} << i);
    }

    int weight() const { return std::popcount(bits_); }

    BitVector operator^(const BitVector& o) const {
        if (o.len_ != len_) throw contract_error("BitVector: xor length mismatch");
        return BitVector(bits_ ^ o.bits_, len_);
    }

    bool operator==(const BitVector& o) const { return len_ == o.len_ && bits_ == o.bits_; }
    bool operator!=(const BitVector& o) const { return !(*this == o); }

    // First `l` positions as a shorter vector.
    BitVector prefix(int l) const {
        if (l < 1 || l > len_) throw contract_error("BitVector: bad prefix length");
        return BitVector(bits_ & mask(l), l);
    }

    // Key whose numeric order equals lexicographic order with bit 0 most
    // significant (bit i maps to bit 63-i).
    std::uint64_t lex_key() const { return rev64(bits_); }

    // Lexicographically smaller, treating bit 0 as most significant.
    bool lex_less(const BitVector& o) const { return lex_key() < o.lex_key(); }

    std::string str() const {
        std::string s(static_cast<std::size_t>(len_), '0');
        for (int i = 0; i < len_; ++i)
            if (get(i)) s[static_cast<std::size_t>(i)] = '1';
        return s;
    }

    static std::uint64_t mask(int len) {
        return len >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << len) - 1;
    }

  private:
    static std::uint64_t rev64(std::uint64_t v) {
        v = ((v >> 1) & 0x5555555555555555ull) | ((v & 0x5555555555555555ull) << 1);
        v = ((v >> 2) & 0x3333333333333333ull) | ((v & 0x3333333333333333ull) << 2);
        v = ((v >> 4) & 0x0f0f0f0f0f0f0f0full) | ((v & 0x0f0f0f0f0f0f0f0full) << 4);
        v = ((v >> 8) & 0x00ff00ff00ff00ffull) | ((v & 0x00ff00ff00ff00ffull) << 8);
        v = ((v >> 16) & 0x0000ffff0000ffffull) | ((v & 0x0000ffff0000ffffull) << 16);
        return (v >> 32) | (v << 32);
    }

    std::uint64_t bits_ = 0;
    int len_ = 1;
};

// (weight, lexicographic) total order on same-length words; the canonical
// representative of any set is its unique minimum under this order.
inline bool weight_lex_less(const BitVector& a, const BitVector& b) {
    int wa = a.weight(), wb = b.weight();
    if (wa != wb) return wa < wb;
    return a.lex_key() < b.lex_key();
}

}  // namespace dht
