#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dht/bitvec.hpp"

namespace dht {

// Dense GF(2) matrix with up to 64 columns; each row is one packed word.
// Dimensions are fixed at construction.
class Gf2Matrix {
  public:
    Gf2Matrix(int rows, int cols) : rows_(rows), cols_(cols), words_(static_cast<std::size_t>(rows), 0) {
        if (rows < 0 || cols < 1 || cols > 64) throw contract_error("Gf2Matrix: bad dimensions");
    }

    Gf2Matrix(std::vector<std::uint64_t> row_words, int cols)
        : rows_(static_cast<int>(row_words.size())), cols_(cols), words_(std::move(row_words)) {
        if (cols < 1 || cols > 64) throw contract_error("Gf2Matrix: bad dimensions");
        for (auto& w : words_) w &= BitVector::mask(cols);
    }

    static Gf2Matrix identity(int n) {
        Gf2Matrix m(n, n);
        for (int i = 0; i < n; ++i) m.words_[static_cast<std::size_t>(i)] = std::uint64_t{1} << i;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    std::uint64_t row_word(int r) const { return words_[static_cast<std::size_t>(r)]; }
    BitVector row(int r) const { return BitVector(words_[static_cast<std::size_t>(r)], cols_); }

    bool get(int r, int c) const { return (words_[static_cast<std::size_t>(r)] >> c) & 1u; }
    void set(int r, int c, bool v) {
        auto& w = words_[static_cast<std::size_t>(r)];
        if (v)
            w |= std::uint64_t{1} << c;
        else
            w &= ~(std::uint64_t{1} << c);
    }

    void set_row(int r, std::uint64_t word) {
        words_[static_cast<std::size_t>(r)] = word & BitVector::mask(cols_);
    }

    bool operator==(const Gf2Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && words_ == o.words_;
    }

  private:
    int rows_;
    int cols_;
    std::vector<std::uint64_t> words_;
};

// y = M*v over GF(2); y_i is the parity of row_i AND v.
BitVector mat_vec_mul(const Gf2Matrix& m, const BitVector& v);

int rank(const Gf2Matrix& m);

// Solves M*v = b. Returns the lexicographically smallest solution (bit 0
// most significant), or nullopt when the system is inconsistent.
std::optional<BitVector> solve_linear(const Gf2Matrix& m, const BitVector& b);

// Rows span the null space {v : M*v = 0}; row count = cols - rank(M).
Gf2Matrix null_space_basis(const Gf2Matrix& m);

}  // namespace dht
