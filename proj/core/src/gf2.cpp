#include "dht/gf2.hpp"

#include <bit>
#include <utility>

namespace dht {

namespace {

struct Rref {
    std::vector<std::uint64_t> rows;  // pivot rows first, in pivot-column order
    std::vector<int> pivot_cols;      // ascending
};

// Reduced row echelon form with column 0 treated as the leading position.
Rref rref(std::vector<std::uint64_t> rows, int cols) {
    Rref out;
    std::size_t next = 0;
    for (int c = 0; c < cols && next < rows.size(); ++c) {
        std::size_t pivot = next;
        while (pivot < rows.size() && !((rows[pivot] >> c) & 1u)) ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[next], rows[pivot]);
        for (std::size_t r = 0; r < rows.size(); ++r)
            if (r != next && ((rows[r] >> c) & 1u)) rows[r] ^= rows[next];
        out.pivot_cols.push_back(c);
        ++next;
    }
    rows.resize(next);
    out.rows = std::move(rows);
    return out;
}

std::vector<std::uint64_t> matrix_words(const Gf2Matrix& m) {
    std::vector<std::uint64_t> w(static_cast<std::size_t>(m.rows()));
    for (int r = 0; r < m.rows(); ++r) w[static_cast<std::size_t>(r)] = m.row_word(r);
    return w;
}

}  // namespace

BitVector mat_vec_mul(const Gf2Matrix& m, const BitVector& v) {
    if (v.len() != m.cols()) throw contract_error("mat_vec_mul: dimension mismatch");
    std::uint64_t out = 0;
    for (int r = 0; r < m.rows(); ++r)
        out |= static_cast<std::uint64_t>(std::popcount(m.row_word(r) & v.bits()) & 1) << r;
    // a 0-row matrix cannot be represented as a BitVector; callers guard this
    if (m.rows() == 0) throw contract_error("mat_vec_mul: empty matrix");
    return BitVector(out, m.rows());
}

int rank(const Gf2Matrix& m) {
    if (m.rows() == 0) return 0;
    return static_cast<int>(rref(matrix_words(m), m.cols()).rows.size());
}

std::optional<BitVector> solve_linear(const Gf2Matrix& m, const BitVector& b) {
    if (b.len() != m.rows()) throw contract_error("solve_linear: dimension mismatch");
    const int cols = m.cols();

    // Eliminate on [M | b], keeping the augmented bit per row separately.
    std::vector<std::uint64_t> rows = matrix_words(m);
    std::vector<std::uint8_t> aug(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) aug[r] = b.get(static_cast<int>(r)) ? 1 : 0;

    std::vector<int> pivot_cols;
    std::size_t next = 0;
    for (int c = 0; c < cols && next < rows.size(); ++c) {
        std::size_t pivot = next;
        while (pivot < rows.size() && !((rows[pivot] >> c) & 1u)) ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[next], rows[pivot]);
        std::swap(aug[next], aug[pivot]);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r != next && ((rows[r] >> c) & 1u)) {
                rows[r] ^= rows[next];
                aug[r] ^= aug[next];
            }
        }
        pivot_cols.push_back(c);
        ++next;
    }
    for (std::size_t r = next; r < rows.size(); ++r)
        if (aug[r]) return std::nullopt;

    // Particular solution with all free coordinates zero.
    std::uint64_t x = 0;
    for (std::size_t i = 0; i < pivot_cols.size(); ++i)
        if (aug[i]) x |= std::uint64_t{1} << pivot_cols[i];

    // Null-space basis, re-reduced so each vector has a distinct leading
    // position; greedily clearing low positions then yields the lex-min
    // solution (bit 0 most significant).
    std::vector<std::uint64_t> null_rows;
    {
        std::vector<bool> is_pivot(static_cast<std::size_t>(cols), false);
        for (int c : pivot_cols) is_pivot[static_cast<std::size_t>(c)] = true;
        for (int f = 0; f < cols; ++f) {
            if (is_pivot[static_cast<std::size_t>(f)]) continue;
            std::uint64_t v = std::uint64_t{1} << f;
            for (std::size_t i = 0; i < pivot_cols.size(); ++i)
                if ((rows[i] >> f) & 1u) v |= std::uint64_t{1} << pivot_cols[i];
            null_rows.push_back(v);
        }
        null_rows = rref(std::move(null_rows), cols).rows;
    }
    for (const std::uint64_t nv : null_rows) {
        const int lead = std::countr_zero(nv);
        if ((x >> lead) & 1u) x ^= nv;
    }
    return BitVector(x, cols);
}

Gf2Matrix null_space_basis(const Gf2Matrix& m) {
    const int cols = m.cols();
    const Rref red = rref(matrix_words(m), cols);

    std::vector<bool> is_pivot(static_cast<std::size_t>(cols), false);
    for (int c : red.pivot_cols) is_pivot[static_cast<std::size_t>(c)] = true;

    std::vector<std::uint64_t> basis;
    for (int f = 0; f < cols; ++f) {
        if (is_pivot[static_cast<std::size_t>(f)]) continue;
        std::uint64_t v = std::uint64_t{1} << f;
        for (std::size_t i = 0; i < red.pivot_cols.size(); ++i)
            if ((red.rows[i] >> f) & 1u) v |= std::uint64_t{1} << red.pivot_cols[i];
        basis.push_back(v);
    }
    return Gf2Matrix(std::move(basis), cols);
}

}  // namespace dht
