#pragma once

// Weight-ordered, lexicographic enumeration of error patterns with
// incremental syndromes. Shared by the syndrome-table builder and the
// on-demand bounded-weight ML search.
//
// Lexicographic order (bit 0 most significant) on n-bit patterns equals
// numeric order of their reversed "key" words, so enumeration runs in key
// space: key bit j corresponds to pattern position n-1-j, and weight-w keys
// are visited in ascending numeric order by choosing the top key bit
// outermost, ascending.

#include <algorithm>
#include <cstdint>
#include <vector>

namespace dht::detail {

struct KeyCols {
    int n = 0;
    // syndrome contribution of pattern position n-1-j, indexed by key bit j
    std::vector<std::uint64_t> syn;
    // pattern-space bit for key bit j
    std::vector<std::uint64_t> bit;
};

inline KeyCols make_key_cols(int n, const std::vector<std::uint64_t>& col_syndromes) {
    KeyCols kc;
    kc.n = n;
    kc.syn.resize(static_cast<std::size_t>(n));
    kc.bit.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        kc.syn[static_cast<std::size_t>(j)] = col_syndromes[static_cast<std::size_t>(n - 1 - j)];
        kc.bit[static_cast<std::size_t>(j)] = std::uint64_t{1} << (n - 1 - j);
    }
    return kc;
}

// Visits every weight-w pattern in lexicographic order; the visitor gets
// (pattern_bits, syndrome) and returns true to stop. Returns true if the
// visitor stopped the walk.
template <typename Visitor>
bool walk_weight_level(const KeyCols& kc, int w, Visitor&& visit) {
    if (w == 0) return visit(std::uint64_t{0}, std::uint64_t{0});
    struct Rec {
        const KeyCols& kc;
        Visitor& visit;
        bool run(int w, int limit, std::uint64_t syn, std::uint64_t pat) {
            if (w == 0) return visit(pat, syn);
            for (int b = w - 1; b < limit; ++b) {
                if (run(w - 1, b, syn ^ kc.syn[static_cast<std::size_t>(b)],
                        pat | kc.bit[static_cast<std::size_t>(b)]))
                    return true;
            }
            return false;
        }
    } rec{kc, visit};
    return rec.run(w, kc.n, 0, 0);
}

// Combined-syndrome tables for tails of 1, 2 and 3 key bits. The search
// recursion stops three levels early and resolves the remaining bits with
// one hash probe, which is what makes on-demand decoding of the longer
// codes practical. Tuples with equal syndrome sit contiguously, sorted by
// descending-bit tuple, i.e. ascending completion value.
class TailIndex {
  public:
    explicit TailIndex(const KeyCols& kc) : n_(kc.n) {
        for (int size = 1; size <= 3; ++size) tables_[size - 1].build(kc, size);
    }

    // Smallest (in lex order) choice of `size` distinct key bits below
    // `limit` whose syndromes XOR to `value`; fills `bits`, returns true
    // when one exists.
    bool lookup(int size, std::uint64_t value, int limit, std::uint64_t& bits) const {
        return tables_[size - 1].lookup(value, limit, bits);
    }

  private:
    struct Entry {
        std::uint64_t value;
        std::uint8_t b[3];  // key bits, descending; unused slots zero
    };

    struct Table {
        int size = 0;
        std::vector<Entry> entries;                  // sorted by (value, tuple)
        std::vector<std::uint32_t> slot_start;       // open-address hash: value -> entry range
        std::vector<std::uint32_t> slot_count;
        std::vector<std::uint64_t> slot_value;
        std::uint64_t mask = 0;
        const KeyCols* kc = nullptr;

        static std::uint64_t hash(std::uint64_t v) {
            v *= 0x9e3779b97f4a7c15ull;
            return v ^ (v >> 29);
        }

        void build(const KeyCols& cols, int size_) {
            size = size_;
            kc = &cols;
            const int n = cols.n;
            entries.clear();
            auto syn = [&cols](int j) { return cols.syn[static_cast<std::size_t>(j)]; };
            if (size == 1) {
                for (int a = 0; a < n; ++a)
                    entries.push_back({syn(a), {static_cast<std::uint8_t>(a), 0, 0}});
            } else if (size == 2) {
                for (int a = 1; a < n; ++a)
                    for (int b = 0; b < a; ++b)
                        entries.push_back({syn(a) ^ syn(b),
                                           {static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b), 0}});
            } else {
                for (int a = 2; a < n; ++a)
                    for (int b = 1; b < a; ++b)
                        for (int c = 0; c < b; ++c)
                            entries.push_back({syn(a) ^ syn(b) ^ syn(c),
                                               {static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b),
                                                static_cast<std::uint8_t>(c)}});
            }
            std::sort(entries.begin(), entries.end(), [](const Entry& x, const Entry& y) {
                if (x.value != y.value) return x.value < y.value;
                if (x.b[0] != y.b[0]) return x.b[0] < y.b[0];
                if (x.b[1] != y.b[1]) return x.b[1] < y.b[1];
                return x.b[2] < y.b[2];
            });
            std::size_t slots = 16;
            while (slots < entries.size() * 2) slots <<= 1;
            mask = slots - 1;
            slot_start.assign(slots, 0);
            slot_count.assign(slots, 0);
            slot_value.assign(slots, 0);
            for (std::size_t i = 0; i < entries.size();) {
                std::size_t j = i;
                while (j < entries.size() && entries[j].value == entries[i].value) ++j;
                std::uint64_t s = hash(entries[i].value) & mask;
                while (slot_count[s] != 0) s = (s + 1) & mask;
                slot_value[s] = entries[i].value;
                slot_start[s] = static_cast<std::uint32_t>(i);
                slot_count[s] = static_cast<std::uint32_t>(j - i);
                i = j;
            }
        }

        bool lookup(std::uint64_t value, int limit, std::uint64_t& bits) const {
            std::uint64_t s = hash(value) & mask;
            while (true) {
                if (slot_count[s] == 0) return false;
                if (slot_value[s] == value) break;
                s = (s + 1) & mask;
            }
            const std::uint32_t start = slot_start[s];
            const std::uint32_t count = slot_count[s];
            for (std::uint32_t i = start; i < start + count; ++i) {
                const Entry& e = entries[i];
                if (e.b[0] >= limit) return false;  // sorted: later entries only larger
                std::uint64_t p = 0;
                for (int t = 0; t < size; ++t) p |= kc->bit[e.b[t]];
                bits = p;
                return true;
            }
            return false;
        }
    };

    int n_;
    Table tables_[3];
};

// First weight-w pattern (in lexicographic order) whose syndrome equals
// `target`. Uses the tail index for the last min(w,3) levels.
inline bool find_at_weight(const KeyCols& kc, const TailIndex& idx, int w, std::uint64_t target,
                           std::uint64_t& out) {
    if (w == 0) {
        if (target == 0) {
            out = 0;
            return true;
        }
        return false;
    }
    if (w <= 3) return idx.lookup(w, target, kc.n, out);
    struct Rec {
        const KeyCols& kc;
        const TailIndex& idx;
        std::uint64_t target;
        std::uint64_t found = 0;
        bool run(int w, int limit, std::uint64_t syn, std::uint64_t pat) {
            if (w == 3) {
                std::uint64_t tail = 0;
                if (!idx.lookup(3, syn ^ target, limit, tail)) return false;
                found = pat | tail;
                return true;
            }
            for (int b = w - 1; b < limit; ++b) {
                if (run(w - 1, b, syn ^ kc.syn[static_cast<std::size_t>(b)],
                        pat | kc.bit[static_cast<std::size_t>(b)]))
                    return true;
            }
            return false;
        }
    } rec{kc, idx, target};
    if (rec.run(w, kc.n, 0, 0)) {
        out = rec.found;
        return true;
    }
    return false;
}

}  // namespace dht::detail
