#pragma once

#include <array>
#include <cstdint>

namespace dht {

// Exact binomial coefficients up to n = 64 (Pascal's triangle; every entry
// fits in 64 bits since C(64,32) < 2^61).
class BinomialTable {
  public:
    static const BinomialTable& instance() {
        static const BinomialTable t;
        return t;
    }

    std::uint64_t operator()(int n, int k) const {
        if (k < 0 || k > n || n < 0) return 0;
        return c_[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
    }

  private:
    BinomialTable() {
        for (int n = 0; n <= 64; ++n) {
            c_[static_cast<std::size_t>(n)][0] = 1;
            for (int k = 1; k <= n; ++k)
                c_[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)] =
                    c_[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(k - 1)] +
                    (k <= n - 1 ? c_[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(k)] : 0);
        }
    }

    std::array<std::array<std::uint64_t, 65>, 65> c_{};
};

inline std::uint64_t binomial(int n, int k) { return BinomialTable::instance()(n, k); }

}  // namespace dht
