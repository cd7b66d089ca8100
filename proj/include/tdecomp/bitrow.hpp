#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace tdecomp {

/// Fixed-width bit vector packed into 64-bit words; a row of a GF(2) matrix.
class BitRow {
public:
    static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

    BitRow() = default;
    explicit BitRow(std::size_t bits) : bits_(bits), words_((bits + 63) / 64, 0) {}

    std::size_t size() const { return bits_; }

    bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }

    void set(std::size_t i, bool v) {
        std::uint64_t mask = std::uint64_t{1} << (i & 63);
        if (v)
            words_[i >> 6] |= mask;
        else
            words_[i >> 6] &= ~mask;
    }

    void xor_with(const BitRow& o) {
        for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= o.words_[w];
    }

    bool any() const {
        for (auto w : words_)
            if (w) return true;
        return false;
    }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : words_) c += std::popcount(w);
        return c;
    }

    /// Index of the lowest set bit, npos when zero.
    std::size_t first_set() const {
        for (std::size_t w = 0; w < words_.size(); ++w)
            if (words_[w]) return (w << 6) + std::countr_zero(words_[w]);
        return npos;
    }

    friend bool operator==(const BitRow& a, const BitRow& b) = default;

    /// Lexicographic with position 0 most significant, matching the order of
    /// the printed bit string.
    friend std::strong_ordering operator<=>(const BitRow& a, const BitRow& b) {
        if (auto c = a.bits_ <=> b.bits_; c != 0) return c;
        for (std::size_t w = 0; w < a.words_.size(); ++w) {
            if (a.words_[w] == b.words_[w]) continue;
            std::size_t d = std::countr_zero(a.words_[w] ^ b.words_[w]);
            return ((a.words_[w] >> d) & 1) ? std::strong_ordering::greater
                                            : std::strong_ordering::less;
        }
        return std::strong_ordering::equal;
    }

    std::size_t hash_value() const {
        std::size_t h = bits_ * 0x9e3779b97f4a7c15ull;
        for (auto w : words_) h = (h ^ w) * 0x100000001b3ull;
        return h;
    }

    std::string to_string() const {
        std::string s(bits_, '0');
        for (std::size_t i = 0; i < bits_; ++i)
            if (get(i)) s[i] = '1';
        return s;
    }

private:
    std::size_t bits_ = 0;
    std::vector<std::uint64_t> words_;
};

/// GF(2) rank by Gaussian elimination. Rows are taken by value, so the
/// caller's matrix is left untouched.
inline int rank_gf2(std::vector<BitRow> rows) {
    int rank = 0;
    std::vector<BitRow> pivots;
    std::vector<std::size_t> pivot_cols;
    for (auto& row : rows) {
        for (std::size_t p = 0; p < pivots.size(); ++p)
            if (row.get(pivot_cols[p])) row.xor_with(pivots[p]);
        std::size_t col = row.first_set();
        if (col == BitRow::npos) continue;
        pivots.push_back(row);
        pivot_cols.push_back(col);
        ++rank;
    }
    return rank;
}

}  // namespace tdecomp
