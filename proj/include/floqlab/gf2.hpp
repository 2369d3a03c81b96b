#pragma once
// Packed GF(2) row vectors plus an incremental row-reduced span, used for
// stabilizer entropies and membership tests on commutation vectors.

#include <bit>
#include <cstdint>
#include <cstddef>
#include <vector>

namespace floqlab {

using Word = std::uint64_t;
inline constexpr std::size_t kWordBits = 64;

inline std::size_t words_for(std::size_t bits) { return (bits + kWordBits - 1) / kWordBits; }

class BitVec {
public:
    BitVec() : bits_(0) {}
    explicit BitVec(std::size_t bits) : bits_(bits), w_(words_for(bits), 0) {}

    std::size_t size() const { return bits_; }
    bool get(std::size_t i) const { return (w_[i / kWordBits] >> (i % kWordBits)) & 1u; }
    void set(std::size_t i, bool v) {
        Word m = Word{1} << (i % kWordBits);
        if (v) w_[i / kWordBits] |= m; else w_[i / kWordBits] &= ~m;
    }
    void flip(std::size_t i) { w_[i / kWordBits] ^= Word{1} << (i % kWordBits); }

    bool any() const {
        for (Word w : w_) if (w) return true;
        return false;
    }
    std::size_t popcount() const {
        std::size_t c = 0;
        for (Word w : w_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }
    void operator^=(const BitVec& o) {
        for (std::size_t i = 0; i < w_.size(); ++i) w_[i] ^= o.w_[i];
    }
    int lowest_set() const {
        for (std::size_t i = 0; i < w_.size(); ++i)
            if (w_[i]) return static_cast<int>(i * kWordBits + std::countr_zero(w_[i]));
        return -1;
    }
    bool operator==(const BitVec& o) const { return bits_ == o.bits_ && w_ == o.w_; }

    std::vector<Word>& words() { return w_; }
    const std::vector<Word>& words() const { return w_; }

private:
    std::size_t bits_;
    std::vector<Word> w_;
};

// Row-reduced basis of a GF(2) subspace; insertion keeps one pivot per row.
class Gf2Span {
public:
    explicit Gf2Span(std::size_t bits) : bits_(bits) {}

    std::size_t rank() const { return rows_.size(); }
    std::size_t dimension() const { return bits_; }

    // Reduce v against the basis in place; returns true if v ended up zero.
    bool reduce(BitVec& v) const {
        for (std::size_t i = 0; i < rows_.size(); ++i)
            if (v.get(static_cast<std::size_t>(pivots_[i]))) v ^= rows_[i];
        return !v.any();
    }

    bool contains(const BitVec& v) const {
        BitVec tmp = v;
        return reduce(tmp);
    }

    // Returns true if v enlarged the span.
    bool insert(BitVec v) {
        if (reduce(v)) return false;
        int p = v.lowest_set();
        for (auto& row : rows_)
            if (row.get(static_cast<std::size_t>(p))) row ^= v;
        rows_.push_back(std::move(v));
        pivots_.push_back(p);
        return true;
    }

private:
    std::size_t bits_;
    std::vector<BitVec> rows_;
    std::vector<int> pivots_;
};

// Rank of a list of packed rows, destructive Gaussian elimination.
inline std::size_t gf2_rank(std::vector<BitVec> rows) {
    std::size_t rank = 0;
    std::size_t m = rows.size();
    for (std::size_t col_row = 0; col_row < m; ++col_row) {
        int p = rows[col_row].lowest_set();
        if (p < 0) continue;
        ++rank;
        for (std::size_t r = col_row + 1; r < m; ++r)
            if (rows[r].get(static_cast<std::size_t>(p))) rows[r] ^= rows[col_row];
    }
    return rank;
}

}  // namespace floqlab
