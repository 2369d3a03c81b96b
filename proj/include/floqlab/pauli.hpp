#pragma once
// n-qubit Pauli strings with exact phase bookkeeping.
//
// Storage convention: P = i^phase * (W_0 x W_1 x ... x W_{n-1}) where each
// W_q is the literal Pauli selected by the bit pair (x_q, z_q):
//   (0,0)=I  (1,0)=X  (0,1)=Z  (1,1)=Y.
// Hermitian operators have an even i-power; sign() is only defined for them.

#include <bit>
#include <cassert>
#include <cctype>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "floqlab/gf2.hpp"

namespace floqlab {

class PauliOperator {
public:
    PauliOperator() : n_(0), phase_(0) {}
    explicit PauliOperator(std::size_t n) : n_(n), phase_(0), x_(words_for(n), 0), z_(words_for(n), 0) {}

    static PauliOperator identity(std::size_t n) { return PauliOperator(n); }

    // Single-qubit X/Y/Z embedded in n qubits.
    static PauliOperator single(std::size_t n, std::size_t q, char axis) {
        PauliOperator p(n);
        switch (axis) {
            case 'X': p.set_x(q, true); break;
            case 'Y': p.set_x(q, true); p.set_z(q, true); break;
            case 'Z': p.set_z(q, true); break;
            default: assert(false && "axis must be X, Y or Z");
        }
        return p;
    }

    std::size_t num_qubits() const { return n_; }
    std::size_t num_words() const { return x_.size(); }

    bool x_bit(std::size_t q) const { return (x_[q / kWordBits] >> (q % kWordBits)) & 1u; }
    bool z_bit(std::size_t q) const { return (z_[q / kWordBits] >> (q % kWordBits)) & 1u; }
    void set_x(std::size_t q, bool v) { set_bit(x_, q, v); }
    void set_z(std::size_t q, bool v) { set_bit(z_, q, v); }

    unsigned phase_i() const { return phase_; }
    void set_phase_i(unsigned r) { phase_ = r & 3u; }
    bool is_hermitian() const { return (phase_ & 1u) == 0; }
    int sign() const {
        assert(is_hermitian());
        return phase_ == 0 ? 1 : -1;
    }
    void negate() { phase_ = (phase_ + 2u) & 3u; }

    bool is_identity() const {
        for (std::size_t w = 0; w < x_.size(); ++w)
            if (x_[w] | z_[w]) return false;
        return true;
    }

    std::size_t weight() const {
        std::size_t c = 0;
        for (std::size_t w = 0; w < x_.size(); ++w)
            c += static_cast<std::size_t>(std::popcount(x_[w] | z_[w]));
        return c;
    }

    bool commutes_with(const PauliOperator& o) const {
        assert(n_ == o.n_);
        Word acc = 0;
        for (std::size_t w = 0; w < x_.size(); ++w)
            acc ^= (x_[w] & o.z_[w]) ^ (z_[w] & o.x_[w]);
        return (std::popcount(acc) & 1) == 0;
    }

    // this <- this * o, with the i-power accumulated exactly.
    PauliOperator& operator*=(const PauliOperator& o) {
        assert(n_ == o.n_);
        int g = 0;  // net i-power from per-qubit W*W products
        for (std::size_t w = 0; w < x_.size(); ++w) {
            Word x1 = x_[w], z1 = z_[w], x2 = o.x_[w], z2 = o.z_[w];
            // +i on X*Y, Z*X, Y*Z; -i on X*Z, Z*Y, Y*X
            Word plus = (x1 & ~z1 & x2 & z2) | (~x1 & z1 & x2 & ~z2) | (x1 & z1 & ~x2 & z2);
            Word minus = (x1 & ~z1 & ~x2 & z2) | (~x1 & z1 & x2 & z2) | (x1 & z1 & x2 & ~z2);
            g += std::popcount(plus) - std::popcount(minus);
            x_[w] = x1 ^ x2;
            z_[w] = z1 ^ z2;
        }
        phase_ = static_cast<unsigned>((static_cast<int>(phase_) + static_cast<int>(o.phase_) + g) & 3);
        return *this;
    }

    friend PauliOperator operator*(PauliOperator a, const PauliOperator& b) {
        a *= b;
        return a;
    }

    bool equals_up_to_sign(const PauliOperator& o) const {
        return n_ == o.n_ && x_ == o.x_ && z_ == o.z_;
    }
    bool operator==(const PauliOperator& o) const {
        return equals_up_to_sign(o) && phase_ == o.phase_;
    }

    // Same operator on a wider register; the new qubits carry identity.
    PauliOperator widened(std::size_t n) const {
        assert(n >= n_);
        PauliOperator p(n);
        for (std::size_t w = 0; w < x_.size(); ++w) {
            p.x_[w] = x_[w];
            p.z_[w] = z_[w];
        }
        p.phase_ = phase_;
        return p;
    }

    // Restriction onto a qubit subset, reindexed to the subset order.
    // The phase is kept; callers decide whether that is meaningful.
    PauliOperator restricted(const std::vector<std::uint32_t>& qubits) const {
        PauliOperator r(qubits.size());
        for (std::size_t k = 0; k < qubits.size(); ++k) {
            r.set_x(k, x_bit(qubits[k]));
            r.set_z(k, z_bit(qubits[k]));
        }
        r.phase_ = phase_;
        return r;
    }

    // Symplectic bits (x then z) packed into one vector of 2n bits.
    BitVec symplectic_bits() const {
        BitVec v(2 * n_);
        for (std::size_t q = 0; q < n_; ++q) {
            if (x_bit(q)) v.set(q, true);
            if (z_bit(q)) v.set(n_ + q, true);
        }
        return v;
    }

    // "+X0Y3Z5" rendering; identity prints as "+I".
    std::string to_text() const {
        assert(is_hermitian());
        std::string s(sign() > 0 ? "+" : "-");
        bool empty = true;
        for (std::size_t q = 0; q < n_; ++q) {
            bool x = x_bit(q), z = z_bit(q);
            if (!x && !z) continue;
            s += x ? (z ? 'Y' : 'X') : 'Z';
            s += std::to_string(q);
            empty = false;
        }
        if (empty) s += 'I';
        return s;
    }

    static std::optional<PauliOperator> parse(std::string_view text, std::size_t n) {
        PauliOperator p(n);
        std::size_t i = 0;
        bool negative = false;
        if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
            negative = text[i] == '-';
            ++i;
        }
        if (i < text.size() && text[i] == 'I' && i + 1 == text.size()) {
            if (negative) p.negate();
            return p;
        }
        while (i < text.size()) {
            char axis = text[i];
            if (axis != 'X' && axis != 'Y' && axis != 'Z') return std::nullopt;
            ++i;
            std::size_t start = i;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
            if (start == i) return std::nullopt;
            std::size_t q = std::stoull(std::string(text.substr(start, i - start)));
            if (q >= n) return std::nullopt;
            if (p.x_bit(q) || p.z_bit(q)) return std::nullopt;  // duplicate site
            if (axis != 'Z') p.set_x(q, true);
            if (axis != 'X') p.set_z(q, true);
        }
        if (negative) p.negate();
        return p;
    }

    std::vector<Word>& xw() { return x_; }
    std::vector<Word>& zw() { return z_; }
    const std::vector<Word>& xw() const { return x_; }
    const std::vector<Word>& zw() const { return z_; }

private:
    static void set_bit(std::vector<Word>& v, std::size_t i, bool b) {
        Word m = Word{1} << (i % kWordBits);
        if (b) v[i / kWordBits] |= m; else v[i / kWordBits] &= ~m;
    }

    std::size_t n_;
    unsigned phase_;  // power of i, 0..3
    std::vector<Word> x_, z_;
};

// In-place conjugation P -> U P U^dag by elementary Cliffords, with the same
// sign rules the tableau uses on its rows.

inline void conj_h(PauliOperator& p, std::size_t q) {
    bool x = p.x_bit(q), z = p.z_bit(q);
    if (x && z) p.set_phase_i(p.phase_i() + 2);
    p.set_x(q, z);
    p.set_z(q, x);
}

inline void conj_s(PauliOperator& p, std::size_t q) {
    bool x = p.x_bit(q), z = p.z_bit(q);
    if (x && z) p.set_phase_i(p.phase_i() + 2);
    p.set_z(q, z ^ x);
}

inline void conj_sdg(PauliOperator& p, std::size_t q) {
    bool x = p.x_bit(q), z = p.z_bit(q);
    if (x && !z) p.set_phase_i(p.phase_i() + 2);
    p.set_z(q, z ^ x);
}

inline void conj_cx(PauliOperator& p, std::size_t a, std::size_t b) {
    bool xa = p.x_bit(a), za = p.z_bit(a);
    bool xb = p.x_bit(b), zb = p.z_bit(b);
    if (xa && zb && !(xb ^ za)) p.set_phase_i(p.phase_i() + 2);
    p.set_x(b, xb ^ xa);
    p.set_z(a, za ^ zb);
}

}  // namespace floqlab
