#pragma once
// CHP-style destabilizer/stabilizer tableau over bit-packed rows.
//
// Rows 0..n-1 hold destabilizers, rows n..2n-1 stabilizers. Each row is a
// Pauli in the same i-power convention as PauliOperator. Measurements accept
// arbitrary Pauli strings, not just single-qubit Z.

#include <array>
#include <cassert>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "floqlab/gf2.hpp"
#include "floqlab/pauli.hpp"
#include "floqlab/rng.hpp"

namespace floqlab {

enum class Gate { H, S, CX, CY, CZ };

// A uniformly sampled 4-qubit Clifford, stored as the images of X_j / Z_j
// (4-bit x/z masks plus a sign) under conjugation.
struct Clifford4 {
    std::array<std::uint8_t, 8> im_x{};  // index 2j: image of X_j, 2j+1: image of Z_j
    std::array<std::uint8_t, 8> im_z{};
    std::array<std::uint8_t, 8> im_ph{};  // 0 or 2
};

namespace detail {

inline bool sym4(unsigned ax, unsigned az, unsigned bx, unsigned bz) {
    return (std::popcount((ax & bz) ^ (az & bx)) & 1) != 0;
}

struct P4 {
    unsigned x = 0, z = 0, ph = 0;
    void mul(unsigned bx, unsigned bz, unsigned bph) {
        unsigned plus = (x & ~z & bx & bz) | (~x & z & bx & ~bz) | (x & z & ~bx & bz);
        unsigned minus = (x & ~z & ~bx & bz) | (~x & z & bx & bz) | (x & z & bx & ~bz);
        int g = std::popcount(plus & 0xFu) - std::popcount(minus & 0xFu);
        ph = static_cast<unsigned>((static_cast<int>(ph + bph) + g + 8) & 3);
        x ^= bx;
        z ^= bz;
    }
};

}  // namespace detail

inline Clifford4 random_clifford_4q(Rng& rng) {
    Clifford4 c;
    auto ok_with_previous = [&](unsigned j, unsigned vx, unsigned vz) {
        for (unsigned k = 0; k < j; ++k) {
            if (detail::sym4(vx, vz, c.im_x[k], c.im_z[k])) return false;
        }
        return true;
    };
    for (unsigned j = 0; j < 4; ++j) {
        for (;;) {  // image of X_j: commutes with all previous images
            unsigned v = rng.next_u32() & 0xFFu;
            unsigned vx = v & 0xFu, vz = v >> 4;
            if ((vx | vz) == 0) continue;
            if (!ok_with_previous(2 * j, vx, vz)) continue;
            c.im_x[2 * j] = static_cast<std::uint8_t>(vx);
            c.im_z[2 * j] = static_cast<std::uint8_t>(vz);
            break;
        }
        for (;;) {  // image of Z_j: also anticommutes with the X_j image
            unsigned v = rng.next_u32() & 0xFFu;
            unsigned vx = v & 0xFu, vz = v >> 4;
            if ((vx | vz) == 0) continue;
            if (!ok_with_previous(2 * j, vx, vz)) continue;
            if (!detail::sym4(vx, vz, c.im_x[2 * j], c.im_z[2 * j])) continue;
            c.im_x[2 * j + 1] = static_cast<std::uint8_t>(vx);
            c.im_z[2 * j + 1] = static_cast<std::uint8_t>(vz);
            break;
        }
    }
    for (int k = 0; k < 8; ++k) c.im_ph[k] = rng.bernoulli(0.5) ? 2 : 0;
    return c;
}

class StabilizerState {
public:
    explicit StabilizerState(std::size_t n)
        : n_(n), w_(words_for(n)), x_(2 * n * w_, 0), z_(2 * n * w_, 0), ph_(2 * n, 0) {
        for (std::size_t i = 0; i < n_; ++i) {
            set_bit(x_, i, i);          // destabilizer X_i
            set_bit(z_, n_ + i, i);     // stabilizer Z_i
        }
    }

    static StabilizerState new_zero_state(std::size_t n) { return StabilizerState(n); }

    std::size_t num_qubits() const { return n_; }

    // --- gates ----------------------------------------------------------

    void h(std::size_t q) {
        const std::size_t wq = q / kWordBits;
        const Word m = Word{1} << (q % kWordBits);
        for (std::size_t r = 0; r < 2 * n_; ++r) {
            Word& xw = x_[r * w_ + wq];
            Word& zw = z_[r * w_ + wq];
            Word xv = xw & m, zv = zw & m;
            if (xv && zv) ph_[r] = (ph_[r] + 2) & 3;  // Y -> -Y
            xw ^= xv ^ zv;
            zw ^= xv ^ zv;
        }
    }

    void s(std::size_t q) {
        const std::size_t wq = q / kWordBits;
        const Word m = Word{1} << (q % kWordBits);
        for (std::size_t r = 0; r < 2 * n_; ++r) {
            Word xv = x_[r * w_ + wq] & m;
            Word& zw = z_[r * w_ + wq];
            if (xv && (zw & m)) ph_[r] = (ph_[r] + 2) & 3;  // Y -> -X
            zw ^= xv;
        }
    }

    void sdg(std::size_t q) {
        const std::size_t wq = q / kWordBits;
        const Word m = Word{1} << (q % kWordBits);
        for (std::size_t r = 0; r < 2 * n_; ++r) {
            Word xv = x_[r * w_ + wq] & m;
            Word& zw = z_[r * w_ + wq];
            if (xv && !(zw & m)) ph_[r] = (ph_[r] + 2) & 3;  // X -> -Y
            zw ^= xv;
        }
    }

    void cx(std::size_t a, std::size_t b) {
        const std::size_t wa = a / kWordBits, wb = b / kWordBits;
        const Word ma = Word{1} << (a % kWordBits), mb = Word{1} << (b % kWordBits);
        for (std::size_t r = 0; r < 2 * n_; ++r) {
            bool xa = x_[r * w_ + wa] & ma, za = z_[r * w_ + wa] & ma;
            bool xb = x_[r * w_ + wb] & mb, zb = z_[r * w_ + wb] & mb;
            if (xa && zb && !(xb ^ za)) ph_[r] = (ph_[r] + 2) & 3;
            if (xa) x_[r * w_ + wb] ^= mb;
            if (zb) z_[r * w_ + wa] ^= ma;
        }
    }

    void cz(std::size_t a, std::size_t b) {
        const std::size_t wa = a / kWordBits, wb = b / kWordBits;
        const Word ma = Word{1} << (a % kWordBits), mb = Word{1} << (b % kWordBits);
        for (std::size_t r = 0; r < 2 * n_; ++r) {
            bool xa = x_[r * w_ + wa] & ma, za = z_[r * w_ + wa] & ma;
            bool xb = x_[r * w_ + wb] & mb, zb = z_[r * w_ + wb] & mb;
            if (xa && xb && (za ^ zb)) ph_[r] = (ph_[r] + 2) & 3;
            if (xb) z_[r * w_ + wa] ^= ma;
            if (xa) z_[r * w_ + wb] ^= mb;
        }
    }

    void cy(std::size_t a, std::size_t b) {
        sdg(b);
        cx(a, b);
        s(b);
    }

    void apply_clifford(Gate g, const std::vector<std::size_t>& targets) {
        switch (g) {
            case Gate::H: assert(targets.size() == 1); h(targets[0]); return;
            case Gate::S: assert(targets.size() == 1); s(targets[0]); return;
            case Gate::CX: assert(targets.size() == 2); cx(targets[0], targets[1]); return;
            case Gate::CY: assert(targets.size() == 2); cy(targets[0], targets[1]); return;
            case Gate::CZ: assert(targets.size() == 2); cz(targets[0], targets[1]); return;
        }
    }

    // --- measurement ----------------------------------------------------

    // Full measurement: collapses when indeterminate, returns the +/-1 outcome.
    int measure(const PauliOperator& p, Rng& rng) {
        auto sup = support_words(p);
        int pivot = find_pivot(p, sup);
        if (pivot < 0) return deterministic_sign(p, sup);
        int outcome = rng.sign();
        collapse_on(p, sup, static_cast<std::size_t>(pivot), outcome);
        return outcome;
    }

    // Collapse without evaluating deterministic outcomes. Returns the fresh
    // +/-1 outcome, or 0 when the outcome was already determined (state is
    // untouched in that case). The cheap path for measurement schedules that
    // never look at outcome values.
    int collapse(const PauliOperator& p, Rng& rng) {
        auto sup = support_words(p);
        int pivot = find_pivot(p, sup);
        if (pivot < 0) return 0;
        int outcome = rng.sign();
        collapse_on(p, sup, static_cast<std::size_t>(pivot), outcome);
        return outcome;
    }

    // <P> for stabilizer states: +1, -1, or 0 when indeterminate.
    int expectation(const PauliOperator& p) const {
        auto sup = support_words(p);
        if (find_pivot(p, sup) >= 0) return 0;
        return deterministic_sign(p, sup);
    }

    bool is_deterministic(const PauliOperator& p) const {
        auto sup = support_words(p);
        return find_pivot(p, sup) < 0;
    }

    // Bit i set iff p anticommutes with stabilizer row i.
    BitVec commutation_vector(const PauliOperator& p) const {
        auto sup = support_words(p);
        BitVec v(n_);
        for (std::size_t i = 0; i < n_; ++i)
            if (anticommutes(n_ + i, p, sup)) v.set(i, true);
        return v;
    }

    // --- derived quantities --------------------------------------------

    // Entanglement entropy of `region` in bits:
    // rank over GF(2) of the stabilizer rows restricted to the region, minus
    // the region size.
    std::size_t entropy(const std::vector<std::uint32_t>& region) const {
        const std::size_t k = region.size();
        std::vector<BitVec> rows;
        rows.reserve(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            BitVec v(2 * k);
            bool any = false;
            for (std::size_t c = 0; c < k; ++c) {
                std::size_t q = region[c];
                if (row_x(n_ + i, q)) { v.set(c, true); any = true; }
                if (row_z(n_ + i, q)) { v.set(k + c, true); any = true; }
            }
            if (any) rows.push_back(std::move(v));
        }
        std::size_t rank = gf2_rank(std::move(rows));
        assert(rank >= k);
        return rank - k;
    }

    PauliOperator stabilizer(std::size_t i) const { return extract_row(n_ + i); }
    PauliOperator destabilizer(std::size_t i) const { return extract_row(i); }

    // --- random 4-qubit Clifford ---------------------------------------

    void apply_clifford4(const Clifford4& c, const std::array<std::size_t, 4>& t) {
        for (std::size_t r = 0; r < 2 * n_; ++r) {
            unsigned tx = 0, tz = 0;
            for (unsigned j = 0; j < 4; ++j) {
                if (row_x(r, t[j])) tx |= 1u << j;
                if (row_z(r, t[j])) tz |= 1u << j;
            }
            if ((tx | tz) == 0) continue;
            detail::P4 rep;
            for (unsigned j = 0; j < 4; ++j) {
                if (tx & (1u << j)) rep.mul(c.im_x[2 * j], c.im_z[2 * j], c.im_ph[2 * j]);
                if (tz & (1u << j)) rep.mul(c.im_x[2 * j + 1], c.im_z[2 * j + 1], c.im_ph[2 * j + 1]);
            }
            unsigned y_t = static_cast<unsigned>(std::popcount(tx & tz));
            ph_[r] = static_cast<std::uint8_t>((ph_[r] + y_t + rep.ph) & 3);
            for (unsigned j = 0; j < 4; ++j) {
                set_row_bit(x_, r, t[j], (rep.x >> j) & 1u);
                set_row_bit(z_, r, t[j], (rep.z >> j) & 1u);
            }
        }
    }

    void scramble_4q(Rng& rng) {  // one uniformly random 4-qubit Clifford on random distinct sites
        assert(n_ >= 4);
        std::array<std::size_t, 4> t;
        for (int j = 0; j < 4;) {
            std::size_t q = rng.below(n_);
            bool dup = false;
            for (int k = 0; k < j; ++k) dup = dup || t[k] == q;
            if (!dup) t[j++] = q;
        }
        apply_clifford4(random_clifford_4q(rng), t);
    }

    // --- diagnostics ----------------------------------------------------

    // Expensive; meant for tests.
    void check_invariants() const {
        for (std::size_t r = 0; r < 2 * n_; ++r)
            if (ph_[r] & 1) throw std::logic_error("non-hermitian tableau row");
        for (std::size_t i = 0; i < n_; ++i) {
            PauliOperator di = destabilizer(i);
            for (std::size_t j = 0; j < n_; ++j) {
                PauliOperator sj = stabilizer(j);
                bool anti = !di.commutes_with(sj);
                if (anti != (i == j)) throw std::logic_error("broken destabilizer pairing");
                if (i < j) {
                    if (!stabilizer(i).commutes_with(sj))
                        throw std::logic_error("stabilizers do not commute");
                    if (!di.commutes_with(destabilizer(j)))
                        throw std::logic_error("destabilizers do not commute");
                }
            }
        }
    }

private:
    // Word indices where p has support.
    static std::vector<std::uint32_t> support_words(const PauliOperator& p) {
        std::vector<std::uint32_t> sup;
        const auto& px = p.xw();
        const auto& pz = p.zw();
        for (std::size_t w = 0; w < px.size(); ++w)
            if (px[w] | pz[w]) sup.push_back(static_cast<std::uint32_t>(w));
        return sup;
    }

    bool anticommutes(std::size_t r, const PauliOperator& p, const std::vector<std::uint32_t>& sup) const {
        Word acc = 0;
        const Word* rx = &x_[r * w_];
        const Word* rz = &z_[r * w_];
        const auto& px = p.xw();
        const auto& pz = p.zw();
        for (std::uint32_t w : sup) acc ^= (rx[w] & pz[w]) ^ (rz[w] & px[w]);
        return (std::popcount(acc) & 1) != 0;
    }

    int find_pivot(const PauliOperator& p, const std::vector<std::uint32_t>& sup) const {
        for (std::size_t i = 0; i < n_; ++i)
            if (anticommutes(n_ + i, p, sup)) return static_cast<int>(i);
        return -1;
    }

    // dst <- dst * src with exact phase accumulation.
    void rowmult(std::size_t dst, std::size_t src) {
        Word* dx = &x_[dst * w_];
        Word* dz = &z_[dst * w_];
        const Word* sx = &x_[src * w_];
        const Word* sz = &z_[src * w_];
        int g = 0;
        for (std::size_t w = 0; w < w_; ++w) {
            Word x1 = dx[w], z1 = dz[w], x2 = sx[w], z2 = sz[w];
            Word plus = (x1 & ~z1 & x2 & z2) | (~x1 & z1 & x2 & ~z2) | (x1 & z1 & ~x2 & z2);
            Word minus = (x1 & ~z1 & ~x2 & z2) | (~x1 & z1 & x2 & z2) | (x1 & z1 & x2 & ~z2);
            g += std::popcount(plus) - std::popcount(minus);
            dx[w] = x1 ^ x2;
            dz[w] = z1 ^ z2;
        }
        ph_[dst] = static_cast<std::uint8_t>((static_cast<int>(ph_[dst]) + ph_[src] + g + 1024) & 3);
    }

    void collapse_on(const PauliOperator& p, const std::vector<std::uint32_t>& sup,
                     std::size_t pivot, int outcome) {
        const std::size_t ps = n_ + pivot;
        for (std::size_t r = 0; r < 2 * n_; ++r) {
            if (r == ps || r == pivot) continue;
            if (anticommutes(r, p, sup)) rowmult(r, ps);
        }
        copy_row(pivot, ps);           // destabilizer_k <- old stabilizer_k
        write_row(ps, p);              // stabilizer_k <- outcome * p
        if (outcome < 0) ph_[ps] = (ph_[ps] + 2) & 3;
    }

    int deterministic_sign(const PauliOperator& p, const std::vector<std::uint32_t>& sup) const {
        PauliOperator acc = PauliOperator::identity(n_);
        for (std::size_t i = 0; i < n_; ++i)
            if (anticommutes(i, p, sup)) acc *= extract_row(n_ + i);
        assert(acc.equals_up_to_sign(p) && "operator is not in the stabilizer group");
        unsigned d = (acc.phase_i() - p.phase_i()) & 3u;
        assert((d & 1u) == 0);
        return d == 0 ? 1 : -1;
    }

    PauliOperator extract_row(std::size_t r) const {
        PauliOperator p(n_);
        for (std::size_t w = 0; w < w_; ++w) {
            p.xw()[w] = x_[r * w_ + w];
            p.zw()[w] = z_[r * w_ + w];
        }
        p.set_phase_i(ph_[r]);
        return p;
    }

    void write_row(std::size_t r, const PauliOperator& p) {
        for (std::size_t w = 0; w < w_; ++w) {
            x_[r * w_ + w] = p.xw()[w];
            z_[r * w_ + w] = p.zw()[w];
        }
        ph_[r] = static_cast<std::uint8_t>(p.phase_i());
    }

    void copy_row(std::size_t dst, std::size_t src) {
        for (std::size_t w = 0; w < w_; ++w) {
            x_[dst * w_ + w] = x_[src * w_ + w];
            z_[dst * w_ + w] = z_[src * w_ + w];
        }
        ph_[dst] = ph_[src];
    }

    bool row_x(std::size_t r, std::size_t q) const {
        return (x_[r * w_ + q / kWordBits] >> (q % kWordBits)) & 1u;
    }
    bool row_z(std::size_t r, std::size_t q) const {
        return (z_[r * w_ + q / kWordBits] >> (q % kWordBits)) & 1u;
    }
    void set_row_bit(std::vector<Word>& arr, std::size_t r, std::size_t q, bool v) {
        Word m = Word{1} << (q % kWordBits);
        Word& w = arr[r * w_ + q / kWordBits];
        if (v) w |= m; else w &= ~m;
    }
    void set_bit(std::vector<Word>& arr, std::size_t r, std::size_t q) {
        arr[r * w_ + q / kWordBits] |= Word{1} << (q % kWordBits);
    }

    std::size_t n_, w_;
    std::vector<Word> x_, z_;
    std::vector<std::uint8_t> ph_;
};

}  // namespace floqlab
