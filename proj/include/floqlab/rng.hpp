#pragma once
// Counter-based RNG (Philox4x32-10). Every realization gets its own stream
// keyed by (master seed, stream index), so results do not depend on how work
// is scheduled across threads.

#include <cstdint>
#include <cmath>

namespace floqlab {

struct Philox4x32 {
    // Raw block function; verified against the reference test vectors.
    static void block(const std::uint32_t ctr_in[4], const std::uint32_t key_in[2],
                      std::uint32_t out[4]) {
        constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
        constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
        std::uint32_t c0 = ctr_in[0], c1 = ctr_in[1], c2 = ctr_in[2], c3 = ctr_in[3];
        std::uint32_t k0 = key_in[0], k1 = key_in[1];
        for (int round = 0; round < 10; ++round) {
            std::uint64_t p0 = static_cast<std::uint64_t>(M0) * c0;
            std::uint64_t p1 = static_cast<std::uint64_t>(M1) * c2;
            std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
            std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
            std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
            std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
            c0 = hi1 ^ c1 ^ k0;
            c1 = lo1;
            c2 = hi0 ^ c3 ^ k1;
            c3 = lo0;
            k0 += W0;
            k1 += W1;
        }
        out[0] = c0; out[1] = c1; out[2] = c2; out[3] = c3;
    }
};

class Rng {
public:
    Rng() : Rng(0, 0) {}
    Rng(std::uint64_t master_seed, std::uint64_t stream) {
        key_[0] = static_cast<std::uint32_t>(master_seed);
        key_[1] = static_cast<std::uint32_t>(master_seed >> 32);
        ctr_[0] = 0;
        ctr_[1] = 0;
        ctr_[2] = static_cast<std::uint32_t>(stream);
        ctr_[3] = static_cast<std::uint32_t>(stream >> 32);
        avail_ = 0;
    }

    std::uint32_t next_u32() {
        if (avail_ == 0) refill();
        return buf_[--avail_];
    }

    std::uint64_t next_u64() {
        std::uint64_t hi = next_u32();
        return (hi << 32) | next_u32();
    }

    // [0, 1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    int sign() { return (next_u32() & 1u) ? 1 : -1; }

    // Unbiased integer in [0, bound) via rejection.
    std::uint64_t below(std::uint64_t bound) {
        std::uint64_t mask = ~std::uint64_t{0};
        if (bound <= 1) return 0;
        unsigned bits = 64u - static_cast<unsigned>(__builtin_clzll(bound - 1));
        mask = (bits == 64) ? mask : ((std::uint64_t{1} << bits) - 1);
        for (;;) {
            std::uint64_t v = next_u64() & mask;
            if (v < bound) return v;
        }
    }

private:
    void refill() {
        std::uint32_t out[4];
        Philox4x32::block(ctr_, key_, out);
        buf_[0] = out[0]; buf_[1] = out[1]; buf_[2] = out[2]; buf_[3] = out[3];
        avail_ = 4;
        if (++ctr_[0] == 0) ++ctr_[1];  // 64-bit block counter in words 0..1
    }

    std::uint32_t key_[2];
    std::uint32_t ctr_[4];
    std::uint32_t buf_[4];
    int avail_;
};

}  // namespace floqlab
