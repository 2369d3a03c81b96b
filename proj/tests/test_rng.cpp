#include <catch2/catch_amalgamated.hpp>

#include "floqlab/rng.hpp"

using namespace floqlab;

TEST_CASE("philox4x32-10 reference vectors") {
    // Vectors from the Random123 known-answer tables.
    std::uint32_t out[4];

    std::uint32_t c0[4] = {0, 0, 0, 0};
    std::uint32_t k0[2] = {0, 0};
    Philox4x32::block(c0, k0, out);
    CHECK(out[0] == 0x6627e8d5u);
    CHECK(out[1] == 0xe169c58du);
    CHECK(out[2] == 0xbc57ac4cu);
    CHECK(out[3] == 0x9b00dbd8u);

    std::uint32_t c1[4] = {0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu};
    std::uint32_t k1[2] = {0xffffffffu, 0xffffffffu};
    Philox4x32::block(c1, k1, out);
    CHECK(out[0] == 0x408f276du);
    CHECK(out[1] == 0x41c83b0eu);
    CHECK(out[2] == 0xa20bc7c6u);
    CHECK(out[3] == 0x6d5451fdu);

    std::uint32_t c2[4] = {0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u};
    std::uint32_t k2[2] = {0xa4093822u, 0x299f31d0u};
    Philox4x32::block(c2, k2, out);
    CHECK(out[0] == 0xd16cfe09u);
    CHECK(out[1] == 0x94fdccebu);
    CHECK(out[2] == 0x5001e420u);
    CHECK(out[3] == 0x24126ea1u);
}

TEST_CASE("streams are reproducible and distinct") {
    Rng a(1234, 7), b(1234, 7), c(1234, 8);
    bool all_equal = true, any_equal_c = false;
    for (int i = 0; i < 100; ++i) {
        auto va = a.next_u64();
        auto vb = b.next_u64();
        auto vc = c.next_u64();
        all_equal = all_equal && (va == vb);
        any_equal_c = any_equal_c || (va == vc);
    }
    CHECK(all_equal);
    CHECK_FALSE(any_equal_c);
}

TEST_CASE("uniform doubles look uniform") {
    Rng r(42, 0);
    const int N = 200000;
    double sum = 0, sumsq = 0;
    for (int i = 0; i < N; ++i) {
        double u = r.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
        sumsq += u * u;
    }
    double mean = sum / N;
    double var = sumsq / N - mean * mean;
    CHECK(std::abs(mean - 0.5) < 0.005);
    CHECK(std::abs(var - 1.0 / 12.0) < 0.005);
}

TEST_CASE("below is unbiased for small bounds") {
    Rng r(99, 3);
    int counts[5] = {0, 0, 0, 0, 0};
    const int N = 100000;
    for (int i = 0; i < N; ++i) ++counts[r.below(5)];
    for (int k = 0; k < 5; ++k) CHECK(std::abs(counts[k] - N / 5) < 5 * std::sqrt(N / 5.0));
}
