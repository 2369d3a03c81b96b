#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>

#include <Eigen/Dense>

#include "floqlab/protocol.hpp"

// Six-configuration Markov description of the logical sector near the
// transition. Basis order: (m_x,m_z), (e_x,e_z), (m_x,e_x), (m_z,e_z),
// (f_x,f_z), (m_xz,e_xz). Columns are source configurations. Each cycle
// applies one of five channels: identity p1, e-m exchange p2, and the
// measurement of f_x, f_z, or f_xz with p3, p4, p5. A channel that leaves a
// configuration invariant contributes to its diagonal, as does the residual
// 1 - sum(p); measuring an f-string that anticommutes with both pinned
// logicals lands in the absorbing (f_x,f_z) configuration.

namespace floqlab::markov {

struct TransferMatrix {
    Eigen::Matrix<double, 6, 6> s;
    std::array<double, 5> p{};
};

inline TransferMatrix build(double p1, double p2, double p3, double p4, double p5) {
    const std::array<double, 5> p{p1, p2, p3, p4, p5};
    double sum = 0.0;
    for (double v : p) {
        if (v < 0.0 || v > 1.0) throw std::invalid_argument("channel probability outside [0,1]");
        sum += v;
    }
    if (sum > 1.0 + 1e-9) throw std::invalid_argument("channel probabilities exceed unit mass");
    const double r = std::max(0.0, 1.0 - sum);

    TransferMatrix m;
    m.p = p;
    m.s.setZero();
    // (m_x,m_z) and (e_x,e_z) swap under exchange and feed each f outcome.
    m.s(0, 0) = p1 + r; m.s(1, 0) = p2; m.s(2, 0) = p3; m.s(3, 0) = p4; m.s(5, 0) = p5;
    m.s(1, 1) = p1 + r; m.s(0, 1) = p2; m.s(2, 1) = p3; m.s(3, 1) = p4; m.s(5, 1) = p5;
    // (m_x,e_x): invariant under exchange and f_x; f_z or f_xz absorb.
    m.s(2, 2) = p1 + p2 + p3 + r; m.s(4, 2) = p4 + p5;
    // (m_z,e_z): mirror of the above.
    m.s(3, 3) = p1 + p2 + p4 + r; m.s(4, 3) = p3 + p5;
    // (f_x,f_z) is absorbing.
    m.s(4, 4) = 1.0;
    // (m_xz,e_xz): invariant under exchange and f_xz; f_x or f_z absorb.
    m.s(5, 5) = p1 + p2 + p5 + r; m.s(4, 5) = p3 + p4;
    return m;
}

inline double predict_G(const TransferMatrix& m, int t) {
    if (t < 0) throw std::invalid_argument("negative time");
    Eigen::Matrix<double, 6, 6> acc = Eigen::Matrix<double, 6, 6>::Identity();
    for (int k = 0; k < t; ++k) acc = m.s * acc;
    return acc(0, 0) + acc(2, 0);
}

// Sorted by modulus, ties toward the larger real part.
inline std::array<std::complex<double>, 6> eigenvalues(const TransferMatrix& m) {
    Eigen::EigenSolver<Eigen::Matrix<double, 6, 6>> solver(m.s);
    std::array<std::complex<double>, 6> ev;
    for (int k = 0; k < 6; ++k) ev[static_cast<std::size_t>(k)] = solver.eigenvalues()(k);
    std::sort(ev.begin(), ev.end(), [](const auto& a, const auto& b) {
        if (std::abs(std::abs(a) - std::abs(b)) > 1e-12) return std::abs(a) > std::abs(b);
        return a.real() > b.real();
    });
    return ev;
}

inline double decay_rate(const TransferMatrix& m) {
    return -std::log(std::abs(eigenvalues(m)[2]));
}

struct ChannelEstimate {
    std::array<double, 5> p{};
    std::array<double, 5> stderr_{};
    int samples = 0;
};

// Empirical channel frequencies over single cycles. The bulk returns to the
// steady code after every red round regardless of which links went missing,
// so re-pinning the two m-strings is enough to restart from the reference
// configuration without a fresh initialization.
inline ChannelEstimate estimate(const HoneycombLattice& lat, double p_m, int samples, Rng& rng) {
    if (samples < 1) throw std::invalid_argument("need at least one sample");
    Protocol proto(lat);
    auto st = proto.initialize(rng);
    const auto m_x = proto.string_op(StringKind::M, StringDir::X);
    const auto m_z = proto.string_op(StringKind::M, StringDir::Z);

    std::array<std::int64_t, 5> count{};
    for (int s = 0; s < samples; ++s) {
        st.collapse(m_x, rng);
        st.collapse(m_z, rng);
        const auto ch = proto.one_cycle_channel(st, p_m, rng);
        ++count[static_cast<std::size_t>(static_cast<int>(ch))];
    }

    ChannelEstimate out;
    out.samples = samples;
    for (std::size_t k = 0; k < 5; ++k) {
        const double f = static_cast<double>(count[k]) / samples;
        out.p[k] = f;
        out.stderr_[k] = std::sqrt(f * (1.0 - f) / samples);
    }
    return out;
}

}  // namespace floqlab::markov
