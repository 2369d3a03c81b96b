#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "floqlab/lattice.hpp"
#include "floqlab/protocol.hpp"
#include "floqlab/rng.hpp"
#include "floqlab/tableau.hpp"

namespace floqlab {

// Mean and standard error per cycle over a set of realizations.
struct TimeSeries {
    std::vector<double> mean;
    std::vector<double> stderr_;

    int max_t() const { return static_cast<int>(mean.size()) - 1; }
};

template <typename Row>
TimeSeries aggregate_series(const std::vector<Row>& runs) {
    if (runs.empty()) throw std::invalid_argument("no realizations to aggregate");
    const std::size_t len = runs.front().size();
    for (const Row& r : runs)
        if (r.size() != len) throw std::invalid_argument("ragged realization series");
    TimeSeries out;
    out.mean.assign(len, 0.0);
    out.stderr_.assign(len, 0.0);
    const double n = static_cast<double>(runs.size());
    for (std::size_t t = 0; t < len; ++t) {
        double s = 0.0;
        for (const Row& r : runs) s += static_cast<double>(r[t]);
        const double m = s / n;
        out.mean[t] = m;
        if (runs.size() > 1) {
            double ss = 0.0;
            for (const Row& r : runs) {
                const double d = static_cast<double>(r[t]) - m;
                ss += d * d;
            }
            out.stderr_[t] = std::sqrt(ss / (n * (n - 1.0)));
        }
    }
    return out;
}

struct FourierComponents {
    double g0 = 0.0;
    double g_pi = 0.0;
};

// Static and period-two Fourier weights of G(t), summed over t = 0..T.
inline FourierComponents fourier_components(const TimeSeries& series) {
    const int T = series.max_t();
    if (T < 2) throw std::invalid_argument("series too short for Fourier components");
    FourierComponents f;
    for (int t = 0; t <= T; ++t) {
        f.g0 += series.mean[static_cast<std::size_t>(t)];
        f.g_pi += (t % 2 ? -1.0 : 1.0) * series.mean[static_cast<std::size_t>(t)];
    }
    f.g0 *= 2.0 / T;
    f.g_pi *= 2.0 / T;
    return f;
}

struct TeePartition {
    std::vector<std::uint32_t> a, b, c;

    void validate(std::size_t num_qubits) const {
        std::vector<std::uint8_t> seen(num_qubits, 0);
        std::size_t total = 0;
        for (const auto* r : {&a, &b, &c}) {
            for (std::uint32_t q : *r) {
                if (q >= num_qubits) throw std::invalid_argument("partition qubit out of range");
                if (seen[q]++) throw std::invalid_argument("overlapping partition regions");
                ++total;
            }
        }
        if (total >= num_qubits) throw std::invalid_argument("partition must leave a nonempty remainder");
    }
};

// Three quadrants of the torus, split at cell row/column h; cells carry both
// of their sites. The fourth quadrant is the traced-out remainder.
inline TeePartition quadrant_partition(const HoneycombLattice& lat, int h) {
    const int L = lat.period();
    if (h < 1 || h >= L) throw std::invalid_argument("quadrant split outside the lattice");
    TeePartition part;
    for (int i = 0; i < L; ++i)
        for (int j = 0; j < L; ++j) {
            std::vector<std::uint32_t>* region = nullptr;
            if (i < h && j < h) region = &part.a;
            else if (i >= h && j < h) region = &part.b;
            else if (i < h && j >= h) region = &part.c;
            else continue;
            const int cell = i * L + j;
            region->push_back(static_cast<std::uint32_t>(2 * cell));
            region->push_back(static_cast<std::uint32_t>(2 * cell + 1));
        }
    return part;
}

inline TeePartition default_partition(const HoneycombLattice& lat) {
    if (lat.period() % 2 != 0)
        throw std::invalid_argument("default partition needs an even period; pass a split explicitly");
    return quadrant_partition(lat, lat.period() / 2);
}

// Three parallel non-contiguous bands wrapping the torus, one cell column of
// separation between neighbors. Quadrant unions wrap the torus in one
// direction only, which lets the pinned logical pair shift the result when
// the loop configuration changes; with three separated bands every union
// wraps the same direction and the value is one in both the unperturbed
// configurations, independent of the exchange parity.
inline TeePartition band_partition(const HoneycombLattice& lat) {
    const int L = lat.period();
    const int w = L / 3 - 1;
    if (w < 1) throw std::invalid_argument("band partition needs a period of at least six");
    TeePartition part;
    auto add_band = [&](std::vector<std::uint32_t>& region, int j0) {
        for (int i = 0; i < L; ++i)
            for (int j = j0; j < j0 + w; ++j) {
                const int cell = i * L + j;
                region.push_back(static_cast<std::uint32_t>(2 * cell));
                region.push_back(static_cast<std::uint32_t>(2 * cell + 1));
            }
    };
    add_band(part.a, 0);
    add_band(part.b, L / 3);
    add_band(part.c, 2 * L / 3);
    return part;
}

// Tripartite entanglement entropy in units of log 2:
// S_A+S_B+S_C-S_AB-S_BC-S_AC+S_ABC, exact integer for stabilizer states.
inline int tee(const StabilizerState& st, const TeePartition& part) {
    part.validate(st.num_qubits());
    auto join = [](const std::vector<std::uint32_t>& u, const std::vector<std::uint32_t>& v) {
        std::vector<std::uint32_t> w(u);
        w.insert(w.end(), v.begin(), v.end());
        return w;
    };
    const auto ab = join(part.a, part.b);
    const long s_a = static_cast<long>(st.entropy(part.a));
    const long s_b = static_cast<long>(st.entropy(part.b));
    const long s_c = static_cast<long>(st.entropy(part.c));
    const long s_ab = static_cast<long>(st.entropy(ab));
    const long s_bc = static_cast<long>(st.entropy(join(part.b, part.c)));
    const long s_ac = static_cast<long>(st.entropy(join(part.a, part.c)));
    const long s_abc = static_cast<long>(st.entropy(join(ab, part.c)));
    return static_cast<int>(s_a + s_b + s_c - s_ab - s_bc - s_ac + s_abc);
}

struct DecayFit {
    double beta = 0.0;
    double beta_stderr = 0.0;
    int first_t = 0;      // earliest cycle pair used, as the even cycle index 2t
    int last_t = 0;
    int points = 0;
};

// Fit of G~(2t) = G(2t) + G(2t-1) to exp(-2 beta t) by least squares on the
// logarithm. The first four cycles are discarded as transient and the window
// ends at the first point that is nonpositive or below three standard errors.
inline std::optional<DecayFit> decay_rate(const TimeSeries& series) {
    const int T = series.max_t();
    if (T < 10) throw std::invalid_argument("series too short for a decay fit");
    std::vector<double> xs, ys;
    int first = 0, last = 0;
    for (int t = 3; 2 * t <= T; ++t) {
        const double g = series.mean[static_cast<std::size_t>(2 * t)] +
                         series.mean[static_cast<std::size_t>(2 * t - 1)];
        const double se = std::hypot(series.stderr_[static_cast<std::size_t>(2 * t)],
                                     series.stderr_[static_cast<std::size_t>(2 * t - 1)]);
        if (g <= 0.0 || g < 3.0 * se) break;
        if (xs.empty()) first = 2 * t;
        last = 2 * t;
        xs.push_back(2.0 * t);
        ys.push_back(std::log(g));
    }
    const std::size_t m = xs.size();
    if (m < 2) return std::nullopt;
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < m; ++i) {
        sx += xs[i];
        sy += ys[i];
    }
    const double mx = sx / static_cast<double>(m), my = sy / static_cast<double>(m);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < m; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    const double slope = sxy / sxx;
    DecayFit fit;
    fit.beta = -slope;
    fit.first_t = first;
    fit.last_t = last;
    fit.points = static_cast<int>(m);
    if (m > 2) {
        double rss = 0;
        for (std::size_t i = 0; i < m; ++i) {
            const double r = ys[i] - (my + slope * (xs[i] - mx));
            rss += r * r;
        }
        fit.beta_stderr = std::sqrt(rss / (static_cast<double>(m) - 2.0) / sxx);
    }
    return fit;
}

// Ancilla purification probe: scramble system plus ancillas with 8 L^3 random
// four-qubit Cliffords, then run the schedule and track the ancilla entropy
// after every cycle. Returns one series of length cycles+1 per realization.
inline std::vector<std::vector<std::size_t>> purification_run(const ProtocolConfig& cfg,
                                                              std::size_t ancillas = 10,
                                                              bool scramble = true) {
    cfg.validate();
    Protocol proto(HoneycombLattice(cfg.L), ancillas);
    const auto region = proto.ancilla_region();
    const long budget = 8L * cfg.L * cfg.L * cfg.L;
    std::vector<std::vector<std::size_t>> out;
    out.reserve(static_cast<std::size_t>(cfg.realizations));
    for (int r = 0; r < cfg.realizations; ++r) {
        Rng rng(cfg.seed, static_cast<std::uint64_t>(r));
        StabilizerState st(proto.num_qubits());
        if (scramble)
            for (long g = 0; g < budget; ++g) st.scramble_4q(rng);
        std::vector<std::size_t> series;
        series.reserve(static_cast<std::size_t>(cfg.cycles) + 1);
        series.push_back(st.entropy(region));
        for (int t = 1; t <= cfg.cycles; ++t) {
            proto.run_cycle(st, cfg, rng);
            series.push_back(st.entropy(region));
        }
        out.push_back(std::move(series));
    }
    return out;
}

}  // namespace floqlab
