#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "floqlab/lattice.hpp"
#include "floqlab/rng.hpp"

// Classical bond percolation companions to the measurement schedule. The
// kagome graph is the honeycomb with every red link contracted to a point;
// its bonds are the blue and green links, so a missing-link draw maps
// directly onto a bond configuration. The graph named hexagonal joins the
// hexagonal faces of one color across their shared neighbors, which gives
// six bonds per node; it governs the variant where only one sublattice of
// checks can go missing. Spanning means a cluster that winds around the
// torus, detected by union-find with per-node displacement bookkeeping.

namespace floqlab::perco {

enum class Kind { Kagome, Hexagonal, Square };

struct Bond {
    std::uint32_t u = 0, v = 0;
    std::int8_t di = 0, dj = 0;
    bool present = false;
};

struct Graph {
    Kind kind = Kind::Square;
    int period = 0;
    std::uint32_t nodes = 0;
    std::vector<Bond> bonds;
};

struct Span {
    bool x = false, z = false;
    bool any() const { return x || z; }
};

// Topology with every bond absent; sample() fills the occupation.
inline Graph graph(Kind kind, int L) {
    if (L < 2) throw std::invalid_argument("percolation graph needs period >= 2");
    Graph g;
    g.kind = kind;
    g.period = L;
    auto at = [L](int i, int j, int s, int per_cell) {
        const int w = ((i % L) + L) % L * L + ((j % L) + L) % L;
        return static_cast<std::uint32_t>(per_cell * w + s);
    };
    auto bond = [&g](std::uint32_t u, std::uint32_t v, int di, int dj) {
        g.bonds.push_back({u, v, static_cast<std::int8_t>(di), static_cast<std::int8_t>(dj), false});
    };
    switch (kind) {
        case Kind::Kagome:
            // Sites are the edges of a triangular lattice, one triangle pair
            // per cell: s=0 toward (i+1,j), s=1 toward (i,j+1), s=2 toward
            // (i+1,j-1) from the cell below.
            g.nodes = static_cast<std::uint32_t>(3 * L * L);
            for (int i = 0; i < L; ++i)
                for (int j = 0; j < L; ++j) {
                    const auto a = at(i, j, 0, 3), b = at(i, j, 1, 3);
                    const auto c1 = at(i, j + 1, 2, 3);
                    const auto a1 = at(i, j + 1, 0, 3), b1 = at(i + 1, j, 1, 3);
                    bond(a, b, 0, 0);
                    bond(b, c1, 0, 1);
                    bond(c1, a, 0, -1);
                    bond(b1, a1, -1, 1);
                    bond(a1, c1, 0, 0);
                    bond(c1, b1, 1, -1);
                }
            break;
        case Kind::Hexagonal:
            g.nodes = static_cast<std::uint32_t>(L * L);
            for (int i = 0; i < L; ++i)
                for (int j = 0; j < L; ++j) {
                    bond(at(i, j, 0, 1), at(i + 1, j, 0, 1), 1, 0);
                    bond(at(i, j, 0, 1), at(i, j + 1, 0, 1), 0, 1);
                    bond(at(i, j, 0, 1), at(i - 1, j + 1, 0, 1), -1, 1);
                }
            break;
        case Kind::Square:
            g.nodes = static_cast<std::uint32_t>(L * L);
            for (int i = 0; i < L; ++i)
                for (int j = 0; j < L; ++j) {
                    bond(at(i, j, 0, 1), at(i + 1, j, 0, 1), 1, 0);
                    bond(at(i, j, 0, 1), at(i, j + 1, 0, 1), 0, 1);
                }
            break;
    }
    return g;
}

inline Graph sample(Kind kind, int L, double p_bond, Rng& rng) {
    if (p_bond < 0.0 || p_bond > 1.0) throw std::invalid_argument("p_bond outside [0,1]");
    Graph g = graph(kind, L);
    for (auto& b : g.bonds) b.present = rng.uniform() < p_bond;
    return g;
}

namespace detail {

// Union-find whose nodes carry their displacement from the root in cell
// units. Joining two nodes already in one cluster compares the recorded
// relative displacement with the bond's; a mismatch is a cycle with nonzero
// winding, so the cluster wraps the torus.
class WindForest {
public:
    explicit WindForest(std::uint32_t n)
        : parent_(n), size_(n, 1), di_(n, 0), dj_(n, 0), count_(n) {
        for (std::uint32_t k = 0; k < n; ++k) parent_[k] = k;
    }

    std::uint32_t find(std::uint32_t a, std::int64_t& oi, std::int64_t& oj) {
        path_.clear();
        std::int64_t ai = 0, aj = 0;
        while (parent_[a] != a) {
            path_.push_back(a);
            ai += di_[a];
            aj += dj_[a];
            a = parent_[a];
        }
        std::int64_t ri = ai, rj = aj;
        for (auto n : path_) {
            const std::int64_t ti = ri - di_[n], tj = rj - dj_[n];
            parent_[n] = a;
            di_[n] = ri;
            dj_[n] = rj;
            ri = ti;
            rj = tj;
        }
        oi = ai;
        oj = aj;
        return a;
    }

    // Returns the winding of the cycle this bond closes, or zero offsets when
    // it merges two clusters.
    std::pair<std::int64_t, std::int64_t> join(std::uint32_t u, std::uint32_t v,
                                              std::int64_t di, std::int64_t dj) {
        std::int64_t ui, uj, vi, vj;
        auto ru = find(u, ui, uj);
        auto rv = find(v, vi, vj);
        if (ru == rv) return {di + ui - vi, dj + uj - vj};
        if (size_[ru] < size_[rv]) {
            std::swap(ru, rv);
            std::swap(ui, vi);
            std::swap(uj, vj);
            di = -di;
            dj = -dj;
        }
        parent_[rv] = ru;
        di_[rv] = di + ui - vi;
        dj_[rv] = dj + uj - vj;
        size_[ru] += size_[rv];
        --count_;
        return {0, 0};
    }

    std::uint32_t components() const { return count_; }

private:
    std::vector<std::uint32_t> parent_;
    std::vector<std::uint32_t> size_;
    std::vector<std::int64_t> di_, dj_;
    std::vector<std::uint32_t> path_;
    std::uint32_t count_ = 0;
};

}  // namespace detail

inline Span spans(const Graph& g) {
    detail::WindForest forest(g.nodes);
    Span s;
    for (const auto& b : g.bonds) {
        if (!b.present) continue;
        auto [wi, wj] = forest.join(b.u, b.v, b.di, b.dj);
        s.x = s.x || wi != 0;
        s.z = s.z || wj != 0;
    }
    return s;
}

inline std::uint32_t clusters(const Graph& g) {
    detail::WindForest forest(g.nodes);
    for (const auto& b : g.bonds)
        if (b.present) forest.join(b.u, b.v, b.di, b.dj);
    return forest.components();
}

// Contract the red links: one node per red link, one bond per blue or green
// link, present when that link was measured in the sampled round.
inline Graph from_miss_sample(const HoneycombLattice& lat, const std::vector<std::uint8_t>& missed) {
    if (missed.size() != static_cast<std::size_t>(lat.num_links()))
        throw std::invalid_argument("missed mask must cover every link");
    Graph g;
    g.kind = Kind::Kagome;
    g.period = lat.period();
    g.nodes = static_cast<std::uint32_t>(lat.red_links().size());

    struct Home { std::uint32_t node; std::int8_t oi, oj; };
    std::vector<Home> site(static_cast<std::size_t>(lat.num_sites()));
    for (int l : lat.red_links()) {
        const auto n = static_cast<std::uint32_t>(lat.red_index(l));
        const auto ss = lat.link_sites(l);
        site[static_cast<std::size_t>(ss[0])] = {n, 0, 0};
        std::int8_t oi = 0, oj = 0;
        if (lat.link_type(l) == LinkType::XX) oj = 1;
        if (lat.link_type(l) == LinkType::YY) oi = 1;
        site[static_cast<std::size_t>(ss[1])] = {n, oi, oj};
    }
    for (int l = 0; l < lat.num_links(); ++l) {
        if (lat.is_red(l)) continue;
        const auto ss = lat.link_sites(l);
        std::int8_t di = 0, dj = 0;
        if (lat.link_type(l) == LinkType::XX) dj = 1;
        if (lat.link_type(l) == LinkType::YY) di = 1;
        const Home& h1 = site[static_cast<std::size_t>(ss[0])];
        const Home& h2 = site[static_cast<std::size_t>(ss[1])];
        g.bonds.push_back({h1.node, h2.node,
                           static_cast<std::int8_t>(di - h2.oi + h1.oi),
                           static_cast<std::int8_t>(dj - h2.oj + h1.oj),
                           missed[static_cast<std::size_t>(l)] == 0});
    }
    return g;
}

struct ThresholdEstimate {
    double p_c = 0.0;
    double p_c_stderr = 0.0;
    double nu = 0.0;
};

namespace detail {

// Monotone cubic Hermite interpolant on a uniform grid (Fritsch-Carlson
// limited slopes), used for the spanning-probability curves.
class MonotoneCurve {
public:
    MonotoneCurve(double x0, double dx, std::vector<double> y)
        : x0_(x0), dx_(dx), y_(std::move(y)), m_(y_.size(), 0.0) {
        const std::size_t n = y_.size();
        assert(n >= 2);
        std::vector<double> d(n - 1);
        for (std::size_t k = 0; k + 1 < n; ++k) d[k] = (y_[k + 1] - y_[k]) / dx_;
        m_[0] = d[0];
        m_[n - 1] = d[n - 2];
        for (std::size_t k = 1; k + 1 < n; ++k)
            m_[k] = d[k - 1] * d[k] <= 0.0 ? 0.0 : 2.0 * d[k - 1] * d[k] / (d[k - 1] + d[k]);
        for (std::size_t k = 0; k + 1 < n; ++k) {
            if (d[k] == 0.0) { m_[k] = m_[k + 1] = 0.0; continue; }
            const double a = m_[k] / d[k], b = m_[k + 1] / d[k];
            const double s = a * a + b * b;
            if (s > 9.0) {
                const double t = 3.0 / std::sqrt(s);
                m_[k] = t * a * d[k];
                m_[k + 1] = t * b * d[k];
            }
        }
    }

    double lo() const { return x0_; }
    double hi() const { return x0_ + dx_ * static_cast<double>(y_.size() - 1); }

    double operator()(double x) const {
        const auto [k, t] = locate(x);
        const double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
        const double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
        return h00 * y_[k] + dx_ * h10 * m_[k] + h01 * y_[k + 1] + dx_ * h11 * m_[k + 1];
    }

    double slope(double x) const {
        const auto [k, t] = locate(x);
        const double g00 = 6 * t * t - 6 * t, g10 = 3 * t * t - 4 * t + 1;
        const double g01 = 6 * t - 6 * t * t, g11 = 3 * t * t - 2 * t;
        return (g00 * y_[k] + g01 * y_[k + 1]) / dx_ + g10 * m_[k] + g11 * m_[k + 1];
    }

private:
    std::pair<std::size_t, double> locate(double x) const {
        double u = (x - x0_) / dx_;
        auto k = static_cast<std::int64_t>(std::floor(u));
        k = std::max<std::int64_t>(0, std::min<std::int64_t>(k, static_cast<std::int64_t>(y_.size()) - 2));
        return {static_cast<std::size_t>(k), u - static_cast<double>(k)};
    }

    double x0_, dx_;
    std::vector<double> y_, m_;
};

inline std::vector<double> span_curve(Kind kind, int L, double p0, double dp, int points,
                                      int samples, Rng& rng) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(points));
    Graph g = graph(kind, L);
    for (int k = 0; k < points; ++k) {
        const double p = p0 + dp * k;
        int hits = 0;
        for (int s = 0; s < samples; ++s) {
            for (auto& b : g.bonds) b.present = rng.uniform() < p;
            if (spans(g).any()) ++hits;
        }
        out.push_back(static_cast<double>(hits) / samples);
    }
    return out;
}

// Logistic width of a spanning curve by weighted regression of logit(P) on
// p; the curve steepness 1/w scales as L^{1/nu}.
inline std::optional<double> logistic_width(const std::vector<double>& p,
                                            const std::vector<double>& curve) {
    double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
    int used = 0;
    for (std::size_t k = 0; k < curve.size(); ++k) {
        const double q = curve[k];
        if (q < 0.02 || q > 0.98) continue;
        const double w = q * (1.0 - q);
        const double y = std::log(q / (1.0 - q));
        sw += w; swx += w * p[k]; swy += w * y;
        swxx += w * p[k] * p[k]; swxy += w * p[k] * y;
        ++used;
    }
    if (used < 3) return std::nullopt;
    const double denom = sw * swxx - swx * swx;
    if (denom <= 0.0) return std::nullopt;
    const double slope = (sw * swxy - swx * swy) / denom;
    if (slope <= 0.0) return std::nullopt;
    return 1.0 / slope;
}

}  // namespace detail

// Crossing of spanning-probability curves across sizes. A coarse scan finds
// the common crossing window, a finer grid with the full sample budget is
// interpolated per size, and each size pair is bisected for the point where
// the larger lattice overtakes the smaller one. nu comes from the growth of
// the curve slope at the crossing with L.
inline std::optional<ThresholdEstimate> threshold_estimate(Kind kind, std::vector<int> sizes,
                                                           int samples, Rng& rng) {
    if (sizes.size() < 2) throw std::invalid_argument("threshold estimate needs at least two sizes");
    if (samples < 8) throw std::invalid_argument("threshold estimate needs a sample budget");

    const int coarse_n = 19;
    const double coarse_lo = 0.05, coarse_dp = 0.05;
    const int coarse_samples = std::max(32, samples / 8);
    double center = 0.0;
    {
        std::vector<double> mean(coarse_n, 0.0);
        for (int L : sizes) {
            auto c = detail::span_curve(kind, L, coarse_lo, coarse_dp, coarse_n, coarse_samples, rng);
            for (int k = 0; k < coarse_n; ++k) mean[k] += c[k] / static_cast<double>(sizes.size());
        }
        int k = 0;
        while (k < coarse_n && mean[k] < 0.5) ++k;
        if (k == 0 || k == coarse_n) return std::nullopt;
        const double f = (0.5 - mean[k - 1]) / std::max(1e-12, mean[k] - mean[k - 1]);
        center = coarse_lo + coarse_dp * (k - 1 + f);
    }

    const int fine_n = 13;
    const double half = 0.06;
    const double lo = std::max(0.005, center - half);
    const double dp = (std::min(0.995, center + half) - lo) / (fine_n - 1);
    std::vector<std::vector<double>> fine;
    std::vector<detail::MonotoneCurve> curves;
    curves.reserve(sizes.size());
    for (int L : sizes) {
        fine.push_back(detail::span_curve(kind, L, lo, dp, fine_n, samples, rng));
        curves.emplace_back(lo, dp, fine.back());
    }

    std::vector<double> crossings;
    for (std::size_t a = 0; a < sizes.size(); ++a)
        for (std::size_t b = a + 1; b < sizes.size(); ++b) {
            auto diff = [&](double p) { return curves[b](p) - curves[a](p); };
            const int scan = 96;
            double prev_p = lo, prev_d = diff(lo);
            for (int k = 1; k <= scan; ++k) {
                const double p = lo + (dp * (fine_n - 1)) * k / scan;
                const double d = diff(p);
                if (prev_d < 0.0 && d >= 0.0) {
                    double l = prev_p, r = p;
                    for (int it = 0; it < 60; ++it) {
                        const double m = 0.5 * (l + r);
                        (diff(m) < 0.0 ? l : r) = m;
                    }
                    crossings.push_back(0.5 * (l + r));
                    break;
                }
                prev_p = p;
                prev_d = d;
            }
        }
    if (crossings.empty()) return std::nullopt;

    ThresholdEstimate est;
    for (double c : crossings) est.p_c += c;
    est.p_c /= static_cast<double>(crossings.size());
    if (crossings.size() > 1) {
        double ss = 0.0;
        for (double c : crossings) ss += (c - est.p_c) * (c - est.p_c);
        est.p_c_stderr = std::sqrt(ss / (static_cast<double>(crossings.size()) *
                                         (static_cast<double>(crossings.size()) - 1)));
    }

    std::vector<double> grid;
    for (int k = 0; k < fine_n; ++k) grid.push_back(lo + dp * k);
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int n = 0;
    for (std::size_t k = 0; k < sizes.size(); ++k) {
        auto w = detail::logistic_width(grid, fine[k]);
        if (!w) continue;
        const double x = std::log(static_cast<double>(sizes[k])), y = -std::log(*w);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++n;
    }
    if (n >= 2) {
        const double beta = (static_cast<double>(n) * sxy - sx * sy) /
                            (static_cast<double>(n) * sxx - sx * sx);
        if (beta > 0.0) est.nu = 1.0 / beta;
    }
    return est;
}

}  // namespace floqlab::perco
