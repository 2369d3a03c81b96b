#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "floqlab/gf2.hpp"
#include "floqlab/percolation.hpp"
#include "floqlab/protocol.hpp"

using namespace floqlab;
namespace perco = floqlab::perco;

namespace {

std::vector<int> degrees(const perco::Graph& g) {
    std::vector<int> deg(g.nodes, 0);
    for (const auto& b : g.bonds) {
        ++deg[b.u];
        ++deg[b.v];
    }
    return deg;
}

}  // namespace

TEST_CASE("graph topologies have the right coordination", "[percolation]") {
    for (auto [kind, degree] : {std::pair{perco::Kind::Kagome, 4},
                                {perco::Kind::Hexagonal, 6},
                                {perco::Kind::Square, 4}}) {
        auto g = perco::graph(kind, 5);
        CAPTURE(degree);
        REQUIRE(2 * g.bonds.size() == static_cast<std::size_t>(degree) * g.nodes);
        for (int d : degrees(g)) REQUIRE(d == degree);
    }
    auto kag = perco::graph(perco::Kind::Kagome, 4);
    REQUIRE(kag.nodes == 48);
    REQUIRE(kag.bonds.size() == 96);
    REQUIRE_THROWS_AS(perco::graph(perco::Kind::Square, 1), std::invalid_argument);
}

TEST_CASE("full and empty occupations are extreme", "[percolation]") {
    for (auto kind : {perco::Kind::Kagome, perco::Kind::Hexagonal, perco::Kind::Square}) {
        Rng rng(1, 0);
        auto full = perco::sample(kind, 6, 1.0, rng);
        REQUIRE(perco::spans(full).x);
        REQUIRE(perco::spans(full).z);
        REQUIRE(perco::clusters(full) == 1);

        auto empty = perco::sample(kind, 6, 0.0, rng);
        REQUIRE_FALSE(perco::spans(empty).any());
        REQUIRE(perco::clusters(empty) == empty.nodes);
    }
}

TEST_CASE("bond occupation count is binomial", "[percolation]") {
    Rng rng(2, 0);
    const double p = 0.37;
    const int reps = 200;
    auto g0 = perco::graph(perco::Kind::Kagome, 8);
    const double total = static_cast<double>(g0.bonds.size());
    double acc = 0.0;
    for (int r = 0; r < reps; ++r) {
        auto g = perco::sample(perco::Kind::Kagome, 8, p, rng);
        int count = 0;
        for (const auto& b : g.bonds) count += b.present;
        acc += count;
    }
    const double mean = acc / reps;
    const double sigma = std::sqrt(total * p * (1 - p) / reps);
    REQUIRE(std::abs(mean - total * p) < 5.0 * sigma);
}

TEST_CASE("a straight chain of bonds spans its own direction only", "[percolation]") {
    const int L = 6;
    auto g = perco::graph(perco::Kind::Square, L);
    for (auto& b : g.bonds) b.present = b.di == 1 && b.u % L == 0 && b.v % L == 0;
    auto s = perco::spans(g);
    REQUIRE(s.x);
    REQUIRE_FALSE(s.z);

    for (auto& b : g.bonds) b.present = b.dj == 1 && b.u / L == 2 && b.v / L == 2;
    s = perco::spans(g);
    REQUIRE_FALSE(s.x);
    REQUIRE(s.z);
}

TEST_CASE("cluster count matches the incidence rank", "[percolation]") {
    Rng rng(3, 0);
    for (double p : {0.2, 0.45, 0.7}) {
        auto g = perco::sample(perco::Kind::Kagome, 4, p, rng);
        std::vector<BitVec> rows;
        for (const auto& b : g.bonds) {
            if (!b.present || b.u == b.v) continue;
            BitVec row(g.nodes);
            row.flip(b.u);
            row.flip(b.v);
            rows.push_back(std::move(row));
        }
        const auto rank = gf2_rank(std::move(rows));
        REQUIRE(perco::clusters(g) == g.nodes - rank);
    }
}

TEST_CASE("spanning is monotone along coupled samples", "[percolation]") {
    Rng rng(4, 0);
    auto g = perco::graph(perco::Kind::Kagome, 6);
    std::vector<double> u(g.bonds.size());
    for (int rep = 0; rep < 40; ++rep) {
        for (auto& x : u) x = rng.uniform();
        bool prev = false;
        for (double p : {0.35, 0.5, 0.65, 0.8}) {
            for (std::size_t k = 0; k < u.size(); ++k) g.bonds[k].present = u[k] < p;
            const bool now = perco::spans(g).any();
            REQUIRE((prev ? now : true));
            prev = now;
        }
    }
}

TEST_CASE("kagome spanning sits near the crossing value at threshold", "[percolation]") {
    Rng rng(100, 0);
    auto g = perco::graph(perco::Kind::Kagome, 64);
    const int N = 300;
    int x_hits = 0;
    for (int s = 0; s < N; ++s) {
        for (auto& b : g.bonds) b.present = rng.uniform() < 0.5244;
        x_hits += perco::spans(g).x;
    }
    const double px = static_cast<double>(x_hits) / N;
    REQUIRE(px > 0.40);
    REQUIRE(px < 0.68);
}

TEST_CASE("threshold estimate reproduces the kagome value", "[percolation]") {
    Rng rng(1, 0);
    auto est = perco::threshold_estimate(perco::Kind::Kagome, {12, 24, 48}, 600, rng);
    REQUIRE(est.has_value());
    REQUIRE(std::abs((1.0 - est->p_c) - 0.476) < 0.005);
    REQUIRE(std::abs(est->nu - 4.0 / 3.0) < 0.2);
}

TEST_CASE("threshold estimate reproduces the hexagonal-variant value", "[percolation]") {
    Rng rng(1, 0);
    auto est = perco::threshold_estimate(perco::Kind::Hexagonal, {16, 32}, 700, rng);
    REQUIRE(est.has_value());
    REQUIRE(std::abs((1.0 - est->p_c) - 0.65) < 0.01);
}

TEST_CASE("threshold estimate matches the exact square-lattice oracle", "[percolation]") {
    Rng rng(1, 0);
    auto est = perco::threshold_estimate(perco::Kind::Square, {16, 32}, 700, rng);
    REQUIRE(est.has_value());
    REQUIRE(std::abs(est->p_c - 0.5) < 0.01);
    REQUIRE_THROWS_AS(perco::threshold_estimate(perco::Kind::Square, {16}, 700, rng),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(perco::threshold_estimate(perco::Kind::Square, {16, 32}, 4, rng),
                      std::invalid_argument);
}

TEST_CASE("contracting red links yields the kagome companion of a round", "[percolation]") {
    HoneycombLattice lat(6);
    std::vector<std::uint8_t> none(static_cast<std::size_t>(lat.num_links()), 0);
    auto g = perco::from_miss_sample(lat, none);
    REQUIRE(g.nodes == static_cast<std::uint32_t>(lat.period() * lat.period()));
    REQUIRE(g.bonds.size() == 2 * g.nodes);
    for (int d : degrees(g)) REQUIRE(d == 4);
    REQUIRE(perco::spans(g).x);
    REQUIRE(perco::spans(g).z);

    std::vector<std::uint8_t> all(static_cast<std::size_t>(lat.num_links()), 1);
    auto e = perco::from_miss_sample(lat, all);
    int present = 0;
    for (const auto& b : e.bonds) present += b.present;
    REQUIRE(present == 0);

    REQUIRE_THROWS_AS(perco::from_miss_sample(lat, std::vector<std::uint8_t>(3, 0)),
                      std::invalid_argument);
}

TEST_CASE("cycle channels follow the winding of the measured cluster", "[percolation]") {
    HoneycombLattice lat(6);
    Protocol proto(lat);
    for (double p_m : {0.3, 0.48, 0.6}) {
        CAPTURE(p_m);
        Rng rng(500, static_cast<std::uint64_t>(p_m * 100));
        int n_exchange = 0, n_both = 0;
        const int N = 200;
        for (int s = 0; s < N; ++s) {
            auto st = proto.initialize(rng);
            std::vector<std::uint8_t> missed;
            const auto ch = proto.one_cycle_channel(st, p_m, rng, MissMode::BlueGreen, &missed);
            const auto sp = perco::spans(perco::from_miss_sample(lat, missed));
            switch (ch) {
                case Channel::Identity:
                    REQUIRE_FALSE(sp.any());
                    break;
                case Channel::EmExchange:
                    REQUIRE(sp.x);
                    REQUIRE(sp.z);
                    ++n_exchange;
                    break;
                case Channel::MeasureFx:
                    REQUIRE(sp.z);
                    break;
                case Channel::MeasureFz:
                    REQUIRE(sp.x);
                    break;
                case Channel::MeasureFxz:
                    REQUIRE(sp.x);
                    REQUIRE(sp.z);
                    break;
            }
            n_both += sp.x && sp.z;
        }
        REQUIRE(n_exchange <= n_both);
        if (p_m == 0.3) {
            REQUIRE(n_exchange > N * 0.8);
            REQUIRE(n_both - n_exchange < N * 0.1);
        }
        if (p_m == 0.6) REQUIRE(n_both < N * 0.25);
    }
}
