#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <map>
#include <vector>

#include "floqlab/lattice.hpp"
#include "floqlab/protocol.hpp"
#include "floqlab/rng.hpp"
#include "floqlab/tableau.hpp"

using namespace floqlab;

namespace {

bool bulk_group_pinned(const Protocol& proto, const StabilizerState& st) {
    const auto& lat = proto.lattice();
    for (int l : lat.red_links())
        if (!st.is_deterministic(proto.link_op(l))) return false;
    for (int f = 0; f < lat.num_faces(); ++f)
        if (!st.is_deterministic(proto.plaquette_op(f))) return false;
    return true;
}

}  // namespace

TEST_CASE("initialization pins the plaquettes and both m loops") {
    HoneycombLattice lat(6);
    Protocol proto(lat);
    Rng rng(11, 0);
    StabilizerState st = proto.initialize(rng);

    CHECK(proto.string_sq(st, StringKind::M, StringDir::X) == 1);
    CHECK(proto.string_sq(st, StringKind::M, StringDir::Z) == 1);
    CHECK(proto.string_sq(st, StringKind::E, StringDir::X) == 0);
    CHECK(proto.string_sq(st, StringKind::E, StringDir::Z) == 0);
    CHECK(bulk_group_pinned(proto, st));
    st.check_invariants();
}

TEST_CASE("unperturbed schedule is an exact binary clock") {
    ProtocolConfig cfg;
    cfg.L = 9;
    cfg.cycles = 40;
    cfg.seed = 5;
    cfg.realizations = 3;
    Protocol proto{HoneycombLattice(cfg.L)};
    for (const RunRecord& rec : proto.run_experiment(cfg)) {
        REQUIRE(rec.g.size() == 41);
        for (int t = 0; t <= cfg.cycles; ++t)
            REQUIRE(static_cast<int>(rec.g[static_cast<std::size_t>(t)]) == (t + 1) % 2);
    }
}

TEST_CASE("fully missing blue and green rounds freeze the readout at one") {
    ProtocolConfig cfg;
    cfg.L = 6;
    cfg.p_m = 1.0;
    cfg.cycles = 20;
    cfg.seed = 3;
    Protocol proto{HoneycombLattice(cfg.L)};
    for (const RunRecord& rec : proto.run_experiment(cfg))
        for (std::uint8_t v : rec.g) CHECK(v == 1);
}

TEST_CASE("missing alone never unpins the bulk group after a red round") {
    HoneycombLattice lat(6);
    Protocol proto(lat);
    struct Point { double p_m; MissMode mode; };
    const std::array<Point, 5> grid = {{{0.5, MissMode::BlueGreen},
                                        {1.0, MissMode::GreenOnly},
                                        {0.5, MissMode::GreenOnly},
                                        {0.3, MissMode::BlueGreen},
                                        {0.8, MissMode::BlueGreen}}};
    for (const auto& pt : grid) {
        ProtocolConfig cfg;
        cfg.L = 6;
        cfg.p_m = pt.p_m;
        cfg.miss_mode = pt.mode;
        cfg.cycles = 8;
        cfg.seed = 17;
        cfg.realizations = 2;
        int checked = 0;
        proto.run_experiment(cfg, {}, [&](int, const StabilizerState& st, RunRecord&) {
            REQUIRE(bulk_group_pinned(proto, st));
            ++checked;
        });
        CHECK(checked == 2 * 9);
    }
}

TEST_CASE("single-qubit replacements break plaquettes") {
    ProtocolConfig cfg;
    cfg.L = 6;
    cfg.p_s = 0.2;
    cfg.cycles = 6;
    cfg.seed = 23;
    Protocol proto{HoneycombLattice(cfg.L)};
    int broken = 0;
    proto.run_experiment(cfg, {}, [&](int t, const StabilizerState& st, RunRecord&) {
        if (t == 0) return;
        for (int f = 0; f < proto.lattice().num_faces(); ++f)
            if (!st.is_deterministic(proto.plaquette_op(f))) ++broken;
    });
    CHECK(broken > 0);
}

TEST_CASE("readout agrees with the squared expectation and is non-destructive") {
    ProtocolConfig cfg;
    cfg.L = 6;
    cfg.p_m = 0.48;
    cfg.cycles = 12;
    cfg.seed = 29;
    Protocol proto{HoneycombLattice(cfg.L)};
    proto.run_experiment(cfg, {}, [&](int, const StabilizerState& st, RunRecord& rec) {
        const int e = st.expectation(proto.string_op(StringKind::M, StringDir::X));
        CHECK(static_cast<int>(rec.g.back()) == e * e);
        CHECK(proto.readout_g(st) == static_cast<int>(rec.g.back()));
    });
}

TEST_CASE("records are deterministic in the seed and stream") {
    ProtocolConfig cfg;
    cfg.L = 6;
    cfg.p_m = 0.48;
    cfg.p_s = 0.03;
    cfg.cycles = 25;
    cfg.seed = 101;
    cfg.realizations = 2;
    Protocol proto{HoneycombLattice(cfg.L)};
    RunOptions opt;
    opt.corrected = true;
    auto a = proto.run_experiment(cfg, opt);
    auto b = proto.run_experiment(cfg, opt);
    REQUIRE(a.size() == b.size());
    for (std::size_t r = 0; r < a.size(); ++r) {
        CHECK(a[r].g == b[r].g);
        CHECK(a[r].corrected_g == b[r].corrected_g);
        CHECK(a[r].seed == cfg.seed);
        CHECK(a[r].realization == r);
    }
    CHECK(a[0].g != a[1].g);
}

TEST_CASE("one cycle at the extremes gives exchange and identity") {
    HoneycombLattice lat(6);
    Protocol proto(lat);
    Rng rng(7, 0);
    for (int s = 0; s < 10; ++s) {
        StabilizerState st = proto.initialize(rng);
        CHECK(proto.one_cycle_channel(st, 0.0, rng) == Channel::EmExchange);
        st = proto.initialize(rng);
        CHECK(proto.one_cycle_channel(st, 1.0, rng) == Channel::Identity);
    }
}

TEST_CASE("every cycle classifies into one of the five channels") {
    HoneycombLattice lat(6);
    Protocol proto(lat);
    Rng rng(13, 0);
    StabilizerState st = proto.initialize(rng);
    std::map<Channel, int> tally;
    for (int s = 0; s < 600; ++s) {
        // Re-measuring both m loops restores the reference configuration; the
        // bulk group survives any missing-only cycle, so this is exact.
        st.collapse(proto.string_op(StringKind::M, StringDir::X), rng);
        st.collapse(proto.string_op(StringKind::M, StringDir::Z), rng);
        REQUIRE(proto.string_sq(st, StringKind::M, StringDir::X) == 1);
        REQUIRE(proto.string_sq(st, StringKind::M, StringDir::Z) == 1);
        ++tally[proto.one_cycle_channel(st, 0.48, rng)];
    }
    CHECK(tally.size() == 5);
    st.check_invariants();
}

TEST_CASE("correction is inert without single-qubit perturbations") {
    ProtocolConfig cfg;
    cfg.L = 6;
    cfg.p_m = 0.4;
    cfg.cycles = 20;
    cfg.seed = 31;
    cfg.realizations = 3;
    Protocol proto{HoneycombLattice(cfg.L)};
    RunOptions opt;
    opt.corrected = true;
    for (const RunRecord& rec : proto.run_experiment(cfg, opt)) {
        REQUIRE(rec.corrected_g.size() == rec.g.size());
        CHECK(rec.corrected_g == rec.g);
    }
}

TEST_CASE("correction is monotone in the strip width and in the plain readout") {
    ProtocolConfig cfg;
    cfg.L = 6;
    cfg.p_m = 0.2;
    cfg.p_s = 0.06;
    cfg.cycles = 20;
    cfg.seed = 37;
    cfg.realizations = 3;
    Protocol proto{HoneycombLattice(cfg.L)};
    const int d_full = 4 * cfg.L + 1;
    proto.run_experiment(cfg, {}, [&](int, const StabilizerState& st, RunRecord& rec) {
        const int plain = static_cast<int>(rec.g.back());
        const int narrow = proto.corrected_readout(st, CorrectionKind::Plaquettes, 3);
        const int wide = proto.corrected_readout(st, CorrectionKind::Plaquettes, d_full);
        CHECK(narrow >= plain);
        CHECK(wide >= narrow);
    });
}

TEST_CASE("red-link dressing recovers readouts lost to missed red checks") {
    ProtocolConfig cfg;
    cfg.L = 6;
    cfg.p_m = 0.25;
    cfg.miss_mode = MissMode::AllRounds;
    cfg.cycles = 20;
    cfg.seed = 41;
    cfg.realizations = 3;
    Protocol proto{HoneycombLattice(cfg.L)};
    int plain_ones = 0, dressed_ones = 0;
    proto.run_experiment(cfg, {}, [&](int, const StabilizerState& st, RunRecord& rec) {
        const int plain = static_cast<int>(rec.g.back());
        const int dressed = proto.corrected_readout(st, CorrectionKind::RedLinks, 7);
        CHECK(dressed >= plain);
        plain_ones += plain;
        dressed_ones += dressed;
    });
    CHECK(dressed_ones > plain_ones);
}

TEST_CASE("missed-link recording matches the schedule constraints") {
    HoneycombLattice lat(6);
    Protocol proto(lat);
    ProtocolConfig cfg;
    cfg.L = 6;
    cfg.p_m = 0.7;
    Rng rng(43, 0);
    StabilizerState st = proto.initialize(rng);
    std::vector<std::uint8_t> missed;
    int blue_green_misses = 0;
    for (int t = 0; t < 10; ++t) {
        proto.run_cycle(st, cfg, rng, &missed);
        REQUIRE(missed.size() == static_cast<std::size_t>(lat.num_links()));
        for (int l = 0; l < lat.num_links(); ++l)
            if (missed[static_cast<std::size_t>(l)]) {
                CHECK(lat.link_color(l) != FaceColor::Red);
                ++blue_green_misses;
            }
    }
    CHECK(blue_green_misses > 0);

    cfg.miss_mode = MissMode::GreenOnly;
    for (int t = 0; t < 10; ++t) {
        proto.run_cycle(st, cfg, rng, &missed);
        for (int l = 0; l < lat.num_links(); ++l)
            if (missed[static_cast<std::size_t>(l)]) CHECK(lat.link_color(l) == FaceColor::Green);
    }
}

TEST_CASE("strip distances are zero on the path and grow away from it") {
    HoneycombLattice lat(9);
    Protocol proto(lat);
    int zero_faces = 0, max_face = 0;
    for (int f = 0; f < lat.num_faces(); ++f) {
        const int d = proto.face_strip_distance(f);
        REQUIRE(d >= 0);
        if (d == 0) ++zero_faces;
        max_face = std::max(max_face, d);
    }
    CHECK(zero_faces > 0);
    CHECK(zero_faces < lat.num_faces());
    CHECK(max_face >= lat.period() / 2);
    for (int l : lat.red_links()) REQUIRE(proto.red_link_strip_distance(l) >= 0);
}

TEST_CASE("config validation rejects malformed inputs") {
    ProtocolConfig cfg;
    cfg.L = 7;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.L = 6;
    cfg.p_m = 1.5;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.p_m = 0.5;
    cfg.strip_d = 4;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.strip_d = 11;
    cfg.cycles = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.cycles = 10;
    CHECK_NOTHROW(cfg.validate());
}
