#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "floqlab/gf2.hpp"
#include "floqlab/lattice.hpp"
#include "floqlab/pauli.hpp"
#include "floqlab/rng.hpp"
#include "floqlab/tableau.hpp"

namespace floqlab {

enum class MissMode { BlueGreen, GreenOnly, AllRounds };
enum class Channel { Identity, EmExchange, MeasureFx, MeasureFz, MeasureFxz };
enum class CorrectionKind { Plaquettes, RedLinks };

inline const char* to_string(MissMode m) {
    switch (m) {
        case MissMode::BlueGreen: return "blue_green";
        case MissMode::GreenOnly: return "green_only";
        default: return "all_rounds";
    }
}

inline std::optional<MissMode> parse_miss_mode(std::string_view s) {
    if (s == "blue_green") return MissMode::BlueGreen;
    if (s == "green_only") return MissMode::GreenOnly;
    if (s == "all_rounds") return MissMode::AllRounds;
    return std::nullopt;
}

inline const char* to_string(Channel c) {
    switch (c) {
        case Channel::Identity: return "identity";
        case Channel::EmExchange: return "em_exchange";
        case Channel::MeasureFx: return "measure_f_x";
        case Channel::MeasureFz: return "measure_f_z";
        default: return "measure_f_xz";
    }
}

struct ProtocolConfig {
    int L = 9;
    double p_m = 0.0;               // skip a link measurement
    double p_s = 0.0;               // replace it by two single-qubit ones
    MissMode miss_mode = MissMode::BlueGreen;
    int cycles = 100;               // readouts are recorded for t = 0..cycles
    int strip_d = 11;               // correction strip width, odd
    std::uint64_t seed = 1;
    int realizations = 1;

    void validate() const {
        if (L < 3 || L % 3 != 0) throw std::invalid_argument("L must be a positive multiple of 3");
        if (p_m < 0 || p_m > 1) throw std::invalid_argument("p_m outside [0,1]");
        if (p_s < 0 || p_s > 1) throw std::invalid_argument("p_s outside [0,1]");
        if (cycles < 1) throw std::invalid_argument("cycles must be positive");
        if (strip_d < 1 || strip_d % 2 == 0) throw std::invalid_argument("strip_d must be odd and positive");
        if (realizations < 1) throw std::invalid_argument("realizations must be positive");
    }
};

struct RunRecord {
    std::vector<std::uint8_t> g;            // plain readout per cycle, t = 0..T
    std::vector<std::uint8_t> corrected_g;  // filled when requested
    std::vector<int> tee;                   // filled by a cycle hook when sampled
    std::vector<std::size_t> ancilla_entropy;
    std::optional<Channel> channel;
    std::uint64_t seed = 0;
    std::uint64_t realization = 0;
};

struct RunOptions {
    bool corrected = false;
    CorrectionKind correction = CorrectionKind::Plaquettes;
};

// Called after each red round, t = 0..T, before the next cycle starts.
using CycleHook = std::function<void(int t, const StabilizerState&, RunRecord&)>;

// Measurement schedule driver over a fixed lattice. All link, plaquette and
// string operators are built once, at a register width that may include
// trailing ancilla qubits, so the per-cycle loop is allocation-free.
class Protocol {
public:
    explicit Protocol(const HoneycombLattice& lat, std::size_t ancillas = 0)
        : lat_(lat), ancillas_(ancillas), width_(static_cast<std::size_t>(lat.num_sites()) + ancillas) {
        link_ops_.reserve(lat_.num_links());
        single_ops_.reserve(2 * lat_.num_links());
        for (int l = 0; l < lat_.num_links(); ++l) {
            link_ops_.push_back(lat_.link_operator(l).widened(width_));
            const auto sites = lat_.link_sites(l);
            const char w = "XYZ"[static_cast<int>(lat_.link_type(l))];
            single_ops_.push_back(PauliOperator::single(width_, static_cast<std::size_t>(sites[0]), w));
            single_ops_.push_back(PauliOperator::single(width_, static_cast<std::size_t>(sites[1]), w));
        }
        plaq_ops_.reserve(lat_.num_faces());
        for (int f = 0; f < lat_.num_faces(); ++f)
            plaq_ops_.push_back(lat_.plaquette_operator(f).widened(width_));
        for (StringKind k : {StringKind::E, StringKind::M, StringKind::F})
            for (StringDir d : {StringDir::X, StringDir::Z, StringDir::XZ})
                strings_[sidx(k, d)] = lat_.logical_string(k, d).widened(width_);
        build_strip_distances();
    }

    const HoneycombLattice& lattice() const { return lat_; }
    std::size_t num_qubits() const { return width_; }
    std::size_t ancillas() const { return ancillas_; }

    std::vector<std::uint32_t> ancilla_region() const {
        std::vector<std::uint32_t> r(ancillas_);
        for (std::size_t i = 0; i < ancillas_; ++i)
            r[i] = static_cast<std::uint32_t>(lat_.num_sites()) + static_cast<std::uint32_t>(i);
        return r;
    }

    const PauliOperator& link_op(int l) const { return link_ops_[static_cast<std::size_t>(l)]; }
    const PauliOperator& single_op(int l, int end) const { return single_ops_[2 * static_cast<std::size_t>(l) + static_cast<std::size_t>(end)]; }
    const PauliOperator& plaquette_op(int f) const { return plaq_ops_[static_cast<std::size_t>(f)]; }
    const PauliOperator& string_op(StringKind k, StringDir d) const { return strings_[sidx(k, d)]; }

    // Squared expectation of a cached string; a full-rank stabilizer group is
    // its own centralizer, so this is 1 exactly when the value is pinned.
    int string_sq(const StabilizerState& st, StringKind k, StringDir d) const {
        return st.is_deterministic(string_op(k, d)) ? 1 : 0;
    }

    // One unperturbed blue, green, red round.
    void perfect_cycle(StabilizerState& st, Rng& rng) const {
        for (int r = 0; r < 3; ++r) {
            const FaceColor col = HoneycombLattice::round_color(r);
            for (int l = 0; l < lat_.num_links(); ++l)
                if (lat_.link_color(l) == col) st.collapse(link_op(l), rng);
        }
    }

    // Zero state, two perfect cycles, then both m-loops; afterwards every
    // plaquette and both windings of m are pinned while e stays undetermined.
    // One cycle is not enough from a cold start: one face color's plaquettes
    // only enter the group one round into the second cycle.
    StabilizerState initialize(Rng& rng) const {
        StabilizerState st(width_);
        perfect_cycle(st, rng);
        perfect_cycle(st, rng);
        st.collapse(string_op(StringKind::M, StringDir::X), rng);
        st.collapse(string_op(StringKind::M, StringDir::Z), rng);
        return st;
    }

    // One cycle of the perturbed schedule. Randomness is consumed in link-id
    // order within each round, so runs are reproducible per (seed, stream).
    // When `missed` is given it is resized to the link count and records
    // which links were skipped this cycle.
    void run_cycle(StabilizerState& st, const ProtocolConfig& cfg, Rng& rng,
                   std::vector<std::uint8_t>* missed = nullptr) const {
        if (missed) missed->assign(static_cast<std::size_t>(lat_.num_links()), 0);
        for (int r = 0; r < 3; ++r) {
            const FaceColor col = HoneycombLattice::round_color(r);
            const bool can_miss = cfg.miss_mode == MissMode::AllRounds ||
                                  (cfg.miss_mode == MissMode::BlueGreen && col != FaceColor::Red) ||
                                  (cfg.miss_mode == MissMode::GreenOnly && col == FaceColor::Green);
            for (int l = 0; l < lat_.num_links(); ++l) {
                if (lat_.link_color(l) != col) continue;
                if (can_miss && rng.bernoulli(cfg.p_m)) {
                    if (missed) (*missed)[static_cast<std::size_t>(l)] = 1;
                    continue;
                }
                if (cfg.p_s > 0 && rng.bernoulli(cfg.p_s)) {
                    st.collapse(single_op(l, 0), rng);
                    st.collapse(single_op(l, 1), rng);
                } else {
                    st.collapse(link_op(l), rng);
                }
            }
        }
    }

    // G(t): squared expectation of the x-winding m-loop, right after a red round.
    int readout_g(const StabilizerState& st) const {
        return string_sq(st, StringKind::M, StringDir::X);
    }

    // Dressed readout: 1 iff the commutation vector of the m-loop lies in the
    // GF(2) span of the commutation vectors of the dressing operators within
    // the strip (plaquettes by default, red links for the all-round variant).
    int corrected_readout(const StabilizerState& st, CorrectionKind kind, int d) const {
        BitVec v = st.commutation_vector(string_op(StringKind::M, StringDir::X));
        if (!v.any()) return 1;
        Gf2Span span(width_);
        if (kind == CorrectionKind::Plaquettes) {
            for (int f = 0; f < lat_.num_faces(); ++f) {
                if (2 * face_dist_[static_cast<std::size_t>(f)] > d) continue;
                BitVec w = st.commutation_vector(plaquette_op(f));
                if (w.any()) span.insert(std::move(w));
            }
        } else {
            for (int l : lat_.red_links()) {
                if (2 * red_dist_[static_cast<std::size_t>(lat_.red_index(l))] > d) continue;
                BitVec w = st.commutation_vector(link_op(l));
                if (w.any()) span.insert(std::move(w));
            }
        }
        return span.contains(v) ? 1 : 0;
    }

    RunRecord run_one(const ProtocolConfig& cfg, std::uint64_t realization,
                      const RunOptions& opt = {}, const CycleHook& hook = {}) const {
        Rng rng(cfg.seed, realization);
        RunRecord rec;
        rec.seed = cfg.seed;
        rec.realization = realization;
        rec.g.reserve(static_cast<std::size_t>(cfg.cycles) + 1);
        StabilizerState st = initialize(rng);
        record(st, cfg, opt, hook, 0, rec);
        for (int t = 1; t <= cfg.cycles; ++t) {
            run_cycle(st, cfg, rng);
            record(st, cfg, opt, hook, t, rec);
        }
        return rec;
    }

    std::vector<RunRecord> run_experiment(const ProtocolConfig& cfg, const RunOptions& opt = {},
                                          const CycleHook& hook = {}) const {
        cfg.validate();
        std::vector<RunRecord> out;
        out.reserve(static_cast<std::size_t>(cfg.realizations));
        for (int r = 0; r < cfg.realizations; ++r)
            out.push_back(run_one(cfg, static_cast<std::uint64_t>(r), opt, hook));
        return out;
    }

    // Runs one cycle from a state holding (m_x, m_z) and names the logical
    // transformation it implemented by probing all seven loop classes.
    Channel one_cycle_channel(StabilizerState& st, double p_m, Rng& rng,
                              MissMode mode = MissMode::BlueGreen,
                              std::vector<std::uint8_t>* missed = nullptr) const {
        ProtocolConfig cfg;
        cfg.L = lat_.period();
        cfg.p_m = p_m;
        cfg.miss_mode = mode;
        run_cycle(st, cfg, rng, missed);
        const std::array<int, 7> sq = {
            string_sq(st, StringKind::M, StringDir::X), string_sq(st, StringKind::E, StringDir::X),
            string_sq(st, StringKind::F, StringDir::X), string_sq(st, StringKind::M, StringDir::Z),
            string_sq(st, StringKind::E, StringDir::Z), string_sq(st, StringKind::F, StringDir::Z),
            string_sq(st, StringKind::F, StringDir::XZ)};
        static constexpr std::array<std::array<int, 7>, 5> kSignature = {{
            {1, 0, 0, 1, 0, 0, 0},   // identity
            {0, 1, 0, 0, 1, 0, 0},   // em exchange
            {1, 1, 1, 0, 0, 0, 0},   // f_x measured
            {0, 0, 0, 1, 1, 1, 0},   // f_z measured
            {0, 0, 0, 0, 0, 0, 1},   // f_xz measured
        }};
        for (std::size_t c = 0; c < kSignature.size(); ++c)
            if (sq == kSignature[c]) return static_cast<Channel>(c);
        std::string diag = "unclassifiable one-cycle outcome:";
        for (int b : sq) diag += b ? " 1" : " 0";
        throw std::logic_error(diag);
    }

    int face_strip_distance(int f) const { return face_dist_[static_cast<std::size_t>(f)]; }
    int red_link_strip_distance(int l) const { return red_dist_[static_cast<std::size_t>(lat_.red_index(l))]; }

private:
    static std::size_t sidx(StringKind k, StringDir d) {
        return 3 * static_cast<std::size_t>(k) + static_cast<std::size_t>(d);
    }

    void record(const StabilizerState& st, const ProtocolConfig& cfg, const RunOptions& opt,
                const CycleHook& hook, int t, RunRecord& rec) const {
        rec.g.push_back(static_cast<std::uint8_t>(readout_g(st)));
        if (opt.corrected)
            rec.corrected_g.push_back(static_cast<std::uint8_t>(corrected_readout(st, opt.correction, cfg.strip_d)));
        if (hook) hook(t, st, rec);
    }

    // Edge-graph distance of every face and red link from the canonical
    // x-winding m-path, for the correction strip.
    void build_strip_distances() {
        const int ns = lat_.num_sites();
        std::vector<std::vector<int>> adj(static_cast<std::size_t>(ns));
        for (int l = 0; l < lat_.num_links(); ++l) {
            const auto s = lat_.link_sites(l);
            adj[static_cast<std::size_t>(s[0])].push_back(s[1]);
            adj[static_cast<std::size_t>(s[1])].push_back(s[0]);
        }
        std::vector<int> dist(static_cast<std::size_t>(ns), -1);
        std::vector<int> frontier;
        for (int l : lat_.string_links(StringKind::M, StringDir::X))
            for (int s : lat_.link_sites(l))
                if (dist[static_cast<std::size_t>(s)] < 0) {
                    dist[static_cast<std::size_t>(s)] = 0;
                    frontier.push_back(s);
                }
        for (int d = 1; !frontier.empty(); ++d) {
            std::vector<int> next;
            for (int s : frontier)
                for (int nb : adj[static_cast<std::size_t>(s)])
                    if (dist[static_cast<std::size_t>(nb)] < 0) {
                        dist[static_cast<std::size_t>(nb)] = d;
                        next.push_back(nb);
                    }
            frontier = std::move(next);
        }
        face_dist_.resize(static_cast<std::size_t>(lat_.num_faces()));
        for (int f = 0; f < lat_.num_faces(); ++f) {
            int best = ns;
            for (int l : lat_.face_links(f))
                for (int s : lat_.link_sites(l)) best = std::min(best, dist[static_cast<std::size_t>(s)]);
            face_dist_[static_cast<std::size_t>(f)] = best;
        }
        red_dist_.resize(lat_.red_links().size());
        for (int l : lat_.red_links()) {
            const auto s = lat_.link_sites(l);
            red_dist_[static_cast<std::size_t>(lat_.red_index(l))] =
                std::min(dist[static_cast<std::size_t>(s[0])], dist[static_cast<std::size_t>(s[1])]);
        }
    }

    HoneycombLattice lat_;
    std::size_t ancillas_;
    std::size_t width_;
    std::vector<PauliOperator> link_ops_;
    std::vector<PauliOperator> single_ops_;
    std::vector<PauliOperator> plaq_ops_;
    std::array<PauliOperator, 9> strings_;
    std::vector<int> face_dist_;
    std::vector<int> red_dist_;
};

}  // namespace floqlab
