// Acceptance gate. One criterion per invocation: `acceptance --criterion N`
// prints a single [PASS]/[FAIL] line and exits nonzero on failure. The heavy
// G(t) sweeps are cached under acceptance_cache/ in the working directory so
// the criteria sharing data reuse one computation; delete the directory to
// force a clean rerun. Every random stream below has a fixed seed so each
// criterion is a deterministic, reproducible claim.

#include <floqlab/fss.hpp>
#include <floqlab/markov.hpp>
#include <floqlab/observables.hpp>
#include <floqlab/percolation.hpp>
#include <floqlab/protocol.hpp>

#include "support/dense_sim.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace floqlab;
using nlohmann::json;

constexpr int kCycles = 100;
constexpr int kReals = 200;
// 13 order-parameter points across the transition window, in units of 1e-3.
constexpr std::array<int, 13> kGrid = {400, 413, 427, 440, 453, 467, 480,
                                       493, 507, 520, 533, 547, 560};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

int report(int crit, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", crit, detail.c_str());
    return pass ? 0 : 1;
}

std::pair<double, double> mean_err(const std::vector<double>& v) {
    const double n = static_cast<double>(v.size());
    const double m = std::accumulate(v.begin(), v.end(), 0.0) / n;
    if (v.size() < 2) return {m, 0.0};
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return {m, std::sqrt(ss / (n * (n - 1.0)))};
}

TimeSeries row_series(const std::vector<std::uint8_t>& g) {
    TimeSeries ts;
    ts.mean.assign(g.begin(), g.end());
    ts.stderr_.assign(g.size(), 0.0);
    return ts;
}

// Shared G(t) sweep cache: kReals realizations of the raw order parameter at
// (L, p_m = milli/1000, p_s = 0) over kCycles cycles.

std::uint64_t sweep_seed(int L, int milli) {
    return 900000ull + 100ull * static_cast<std::uint64_t>(milli) + static_cast<std::uint64_t>(L);
}

using SweepPoint = std::vector<std::vector<std::uint8_t>>;

SweepPoint sweep_point(int L, int milli) {
    namespace fs = std::filesystem;
    const fs::path dir = "acceptance_cache";
    const fs::path file = dir / ("gt_L" + std::to_string(L) + "_pm" + std::to_string(milli) + ".json");
    json want;
    want["L"] = L;
    want["pm_milli"] = milli;
    want["cycles"] = kCycles;
    want["realizations"] = kReals;
    want["seed"] = sweep_seed(L, milli);

    if (fs::exists(file)) {
        try {
            std::ifstream in(file);
            const json j = json::parse(in);
            bool match = true;
            for (const auto& [k, v] : want.items()) match = match && j.value(k, json()) == v;
            if (match) {
                SweepPoint sp;
                for (const auto& row : j.at("g")) sp.push_back(row.get<std::vector<std::uint8_t>>());
                if (sp.size() == kReals && sp.front().size() == kCycles + 1) return sp;
            }
        } catch (const std::exception&) {
            // stale or corrupt cache entries are recomputed below
        }
    }

    HoneycombLattice lat(L);
    Protocol proto(lat);
    ProtocolConfig cfg;
    cfg.L = L;
    cfg.p_m = milli / 1000.0;
    cfg.p_s = 0.0;
    cfg.cycles = kCycles;
    cfg.seed = sweep_seed(L, milli);
    cfg.realizations = kReals;
    SweepPoint sp;
    sp.reserve(kReals);
    for (const auto& run : proto.run_experiment(cfg)) sp.push_back(run.g);

    json j = want;
    j["p_m"] = cfg.p_m;
    j["g"] = sp;
    std::error_code ec;
    fs::create_directories(dir, ec);
    std::ofstream out(file);
    out << j.dump() << "\n";
    return sp;
}

// Mean and stderr of the period-two Fourier weight over realizations.
std::pair<double, double> gpi_stat(const SweepPoint& sp) {
    std::vector<double> v;
    v.reserve(sp.size());
    for (const auto& row : sp) v.push_back(fourier_components(row_series(row)).g_pi);
    return mean_err(v);
}

PauliOperator random_pauli(Rng& rng, std::size_t n) {
    PauliOperator p(n);
    for (;;) {
        for (std::size_t q = 0; q < n; ++q) {
            switch (rng.below(4)) {
                case 1: p.set_x(q, true); p.set_z(q, false); break;
                case 2: p.set_x(q, false); p.set_z(q, true); break;
                case 3: p.set_x(q, true); p.set_z(q, true); break;
                default: p.set_x(q, false); p.set_z(q, false); break;
            }
        }
        if (!p.is_identity()) return p;
    }
}

// 1. Ideal schedule: G(t) = (t+1) mod 2 exactly, every realization.
int crit1() {
    HoneycombLattice lat(9);
    Protocol proto(lat);
    ProtocolConfig cfg;
    cfg.L = 9;
    cfg.p_m = 0.0;
    cfg.p_s = 0.0;
    cfg.cycles = 100;
    cfg.seed = 11;
    cfg.realizations = 50;
    for (const auto& run : proto.run_experiment(cfg))
        for (int t = 0; t <= cfg.cycles; ++t)
            if (run.g[static_cast<std::size_t>(t)] != (t + 1) % 2)
                return report(1, false,
                              "realization " + std::to_string(run.realization) + " t=" +
                                  std::to_string(t) + " broke the binary pattern");
    return report(1, true, "G(t) = (t+1) mod 2 for 50 realizations, t <= 100, L=9");
}

// 2. Tableau engine vs dense state-vector oracle on random programs.
int crit2() {
    Rng meta(20260821, 0);
    const int programs = 1000;
    int measured = 0;
    for (int prog = 0; prog < programs; ++prog) {
        const std::size_t n = 2 + meta.below(7);
        StabilizerState tab(n);
        testing::DenseSim dense(n);
        const int ops = 10 + static_cast<int>(meta.below(30));
        for (int k = 0; k < ops; ++k) {
            if (meta.uniform() < 0.35) {
                const PauliOperator p = random_pauli(meta, n);
                const bool det = tab.is_deterministic(p);
                const int expv = tab.expectation(p);
                const double prob = dense.prob_plus(p);
                const double want = det ? (expv > 0 ? 1.0 : 0.0) : 0.5;
                if (det && expv == 0)
                    return report(2, false, "deterministic operator with zero expectation");
                if (std::abs(prob - want) > 1e-9)
                    return report(2, false, "program " + std::to_string(prog) + ": oracle probability " +
                                                num(prob) + ", tableau implies " + num(want));
                const int outcome = tab.measure(p, meta);
                if (!dense.project(p, outcome))
                    return report(2, false, "program " + std::to_string(prog) +
                                                ": oracle rejects sampled outcome");
                if (tab.expectation(p) != outcome)
                    return report(2, false, "remeasurement not deterministic");
                ++measured;
            } else {
                const std::size_t a = meta.below(n);
                std::size_t b = meta.below(n);
                while (b == a) b = meta.below(n);
                switch (meta.below(5)) {
                    case 0: tab.h(a); dense.h(a); break;
                    case 1: tab.s(a); dense.s(a); break;
                    case 2: tab.cx(a, b); dense.cx(a, b); break;
                    case 3: tab.cy(a, b); dense.cy(a, b); break;
                    default: tab.cz(a, b); dense.cz(a, b); break;
                }
            }
        }
        for (int k = 0; k < 8; ++k) {
            const PauliOperator p = random_pauli(meta, n);
            if (std::abs(dense.expectation(p) - tab.expectation(p)) > 1e-9)
                return report(2, false, "program " + std::to_string(prog) + ": expectation mismatch");
        }
        for (int k = 0; k < 4; ++k) {
            std::vector<std::uint32_t> region;
            for (std::uint32_t q = 0; q < n; ++q)
                if (meta.bernoulli(0.5)) region.push_back(q);
            if (region.empty() || region.size() == n) continue;
            if (std::abs(dense.entropy(region) - static_cast<double>(tab.entropy(region))) > 1e-6)
                return report(2, false, "program " + std::to_string(prog) + ": entropy mismatch");
        }
    }
    return report(2, true,
                  std::to_string(programs) + " random programs, n <= 8, " + std::to_string(measured) +
                      " measurements: probabilities in {0, 1/2, 1} and entropies match the oracle");
}

// 3. TEE after every red round on the noiseless-Pauli axis.
int crit3() {
    HoneycombLattice lat(12);
    Protocol proto(lat);
    const TeePartition part = band_partition(lat);
    for (int milli : {0, 300, 600}) {
        ProtocolConfig cfg;
        cfg.L = 12;
        cfg.p_m = milli / 1000.0;
        cfg.p_s = 0.0;
        cfg.cycles = 20;
        cfg.seed = 1;
        cfg.realizations = 3;
        const auto runs = proto.run_experiment(cfg, {}, [&](int, const StabilizerState& st, RunRecord& rec) {
            rec.tee.push_back(tee(st, part));
        });
        for (const auto& run : runs)
            for (std::size_t t = 0; t < run.tee.size(); ++t)
                if (run.tee[t] != 1)
                    return report(3, false,
                                  "p_m=" + num(cfg.p_m) + " realization " +
                                      std::to_string(run.realization) + " t=" + std::to_string(t) +
                                      ": TEE=" + std::to_string(run.tee[t]) + " (want 1)");
    }
    return report(3, true, "TEE = 1 at every red round, p_m in {0, 0.3, 0.6}, L=12, 3 realizations");
}

// 4. Data collapse of the period-two weight across sizes.
int crit4() {
    fss::ScalingDataset ds;
    ds.ansatz = fss::Ansatz::Plain;
    for (int L : {9, 12, 15})
        for (int milli : kGrid) {
            const auto [y, se] = gpi_stat(sweep_point(L, milli));
            ds.points.push_back({milli / 1000.0, L, y, std::max(se, 1e-6)});
        }
    Rng rng(4242, 0);
    const auto res = fss::collapse(ds, rng, 200);
    if (!res) return report(4, false, "collapse fit did not converge");
    const bool ok = std::abs(res->p_c - 0.48) <= 0.02 && std::abs(res->nu - 1.35) <= 0.20;
    return report(4, ok,
                  "p_c = " + num(res->p_c) + " +/- " + num(res->p_c_err) + " (want 0.48 +/- 0.02), nu = " +
                      num(res->nu) + " +/- " + num(res->nu_err) + " (want 1.35 +/- 0.20), quality " +
                      num(res->quality));
}

// 5. Size-independent critical G(t) for t <= 30.
int crit5() {
    std::vector<TimeSeries> ts;
    for (int L : {9, 12, 15}) ts.push_back(aggregate_series(sweep_point(L, 480)));
    int worst_t = -1;
    double worst = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i)
        for (std::size_t j = i + 1; j < ts.size(); ++j)
            for (int t = 0; t <= 30; ++t) {
                const auto u = static_cast<std::size_t>(t);
                const double gap = std::abs(ts[i].mean[u] - ts[j].mean[u]);
                const double tol = 2.0 * std::hypot(ts[i].stderr_[u], ts[j].stderr_[u]);
                if (gap > tol && gap - tol > worst) {
                    worst = gap - tol;
                    worst_t = t;
                }
            }
    if (worst_t >= 0)
        return report(5, false,
                      "size pair disagrees at t=" + std::to_string(worst_t) + " by " + num(worst) +
                          " beyond 2x stderr");
    return report(5, true, "G(t) curves for L in {9,12,15} agree within 2x stderr for t <= 30 at p_m=0.48");
}

// 6. Decay rates: size-free at the critical point, size-suppressed off it.
int crit6() {
    std::map<std::pair<int, int>, double> beta;
    for (int L : {9, 12, 15})
        for (int milli : {380, 480, 580}) {
            const auto fit = decay_rate(aggregate_series(sweep_point(L, milli)));
            if (!fit)
                return report(6, false,
                              "no decay window at L=" + std::to_string(L) + " p_m=" + num(milli / 1000.0));
            beta[{L, milli}] = fit->beta;
        }
    std::string shown = "beta(0.48) =";
    bool ok = true;
    for (int L : {9, 12, 15}) {
        const double b = beta[{L, 480}];
        shown += " " + num(b);
        ok = ok && std::abs(b - 0.30) <= 0.05;
    }
    shown += " (want 0.30 +/- 0.05 at every L)";
    for (int milli : {380, 580}) {
        const double b9 = beta[{9, milli}], b12 = beta[{12, milli}], b15 = beta[{15, milli}];
        shown += "; beta(" + num(milli / 1000.0) + ") = " + num(b9) + " " + num(b12) + " " + num(b15);
        ok = ok && b9 > b12 && b12 > b15;
    }
    return report(6, ok, shown + " (off-critical rates must fall with L)");
}

// 7. Percolation thresholds and the per-cycle spanning/channel correspondence.
int crit7() {
    Rng rk(71, 0);
    const auto kag = perco::threshold_estimate(perco::Kind::Kagome, {32, 64}, 10000, rk);
    if (!kag) return report(7, false, "kagome threshold estimate failed");
    const double pmc_kag = 1.0 - kag->p_c;

    Rng rh(72, 0);
    const auto hex = perco::threshold_estimate(perco::Kind::Hexagonal, {32, 64}, 10000, rh);
    if (!hex) return report(7, false, "hexagonal threshold estimate failed");

    HoneycombLattice lat(15);
    Protocol proto(lat);
    const auto& m_x = proto.string_op(StringKind::M, StringDir::X);
    const auto& m_z = proto.string_op(StringKind::M, StringDir::Z);
    std::array<double, 2> agree{};
    const std::array<int, 2> millis = {380, 580};
    for (std::size_t i = 0; i < millis.size(); ++i) {
        Rng rc(73, static_cast<std::uint64_t>(millis[i]));
        auto st = proto.initialize(rc);
        const int samples = 10000;
        int hits = 0;
        std::vector<std::uint8_t> missed;
        for (int s = 0; s < samples; ++s) {
            st.collapse(m_x, rc);
            st.collapse(m_z, rc);
            const Channel ch = proto.one_cycle_channel(st, millis[i] / 1000.0, rc, MissMode::BlueGreen, &missed);
            const bool span = perco::spans(perco::from_miss_sample(lat, missed)).any();
            hits += span == (ch == Channel::EmExchange);
        }
        agree[i] = static_cast<double>(hits) / samples;
    }

    const bool ok_kag = std::abs(pmc_kag - 0.476) <= 0.008;
    const bool ok_hex = std::abs((1.0 - hex->p_c) - 0.65) <= 0.01;
    const bool ok_agree = agree[0] >= 0.99 && agree[1] >= 0.99;
    return report(7, ok_kag && ok_hex && ok_agree,
                  "kagome 1-p_c = " + num(pmc_kag) + " (want 0.476 +/- 0.008), hexagonal 1-p_c = " +
                      num(1.0 - hex->p_c) + " (want 0.65 +/- 0.01), spanning/em agreement " + num(agree[0]) +
                      " at p_m=0.38 and " + num(agree[1]) + " at p_m=0.58 (want >= 0.99)");
}

// 8. Channel statistics feed the transfer matrix and reproduce G(t).
int crit8() {
    HoneycombLattice lat(15);
    Rng rng(81, 0);
    const auto est = markov::estimate(lat, 0.48, 10000, rng);
    const std::array<double, 5> ref = {0.31, 0.30, 0.12, 0.23, 0.04};
    bool ok_p = true;
    std::string ps = "p =";
    for (std::size_t k = 0; k < 5; ++k) {
        ps += " " + num(est.p[k]);
        ok_p = ok_p && std::abs(est.p[k] - ref[k]) <= 0.03;
    }
    ps += " vs (0.31 0.30 0.12 0.23 0.04) +/- 0.03";

    const auto tm = markov::build(est.p[0], est.p[1], est.p[2], est.p[3], est.p[4]);
    const auto ts = aggregate_series(sweep_point(15, 480));
    int bad_t = -1;
    for (int t = 0; t <= 30; ++t) {
        const auto u = static_cast<std::size_t>(t);
        const double pred = markov::predict_G(tm, t);
        // An all-equal sample has vanishing sample stderr; the binomial error
        // of the predicted rate is the measurement resolution there.
        const double se = std::max(ts.stderr_[u], std::sqrt(pred * (1.0 - pred) / kReals));
        if (std::abs(pred - ts.mean[u]) > 2.0 * se) {
            bad_t = t;
            break;
        }
    }
    const auto fit = decay_rate(ts);
    const double model = markov::decay_rate(tm);
    const bool ok_beta = fit && std::abs(model - fit->beta) <= 0.05;
    const bool ok_g = bad_t < 0;
    std::string detail = ps + "; prediction " +
                         (ok_g ? std::string("tracks G(t) within 2x stderr for t <= 30")
                               : "misses G(t) at t=" + std::to_string(bad_t)) +
                         "; model decay " + num(model) + " vs fitted " + num(fit ? fit->beta : 0.0) +
                         " (want within 0.05)";
    return report(8, ok_p && ok_g && ok_beta, detail);
}

// 9. Volume-law onset with Pauli noise at the tricritical point.
int crit9() {
    std::string shown = "late-window TEE:";
    double prev = 0.0;
    bool ok = true;
    for (int L : {9, 12, 15}) {
        HoneycombLattice lat(L);
        Protocol proto(lat);
        const TeePartition part = band_partition(lat);
        ProtocolConfig cfg;
        cfg.L = L;
        cfg.p_m = 0.48;
        cfg.p_s = 0.05;
        cfg.cycles = 30;
        cfg.seed = 9000 + static_cast<std::uint64_t>(L);
        cfg.realizations = 48;
        const auto runs = proto.run_experiment(cfg, {}, [&](int, const StabilizerState& st, RunRecord& rec) {
            rec.tee.push_back(tee(st, part));
        });
        std::vector<double> vals;
        for (const auto& run : runs) {
            double s = 0.0;
            int n = 0;
            for (int t = cfg.cycles / 2; t <= cfg.cycles; ++t, ++n) s += run.tee[static_cast<std::size_t>(t)];
            vals.push_back(s / n);
        }
        const auto [m, se] = mean_err(vals);
        shown += " L=" + std::to_string(L) + ": " + num(m) + " +/- " + num(se);
        ok = ok && m < 0.0 && (L == 9 || m < prev);
        prev = m;
    }
    return report(9, ok, shown + " (want negative and growing in magnitude with L)");
}

// 10. Strip readout keeps the subharmonic alive under Pauli noise.
int crit10() {
    HoneycombLattice lat(12);
    Protocol proto(lat);
    RunOptions opt;
    opt.corrected = true;
    std::array<std::array<double, 4>, 2> stat{};  // per p_s: raw, raw_err, corrected, corrected_err
    const std::array<int, 2> millis = {40, 60};
    for (std::size_t i = 0; i < millis.size(); ++i) {
        ProtocolConfig cfg;
        cfg.L = 12;
        cfg.p_m = 0.4;
        cfg.p_s = millis[i] / 1000.0;
        cfg.cycles = 100;
        cfg.strip_d = 11;
        cfg.seed = 10000 + static_cast<std::uint64_t>(millis[i]);
        cfg.realizations = 100;
        const auto runs = proto.run_experiment(cfg, opt);
        std::vector<double> raw, cor;
        for (const auto& run : runs) {
            raw.push_back(fourier_components(row_series(run.g)).g_pi);
            cor.push_back(fourier_components(row_series(run.corrected_g)).g_pi);
        }
        const auto [rm, re] = mean_err(raw);
        const auto [cm, ce] = mean_err(cor);
        stat[i] = {rm, re, cm, ce};
    }
    const bool ok_split = stat[0][2] > 0.5 && stat[0][0] < 0.5;
    const bool ok_osc = stat[1][2] >= 0.1 && stat[1][2] >= 3.0 * stat[1][3];
    return report(10, ok_split && ok_osc,
                  "p_s=0.04: corrected G_pi = " + num(stat[0][2]) + ", raw = " + num(stat[0][0]) +
                      " (want corrected > 0.5 > raw); p_s=0.06: corrected G_pi = " + num(stat[1][2]) +
                      " +/- " + num(stat[1][3]) + " (want >= 0.1 and >= 3x stderr)");
}

// 11. Ancilla purification: plateau at 2 in both phases, fast purge at the
// critical point.
int crit11() {
    for (int milli : {380, 580}) {
        ProtocolConfig cfg;
        cfg.L = 12;
        cfg.p_m = milli / 1000.0;
        cfg.p_s = 0.0;
        cfg.cycles = 55;
        cfg.seed = 11000 + static_cast<std::uint64_t>(milli);
        cfg.realizations = 10;
        for (const auto& series : purification_run(cfg))
            for (int t = 5; t <= cfg.cycles; ++t)
                if (series[static_cast<std::size_t>(t)] != 2)
                    return report(11, false,
                                  "p_m=" + num(cfg.p_m) + " t=" + std::to_string(t) + ": S_a = " +
                                      std::to_string(series[static_cast<std::size_t>(t)]) +
                                      " (want plateau at exactly 2 from cycle 5 on)");
    }
    ProtocolConfig cfg;
    cfg.L = 12;
    cfg.p_m = 0.48;
    cfg.p_s = 0.0;
    cfg.cycles = 20;
    cfg.seed = 11480;
    cfg.realizations = 20;
    std::vector<double> first;
    for (const auto& series : purification_run(cfg)) {
        int t = 0;
        while (t <= cfg.cycles && series[static_cast<std::size_t>(t)] != 0) ++t;
        first.push_back(t);
    }
    const auto [m, se] = mean_err(first);
    const double budget = 3.0 * std::pow(12.0, 0.29);
    const bool ok = m <= budget;
    return report(11, ok,
                  "plateaus at 2 held for p_m in {0.38, 0.58}; mean purification time at p_m=0.48 is " +
                      num(m) + " +/- " + num(se) + " cycles (want <= " + num(budget) + ")");
}

// 12. The estimators themselves: synthetic collapse recovery and the exact
// square-lattice bond threshold.
int crit12() {
    Rng noise(121, 0);
    auto gauss = [&noise]() {
        const double u = std::max(noise.uniform(), 1e-12);
        return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * M_PI * noise.uniform());
    };
    const double pc0 = 0.48, nu0 = 1.35, eps0 = 0.2, sigma = 0.01;
    auto shape = [&](double p, int L) { return 0.5 * (1.0 - std::tanh((p - pc0) * std::pow(L, 1.0 / nu0))); };

    std::string shown;
    bool ok = true;
    for (const auto ansatz : {fss::Ansatz::Plain, fss::Ansatz::Power}) {
        fss::ScalingDataset ds;
        ds.ansatz = ansatz;
        for (int L : {16, 24, 36})
            for (int i = 0; i <= 20; ++i) {
                const double p = 0.40 + 0.008 * i;
                const double amp = ansatz == fss::Ansatz::Power ? std::pow(L, eps0) : 1.0;
                ds.points.push_back({p, L, amp * shape(p, L) + sigma * gauss(), sigma});
            }
        Rng rng(122, ansatz == fss::Ansatz::Plain ? 0 : 1);
        const auto res = fss::collapse(ds, rng, 200);
        if (!res) return report(12, false, "synthetic collapse did not converge");
        const bool got = std::abs(res->p_c - pc0) <= 2.0 * res->p_c_err &&
                         std::abs(res->nu - nu0) <= 2.0 * res->nu_err &&
                         (ansatz == fss::Ansatz::Plain || std::abs(res->eps - eps0) <= 2.0 * res->eps_err);
        ok = ok && got;
        shown += std::string(ansatz == fss::Ansatz::Plain ? "plain" : "power") + ": p_c " + num(res->p_c) +
                 " +/- " + num(res->p_c_err) + ", nu " + num(res->nu) + " +/- " + num(res->nu_err);
        if (ansatz == fss::Ansatz::Power) shown += ", eps " + num(res->eps) + " +/- " + num(res->eps_err);
        shown += "; ";
    }

    Rng rs(123, 0);
    const auto sq = perco::threshold_estimate(perco::Kind::Square, {32, 64}, 4000, rs);
    if (!sq) return report(12, false, "square threshold estimate failed");
    ok = ok && std::abs(sq->p_c - 0.5) <= 0.005;
    return report(12, ok,
                  shown + "square p_c = " + num(sq->p_c) +
                      " (want 0.500 +/- 0.005; synthetic truths within 2x bootstrap error)");
}

}  // namespace

int main(int argc, char** argv) {
    int crit = -1;
    for (int k = 1; k < argc; ++k) {
        const std::string a = argv[k];
        if (a == "--criterion" && k + 1 < argc) crit = std::atoi(argv[++k]);
        else if (a.rfind("--criterion=", 0) == 0) crit = std::atoi(a.c_str() + 12);
        else {
            std::fprintf(stderr, "usage: acceptance --criterion <1..12>\n");
            return 2;
        }
    }
    if (crit < 1 || crit > 12) {
        std::fprintf(stderr, "usage: acceptance --criterion <1..12>\n");
        return 2;
    }
    try {
        switch (crit) {
            case 1: return crit1();
            case 2: return crit2();
            case 3: return crit3();
            case 4: return crit4();
            case 5: return crit5();
            case 6: return crit6();
            case 7: return crit7();
            case 8: return crit8();
            case 9: return crit9();
            case 10: return crit10();
            case 11: return crit11();
            default: return crit12();
        }
    } catch (const std::exception& e) {
        return report(crit, false, std::string("unhandled error: ") + e.what());
    }
}
