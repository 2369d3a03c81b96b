// floq: reproducible experiment driver. Every subcommand writes its data
// files plus a manifest.json into --out; docs/formats.md documents the
// schemas. Identical (config, seed) pairs produce bit-identical outputs for
// any worker count: work is cut into a fixed task grid, each task draws from
// its own RNG stream, and workers claim tasks by stride.

#include <floqlab/fss.hpp>
#include <floqlab/markov.hpp>
#include <floqlab/observables.hpp>
#include <floqlab/percolation.hpp>
#include <floqlab/protocol.hpp>

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace floqlab;

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string git_describe() {
    FILE* pipe = ::popen("git describe --always --dirty 2>/dev/null", "r");
    if (!pipe) return "unknown";
    char buf[256];
    std::string out;
    while (std::fgets(buf, sizeof buf, pipe)) out += buf;
    ::pclose(pipe);
    while (!out.empty() && (out.back() == '\n' || out.back() == '\r')) out.pop_back();
    return out.empty() ? "unknown" : out;
}

int default_workers() {
    if (const char* env = std::getenv("FLOQ_WORKERS")) {
        const int w = std::atoi(env);
        if (w > 0) return w;
    }
    return 1;
}

// Task k runs on worker k mod W, so the task grid and the per-task RNG
// streams do not depend on the worker count.
template <class Fn>
void parallel_tasks(std::size_t n, int workers, Fn&& fn) {
    std::size_t w = workers < 1 ? 1 : static_cast<std::size_t>(workers);
    w = std::min(w, n);
    if (w <= 1) {
        for (std::size_t k = 0; k < n; ++k) fn(k);
        return;
    }
    std::vector<std::thread> pool;
    std::mutex mu;
    std::exception_ptr err;
    for (std::size_t i = 0; i < w; ++i)
        pool.emplace_back([&, i] {
            try {
                for (std::size_t k = i; k < n; k += w) fn(k);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(mu);
                if (!err) err = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

struct MeanErr {
    double mean = 0.0, err = 0.0;
};

MeanErr mean_err(const std::vector<double>& xs) {
    MeanErr r;
    if (xs.empty()) return r;
    const double n = static_cast<double>(xs.size());
    for (double x : xs) r.mean += x;
    r.mean /= n;
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - r.mean) * (x - r.mean);
        r.err = std::sqrt(ss / (n * (n - 1.0)));
    }
    return r;
}

class CsvFile {
public:
    CsvFile(const fs::path& path, const std::string& header) : out_(path) {
        if (!out_) throw std::runtime_error("cannot write " + path.string());
        out_ << header << '\n';
    }

    template <class... Ts>
    void row(const Ts&... vs) {
        const char* sep = "";
        ((out_ << sep << field(vs), sep = ","), ...);
        out_ << '\n';
    }

private:
    static std::string field(double v) { return num(v); }
    static std::string field(int v) { return std::to_string(v); }
    static const std::string& field(const std::string& v) { return v; }

    std::ofstream out_;
};

void write_json(const fs::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

double jd(const json& j, const char* key) {
    const json& v = j.at(key);
    return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
}

// Reuses a cached per-point file only when every identity key matches the
// current request, so stale caches are recomputed rather than trusted.
std::optional<json> load_cached(const fs::path& path, const json& want,
                                std::initializer_list<const char*> value_keys) {
    std::ifstream in(path);
    if (!in) return std::nullopt;
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception&) {
        return std::nullopt;
    }
    for (auto it = want.begin(); it != want.end(); ++it)
        if (!j.contains(it.key()) || j.at(it.key()) != it.value()) return std::nullopt;
    for (const char* key : value_keys)
        if (!j.contains(key)) return std::nullopt;
    return j;
}

TimeSeries one_series(const std::vector<std::uint8_t>& g) {
    TimeSeries s;
    s.mean.assign(g.begin(), g.end());
    s.stderr_.assign(g.size(), 0.0);
    return s;
}

ProtocolConfig make_cfg(int L, double pm, double ps, const std::string& mode, int cycles, int d,
                        std::uint64_t seed, int realizations) {
    ProtocolConfig cfg;
    cfg.L = L;
    cfg.p_m = pm;
    cfg.p_s = ps;
    const auto parsed = parse_miss_mode(mode);
    if (!parsed) throw std::invalid_argument("unknown mode " + mode + " (blue_green | green_only | all_rounds)");
    cfg.miss_mode = *parsed;
    cfg.cycles = cycles;
    if (d > 0) cfg.strip_d = d;
    cfg.seed = seed;
    cfg.realizations = realizations;
    cfg.validate();
    return cfg;
}

TeePartition make_partition(const HoneycombLattice& lat, const std::string& name) {
    if (name == "band") return band_partition(lat);
    if (name == "quadrant") return default_partition(lat);
    throw std::invalid_argument("unknown partition " + name + " (band | quadrant)");
}

perco::Kind parse_kind(const std::string& name) {
    if (name == "kagome") return perco::Kind::Kagome;
    if (name == "hexagonal") return perco::Kind::Hexagonal;
    if (name == "square") return perco::Kind::Square;
    throw std::invalid_argument("unknown lattice kind " + name + " (kagome | hexagonal | square)");
}

fss::Ansatz parse_ansatz(const std::string& name) {
    if (name == "plain") return fss::Ansatz::Plain;
    if (name == "power") return fss::Ansatz::Power;
    if (name == "one_plus_power") return fss::Ansatz::OnePlusPower;
    throw std::invalid_argument("unknown ansatz " + name + " (plain | power | one_plus_power)");
}

// Per-realization Fourier weights plus the decay rate of the mean curve.
void append_gstats(json& j, const std::vector<std::vector<std::uint8_t>>& runs) {
    std::vector<double> g0s, gpis;
    g0s.reserve(runs.size());
    gpis.reserve(runs.size());
    for (const auto& g : runs) {
        const FourierComponents f = fourier_components(one_series(g));
        g0s.push_back(f.g0);
        gpis.push_back(f.g_pi);
    }
    const MeanErr m0 = mean_err(g0s);
    const MeanErr mpi = mean_err(gpis);
    j["g0"] = m0.mean;
    j["g0_err"] = m0.err;
    j["gpi"] = mpi.mean;
    j["gpi_err"] = mpi.err;
    j["beta"] = json();
    j["beta_err"] = json();
    if (runs.front().size() > 10) {
        if (const auto fit = decay_rate(aggregate_series(runs))) {
            j["beta"] = fit->beta;
            j["beta_err"] = fit->beta_stderr;
        }
    }
}

int guarded_run(const fs::path& dir, const char* name, json config, std::uint64_t seed,
                bool have_seed, int workers,
                const std::function<std::vector<std::string>()>& body) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    json man{{"subcommand", name}, {"status", "running"}, {"config", std::move(config)},
             {"seed", have_seed ? json(seed) : json()}, {"workers", workers},
             {"git", git_describe()}};
    const fs::path mpath = dir / "manifest.json";
    try {
        write_json(mpath, man);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "floq %s: %s\n", name, e.what());
        return 1;
    }
    const auto t0 = std::chrono::steady_clock::now();
    std::string error;
    try {
        man["outputs"] = body();
        man["status"] = "ok";
    } catch (const std::exception& e) {
        error = e.what();
        man["status"] = "failed";
        man["error"] = error;
    }
    man["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    try {
        write_json(mpath, man);
    } catch (const std::exception&) {
    }
    if (!error.empty()) {
        std::fprintf(stderr, "floq %s: %s\n", name, error.c_str());
        return 1;
    }
    std::printf("floq %s: ok in %.1fs, outputs in %s\n", name,
                man["wall_time_s"].get<double>(), dir.string().c_str());
    return 0;
}

struct CommonArgs {
    std::string config_path;
    std::string out = "floq_out";
    std::uint64_t seed = 0;
    int workers = 0;
    bool have_seed = false;
    std::vector<std::function<void(const json&)>> fills;
    CLI::Option* seed_opt = nullptr;

    template <class T>
    void opt(CLI::App& cmd, const std::string& flag, std::string key, T& var, const std::string& help) {
        auto* o = cmd.add_option(flag, var, help);
        fills.push_back([o, key = std::move(key), &var](const json& cfg) {
            if (o->count() == 0 && cfg.contains(key)) var = cfg.at(key).get<T>();
        });
    }

    template <class T>
    void opt_list(CLI::App& cmd, const std::string& flag, std::string key, std::vector<T>& var,
                  const std::string& help) {
        auto* o = cmd.add_option(flag, var, help)->delimiter(',');
        fills.push_back([o, key = std::move(key), &var](const json& cfg) {
            if (o->count() > 0 || !cfg.contains(key)) return;
            const json& v = cfg.at(key);
            if (v.is_array())
                var = v.get<std::vector<T>>();
            else
                var = {v.get<T>()};
        });
    }

    void wire_common(CLI::App& cmd) {
        cmd.add_option("--config", config_path, "JSON config file; flags override its keys");
        opt(cmd, "--out", "out", out, "output directory");
        seed_opt = cmd.add_option("--seed", seed, "base RNG seed, required here or in the config");
        fills.push_back([this](const json& cfg) {
            if (seed_opt->count() == 0 && cfg.contains("seed")) seed = cfg.at("seed").get<std::uint64_t>();
            have_seed = seed_opt->count() > 0 || cfg.contains("seed");
        });
        opt(cmd, "--workers", "workers", workers, "worker threads (default $FLOQ_WORKERS, else 1)");
    }

    void merge(const json& cfg) {
        for (auto& fill : fills) fill(cfg);
    }
};

template <class Cmd>
int dispatch(Cmd& c, const char* name) {
    std::string defer;
    try {
        c.merge(load_config(c.config_path));
    } catch (const std::exception& e) {
        defer = e.what();
    }
    if (c.workers == 0) c.workers = default_workers();
    return guarded_run(fs::path(c.out), name, c.echo(), c.seed, c.have_seed, c.workers,
                       [&]() -> std::vector<std::string> {
                           if (!defer.empty()) throw std::runtime_error(defer);
                           if (!c.have_seed)
                               throw std::runtime_error(
                                   "a seed is required: pass --seed or put \"seed\" in the config");
                           if (c.workers < 1) throw std::invalid_argument("workers must be positive");
                           return c.run();
                       });
}

struct GtCmd : CommonArgs {
    int L = 12;
    double pm = 0.0, ps = 0.0;
    std::string mode = "blue_green";
    int cycles = 100, realizations = 100, d = 0;

    void wire(CLI::App& cmd) {
        wire_common(cmd);
        opt(cmd, "--L", "L", L, "linear size, multiple of 3");
        opt(cmd, "--pm", "pm", pm, "missed-check probability");
        opt(cmd, "--ps", "ps", ps, "single-qubit replacement probability");
        opt(cmd, "--mode", "mode", mode, "miss rounds: blue_green | green_only | all_rounds");
        opt(cmd, "--cycles", "cycles", cycles, "cycles per realization");
        opt(cmd, "--realizations", "realizations", realizations, "independent realizations");
        opt(cmd, "--d", "d", d, "correction strip width; adds corrected columns when > 0");
    }

    json echo() const {
        return {{"L", L}, {"pm", pm}, {"ps", ps}, {"mode", mode}, {"cycles", cycles},
                {"realizations", realizations}, {"d", d}, {"out", out}};
    }

    std::vector<std::string> run() const {
        const ProtocolConfig cfg = make_cfg(L, pm, ps, mode, cycles, d, seed, realizations);
        RunOptions opts;
        opts.corrected = d > 0;
        const Protocol proto{HoneycombLattice(L)};
        std::vector<RunRecord> recs(static_cast<std::size_t>(realizations));
        parallel_tasks(recs.size(), workers, [&](std::size_t k) { recs[k] = proto.run_one(cfg, k, opts); });
        std::vector<std::vector<std::uint8_t>> gs;
        gs.reserve(recs.size());
        for (auto& r : recs) gs.push_back(std::move(r.g));
        const TimeSeries g = aggregate_series(gs);
        CsvFile csv(fs::path(out) / "gt.csv", d > 0 ? "t,g,g_err,gc,gc_err" : "t,g,g_err");
        if (d > 0) {
            std::vector<std::vector<std::uint8_t>> gcs;
            gcs.reserve(recs.size());
            for (auto& r : recs) gcs.push_back(std::move(r.corrected_g));
            const TimeSeries gc = aggregate_series(gcs);
            for (std::size_t t = 0; t < g.mean.size(); ++t)
                csv.row(static_cast<int>(t), g.mean[t], g.stderr_[t], gc.mean[t], gc.stderr_[t]);
        } else {
            for (std::size_t t = 0; t < g.mean.size(); ++t)
                csv.row(static_cast<int>(t), g.mean[t], g.stderr_[t]);
        }
        return {"gt.csv"};
    }
};

struct SweepCmd : CommonArgs {
    std::vector<int> Ls{9, 12, 15};
    std::vector<double> pms;
    double ps = 0.0;
    std::string mode = "blue_green";
    int cycles = 100, realizations = 200;

    void wire(CLI::App& cmd) {
        wire_common(cmd);
        opt_list(cmd, "--L", "L", Ls, "linear sizes, comma separated");
        opt_list(cmd, "--pm", "pm", pms, "missed-check probabilities, comma separated");
        opt(cmd, "--ps", "ps", ps, "single-qubit replacement probability");
        opt(cmd, "--mode", "mode", mode, "miss rounds: blue_green | green_only | all_rounds");
        opt(cmd, "--cycles", "cycles", cycles, "cycles per realization");
        opt(cmd, "--realizations", "realizations", realizations, "independent realizations per point");
    }

    json echo() const {
        return {{"L", Ls}, {"pm", pms}, {"ps", ps}, {"mode", mode}, {"cycles", cycles},
                {"realizations", realizations}, {"out", out}};
    }

    json identity(int l, double pm) const {
        return {{"L", l}, {"p_m", pm}, {"p_s", ps}, {"mode", mode}, {"cycles", cycles},
                {"realizations", realizations}, {"seed", seed}};
    }

    fs::path pt_path(std::size_t idx) const {
        return fs::path(out) / ("pt_" + std::to_string(idx) + ".json");
    }

    std::vector<std::string> run() const {
        if (Ls.empty() || pms.empty()) throw std::invalid_argument("sweep needs --L and --pm values");
        if (cycles < 2) throw std::invalid_argument("sweep needs cycles >= 2");
        struct Point {
            int L;
            double pm;
        };
        std::vector<Point> points;
        for (int l : Ls)
            for (double q : pms) points.push_back({l, q});
        std::map<int, Protocol> protos;
        for (const Point& pt : points) make_cfg(pt.L, pt.pm, ps, mode, cycles, 0, seed, realizations);
        for (int l : Ls) protos.try_emplace(l, HoneycombLattice(l));

        std::vector<json> stats(points.size());
        std::vector<std::size_t> pending;
        for (std::size_t i = 0; i < points.size(); ++i) {
            auto cached = load_cached(pt_path(i), identity(points[i].L, points[i].pm),
                                      {"g0", "g0_err", "gpi", "gpi_err", "beta", "beta_err"});
            if (cached)
                stats[i] = std::move(*cached);
            else
                pending.push_back(i);
        }
        std::printf("sweep: %zu points, %zu cached, %zu to run\n", points.size(),
                    points.size() - pending.size(), pending.size());

        const std::size_t R = static_cast<std::size_t>(realizations);
        std::vector<std::vector<std::uint8_t>> results(pending.size() * R);
        parallel_tasks(results.size(), workers, [&](std::size_t k) {
            const Point& pt = points[pending[k / R]];
            const ProtocolConfig cfg = make_cfg(pt.L, pt.pm, ps, mode, cycles, 0, seed, realizations);
            results[k] = protos.at(pt.L).run_one(cfg, k % R).g;
        });
        for (std::size_t s = 0; s < pending.size(); ++s) {
            const std::size_t i = pending[s];
            const std::vector<std::vector<std::uint8_t>> runs(
                results.begin() + static_cast<std::ptrdiff_t>(s * R),
                results.begin() + static_cast<std::ptrdiff_t>((s + 1) * R));
            json j = identity(points[i].L, points[i].pm);
            append_gstats(j, runs);
            write_json(pt_path(i), j);
            stats[i] = std::move(j);
        }

        CsvFile csv(fs::path(out) / "sweep.csv", "L,p_m,p_s,g0,g0_err,gpi,gpi_err,beta,beta_err");
        for (std::size_t i = 0; i < points.size(); ++i) {
            const json& j = stats[i];
            csv.row(points[i].L, points[i].pm, ps, jd(j, "g0"), jd(j, "g0_err"), jd(j, "gpi"),
                    jd(j, "gpi_err"), jd(j, "beta"), jd(j, "beta_err"));
        }
        return {"sweep.csv"};
    }
};

struct TeeCmd : CommonArgs {
    int L = 12;
    double pm = 0.0, ps = 0.0;
    std::string mode = "blue_green", partition = "band";
    int cycles = 20, realizations = 20;

    void wire(CLI::App& cmd) {
        wire_common(cmd);
        opt(cmd, "--L", "L", L, "linear size, multiple of 3");
        opt(cmd, "--pm", "pm", pm, "missed-check probability");
        opt(cmd, "--ps", "ps", ps, "single-qubit replacement probability");
        opt(cmd, "--mode", "mode", mode, "miss rounds: blue_green | green_only | all_rounds");
        opt(cmd, "--partition", "partition", partition, "tripartition: band | quadrant");
        opt(cmd, "--cycles", "cycles", cycles, "cycles per realization");
        opt(cmd, "--realizations", "realizations", realizations, "independent realizations");
    }

    json echo() const {
        return {{"L", L}, {"pm", pm}, {"ps", ps}, {"mode", mode}, {"partition", partition},
                {"cycles", cycles}, {"realizations", realizations}, {"out", out}};
    }

    std::vector<std::string> run() const {
        const ProtocolConfig cfg = make_cfg(L, pm, ps, mode, cycles, 0, seed, realizations);
        const HoneycombLattice lat(L);
        const TeePartition part = make_partition(lat, partition);
        const Protocol proto(lat);
        const CycleHook hook = [&part](int, const StabilizerState& st, RunRecord& rec) {
            rec.tee.push_back(tee(st, part));
        };
        std::vector<std::vector<int>> tees(static_cast<std::size_t>(realizations));
        parallel_tasks(tees.size(), workers,
                       [&](std::size_t k) { tees[k] = proto.run_one(cfg, k, {}, hook).tee; });
        const TimeSeries ts = aggregate_series(tees);
        CsvFile csv(fs::path(out) / "tee.csv", "t,tee,tee_err");
        for (std::size_t t = 0; t < ts.mean.size(); ++t)
            csv.row(static_cast<int>(t), ts.mean[t], ts.stderr_[t]);
        return {"tee.csv"};
    }
};

struct PurifyCmd : CommonArgs {
    int L = 9;
    double pm = 0.48, ps = 0.0;
    std::string mode = "blue_green";
    int cycles = 60, realizations = 20, ancillas = 10;

    void wire(CLI::App& cmd) {
        wire_common(cmd);
        opt(cmd, "--L", "L", L, "linear size, multiple of 3");
        opt(cmd, "--pm", "pm", pm, "missed-check probability");
        opt(cmd, "--ps", "ps", ps, "single-qubit replacement probability");
        opt(cmd, "--mode", "mode", mode, "miss rounds: blue_green | green_only | all_rounds");
        opt(cmd, "--cycles", "cycles", cycles, "cycles per realization");
        opt(cmd, "--realizations", "realizations", realizations, "independent realizations");
        opt(cmd, "--ancillas", "ancillas", ancillas, "ancilla register size");
    }

    json echo() const {
        return {{"L", L}, {"pm", pm}, {"ps", ps}, {"mode", mode}, {"cycles", cycles},
                {"realizations", realizations}, {"ancillas", ancillas}, {"out", out}};
    }

    std::vector<std::string> run() const {
        if (ancillas < 1) throw std::invalid_argument("ancillas must be positive");
        const ProtocolConfig cfg = make_cfg(L, pm, ps, mode, cycles, 0, seed, realizations);
        const auto runs = purification_run(cfg, static_cast<std::size_t>(ancillas));
        const TimeSeries ts = aggregate_series(runs);
        CsvFile csv(fs::path(out) / "purify.csv", "t,sa,sa_err");
        for (std::size_t t = 0; t < ts.mean.size(); ++t)
            csv.row(static_cast<int>(t), ts.mean[t], ts.stderr_[t]);
        return {"purify.csv"};
    }
};

struct PercolateCmd : CommonArgs {
    std::string kind = "kagome";
    std::vector<int> Ls{16, 32, 64};
    std::vector<double> ps_grid;
    int samples = 2000;

    void wire(CLI::App& cmd) {
        wire_common(cmd);
        opt(cmd, "--kind", "kind", kind, "lattice: kagome | hexagonal | square");
        opt_list(cmd, "--L", "L", Ls, "linear sizes, comma separated");
        opt_list(cmd, "--p", "p", ps_grid, "bond probabilities for the raw curve (default 0.05..0.95)");
        opt(cmd, "--samples", "samples", samples, "samples per (L, p) point");
    }

    json echo() const {
        return {{"kind", kind}, {"L", Ls}, {"p", ps_grid}, {"samples", samples}, {"out", out}};
    }

    std::vector<std::string> run() const {
        const perco::Kind k = parse_kind(kind);
        if (Ls.empty()) throw std::invalid_argument("percolate needs --L values");
        if (samples < 1) throw std::invalid_argument("samples must be positive");
        std::vector<double> grid = ps_grid;
        if (grid.empty())
            for (int i = 1; i <= 19; ++i) grid.push_back(0.05 * i);

        const std::size_t n = Ls.size() * grid.size();
        std::vector<int> hits(n, 0);
        parallel_tasks(n, workers, [&](std::size_t t) {
            const int l = Ls[t / grid.size()];
            const double p = grid[t % grid.size()];
            Rng rng(seed, 1'000'000 + t);
            int c = 0;
            for (int s = 0; s < samples; ++s)
                if (perco::spans(perco::sample(k, l, p, rng)).any()) ++c;
            hits[t] = c;
        });
        CsvFile csv(fs::path(out) / "percolation.csv", "kind,L,p_bond,spanning,spanning_err");
        for (std::size_t t = 0; t < n; ++t) {
            const double q = static_cast<double>(hits[t]) / samples;
            csv.row(kind, Ls[t / grid.size()], grid[t % grid.size()], q,
                    std::sqrt(q * (1.0 - q) / samples));
        }

        json th{{"kind", kind}, {"sizes", Ls}, {"samples", samples}};
        if (Ls.size() < 2) {
            th["p_c"] = json();
            th["reason"] = "threshold estimate needs at least two sizes";
        } else if (samples < 8) {
            th["p_c"] = json();
            th["reason"] = "threshold estimate needs at least 8 samples";
        } else {
            Rng rng(seed, 0);
            if (const auto est = perco::threshold_estimate(k, Ls, samples, rng)) {
                th["p_c"] = est->p_c;
                th["p_c_stderr"] = est->p_c_stderr;
                th["nu"] = est->nu;
                th["p_m_c"] = 1.0 - est->p_c;
            } else {
                th["p_c"] = json();
                th["reason"] = "spanning curves have no common crossing in the sampled window";
            }
        }
        write_json(fs::path(out) / "threshold.json", th);
        return {"percolation.csv", "threshold.json"};
    }
};

struct MarkovCmd : CommonArgs {
    int L = 9;
    double pm = 0.48;
    int samples = 2000, cycles = 30, realizations = 200;

    void wire(CLI::App& cmd) {
        wire_common(cmd);
        opt(cmd, "--L", "L", L, "linear size, multiple of 3");
        opt(cmd, "--pm", "pm", pm, "missed-check probability");
        opt(cmd, "--samples", "samples", samples, "single-cycle channel samples");
        opt(cmd, "--cycles", "cycles", cycles, "cycles for the measured curve");
        opt(cmd, "--realizations", "realizations", realizations, "realizations for the measured curve");
    }

    json echo() const {
        return {{"L", L}, {"pm", pm}, {"samples", samples}, {"cycles", cycles},
                {"realizations", realizations}, {"out", out}};
    }

    std::vector<std::string> run() const {
        if (samples < 1) throw std::invalid_argument("samples must be positive");
        const ProtocolConfig cfg = make_cfg(L, pm, 0.0, "blue_green", cycles, 0, seed, realizations);
        const HoneycombLattice lat(L);

        // Fixed chunk grid keeps the channel tally independent of the worker
        // count; counts are recovered exactly from each chunk's frequencies.
        const int n_chunks = std::min(64, samples);
        const int base = samples / n_chunks;
        const int extra = samples % n_chunks;
        std::vector<std::array<long, 5>> counts(static_cast<std::size_t>(n_chunks), std::array<long, 5>{});
        parallel_tasks(static_cast<std::size_t>(n_chunks), workers, [&](std::size_t c) {
            const int n_c = base + (static_cast<int>(c) < extra ? 1 : 0);
            Rng rng(seed, 2'000'000 + c);
            const markov::ChannelEstimate est = markov::estimate(lat, pm, n_c, rng);
            for (int i = 0; i < 5; ++i) counts[c][static_cast<std::size_t>(i)] = std::lround(est.p[static_cast<std::size_t>(i)] * n_c);
        });
        std::array<double, 5> p{}, perr{};
        for (const auto& cc : counts)
            for (std::size_t i = 0; i < 5; ++i) p[i] += static_cast<double>(cc[i]);
        for (std::size_t i = 0; i < 5; ++i) {
            p[i] /= samples;
            perr[i] = std::sqrt(p[i] * (1.0 - p[i]) / samples);
        }

        const markov::TransferMatrix tm = markov::build(p[0], p[1], p[2], p[3], p[4]);
        json mj{{"L", L}, {"p_m", pm}, {"samples", samples}, {"p", p}, {"p_err", perr}};
        json mat = json::array();
        for (int r = 0; r < 6; ++r) {
            json row = json::array();
            for (int c = 0; c < 6; ++c) row.push_back(tm.s(r, c));
            mat.push_back(std::move(row));
        }
        mj["matrix"] = std::move(mat);
        json evs = json::array();
        for (const auto& e : markov::eigenvalues(tm)) evs.push_back(json::array({e.real(), e.imag()}));
        mj["eigenvalues"] = std::move(evs);
        mj["decay_rate"] = markov::decay_rate(tm);
        write_json(fs::path(out) / "markov.json", mj);

        const Protocol proto(lat);
        std::vector<std::vector<std::uint8_t>> gs(static_cast<std::size_t>(realizations));
        parallel_tasks(gs.size(), workers, [&](std::size_t k) { gs[k] = proto.run_one(cfg, k).g; });
        const TimeSeries ts = aggregate_series(gs);
        CsvFile csv(fs::path(out) / "markov_gt.csv", "t,predicted,measured,measured_err");
        for (std::size_t t = 0; t < ts.mean.size(); ++t)
            csv.row(static_cast<int>(t), markov::predict_G(tm, static_cast<int>(t)), ts.mean[t],
                    ts.stderr_[t]);
        return {"markov.json", "markov_gt.csv"};
    }
};

struct CollapseCmd : CommonArgs {
    std::string input, ansatz = "plain";
    int bootstrap = 200;
    double sigma_floor = 1e-6;

    void wire(CLI::App& cmd) {
        wire_common(cmd);
        opt(cmd, "--input", "input", input, "CSV with (L, p_m, gpi, gpi_err) or (L, p, y, sigma)");
        opt(cmd, "--ansatz", "ansatz", ansatz, "plain | power | one_plus_power");
        opt(cmd, "--bootstrap", "bootstrap", bootstrap, "bootstrap resamples for error bars");
        opt(cmd, "--sigma-floor", "sigma_floor", sigma_floor, "lower clamp applied to error columns");
    }

    json echo() const {
        return {{"input", input}, {"ansatz", ansatz}, {"bootstrap", bootstrap},
                {"sigma_floor", sigma_floor}, {"out", out}};
    }

    struct Table {
        std::vector<std::string> header;
        std::vector<std::vector<double>> rows;
    };

    static std::vector<std::string> split_csv(const std::string& line) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream in(line);
        while (std::getline(in, cell, ',')) cells.push_back(cell);
        return cells;
    }

    static Table read_csv(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open " + path);
        Table t;
        std::string line;
        if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
        if (!line.empty() && line.back() == '\r') line.pop_back();
        t.header = split_csv(line);
        int lineno = 1;
        while (std::getline(in, line)) {
            ++lineno;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            const auto cells = split_csv(line);
            if (cells.size() != t.header.size())
                throw std::runtime_error(path + ":" + std::to_string(lineno) + ": wrong column count");
            std::vector<double> row;
            row.reserve(cells.size());
            for (const auto& c : cells) {
                try {
                    row.push_back(std::stod(c));
                } catch (const std::exception&) {
                    throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                             ": not a number: " + c);
                }
            }
            t.rows.push_back(std::move(row));
        }
        return t;
    }

    static int col(const Table& t, const std::string& name) {
        for (std::size_t i = 0; i < t.header.size(); ++i)
            if (t.header[i] == name) return static_cast<int>(i);
        return -1;
    }

    std::vector<std::string> run() const {
        if (input.empty()) throw std::invalid_argument("collapse needs --input");
        if (bootstrap < 0) throw std::invalid_argument("bootstrap must be non-negative");
        const Table t = read_csv(input);
        int cp = col(t, "p_m"), cy = col(t, "gpi"), cs = col(t, "gpi_err");
        if (cp < 0 || cy < 0) {
            cp = col(t, "p");
            cy = col(t, "y");
            cs = col(t, "sigma");
        }
        const int cL = col(t, "L");
        if (cp < 0 || cL < 0 || cy < 0 || cs < 0)
            throw std::runtime_error(input + ": need columns (L, p_m, gpi, gpi_err) or (L, p, y, sigma)");

        fss::ScalingDataset ds;
        ds.ansatz = parse_ansatz(ansatz);
        int skipped = 0;
        for (const auto& row : t.rows) {
            fss::ScalingPoint pt;
            pt.p = row[static_cast<std::size_t>(cp)];
            pt.L = static_cast<int>(std::lround(row[static_cast<std::size_t>(cL)]));
            pt.y = row[static_cast<std::size_t>(cy)];
            pt.sigma = std::max(row[static_cast<std::size_t>(cs)], sigma_floor);
            if (!std::isfinite(pt.p) || !std::isfinite(pt.y) || !std::isfinite(pt.sigma)) {
                ++skipped;
                continue;
            }
            ds.points.push_back(pt);
        }
        Rng rng(seed, 0);
        const auto res = fss::collapse(ds, rng, bootstrap);
        if (!res) throw std::runtime_error("collapse failed: transformed size windows do not overlap");

        json cj{{"ansatz", ansatz}, {"p_c", res->p_c}, {"p_c_err", res->p_c_err},
                {"nu", res->nu}, {"nu_err", res->nu_err}, {"quality", res->quality},
                {"points", ds.points.size()}, {"rows_skipped", skipped}, {"bootstrap", bootstrap}};
        if (ds.ansatz != fss::Ansatz::Plain) {
            cj["eps"] = res->eps;
            cj["eps_err"] = res->eps_err;
        }
        write_json(fs::path(out) / "collapse.json", cj);

        CsvFile csv(fs::path(out) / "collapsed.csv", "L,p,x,y_scaled,sigma_scaled");
        for (const auto& pt : ds.points) {
            const double x = (pt.p - res->p_c) * std::pow(pt.L, 1.0 / res->nu);
            double scale = 1.0, shift = 0.0;
            if (ds.ansatz != fss::Ansatz::Plain) scale = std::pow(pt.L, res->eps);
            if (ds.ansatz == fss::Ansatz::OnePlusPower) shift = 1.0;
            csv.row(pt.L, pt.p, x, (pt.y - shift) / scale, pt.sigma / scale);
        }
        return {"collapse.json", "collapsed.csv"};
    }
};

struct PhaseCmd : CommonArgs {
    int L = 12;
    std::vector<double> pms, pss;
    std::string mode = "blue_green", partition = "band";
    int cycles = 20, realizations = 20;

    void wire(CLI::App& cmd) {
        wire_common(cmd);
        opt(cmd, "--L", "L", L, "linear size, multiple of 3");
        opt_list(cmd, "--pm", "pm", pms, "missed-check probabilities, comma separated");
        opt_list(cmd, "--ps", "ps", pss, "single-qubit replacement probabilities, comma separated");
        opt(cmd, "--mode", "mode", mode, "miss rounds: blue_green | green_only | all_rounds");
        opt(cmd, "--partition", "partition", partition, "tripartition: band | quadrant");
        opt(cmd, "--cycles", "cycles", cycles, "cycles per realization");
        opt(cmd, "--realizations", "realizations", realizations, "independent realizations per point");
    }

    json echo() const {
        return {{"L", L}, {"pm", pms}, {"ps", pss}, {"mode", mode}, {"partition", partition},
                {"cycles", cycles}, {"realizations", realizations}, {"out", out}};
    }

    json identity(double pm, double ps) const {
        return {{"L", L}, {"p_m", pm}, {"p_s", ps}, {"mode", mode}, {"partition", partition},
                {"cycles", cycles}, {"realizations", realizations}, {"seed", seed}};
    }

    fs::path pt_path(std::size_t idx) const {
        return fs::path(out) / ("pd_" + std::to_string(idx) + ".json");
    }

    std::vector<std::string> run() const {
        if (pms.empty() || pss.empty())
            throw std::invalid_argument("phase-diagram needs --pm and --ps values");
        if (cycles < 2) throw std::invalid_argument("phase-diagram needs cycles >= 2");
        struct Point {
            double pm, ps;
        };
        std::vector<Point> points;
        for (double pm : pms)
            for (double q : pss) points.push_back({pm, q});
        for (const Point& pt : points) make_cfg(L, pt.pm, pt.ps, mode, cycles, 0, seed, realizations);

        const HoneycombLattice lat(L);
        const TeePartition part = make_partition(lat, partition);
        const Protocol proto(lat);
        const CycleHook hook = [&part](int, const StabilizerState& st, RunRecord& rec) {
            rec.tee.push_back(tee(st, part));
        };

        std::vector<json> stats(points.size());
        std::vector<std::size_t> pending;
        for (std::size_t i = 0; i < points.size(); ++i) {
            auto cached = load_cached(pt_path(i), identity(points[i].pm, points[i].ps),
                                      {"tee", "tee_err", "g0", "g0_err", "gpi", "gpi_err"});
            if (cached)
                stats[i] = std::move(*cached);
            else
                pending.push_back(i);
        }
        std::printf("phase-diagram: %zu points, %zu cached, %zu to run\n", points.size(),
                    points.size() - pending.size(), pending.size());

        struct PdRun {
            std::vector<std::uint8_t> g;
            std::vector<int> tee;
        };
        const std::size_t R = static_cast<std::size_t>(realizations);
        std::vector<PdRun> results(pending.size() * R);
        parallel_tasks(results.size(), workers, [&](std::size_t k) {
            const Point& pt = points[pending[k / R]];
            const ProtocolConfig cfg = make_cfg(L, pt.pm, pt.ps, mode, cycles, 0, seed, realizations);
            RunRecord rec = proto.run_one(cfg, k % R, {}, hook);
            results[k] = {std::move(rec.g), std::move(rec.tee)};
        });

        const std::size_t lo = static_cast<std::size_t>(cycles) / 2;
        for (std::size_t s = 0; s < pending.size(); ++s) {
            const std::size_t i = pending[s];
            std::vector<std::vector<std::uint8_t>> gs;
            std::vector<double> lates;
            gs.reserve(R);
            lates.reserve(R);
            for (std::size_t r = 0; r < R; ++r) {
                const PdRun& run = results[s * R + r];
                gs.push_back(run.g);
                double acc = 0.0;
                for (std::size_t u = lo; u < run.tee.size(); ++u) acc += run.tee[u];
                lates.push_back(acc / static_cast<double>(run.tee.size() - lo));
            }
            json j = identity(points[i].pm, points[i].ps);
            append_gstats(j, gs);
            const MeanErr late = mean_err(lates);
            j["tee"] = late.mean;
            j["tee_err"] = late.err;
            write_json(pt_path(i), j);
            stats[i] = std::move(j);
        }

        CsvFile csv(fs::path(out) / "phase_diagram.csv",
                    "p_m,p_s,L,tee,tee_err,g0,g0_err,gpi,gpi_err");
        for (std::size_t i = 0; i < points.size(); ++i) {
            const json& j = stats[i];
            csv.row(points[i].pm, points[i].ps, L, jd(j, "tee"), jd(j, "tee_err"), jd(j, "g0"),
                    jd(j, "g0_err"), jd(j, "gpi"), jd(j, "gpi_err"));
        }
        return {"phase_diagram.csv"};
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"floquet code experiment driver; output schemas are in docs/formats.md"};
    app.require_subcommand(1);
    int rc = 0;

    GtCmd gt;
    auto* gt_cmd = app.add_subcommand("gt", "autocorrelator G(t) at one parameter point");
    gt.wire(*gt_cmd);
    gt_cmd->callback([&] { rc = dispatch(gt, "gt"); });

    SweepCmd sweep;
    auto* sweep_cmd = app.add_subcommand("sweep", "Fourier weights and decay rates over an (L, p_m) grid");
    sweep.wire(*sweep_cmd);
    sweep_cmd->callback([&] { rc = dispatch(sweep, "sweep"); });

    TeeCmd teec;
    auto* tee_cmd = app.add_subcommand("tee", "topological entanglement entropy per cycle");
    teec.wire(*tee_cmd);
    tee_cmd->callback([&] { rc = dispatch(teec, "tee"); });

    PurifyCmd purify;
    auto* purify_cmd = app.add_subcommand("purify", "ancilla purification probe");
    purify.wire(*purify_cmd);
    purify_cmd->callback([&] { rc = dispatch(purify, "purify"); });

    PercolateCmd percolate;
    auto* perc_cmd = app.add_subcommand("percolate", "bond percolation curves and threshold estimate");
    percolate.wire(*perc_cmd);
    perc_cmd->callback([&] { rc = dispatch(percolate, "percolate"); });

    MarkovCmd markovc;
    auto* markov_cmd = app.add_subcommand("markov", "single-cycle channel tally and transfer-matrix prediction");
    markovc.wire(*markov_cmd);
    markov_cmd->callback([&] { rc = dispatch(markovc, "markov"); });

    CollapseCmd collapse;
    auto* coll_cmd = app.add_subcommand("collapse", "finite-size scaling collapse of a point cloud");
    collapse.wire(*coll_cmd);
    coll_cmd->callback([&] { rc = dispatch(collapse, "collapse"); });

    PhaseCmd phase;
    auto* phase_cmd = app.add_subcommand("phase-diagram", "entropy and readout markers over a (p_m, p_s) grid");
    phase.wire(*phase_cmd);
    phase_cmd->callback([&] { rc = dispatch(phase, "phase-diagram"); });

    CLI11_PARSE(app, argc, argv);
    return rc;
}
