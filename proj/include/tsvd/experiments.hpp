#pragma once

#include "tsvd/ensembles.hpp"
#include "tsvd/error.hpp"
#include "tsvd/hooi.hpp"
#include "tsvd/io.hpp"
#include "tsvd/linalg.hpp"
#include "tsvd/planted_clique.hpp"
#include "tsvd/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <istream>
#include <iterator>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace tsvd::exp {

enum class Experiment { table1, table2, phase, clique };

inline std::string to_string(Experiment e) {
    switch (e) {
        case Experiment::table1: return "table1";
        case Experiment::table2: return "table2";
        case Experiment::phase: return "phase";
        case Experiment::clique: return "clique";
    }
    return "?";
}

inline Experiment parse_experiment(const std::string& s) {
    if (s == "table1") return Experiment::table1;
    if (s == "table2") return Experiment::table2;
    if (s == "phase") return Experiment::phase;
    if (s == "clique") return Experiment::clique;
    throw ContractViolation("unknown experiment '" + s + "'");
}

enum class Start { spectral, warm };

/// One parameter tuple of a sweep. Fields that an experiment does not use are ignored.
struct GridCell {
    Dims3 dims{0, 0, 0};
    Ranks3 ranks{5, 5, 5};
    double lambda = 0.0;
    double alpha = 0.0;
    NoiseKind noise = NoiseKind::gaussian();
    Start start = Start::spectral;
    std::size_t n = 0;
    std::size_t kappa = 0;
};

struct SimConfig {
    Experiment experiment = Experiment::table1;
    std::vector<GridCell> grid;
    int reps = 100;
    std::uint64_t base_seed = 2017;
    int workers = 1;
    std::string output_path;
    int max_iters = 50;
};

struct ResultRow {
    std::string experiment;
    std::string cell;
    int rep = 0;
    std::uint64_t seed = 0;
    std::string metric;
    double value = 0.0;
};

struct SummaryRow {
    std::string experiment;
    std::string cell;
    std::string metric;
    double mean = 0.0;
    double se = 0.0;
    std::size_t count = 0;
};

inline std::string format_g(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

inline std::string cell_label(Experiment e, const GridCell& c) {
    switch (e) {
        case Experiment::table1:
        case Experiment::table2:
            return std::to_string(c.dims[0]) + "x" + std::to_string(c.dims[1]) + "x" +
                   std::to_string(c.dims[2]) + "_" + std::to_string(c.ranks[0]) + "x" +
                   std::to_string(c.ranks[1]) + "x" + std::to_string(c.ranks[2]) + "_lam" +
                   format_g(c.lambda);
        case Experiment::phase:
            return "p" + std::to_string(c.dims[0]) + "_a" + format_g(c.alpha) + "_" +
                   c.noise.name() + "_" + (c.start == Start::warm ? "warm" : "spectral");
        case Experiment::clique:
            return "N" + std::to_string(c.n) + "_k" + std::to_string(c.kappa);
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Default grids.
// ---------------------------------------------------------------------------

inline GridCell cubic_cell(std::size_t p, std::size_t r, double lambda) {
    GridCell c;
    c.dims = {p, p, p};
    c.ranks = {r, r, r};
    c.lambda = lambda;
    return c;
}

inline std::vector<GridCell> table1_grid() {
    return {cubic_cell(50, 5, 20),   cubic_cell(50, 5, 50),   cubic_cell(50, 10, 20),
            cubic_cell(50, 10, 50),  cubic_cell(100, 5, 40),  cubic_cell(100, 5, 60),
            cubic_cell(100, 10, 40), cubic_cell(100, 10, 60)};
}

inline std::vector<GridCell> table2_grid() {
    const auto cell = [](std::size_t a, std::size_t b, std::size_t c, double lam) {
        GridCell g;
        g.dims = {a, b, c};
        g.ranks = {5, 5, 5};
        g.lambda = lam;
        return g;
    };
    return {cell(20, 30, 50, 20),     cell(20, 30, 50, 100),    cell(30, 50, 100, 20),
            cell(30, 50, 100, 100),   cell(100, 200, 300, 50),  cell(100, 200, 300, 100),
            cell(200, 300, 400, 50),  cell(200, 300, 400, 150)};
}

/// alpha = 0.40, 0.45, ..., 0.90 for each p, noise law and start.
inline std::vector<GridCell> phase_grid(const std::vector<std::size_t>& ps = {50, 100},
                                        std::size_t r = 5) {
    std::vector<GridCell> g;
    for (auto p : ps)
        for (auto noise : {NoiseKind::gaussian(), NoiseKind::uniform()})
            for (auto start : {Start::spectral, Start::warm})
                for (int a = 0; a <= 10; ++a) {
                    GridCell c = cubic_cell(p, r, 0.0);
                    c.alpha = 0.4 + 0.05 * a;
                    c.noise = noise;
                    c.start = start;
                    g.push_back(c);
                }
    return g;
}

inline std::vector<GridCell> clique_grid(std::size_t n = 600) {
    std::vector<GridCell> g;
    for (std::size_t k : {std::size_t{4}, std::size_t{8}, std::size_t{16}, std::size_t{24},
                          std::size_t{32}, std::size_t{48}, std::size_t{64}, std::size_t{96},
                          std::size_t{120}, n / 2}) {
        GridCell c;
        c.n = n;
        c.kappa = k;
        g.push_back(c);
    }
    return g;
}

inline std::vector<GridCell> default_grid(Experiment e) {
    switch (e) {
        case Experiment::table1: return table1_grid();
        case Experiment::table2: return table2_grid();
        case Experiment::phase: return phase_grid();
        case Experiment::clique: return clique_grid();
    }
    return {};
}

/// Grid file: one cell per line of whitespace-separated key=value pairs; '#'
/// starts a comment. Keys: p (sets p1=p2=p3), p1, p2, p3, r (sets r1=r2=r3),
/// r1, r2, r3, lambda, alpha, noise (gaussian|uniform), sigma, start
/// (spectral|warm), n, kappa.
inline std::vector<GridCell> parse_grid(std::istream& is) {
    std::vector<GridCell> cells;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string tok;
        GridCell c;
        bool any = false;
        while (ls >> tok) {
            const auto eq = tok.find('=');
            if (eq == std::string::npos)
                throw ContractViolation("grid line " + std::to_string(lineno) +
                                        ": expected key=value, got '" + tok + "'");
            const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
            const auto bad_value = [&] {
                return ContractViolation("grid line " + std::to_string(lineno) +
                                         ": bad value for '" + key + "'");
            };
            const auto as_size = [&] {
                std::size_t used = 0;
                unsigned long long v = 0;
                try {
                    v = std::stoull(val, &used);
                } catch (const std::logic_error&) {
                    throw bad_value();
                }
                if (used != val.size() || val.front() == '-') throw bad_value();
                return static_cast<std::size_t>(v);
            };
            const auto as_double = [&] {
                std::size_t used = 0;
                double v = 0.0;
                try {
                    v = std::stod(val, &used);
                } catch (const std::logic_error&) {
                    throw bad_value();
                }
                if (used != val.size()) throw bad_value();
                return v;
            };
            any = true;
            if (key == "p") c.dims = {as_size(), as_size(), as_size()};
            else if (key == "p1") c.dims[0] = as_size();
            else if (key == "p2") c.dims[1] = as_size();
            else if (key == "p3") c.dims[2] = as_size();
            else if (key == "r") c.ranks = {as_size(), as_size(), as_size()};
            else if (key == "r1") c.ranks[0] = as_size();
            else if (key == "r2") c.ranks[1] = as_size();
            else if (key == "r3") c.ranks[2] = as_size();
            else if (key == "lambda") c.lambda = as_double();
            else if (key == "alpha") c.alpha = as_double();
            else if (key == "sigma") c.noise.sigma = as_double();
            else if (key == "noise") {
                if (val == "gaussian") c.noise.law = NoiseKind::Law::gaussian;
                else if (val == "uniform") c.noise = NoiseKind::uniform();
                else throw ContractViolation("grid: unknown noise '" + val + "'");
            } else if (key == "start") {
                if (val == "spectral") c.start = Start::spectral;
                else if (val == "warm") c.start = Start::warm;
                else throw ContractViolation("grid: unknown start '" + val + "'");
            } else if (key == "n") c.n = as_size();
            else if (key == "kappa") c.kappa = as_size();
            else throw ContractViolation("grid line " + std::to_string(lineno) +
                                         ": unknown key '" + key + "'");
        }
        if (any) cells.push_back(c);
    }
    return cells;
}

// ---------------------------------------------------------------------------
// Per-replication work.
// ---------------------------------------------------------------------------

namespace detail {

/// (1/3) sum_k ||sin Theta(U_hat_k, U_k)||_q.
inline double mean_loss(const Bases3& est, const Bases3& truth, double q) {
    double s = 0.0;
    for (int k = 0; k < 3; ++k) s += sin_theta_norm(est[k], truth[k], q);
    return s / 3.0;
}

struct RowSink {
    std::string experiment, cell;
    int rep;
    std::uint64_t seed;
    std::vector<ResultRow> rows;
    void add(const std::string& metric, double v) {
        rows.push_back({experiment, cell, rep, seed, metric, v});
    }
};

inline HooiConfig hooi_config(const Ranks3& ranks, int max_iters) {
    HooiConfig cfg;
    cfg.ranks = ranks;
    cfg.max_iters = max_iters;
    return cfg;
}

inline void run_table1_rep(const GridCell& c, const RngStream& rng, int max_iters, RowSink& out) {
    const Instance inst =
        make_instance(c.dims, c.ranks, c.lambda, CoreKind::rescaled_gaussian, c.noise, rng);
    HooiConfig cfg = hooi_config(c.ranks, max_iters);
    cfg.init = hosvd_init(inst.y, c.ranks);
    const Bases3 init = *cfg.init;
    const HooiResult res = hooi(inst.y, cfg);
    const auto& truth = inst.truth.bases;
    for (double q : {1.0, 2.0, 5.0, kInf}) {
        const std::string tag = std::isinf(q) ? "linf" : "l" + format_g(q);
        out.add(tag + "_final", mean_loss(res.factors.bases, truth, q));
        out.add(tag + "_init", mean_loss(init, truth, q));
    }
}

inline void run_table2_rep(const GridCell& c, const RngStream& rng, int max_iters, RowSink& out) {
    const Instance inst =
        make_instance(c.dims, c.ranks, c.lambda, CoreKind::rescaled_gaussian, c.noise, rng);
    const HooiResult res = hooi(inst.y, hooi_config(c.ranks, max_iters));
    for (int k = 0; k < 3; ++k) {
        const std::string u = "U" + std::to_string(k + 1);
        out.add("linf_" + u, sin_theta_norm(res.factors.bases[k], inst.truth.bases[k], kInf));
        out.add("l2_" + u, sin_theta_norm(res.factors.bases[k], inst.truth.bases[k], 2.0));
    }
    const double err = frobenius_norm(subtract(res.reconstruction, inst.x));
    out.add("frob_err", err);
    out.add("rel_err", err / frobenius_norm(inst.x));
}

inline void run_phase_rep(const GridCell& c, const RngStream& rng, int max_iters, RowSink& out) {
    const double strength = std::pow(static_cast<double>(c.dims[0]), c.alpha);
    const Instance inst = make_instance(c.dims, c.ranks, strength, CoreKind::diagonal, c.noise, rng);
    HooiConfig cfg = hooi_config(c.ranks, max_iters);
    if (c.start == Start::warm) {
        Bases3 w;
        for (int k = 0; k < 3; ++k)
            w[k] = warm_start(inst.truth.bases[k], rng.derive(Role::warmstart, k + 1));
        cfg.init = std::move(w);
    }
    const HooiResult res = hooi(inst.y, cfg);
    out.add("linf", mean_loss(res.factors.bases, inst.truth.bases, kInf));
}

/// sin of the angle between u and the normalized indicator of `members`
/// inside `block`; 1 when the block holds no member.
inline double indicator_sin(const Vector& u, const std::vector<std::size_t>& block,
                            const std::vector<std::size_t>& members) {
    Vector ind = Vector::Zero(u.size());
    for (std::size_t i = 0; i < block.size(); ++i)
        if (std::binary_search(members.begin(), members.end(), block[i]))
            ind(static_cast<Eigen::Index>(i)) = 1.0;
    const double nrm = ind.norm();
    if (nrm == 0.0) return 1.0;
    const double c = std::min(1.0, std::abs(u.dot(ind)) / (nrm * u.norm()));
    return std::sqrt(std::max(0.0, 1.0 - c * c));
}

inline void run_clique_rep(const GridCell& c, const RngStream& rng, RowSink& out) {
    Sampler coin(rng.derive(Role::placement, 1));
    const Half half = (coin.bits() >> 63) ? Half::second : Half::first;
    const CliqueInstance inst = sample_hypergraph(c.n, c.kappa, half, rng);
    out.add("correct", detect_half(inst.adjacency, c.kappa) == half ? 1.0 : 0.0);

    const SpectralEstimate est = block_spectral_estimate(inst.adjacency, half);
    const auto rec = recover_clique(est, c.kappa);
    std::vector<std::size_t> hit;
    std::set_intersection(rec.begin(), rec.end(), inst.clique.begin(), inst.clique.end(),
                          std::back_inserter(hit));
    out.add("overlap", static_cast<double>(hit.size()) / static_cast<double>(c.kappa));
    double s = 0.0;
    for (int k = 0; k < 3; ++k) s += indicator_sin(est.vectors[k], est.blocks[k], inst.clique);
    out.add("sin_theta", s / 3.0);
}

}  // namespace detail

/// Runs every (cell, rep) task on a pool of `workers` threads. Replication r
/// of cell c draws from RngStream::for_replication(base_seed, c, r), and rows
/// are ordered by (cell, rep), so output does not depend on the worker count.
inline std::vector<ResultRow> run_experiment(const SimConfig& cfg) {
    tsvd::detail::require(cfg.reps >= 1, "SimConfig: reps must be >= 1");
    tsvd::detail::require(!cfg.grid.empty(), "SimConfig: grid must be nonempty");
    const std::size_t reps = static_cast<std::size_t>(cfg.reps);
    const std::size_t tasks = cfg.grid.size() * reps;
    std::vector<std::vector<ResultRow>> slots(tasks);
    std::atomic<std::size_t> next{0};
    const std::string name = to_string(cfg.experiment);

    const auto work = [&] {
        for (std::size_t t = next.fetch_add(1); t < tasks; t = next.fetch_add(1)) {
            const std::size_t ci = t / reps, rep = t % reps;
            const GridCell& cell = cfg.grid[ci];
            const RngStream rng = RngStream::for_replication(cfg.base_seed, ci, rep);
            detail::RowSink sink{name, cell_label(cfg.experiment, cell), static_cast<int>(rep),
                                 rng.stream_id, {}};
            try {
                switch (cfg.experiment) {
                    case Experiment::table1: detail::run_table1_rep(cell, rng, cfg.max_iters, sink); break;
                    case Experiment::table2: detail::run_table2_rep(cell, rng, cfg.max_iters, sink); break;
                    case Experiment::phase: detail::run_phase_rep(cell, rng, cfg.max_iters, sink); break;
                    case Experiment::clique: detail::run_clique_rep(cell, rng, sink); break;
                }
            } catch (const std::exception& e) {
                sink.rows.clear();
                sink.add("error", 1.0);
                std::cerr << name << " " << sink.cell << " rep " << rep << ": " << e.what() << '\n';
            }
            slots[t] = std::move(sink.rows);
        }
    };

    const int nworkers = std::max(1, cfg.workers);
    if (nworkers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (int w = 0; w < nworkers; ++w) pool.emplace_back(work);
    }

    std::vector<ResultRow> rows;
    for (auto& s : slots)
        for (auto& r : s) rows.push_back(std::move(r));
    return rows;
}

inline std::vector<ResultRow> run_table1(SimConfig cfg) {
    cfg.experiment = Experiment::table1;
    if (cfg.grid.empty()) cfg.grid = table1_grid();
    return run_experiment(cfg);
}

inline std::vector<ResultRow> run_table2(SimConfig cfg) {
    cfg.experiment = Experiment::table2;
    if (cfg.grid.empty()) cfg.grid = table2_grid();
    return run_experiment(cfg);
}

inline std::vector<ResultRow> run_phase(SimConfig cfg) {
    cfg.experiment = Experiment::phase;
    if (cfg.grid.empty()) cfg.grid = phase_grid();
    return run_experiment(cfg);
}

inline std::vector<ResultRow> run_clique_curve(SimConfig cfg) {
    cfg.experiment = Experiment::clique;
    if (cfg.grid.empty()) cfg.grid = clique_grid();
    return run_experiment(cfg);
}

/// Mean, standard error (sample sd / sqrt(n); 0 when n = 1) and count per
/// (cell, metric), in order of first appearance.
inline std::vector<SummaryRow> aggregate(const std::vector<ResultRow>& rows) {
    std::vector<SummaryRow> out;
    std::vector<std::vector<double>> values;
    std::map<std::pair<std::string, std::string>, std::size_t> where;
    for (const auto& r : rows) {
        auto [it, fresh] = where.try_emplace({r.cell, r.metric}, out.size());
        if (fresh) {
            out.push_back({r.experiment, r.cell, r.metric, 0.0, 0.0, 0});
            values.emplace_back();
        }
        values[it->second].push_back(r.value);
    }
    for (std::size_t g = 0; g < out.size(); ++g) {
        const auto& v = values[g];
        const double n = static_cast<double>(v.size());
        double mean = 0.0;
        for (double x : v) mean += x;
        mean /= n;
        double ss = 0.0;
        for (double x : v) ss += (x - mean) * (x - mean);
        out[g].mean = mean;
        out[g].count = v.size();
        out[g].se = v.size() > 1 ? std::sqrt(ss / (n - 1.0)) / std::sqrt(n) : 0.0;
    }
    return out;
}

inline constexpr const char* kCsvHeader = "experiment,cell,rep,seed,metric,value";

inline void write_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
    os << kCsvHeader << '\n';
    for (const auto& r : rows)
        os << r.experiment << ',' << r.cell << ',' << r.rep << ',' << r.seed << ',' << r.metric
           << ',' << io::format_double(r.value) << '\n';
}

inline void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows) {
    os << "experiment,cell,metric,mean,se,count\n";
    for (const auto& r : rows)
        os << r.experiment << ',' << r.cell << ',' << r.metric << ',' << io::format_double(r.mean)
           << ',' << io::format_double(r.se) << ',' << r.count << '\n';
}

/// Whitespace-separated summary for gnuplot: one block per metric, one line per cell.
inline void write_gnuplot_dat(std::ostream& os, const std::vector<SummaryRow>& rows) {
    std::vector<std::string> metrics;
    for (const auto& r : rows)
        if (std::find(metrics.begin(), metrics.end(), r.metric) == metrics.end())
            metrics.push_back(r.metric);
    for (const auto& m : metrics) {
        os << "# metric " << m << "\n# cell mean se count\n";
        for (const auto& r : rows)
            if (r.metric == m)
                os << r.cell << ' ' << io::format_double(r.mean) << ' '
                   << io::format_double(r.se) << ' ' << r.count << '\n';
        os << "\n\n";
    }
}

/// Mean of one metric for one cell, NaN when absent.
inline double cell_mean(const std::vector<SummaryRow>& s, const std::string& cell,
                        const std::string& metric) {
    for (const auto& r : s)
        if (r.cell == cell && r.metric == metric) return r.mean;
    return std::nan("");
}

}  // namespace tsvd::exp
