#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "graphsumm/batch_summarizer.hpp"
#include "graphsumm/common.hpp"
#include "graphsumm/incremental_summarizer.hpp"
#include "graphsumm/input_graph.hpp"
#include "graphsumm/metrics.hpp"
#include "graphsumm/query_engine.hpp"
#include "graphsumm/summary_graph.hpp"
#include "graphsumm/summary_io.hpp"

namespace graphsumm {

enum class Algorithm { kgrass, ssumm, mosso_lossy };

inline const char *algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::kgrass: return "kgrass";
        case Algorithm::ssumm: return "ssumm";
        default: return "mosso_lossy";
    }
}

inline Algorithm algorithm_from_name(const std::string &name) {
    if (name == "kgrass") return Algorithm::kgrass;
    if (name == "ssumm") return Algorithm::ssumm;
    if (name == "mosso_lossy") return Algorithm::mosso_lossy;
    throw Error("unknown algorithm '" + name + "'");
}

inline Model model_from_name(const std::string &name) {
    if (name == "weighted") return Model::weighted;
    if (name == "unweighted") return Model::unweighted;
    throw Error("unknown model '" + name + "'");
}

struct RunConfig {
    std::string dataset;
    Algorithm algorithm = Algorithm::ssumm;
    Model model = Model::weighted;
    std::optional<double> target_ratio;            // ssumm / sweeps
    std::optional<SupernodeId> target_supernodes;  // k-grass
    std::uint32_t iterations = 20;                 // T
    std::uint64_t seed = 0;
    double damping = 0.85;
    double rwr_damping = 0.95;
    std::uint32_t num_queries = 100;
    double tol = 1e-9;
    std::uint32_t sample_size = 10;      // mosso neighbor sample
    bool shuffle_stream = false;         // mosso: shuffled insertion replay
    std::uint64_t max_events = 0;        // mosso: 0 = whole stream
    std::uint32_t max_group_size = 300;
    NodeId kgrass_max_nodes = 2000;
    bool with_pagerank = false;
    bool with_rwr = false;
    bool timings = false;  // wall_time_ms column stays empty unless set
    bool log_progress = true;
};

inline InputGraph load_graph_file(const std::string &path, LoadStats *stats = nullptr) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    return load_edge_list(in, stats);
}

// File-order edge pairs (raw ids, self-loops dropped, duplicates kept) for
// insertion-stream replay.
inline std::vector<std::pair<std::uint64_t, std::uint64_t>> read_raw_pairs(
    const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view sv = detail::trim(line);
        if (sv.empty() || sv.front() == '#') continue;
        const auto [u, v] = detail::parse_edge_line(sv, line_no);
        if (u != v) pairs.emplace_back(u, v);
    }
    return pairs;
}

inline SupernodeId kgrass_target(const RunConfig &cfg, NodeId node_count) {
    if (cfg.target_supernodes) return *cfg.target_supernodes;
    if (!cfg.target_ratio) throw Error("k-grass needs --target-supernodes or --target-ratio");
    const double k = std::ceil(*cfg.target_ratio * static_cast<double>(node_count));
    return static_cast<SupernodeId>(
        std::min<double>(std::max(1.0, k), static_cast<double>(node_count)));
}

inline double ssumm_target_bits(const RunConfig &cfg, const InputGraph &g) {
    if (!cfg.target_ratio) throw Error("ssumm needs --target-ratio");
    if (*cfg.target_ratio <= 0.0) throw Error("target ratio must be positive");
    return *cfg.target_ratio * compression_denominator(g);
}

// Runs the configured algorithm. raw_pairs is only needed for mosso_lossy;
// it carries the dataset's file-order edge stream.
inline SummaryGraph run_summarize(
    const InputGraph &g, const RunConfig &cfg,
    const std::vector<std::pair<std::uint64_t, std::uint64_t>> *raw_pairs = nullptr,
    IncrementalStats *mosso_stats = nullptr) {
    switch (cfg.algorithm) {
        case Algorithm::kgrass: {
            if (cfg.target_ratio && cfg.target_supernodes)
                throw Error("set only one of --target-ratio / --target-supernodes");
            KGrassConfig kcfg;
            kcfg.max_nodes = cfg.kgrass_max_nodes;
            return kgrass(g, kgrass_target(cfg, g.node_count()), cfg.model, kcfg);
        }
        case Algorithm::ssumm: {
            if (cfg.target_supernodes)
                throw Error("ssumm takes --target-ratio, not --target-supernodes");
            SsummConfig scfg;
            scfg.iterations = cfg.iterations;
            scfg.grouping.max_group_size = cfg.max_group_size;
            scfg.grouping.rng_seed = cfg.seed;
            scfg.log_progress = cfg.log_progress;
            return ssumm(g, ssumm_target_bits(cfg, g), cfg.model, scfg);
        }
        default: {
            if (cfg.target_ratio || cfg.target_supernodes)
                throw Error("mosso_lossy has no size target; output size is emergent");
            if (!raw_pairs) throw Error("mosso_lossy needs the dataset's edge stream");
            IncrementalConfig icfg;
            icfg.model = cfg.model;
            icfg.sample_size = cfg.sample_size;
            icfg.rng_seed = cfg.seed;
            IncrementalState st(icfg);
            auto pairs = *raw_pairs;
            if (cfg.shuffle_stream) {
                Rng rng(cfg.seed);
                for (std::size_t i = pairs.size(); i > 1; --i)
                    std::swap(pairs[i - 1], pairs[rng.next_below(i)]);
            }
            std::uint64_t fed = 0;
            for (const auto &[u, v] : pairs) {
                if (cfg.max_events > 0 && fed >= cfg.max_events) break;
                st.process({StreamEvent::Kind::insert, u, v});
                ++fed;
            }
            if (mosso_stats) *mosso_stats = st.stats();
            // Partial replays cover only part of V; pair with the graph only
            // when the whole stream ran.
            return cfg.max_events == 0 || cfg.max_events >= pairs.size()
                       ? st.finalize_for(g)
                       : st.finalize();
        }
    }
}

inline MetricsReport run_evaluate(const InputGraph &g, const SummaryGraph &s,
                                  const RunConfig &cfg) {
    if (g.node_count() != s.partition().node_count())
        throw Error("summary and graph node counts differ");
    MetricsReport r = compute_metrics(g, s);
    if (cfg.with_pagerank)
        r.pagerank_error = node_importance_error(g, s, cfg.damping, cfg.tol);
    if (cfg.with_rwr)
        r.rwr_error = node_proximity_error(g, s, cfg.rwr_damping, cfg.tol,
                                           cfg.num_queries, cfg.seed);
    return r;
}

// Frozen CSV schema; new columns append only.
inline std::string csv_header() {
    return "dataset,algorithm,model,target_ratio,compression_ratio,re1,re2,"
           "reconstructed_edges,pagerank_error,rwr_error,wall_time_ms,error";
}

inline std::string csv_row(const std::string &dataset, Algorithm algorithm, Model model,
                           std::optional<double> target_ratio,
                           const std::optional<MetricsReport> &m,
                           std::optional<std::uint64_t> wall_ms,
                           const std::string &error = {}) {
    std::ostringstream out;
    out << dataset << ',' << algorithm_name(algorithm) << ',' << model_name(model) << ',';
    if (target_ratio) out << format_double(*target_ratio);
    out << ',';
    if (m) {
        out << format_double(m->compression_ratio) << ',' << format_double(m->re1) << ','
            << format_double(m->re2) << ',' << m->reconstructed_edges << ',';
        if (m->pagerank_error) out << format_double(*m->pagerank_error);
        out << ',';
        if (m->rwr_error) out << format_double(*m->rwr_error);
        out << ',';
    } else {
        out << ",,,,,,";
    }
    if (wall_ms) out << *wall_ms;
    out << ',' << error;
    return out.str();
}

// Summarize-only row: size metrics, no reconstruction pass.
inline std::string summarize_csv_row(const InputGraph &g, const SummaryGraph &s,
                                     const RunConfig &cfg,
                                     std::optional<std::uint64_t> wall_ms) {
    MetricsReport m;
    m.size_bits = size_bits(s);
    m.compression_ratio = compression_ratio(g, s);
    m.reconstructed_edges = s.reconstructed_edge_count();
    std::ostringstream out;
    out << cfg.dataset << ',' << algorithm_name(cfg.algorithm) << ','
        << model_name(cfg.model) << ',';
    if (cfg.target_ratio) out << format_double(*cfg.target_ratio);
    out << ',' << format_double(m.compression_ratio) << ",,," << m.reconstructed_edges
        << ",,,";
    if (wall_ms) out << *wall_ms;
    out << ',';
    return out.str();
}

struct SweepResult {
    std::vector<std::string> rows;  // deterministic (target, model) order
    bool all_ok = true;
};

// The paper's protocol at desk scale: targets 0.1..0.9, both models. Cells
// run in a bounded worker pool; rows come out in deterministic order.
inline SweepResult run_sweep(const InputGraph &g, const RunConfig &base,
                             unsigned threads = 1) {
    if (base.algorithm == Algorithm::mosso_lossy)
        throw Error("sweep supports kgrass and ssumm (mosso_lossy has no size target)");
    struct Cell {
        double target;
        Model model;
    };
    std::vector<Cell> cells;
    for (int t = 1; t <= 9; ++t)
        for (Model m : {Model::weighted, Model::unweighted})
            cells.push_back({t / 10.0, m});

    std::vector<std::string> rows(cells.size());
    std::vector<char> ok(cells.size(), 1);
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            RunConfig cfg = base;
            cfg.model = cells[i].model;
            cfg.target_ratio = cells[i].target;
            cfg.target_supernodes.reset();
            try {
                const auto start = std::chrono::steady_clock::now();
                SummaryGraph s = run_summarize(g, cfg);
                const auto wall = std::chrono::duration_cast<std::chrono::milliseconds>(
                                      std::chrono::steady_clock::now() - start)
                                      .count();
                const MetricsReport m = run_evaluate(g, s, cfg);
                rows[i] = csv_row(cfg.dataset, cfg.algorithm, cfg.model, cfg.target_ratio,
                                  m,
                                  cfg.timings
                                      ? std::optional<std::uint64_t>(
                                            static_cast<std::uint64_t>(wall))
                                      : std::nullopt);
            } catch (const std::exception &e) {
                rows[i] = csv_row(cfg.dataset, cfg.algorithm, cfg.model, cfg.target_ratio,
                                  std::nullopt, std::nullopt, e.what());
                ok[i] = 0;
            }
        }
    };
    const unsigned pool = std::max(1u, threads);
    std::vector<std::thread> workers;
    for (unsigned t = 1; t < pool; ++t) workers.emplace_back(worker);
    worker();
    for (auto &w : workers) w.join();

    SweepResult result;
    result.rows = std::move(rows);
    for (char c : ok) result.all_ok &= static_cast<bool>(c);
    return result;
}

}  // namespace graphsumm
