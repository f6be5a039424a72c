// Command-line front end: summarize / evaluate / sweep / stream-replay /
// query over edge-list datasets and SUMM v1 summary files.

#include <bit>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "graphsumm/graphsumm.hpp"

namespace gs = graphsumm;

namespace {

unsigned default_threads() {
    if (const char *env = std::getenv("GRAPHSUMM_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    return 1;
}

std::uint64_t elapsed_ms(std::chrono::steady_clock::time_point start) {
    return static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::milliseconds>(
                                          std::chrono::steady_clock::now() - start)
                                          .count());
}

std::ostream &open_or_stdout(std::ofstream &file, const std::string &path) {
    if (path.empty()) return std::cout;
    file.open(path, std::ios::binary);
    if (!file) throw gs::Error("cannot open '" + path + "' for writing");
    return file;
}

void write_scores(const gs::ScoreVector &scores, const std::string &out_path, bool binary) {
    std::ofstream file;
    std::ostream &out = open_or_stdout(file, out_path);
    if (binary) {
        static_assert(std::endian::native == std::endian::little,
                      "binary score output assumes a little-endian host");
        const std::uint64_t n = scores.scores.size();
        out.write(reinterpret_cast<const char *>(&n), sizeof n);
        out.write(reinterpret_cast<const char *>(scores.scores.data()),
                  static_cast<std::streamsize>(n * sizeof(double)));
    } else {
        for (std::size_t i = 0; i < scores.scores.size(); ++i)
            out << i << ' ' << gs::format_double(scores.scores[i]) << '\n';
    }
    if (!out) throw gs::Error("failed writing scores");
    if (!scores.converged)
        std::cerr << "warning: power iteration hit max_iter without converging\n";
}

struct CommonOpts {
    gs::RunConfig cfg;
    std::string graph_path;
    std::string out_path;
};

void add_query_flags(CLI::App *cmd, gs::RunConfig &cfg) {
    cmd->add_option("--damping", cfg.damping, "PageRank damping factor");
    cmd->add_option("--rwr-damping", cfg.rwr_damping, "RWR damping factor");
    cmd->add_option("--num-queries", cfg.num_queries, "RWR query nodes sampled");
    cmd->add_option("--tol", cfg.tol, "power-iteration L1 tolerance");
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"graph summarization toolkit"};
    app.require_subcommand(1);

    CommonOpts sum, eval, sweep, replay, query;
    std::string algorithm = "ssumm", model = "weighted", query_kind = "pagerank";
    std::string stream_path, summary_path;
    unsigned threads = default_threads();
    bool quiet = false, shuffle = false, binary = false;
    bool with_pagerank = false, with_rwr = false;
    std::optional<double> target_ratio;
    std::optional<gs::SupernodeId> target_supernodes;
    std::uint32_t query_node = 0, max_iter = 10000;

    auto *c_sum = app.add_subcommand("summarize", "build a summary graph and write SUMM v1");
    c_sum->add_option("--graph", sum.graph_path, "edge-list dataset")->required();
    c_sum->add_option("--algorithm", algorithm, "kgrass | ssumm | mosso_lossy");
    c_sum->add_option("--model", model, "weighted | unweighted");
    c_sum->add_option("--target-ratio", [&](const CLI::results_t &r) {
        target_ratio = std::stod(r[0]);
        return true;
    }, "target compression ratio in (0,1]");
    c_sum->add_option("--target-supernodes", [&](const CLI::results_t &r) {
        target_supernodes = static_cast<gs::SupernodeId>(std::stoul(r[0]));
        return true;
    }, "k-grass supernode target");
    c_sum->add_option("--iterations", sum.cfg.iterations, "ssumm outer iterations T");
    c_sum->add_option("--seed", sum.cfg.seed, "rng seed");
    c_sum->add_option("--sample-size", sum.cfg.sample_size, "mosso neighbor sample size");
    c_sum->add_option("--max-group-size", sum.cfg.max_group_size, "grouping size cap");
    c_sum->add_option("--kgrass-cap", sum.cfg.kgrass_max_nodes, "k-grass exact-greedy node cap");
    c_sum->add_flag("--shuffle", shuffle, "mosso: replay the edge list shuffled by --seed");
    c_sum->add_flag("--timings", sum.cfg.timings, "fill the wall_time_ms CSV column");
    c_sum->add_flag("--quiet", quiet, "suppress progress lines on stderr");
    c_sum->add_option("--out", sum.out_path, "summary output path")->required();

    auto *c_eval = app.add_subcommand("evaluate", "metrics CSV for a (graph, summary) pair");
    c_eval->add_option("--graph", eval.graph_path, "edge-list dataset")->required();
    c_eval->add_option("--summary", summary_path, "SUMM v1 file")->required();
    c_eval->add_flag("--with-pagerank", with_pagerank, "include the PageRank error column");
    c_eval->add_flag("--with-rwr", with_rwr, "include the RWR error column");
    c_eval->add_option("--seed", eval.cfg.seed, "query sampling seed");
    c_eval->add_flag("--timings", eval.cfg.timings, "fill the wall_time_ms CSV column");
    add_query_flags(c_eval, eval.cfg);

    auto *c_sweep = app.add_subcommand("sweep", "target ratios 0.1..0.9 x both models");
    c_sweep->add_option("--graph", sweep.graph_path, "edge-list dataset")->required();
    c_sweep->add_option("--algorithm", algorithm, "kgrass | ssumm");
    c_sweep->add_option("--iterations", sweep.cfg.iterations, "ssumm outer iterations T");
    c_sweep->add_option("--seed", sweep.cfg.seed, "rng seed");
    c_sweep->add_option("--max-group-size", sweep.cfg.max_group_size, "grouping size cap");
    c_sweep->add_option("--kgrass-cap", sweep.cfg.kgrass_max_nodes, "k-grass node cap");
    c_sweep->add_flag("--with-pagerank", with_pagerank, "evaluate PageRank error per cell");
    c_sweep->add_flag("--with-rwr", with_rwr, "evaluate RWR error per cell");
    c_sweep->add_option("--threads", threads, "worker pool size (env GRAPHSUMM_THREADS)");
    c_sweep->add_flag("--timings", sweep.cfg.timings, "fill the wall_time_ms CSV column");
    c_sweep->add_flag("--quiet", quiet, "suppress progress lines on stderr");
    c_sweep->add_option("--out", sweep.out_path, "CSV output path (default stdout)");
    add_query_flags(c_sweep, sweep.cfg);

    auto *c_replay = app.add_subcommand("stream-replay",
                                        "feed an edge stream through mosso_lossy");
    c_replay->add_option("--graph", replay.graph_path, "edge list replayed as insertions");
    c_replay->add_option("--stream", stream_path, "event file with '+ u v' / '- u v' lines");
    c_replay->add_option("--model", model, "weighted | unweighted");
    c_replay->add_option("--sample-size", replay.cfg.sample_size, "neighbor sample size");
    c_replay->add_option("--seed", replay.cfg.seed, "rng seed");
    c_replay->add_flag("--shuffle", shuffle, "shuffle the edge list with --seed");
    c_replay->add_option("--max-events", replay.cfg.max_events, "stop after N insertions");
    c_replay->add_option("--out", replay.out_path, "summary output path")->required();

    auto *c_query = app.add_subcommand("query", "pagerank / rwr on a summary file");
    c_query->add_option("--summary", summary_path, "SUMM v1 file")->required();
    c_query->add_option("--kind", query_kind, "pagerank | rwr");
    c_query->add_option("--query-node", query_node, "rwr restart node");
    c_query->add_option("--max-iter", max_iter, "power-iteration cap");
    c_query->add_flag("--binary", binary, "little-endian u64 length + f64 scores");
    c_query->add_option("--out", query.out_path, "output path (default stdout)");
    add_query_flags(c_query, query.cfg);

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_sum->parsed()) {
            sum.cfg.dataset = sum.graph_path;
            sum.cfg.algorithm = gs::algorithm_from_name(algorithm);
            sum.cfg.model = gs::model_from_name(model);
            sum.cfg.target_ratio = target_ratio;
            sum.cfg.target_supernodes = target_supernodes;
            sum.cfg.shuffle_stream = shuffle;
            sum.cfg.log_progress = !quiet;
            const gs::InputGraph g = gs::load_graph_file(sum.graph_path);
            std::vector<std::pair<std::uint64_t, std::uint64_t>> raw;
            if (sum.cfg.algorithm == gs::Algorithm::mosso_lossy)
                raw = gs::read_raw_pairs(sum.graph_path);
            const auto start = std::chrono::steady_clock::now();
            const gs::SummaryGraph s = gs::run_summarize(g, sum.cfg, &raw);
            const std::uint64_t wall = elapsed_ms(start);
            gs::write_summary_file(sum.out_path, s);
            std::cout << gs::csv_header() << '\n'
                      << gs::summarize_csv_row(g, s, sum.cfg,
                                               sum.cfg.timings
                                                   ? std::optional<std::uint64_t>(wall)
                                                   : std::nullopt)
                      << '\n';
        } else if (c_eval->parsed()) {
            eval.cfg.dataset = eval.graph_path;
            eval.cfg.with_pagerank = with_pagerank;
            eval.cfg.with_rwr = with_rwr;
            const gs::InputGraph g = gs::load_graph_file(eval.graph_path);
            const gs::SummaryGraph s = gs::read_summary_file(summary_path);
            const auto start = std::chrono::steady_clock::now();
            const gs::MetricsReport m = gs::run_evaluate(g, s, eval.cfg);
            const std::uint64_t wall = elapsed_ms(start);
            std::cout << gs::csv_header() << '\n'
                      << gs::csv_row(eval.cfg.dataset, gs::Algorithm::ssumm, s.model(),
                                     std::nullopt, m,
                                     eval.cfg.timings ? std::optional<std::uint64_t>(wall)
                                                      : std::nullopt)
                      << '\n';
        } else if (c_sweep->parsed()) {
            sweep.cfg.dataset = sweep.graph_path;
            sweep.cfg.algorithm = gs::algorithm_from_name(algorithm);
            sweep.cfg.with_pagerank = with_pagerank;
            sweep.cfg.with_rwr = with_rwr;
            sweep.cfg.log_progress = !quiet;
            const gs::InputGraph g = gs::load_graph_file(sweep.graph_path);
            const gs::SweepResult result = gs::run_sweep(g, sweep.cfg, threads);
            std::ofstream file;
            std::ostream &out = open_or_stdout(file, sweep.out_path);
            out << gs::csv_header() << '\n';
            for (const auto &row : result.rows) out << row << '\n';
            if (!out) throw gs::Error("failed writing sweep CSV");
            return result.all_ok ? 0 : 1;
        } else if (c_replay->parsed()) {
            replay.cfg.model = gs::model_from_name(model);
            gs::IncrementalConfig icfg;
            icfg.model = replay.cfg.model;
            icfg.sample_size = replay.cfg.sample_size;
            icfg.rng_seed = replay.cfg.seed;
            gs::IncrementalState st(icfg);
            gs::SummaryGraph s;
            if (!stream_path.empty()) {
                std::ifstream in(stream_path, std::ios::binary);
                if (!in) throw gs::Error("cannot open '" + stream_path + "'");
                gs::replay_stream(st, in);
                s = st.finalize();
            } else if (!replay.graph_path.empty()) {
                std::ifstream in(replay.graph_path, std::ios::binary);
                if (!in) throw gs::Error("cannot open '" + replay.graph_path + "'");
                gs::replay_edge_list(st, in, shuffle, replay.cfg.seed, replay.cfg.max_events);
                s = st.finalize();
            } else {
                throw gs::Error("stream-replay needs --stream or --graph");
            }
            gs::write_summary_file(replay.out_path, s);
            const auto &stats = st.stats();
            std::fprintf(stderr,
                         "events=%llu ignored_inserts=%llu ignored_deletes=%llu "
                         "accepted_moves=%llu |V|=%u |S|=%u |P|=%llu\n",
                         static_cast<unsigned long long>(stats.events),
                         static_cast<unsigned long long>(stats.ignored_inserts),
                         static_cast<unsigned long long>(stats.ignored_deletes),
                         static_cast<unsigned long long>(stats.accepted_moves),
                         st.node_count(), s.partition().live_supernode_count(),
                         static_cast<unsigned long long>(s.superedge_count()));
        } else if (c_query->parsed()) {
            const gs::SummaryGraph s = gs::read_summary_file(summary_path);
            gs::ScoreVector scores;
            if (query_kind == "pagerank") {
                scores = gs::pagerank_summary(s, query.cfg.damping, query.cfg.tol, max_iter);
            } else if (query_kind == "rwr") {
                scores = gs::rwr_summary(s, query_node, query.cfg.rwr_damping, query.cfg.tol,
                                         max_iter);
            } else {
                throw gs::Error("unknown query kind '" + query_kind + "'");
            }
            write_scores(scores, query.out_path, binary);
        }
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
