#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>

#include "graphsumm/common.hpp"
#include "graphsumm/input_graph.hpp"
#include "graphsumm/summary_graph.hpp"

namespace graphsumm {

// Binary entropy with the usual limit convention H(0) = H(1) = 0.
inline double entropy(double x) {
    if (x < 0.0 || x > 1.0) throw Error("entropy argument outside [0,1]");
    if (x == 0.0 || x == 1.0) return 0.0;
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

// Summary size in bits. Weighted: 2|P|log2|S| + |P|log2(w_max) + |V|log2|S|.
// Unweighted drops the weight term. Real-valued, no ceiling.
inline double size_bits(const SummaryGraph &s) {
    const double log_s = std::log2(static_cast<double>(s.partition().live_supernode_count()));
    const double p_count = static_cast<double>(s.superedge_count());
    const double v_count = static_cast<double>(s.partition().node_count());
    double bits = (2.0 * p_count + v_count) * log_s;
    if (s.model() == Model::weighted && s.superedge_count() > 0)
        bits += p_count * std::log2(static_cast<double>(s.omega_max()));
    return bits;
}

inline double compression_denominator(const InputGraph &g) {
    return 2.0 * static_cast<double>(g.edge_count()) *
           std::log2(static_cast<double>(g.node_count()));
}

inline double compression_ratio(const InputGraph &g, const SummaryGraph &s) {
    if (g.edge_count() < 1) throw Error("compression ratio needs at least one edge");
    if (g.node_count() < 2) throw Error("compression ratio needs at least two nodes");
    return size_bits(s) / compression_denominator(g);
}

namespace detail {

// Sum over input edges whose supernode pair carries no superedge. Used by the
// error and the objectives; edge-driven so it stays O(|E|).
inline std::uint64_t uncovered_edge_count(const InputGraph &g, const SummaryGraph &s) {
    const Partition &p = s.partition();
    std::uint64_t uncovered = 0;
    g.for_each_edge([&](NodeId i, NodeId j) {
        if (!s.has_superedge(p.supernode_of(i), p.supernode_of(j))) ++uncovered;
    });
    return uncovered;
}

}  // namespace detail

// L_p reconstruction error over unordered subnode pairs, computed blockwise
// per supernode pair. p must be 1 or 2.
inline double reconstruction_error(const InputGraph &g, const SummaryGraph &s, int p) {
    if (p != 1 && p != 2) throw Error("norm order must be 1 or 2");
    const Partition &part = s.partition();
    double total = 0.0;
    s.for_each_superedge([&](SupernodeId a, SupernodeId b, EdgeCount count) {
        const double e = static_cast<double>(count);
        const double pi = static_cast<double>(
            pair_space(part.size_of(a), part.size_of(b), a == b));
        const double w = s.model() == Model::weighted ? e / pi : 1.0;
        const double miss = 1.0 - w;
        if (p == 1)
            total += e * std::abs(miss) + (pi - e) * w;
        else
            total += e * miss * miss + (pi - e) * w * w;
    });
    total += static_cast<double>(detail::uncovered_edge_count(g, s));
    return p == 1 ? total : std::sqrt(total);
}

// Eq.-(6)-style objective for the weighted model: size plus the bits needed
// to exactly restore subedges inside and outside superedge blocks.
inline double objective_weighted(const InputGraph &g, const SummaryGraph &s) {
    if (s.model() != Model::weighted)
        throw Error("objective_weighted needs a weighted summary");
    const Partition &part = s.partition();
    double correction = 0.0;
    s.for_each_superedge([&](SupernodeId a, SupernodeId b, EdgeCount count) {
        const double pi = static_cast<double>(
            pair_space(part.size_of(a), part.size_of(b), a == b));
        correction += pi * entropy(static_cast<double>(count) / pi);
    });
    const double log_v = std::log2(static_cast<double>(g.node_count()));
    correction += 2.0 * log_v * static_cast<double>(detail::uncovered_edge_count(g, s));
    return size_bits(s) + correction;
}

// Unweighted counterpart: absent subedges inside blocks and present subedges
// outside blocks both cost 2 log2|V| bits each.
inline double objective_unweighted(const InputGraph &g, const SummaryGraph &s) {
    if (s.model() != Model::unweighted)
        throw Error("objective_unweighted needs an unweighted summary");
    const Partition &part = s.partition();
    const double log_v = std::log2(static_cast<double>(g.node_count()));
    std::uint64_t missing_inside = 0;
    s.for_each_superedge([&](SupernodeId a, SupernodeId b, EdgeCount count) {
        missing_inside += pair_space(part.size_of(a), part.size_of(b), a == b) - count;
    });
    const double correction =
        2.0 * log_v *
        static_cast<double>(missing_inside + detail::uncovered_edge_count(g, s));
    return size_bits(s) + correction;
}

// The five evaluation quantities for one (graph, summary) pair. The query
// errors are optional because they dominate runtime.
struct MetricsReport {
    double re1 = 0.0;
    double re2 = 0.0;
    double size_bits = 0.0;
    double compression_ratio = 0.0;
    std::uint64_t reconstructed_edges = 0;
    std::optional<double> pagerank_error;
    std::optional<double> rwr_error;
};

inline MetricsReport compute_metrics(const InputGraph &g, const SummaryGraph &s) {
    MetricsReport r;
    r.re1 = reconstruction_error(g, s, 1);
    r.re2 = reconstruction_error(g, s, 2);
    r.size_bits = size_bits(s);
    r.compression_ratio = compression_ratio(g, s);
    r.reconstructed_edges = s.reconstructed_edge_count();
    return r;
}

// Shortest decimal form that round-trips the exact double.
inline std::string format_double(double v) {
    char buf[64];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        double back;
        std::sscanf(buf, "%lf", &back);
        if (back == v) break;
    }
    return buf;
}

}  // namespace graphsumm
