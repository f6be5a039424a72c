#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <istream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "graphsumm/common.hpp"

namespace graphsumm {

// Immutable undirected simple graph. Node ids are dense (0..n-1); the ids
// found in the source file are kept in a side map for reporting.
class InputGraph {
public:
    InputGraph() = default;

    // Builds from dense-id edges. Self-loops and duplicates are dropped, the
    // same way ingestion treats them.
    static InputGraph from_edges(NodeId node_count,
                                 const std::vector<std::pair<NodeId, NodeId>> &edges) {
        InputGraph g;
        g.adj_.assign(node_count, {});
        g.original_ids_.resize(node_count);
        for (NodeId i = 0; i < node_count; ++i) g.original_ids_[i] = i;
        std::unordered_set<std::uint64_t> seen;
        seen.reserve(edges.size() * 2);
        for (auto [u, v] : edges) {
            if (u >= node_count || v >= node_count)
                throw Error("edge endpoint out of range");
            if (u == v) continue;
            const auto key = pair_key(u, v);
            if (!seen.insert(key).second) continue;
            g.adj_[u].push_back(v);
            g.adj_[v].push_back(u);
            ++g.edge_count_;
        }
        g.sort_adjacency();
        return g;
    }

    NodeId node_count() const { return static_cast<NodeId>(adj_.size()); }
    EdgeCount edge_count() const { return edge_count_; }

    const std::vector<NodeId> &neighbors(NodeId i) const {
        check_node(i);
        return adj_[i];
    }

    NodeId degree(NodeId i) const {
        check_node(i);
        return static_cast<NodeId>(adj_[i].size());
    }

    bool has_edge(NodeId i, NodeId j) const {
        check_node(i);
        check_node(j);
        const auto &a = adj_[i];
        return std::binary_search(a.begin(), a.end(), j);
    }

    std::uint64_t original_id(NodeId i) const {
        check_node(i);
        return original_ids_[i];
    }

    // Visits every edge once, with i < j.
    template <typename F>
    void for_each_edge(F &&f) const {
        for (NodeId i = 0; i < node_count(); ++i)
            for (NodeId j : adj_[i])
                if (j > i) f(i, j);
    }

    // Checks symmetry, sortedness, absence of self-loops and the edge count.
    void validate() const {
        EdgeCount half_degrees = 0;
        for (NodeId i = 0; i < node_count(); ++i) {
            const auto &a = adj_[i];
            if (!std::is_sorted(a.begin(), a.end()))
                throw Error("adjacency not sorted");
            if (std::adjacent_find(a.begin(), a.end()) != a.end())
                throw Error("duplicate neighbor");
            for (NodeId j : a) {
                if (j == i) throw Error("self-loop present");
                if (!has_edge(j, i)) throw Error("adjacency not symmetric");
            }
            half_degrees += a.size();
        }
        if (half_degrees != 2 * edge_count_)
            throw Error("edge count inconsistent with adjacency");
    }

private:
    friend InputGraph load_edge_list(std::istream &, struct LoadStats *);

    static std::uint64_t pair_key(NodeId a, NodeId b) {
        if (a > b) std::swap(a, b);
        return (static_cast<std::uint64_t>(a) << 32) | b;
    }

    void check_node(NodeId i) const {
        if (i >= adj_.size()) throw Error("unknown node id " + std::to_string(i));
    }

    void sort_adjacency() {
        for (auto &a : adj_) std::sort(a.begin(), a.end());
    }

    std::vector<std::vector<NodeId>> adj_;
    std::vector<std::uint64_t> original_ids_;
    EdgeCount edge_count_ = 0;
};

struct LoadStats {
    std::size_t self_loops_dropped = 0;
    std::size_t duplicates_dropped = 0;
    std::size_t comment_lines = 0;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

// Parses "u v" with arbitrary whitespace between the two nonnegative integers.
inline std::pair<std::uint64_t, std::uint64_t> parse_edge_line(std::string_view line,
                                                               std::size_t line_no) {
    std::uint64_t ids[2];
    const char *p = line.data();
    const char *end = p + line.size();
    for (int k = 0; k < 2; ++k) {
        while (p != end && (*p == ' ' || *p == '\t')) ++p;
        if (p == end)
            throw ParseError(line_no, "expected two node ids");
        auto [next, ec] = std::from_chars(p, end, ids[k]);
        if (ec != std::errc{} || (next != end && *next != ' ' && *next != '\t'))
            throw ParseError(line_no, "malformed node id '" + std::string(line) + "'");
        p = next;
    }
    while (p != end && (*p == ' ' || *p == '\t')) ++p;
    if (p != end)
        throw ParseError(line_no, "trailing tokens after edge");
    return {ids[0], ids[1]};
}

}  // namespace detail

// Reads a whitespace-separated edge list. '#' lines are comments. Self-loops
// and duplicate (also reversed) edges are dropped and counted. Node ids are
// densified to 0..|V|-1 in first-appearance order.
inline InputGraph load_edge_list(std::istream &in, LoadStats *stats = nullptr) {
    LoadStats local;
    std::unordered_map<std::uint64_t, NodeId> dense;
    std::vector<std::uint64_t> original_ids;
    std::vector<std::pair<NodeId, NodeId>> edges;
    std::unordered_set<std::uint64_t> seen;

    auto intern = [&](std::uint64_t raw) {
        auto [it, added] = dense.try_emplace(raw, static_cast<NodeId>(original_ids.size()));
        if (added) {
            if (original_ids.size() >= static_cast<std::size_t>(kInvalidSupernode))
                throw Error("too many nodes");
            original_ids.push_back(raw);
        }
        return it->second;
    };

    std::string line;
    std::size_t line_no = 0;
    std::size_t data_lines = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view sv = detail::trim(line);
        if (sv.empty()) continue;
        if (sv.front() == '#') {
            ++local.comment_lines;
            continue;
        }
        auto [ru, rv] = detail::parse_edge_line(sv, line_no);
        ++data_lines;
        const NodeId u = intern(ru);
        const NodeId v = intern(rv);
        if (u == v) {
            ++local.self_loops_dropped;
            continue;
        }
        const auto key = InputGraph::pair_key(u, v);
        if (!seen.insert(key).second) {
            ++local.duplicates_dropped;
            continue;
        }
        edges.emplace_back(u, v);
    }
    if (data_lines == 0) throw Error("empty edge list input");

    InputGraph g;
    g.adj_.assign(original_ids.size(), {});
    g.original_ids_ = std::move(original_ids);
    for (auto [u, v] : edges) {
        g.adj_[u].push_back(v);
        g.adj_[v].push_back(u);
    }
    g.edge_count_ = edges.size();
    g.sort_adjacency();
    if (stats) *stats = local;
    return g;
}

}  // namespace graphsumm
