#pragma once

// Deterministic graph, partition and stream generators shared by the unit
// and acceptance suites. Everything is seeded through graphsumm::Rng, which
// is stdlib-independent.

#include <cstdint>
#include <utility>
#include <vector>

#include "graphsumm/common.hpp"
#include "graphsumm/input_graph.hpp"
#include "graphsumm/partition.hpp"
#include "graphsumm/summary_graph.hpp"

namespace testsupport {

using namespace graphsumm;

inline InputGraph random_graph(NodeId n, unsigned edge_percent, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = i + 1; j < n; ++j)
            if (rng.next_below(100) < edge_percent) edges.emplace_back(i, j);
    return InputGraph::from_edges(n, edges);
}

// Preferential attachment with m distinct degree-weighted targets per node;
// edge list is returned in generation order so it doubles as an insertion
// stream.
inline std::vector<std::pair<NodeId, NodeId>> preferential_attachment_edges(
    NodeId n, unsigned m, std::uint64_t seed) {
    if (n < m + 1) throw Error("need more nodes than attachment degree");
    Rng rng(seed);
    std::vector<std::pair<NodeId, NodeId>> edges;
    std::vector<NodeId> slots;
    for (NodeId i = 0; i < m; ++i)
        for (NodeId j = i + 1; j < m; ++j) {
            edges.emplace_back(i, j);
            slots.push_back(i);
            slots.push_back(j);
        }
    std::vector<NodeId> picks;
    for (NodeId v = m; v < n; ++v) {
        picks.clear();
        while (picks.size() < m) {
            const NodeId t = slots[rng.next_below(slots.size())];
            bool dup = false;
            for (NodeId q : picks)
                if (q == t) {
                    dup = true;
                    break;
                }
            if (!dup) picks.push_back(t);
        }
        for (NodeId t : picks) {
            edges.emplace_back(v, t);
            slots.push_back(v);
            slots.push_back(t);
        }
    }
    return edges;
}

inline InputGraph preferential_attachment(NodeId n, unsigned m, std::uint64_t seed) {
    return InputGraph::from_edges(n, preferential_attachment_edges(n, m, seed));
}

// Community-structured graph: heavy-tailed dense communities plus
// degree-proportional inter-community edges (hubs). Average degree lands
// near 10, mimicking collaboration/email networks, which is the structure
// the summary models are sensitive to; locally tree-like generators are not
// a usable stand-in for them.
inline std::vector<std::pair<NodeId, NodeId>> community_graph_edges(NodeId n,
                                                                    std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::pair<NodeId, NodeId>> edges;
    std::vector<NodeId> slots;

    NodeId at = 0;
    while (at < n) {
        const double u = static_cast<double>(rng.next() >> 11) * 0x1p-53;
        NodeId size = 4 + static_cast<NodeId>(20.0 * u * u);
        size = std::min<NodeId>(size, n - at);
        // Near-clique groups: density 0.65..0.95, independent of size.
        const std::uint64_t permille = 650 + rng.next_below(300);
        for (NodeId i = at; i < at + size; ++i)
            for (NodeId j = i + 1; j < at + size; ++j)
                if (rng.next_below(1000) < permille) edges.emplace_back(i, j);
        at += size;
    }
    for (NodeId v = 0; v < n; ++v) slots.push_back(v);
    for (NodeId v = 0; v < n; ++v) {
        const unsigned inter = 2 + static_cast<unsigned>(v % 2);
        for (unsigned k = 0; k < inter; ++k) {
            const NodeId t = slots[rng.next_below(slots.size())];
            if (t == v) continue;
            edges.emplace_back(v, t);
            slots.push_back(v);
            slots.push_back(t);
        }
    }
    return edges;
}

inline InputGraph community_graph(NodeId n, std::uint64_t seed) {
    return InputGraph::from_edges(n, community_graph_edges(n, seed));
}

inline Partition random_partition(NodeId n, SupernodeId max_blocks, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<SupernodeId> assign(n);
    const SupernodeId k = 1 + static_cast<SupernodeId>(rng.next_below(max_blocks));
    for (NodeId i = 0; i < n; ++i)
        assign[i] = static_cast<SupernodeId>(rng.next_below(k));
    return Partition::from_assignment(assign);
}

enum class PresenceRule { all_nonzero, majority };

// Summary over a fixed partition with counts from pair_stats and presence by
// the chosen rule.
inline SummaryGraph make_summary(const InputGraph &g, const Partition &p, Model model,
                                 PresenceRule rule) {
    SummaryGraph s(p, model);
    const auto live = p.live_ids();
    for (std::size_t i = 0; i < live.size(); ++i)
        for (std::size_t j = i; j < live.size(); ++j) {
            const auto st = pair_stats(g, p, live[i], live[j]);
            if (st.subedge_count == 0) continue;
            const bool present = rule == PresenceRule::all_nonzero
                                     ? true
                                     : 2 * st.subedge_count > st.pair_count;
            if (present) s.add_superedge(live[i], live[j], st.subedge_count);
        }
    return s;
}

// All set partitions of {0..n-1} into at most max_blocks blocks, emitted as
// restricted growth strings.
template <typename F>
void for_each_partition(int n, int max_blocks, F &&f) {
    std::vector<int> rgs(n, 0);
    std::vector<int> max_prefix(n, 0);
    int level = 1;
    f(rgs);
    while (level > 0) {
        level = n - 1;
        for (; level > 0; --level) {
            const int cap = std::min(max_prefix[level - 1] + 1, max_blocks - 1);
            if (rgs[level] < cap) break;
        }
        if (level == 0) break;
        ++rgs[level];
        max_prefix[level] = std::max(max_prefix[level - 1], rgs[level]);
        for (int i = level + 1; i < n; ++i) {
            rgs[i] = 0;
            max_prefix[i] = max_prefix[i - 1];
        }
        f(rgs);
    }
}

}  // namespace testsupport
