#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "graphsumm/common.hpp"
#include "graphsumm/input_graph.hpp"
#include "graphsumm/partition.hpp"

namespace graphsumm {

struct SupernodePairStats {
    EdgeCount subedge_count = 0;  // E_AB
    EdgeCount pair_count = 0;     // Pi_AB
};

// Number of distinct subnode pairs between two supernodes of the given sizes.
inline EdgeCount pair_space(std::uint64_t size_a, std::uint64_t size_b, bool same) {
    return same ? size_a * (size_a - 1) / 2 : size_a * size_b;
}

// Exact E_AB and Pi_AB for a supernode pair (A == B allowed).
inline SupernodePairStats pair_stats(const InputGraph &g, const Partition &p,
                                     SupernodeId a, SupernodeId b) {
    const auto &ma = p.members(a);
    const auto &mb = p.members(b);
    SupernodePairStats st;
    st.pair_count = pair_space(ma.size(), mb.size(), a == b);
    if (a == b) {
        for (NodeId u : ma)
            for (NodeId v : g.neighbors(u))
                if (v > u && p.supernode_of(v) == a) ++st.subedge_count;
    } else {
        const auto &scan = ma.size() <= mb.size() ? ma : mb;
        const SupernodeId other = ma.size() <= mb.size() ? b : a;
        for (NodeId u : scan)
            for (NodeId v : g.neighbors(u))
                if (p.supernode_of(v) == other) ++st.subedge_count;
    }
    return st;
}

// Summary graph: a partition plus superedges. Superedges carry the subedge
// count E_AB in both models; the unweighted model ignores it at
// reconstruction but the search algorithms and the size formula need it.
class SummaryGraph {
public:
    struct Superedge {
        SupernodeId to = 0;
        EdgeCount count = 0;
    };

    SummaryGraph() = default;
    SummaryGraph(Partition partition, Model model)
        : partition_(std::move(partition)), model_(model),
          adj_(partition_.id_bound()) {}

    const Partition &partition() const { return partition_; }
    Model model() const { return model_; }
    std::uint64_t superedge_count() const { return superedge_count_; }
    EdgeCount omega_max() const {
        return count_hist_.empty() ? 0 : count_hist_.begin()->first;
    }

    // Largest stored count once a single superedge of count c is removed.
    EdgeCount omega_max_without(EdgeCount c) const {
        for (const auto &[count, mult] : count_hist_) {
            if (count != c) return count;
            if (mult > 1) return count;
        }
        return 0;
    }

    void add_superedge(SupernodeId a, SupernodeId b, EdgeCount count) {
        if (!partition_.is_live(a) || !partition_.is_live(b))
            throw Error("superedge endpoint is not a live supernode");
        if (count == 0) throw Error("zero-count superedge");
        if (a > b) std::swap(a, b);
        insert_half(a, b, count);
        if (a != b) insert_half(b, a, count);
        ++superedge_count_;
        ++count_hist_[count];
    }

    void remove_superedge(SupernodeId a, SupernodeId b) {
        if (a > b) std::swap(a, b);
        const EdgeCount count = erase_half(a, b);
        if (a != b) erase_half(b, a);
        --superedge_count_;
        auto it = count_hist_.find(count);
        if (--it->second == 0) count_hist_.erase(it);
    }

    bool has_superedge(SupernodeId a, SupernodeId b) const {
        return find_count(a, b) != nullptr;
    }

    // 0 when the superedge is absent.
    EdgeCount superedge_subedge_count(SupernodeId a, SupernodeId b) const {
        const EdgeCount *c = find_count(a, b);
        return c ? *c : 0;
    }

    // Superedges incident to a, sorted by neighbor id, self-pair included.
    const std::vector<Superedge> &superedges_of(SupernodeId a) const {
        if (!partition_.is_live(a)) throw Error("supernode not live");
        return adj_[a];
    }

    // Visits each superedge once with a <= b, ascending lexicographically.
    template <typename F>
    void for_each_superedge(F &&f) const {
        for (SupernodeId a = 0; a < adj_.size(); ++a)
            for (const Superedge &e : adj_[a])
                if (e.to >= a) f(a, e.to, e.count);
    }

    // Eq. (1) / Eq. (2) entry for a subnode pair; 0 on the diagonal.
    double reconstructed_weight(NodeId i, NodeId j) const {
        const SupernodeId si = partition_.supernode_of(i);
        const SupernodeId sj = partition_.supernode_of(j);
        if (i == j) return 0.0;
        const EdgeCount *count = find_count(si, sj);
        if (!count) return 0.0;
        if (model_ == Model::unweighted) return 1.0;
        const EdgeCount pi =
            pair_space(partition_.size_of(si), partition_.size_of(sj), si == sj);
        return static_cast<double>(*count) / static_cast<double>(pi);
    }

    // Number of positive-weight subedges in the reconstructed graph.
    std::uint64_t reconstructed_edge_count() const {
        std::uint64_t total = 0;
        for_each_superedge([&](SupernodeId a, SupernodeId b, EdgeCount) {
            total += pair_space(partition_.size_of(a), partition_.size_of(b), a == b);
        });
        return total;
    }

    // Dense reconstructed adjacency. Testing aid only, hence the node cap.
    std::vector<std::vector<double>> materialize(std::size_t max_nodes = 2000) const {
        const NodeId n = partition_.node_count();
        if (n > max_nodes)
            throw Error("materialize refused: " + std::to_string(n) + " nodes exceeds cap of " +
                        std::to_string(max_nodes));
        std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
        for (NodeId i = 0; i < n; ++i)
            for (NodeId j = i + 1; j < n; ++j) {
                const double w = reconstructed_weight(i, j);
                m[i][j] = w;
                m[j][i] = w;
            }
        return m;
    }

    // Checks the structural invariants and that stored counts equal E_AB.
    void validate(const InputGraph &g) const {
        partition_.validate();
        if (partition_.node_count() != g.node_count())
            throw Error("summary and graph node counts differ");
        std::uint64_t seen = 0;
        for_each_superedge([&](SupernodeId a, SupernodeId b, EdgeCount count) {
            ++seen;
            if (count == 0) throw Error("stored zero-count superedge");
            const auto st = pair_stats(g, partition_, a, b);
            if (st.subedge_count != count)
                throw Error("stored count " + std::to_string(count) + " != E_AB " +
                            std::to_string(st.subedge_count));
        });
        if (seen != superedge_count_) throw Error("superedge count mismatch");
    }

private:
    void insert_half(SupernodeId from, SupernodeId to, EdgeCount count) {
        auto &list = adj_[from];
        auto it = std::lower_bound(list.begin(), list.end(), to,
                                   [](const Superedge &e, SupernodeId t) { return e.to < t; });
        if (it != list.end() && it->to == to) throw Error("duplicate superedge");
        list.insert(it, Superedge{to, count});
    }

    EdgeCount erase_half(SupernodeId from, SupernodeId to) {
        auto &list = adj_[from];
        auto it = std::lower_bound(list.begin(), list.end(), to,
                                   [](const Superedge &e, SupernodeId t) { return e.to < t; });
        if (it == list.end() || it->to != to) throw Error("superedge not present");
        const EdgeCount count = it->count;
        list.erase(it);
        return count;
    }

    const EdgeCount *find_count(SupernodeId a, SupernodeId b) const {
        if (!partition_.is_live(a) || !partition_.is_live(b))
            throw Error("supernode not live");
        const auto &list = adj_[a];
        auto it = std::lower_bound(list.begin(), list.end(), b,
                                   [](const Superedge &e, SupernodeId t) { return e.to < t; });
        if (it == list.end() || it->to != b) return nullptr;
        return &it->count;
    }

    Partition partition_;
    Model model_ = Model::weighted;
    std::vector<std::vector<Superedge>> adj_;
    std::uint64_t superedge_count_ = 0;
    std::map<EdgeCount, std::uint32_t, std::greater<>> count_hist_;
};

// Singleton supernodes with one superedge per input edge. Reconstructs the
// input exactly under both models.
inline SummaryGraph identity_summary(const InputGraph &g, Model model) {
    SummaryGraph s(Partition::identity(g.node_count()), model);
    g.for_each_edge([&](NodeId i, NodeId j) { s.add_superedge(i, j, 1); });
    return s;
}

}  // namespace graphsumm
