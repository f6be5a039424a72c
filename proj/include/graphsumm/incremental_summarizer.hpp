#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "graphsumm/common.hpp"
#include "graphsumm/grouping.hpp"
#include "graphsumm/input_graph.hpp"
#include "graphsumm/summary_graph.hpp"
#include "graphsumm/summary_io.hpp"
#include "graphsumm/summary_state.hpp"

namespace graphsumm {

struct StreamEvent {
    enum class Kind { insert, remove };
    Kind kind = Kind::insert;
    std::uint64_t src = 0;  // external ids, densified as they appear
    std::uint64_t dst = 0;
};

// "+ u v" inserts the edge, "- u v" deletes it. Blank and '#' lines skipped.
inline StreamEvent parse_stream_event(std::string_view line, std::size_t line_no) {
    auto fields = detail::split_fields(line);
    if (fields.size() != 3 || (fields[0] != "+" && fields[0] != "-"))
        throw ParseError(line_no, "expected '+ u v' or '- u v'");
    StreamEvent ev;
    ev.kind = fields[0] == "+" ? StreamEvent::Kind::insert : StreamEvent::Kind::remove;
    ev.src = detail::parse_uint<std::uint64_t>(fields[1], line_no);
    ev.dst = detail::parse_uint<std::uint64_t>(fields[2], line_no);
    if (ev.src == ev.dst) throw ParseError(line_no, "self-loop event");
    return ev;
}

struct IncrementalConfig {
    Model model = Model::weighted;
    std::uint32_t sample_size = 10;  // neighbors sampled per endpoint
    std::uint64_t rng_seed = 0;
};

struct IncrementalStats {
    std::uint64_t events = 0;
    std::uint64_t ignored_inserts = 0;  // edge already present
    std::uint64_t ignored_deletes = 0;  // edge (or endpoint) unknown
    std::uint64_t accepted_moves = 0;
    std::uint64_t rejected_moves = 0;
    // Accepted moves whose exact delta failed to be strictly negative. Stays
    // zero unless the acceptance rule is broken.
    std::uint64_t strict_decrease_violations = 0;
};

// Maintains a summary graph under a stream of edge insertions and deletions.
// Each event applies the edge change, then samples neighbors of both
// endpoints and moves a sampled node into the supernode of a same-shingle
// sampled peer whenever that strictly lowers the description-length
// objective. Single-writer; queries must be serialized externally.
class IncrementalState {
public:
    explicit IncrementalState(const IncrementalConfig &cfg = {})
        : cfg_(cfg), state_(cfg.model, LossKind::mdl), rng_(cfg.rng_seed),
          shingle_seed_(mix64(cfg.rng_seed, 0x51u)) {}

    const IncrementalStats &stats() const { return stats_; }
    const SummaryState &state() const { return state_; }
    NodeId node_count() const { return state_.node_count(); }

    void process(const StreamEvent &ev) {
        ++stats_.events;
        if (ev.kind == StreamEvent::Kind::insert)
            process_insert(ev.src, ev.dst);
        else
            process_remove(ev.src, ev.dst);
    }

    SummaryGraph finalize() const { return state_.export_summary(); }

    // Finalizes against a reference graph: node ids are remapped from the
    // stream's first-appearance order to the graph's canonical dense ids via
    // the external ids. Nodes of g never seen by the stream become fresh
    // singleton supernodes. The stream must not mention nodes outside g.
    SummaryGraph finalize_for(const InputGraph &g) const {
        std::vector<SupernodeId> assign(g.node_count(), kInvalidSupernode);
        SupernodeId next_fresh = state_.partition().id_bound();
        std::size_t seen = 0;
        for (NodeId c = 0; c < g.node_count(); ++c) {
            auto it = id_map_.find(g.original_id(c));
            if (it == id_map_.end()) {
                assign[c] = next_fresh++;
            } else {
                assign[c] = state_.partition().supernode_of(it->second);
                ++seen;
            }
        }
        if (seen != id_map_.size())
            throw Error("stream mentions nodes outside the reference graph");
        SummaryGraph inner = state_.export_summary();
        SummaryGraph out(Partition::from_assignment(std::move(assign)), inner.model());
        inner.for_each_superedge([&](SupernodeId a, SupernodeId b, EdgeCount count) {
            out.add_superedge(a, b, count);
        });
        return out;
    }

    // Rebuilds the current graph for oracle checks.
    InputGraph current_graph() const {
        std::vector<std::pair<NodeId, NodeId>> edges;
        for (NodeId u = 0; u < adj_.size(); ++u)
            for (NodeId v : adj_[u])
                if (v > u) edges.emplace_back(u, v);
        return InputGraph::from_edges(static_cast<NodeId>(adj_.size()), edges);
    }

    void verify() const { state_.verify_against(current_graph()); }

private:
    NodeId intern(std::uint64_t external) {
        auto [it, added] = id_map_.try_emplace(external, static_cast<NodeId>(adj_.size()));
        if (added) {
            adj_.emplace_back();
            state_.add_node();
        }
        return it->second;
    }

    bool has_edge(NodeId u, NodeId v) const {
        const auto &a = adj_[u];
        return std::binary_search(a.begin(), a.end(), v);
    }

    void process_insert(std::uint64_t raw_u, std::uint64_t raw_v) {
        if (raw_u == raw_v) throw Error("self-loop event");
        const NodeId u = intern(raw_u);
        const NodeId v = intern(raw_v);
        if (has_edge(u, v)) {
            ++stats_.ignored_inserts;
            return;
        }
        add_neighbor(u, v);
        add_neighbor(v, u);
        state_.apply_edge(u, v, true);
        invalidate(state_.partition().supernode_of(u));
        invalidate(state_.partition().supernode_of(v));
        try_moves(u);
        try_moves(v);
    }

    void process_remove(std::uint64_t raw_u, std::uint64_t raw_v) {
        auto iu = id_map_.find(raw_u);
        auto iv = id_map_.find(raw_v);
        if (iu == id_map_.end() || iv == id_map_.end() || !has_edge(iu->second, iv->second)) {
            ++stats_.ignored_deletes;
            return;
        }
        const NodeId u = iu->second;
        const NodeId v = iv->second;
        drop_neighbor(u, v);
        drop_neighbor(v, u);
        state_.apply_edge(u, v, false);
        invalidate(state_.partition().supernode_of(u));
        invalidate(state_.partition().supernode_of(v));
        try_moves(u);
        try_moves(v);
    }

    void add_neighbor(NodeId u, NodeId v) {
        auto &a = adj_[u];
        a.insert(std::lower_bound(a.begin(), a.end(), v), v);
    }

    void drop_neighbor(NodeId u, NodeId v) {
        auto &a = adj_[u];
        a.erase(std::lower_bound(a.begin(), a.end(), v));
    }

    // Samples up to sample_size distinct neighbors of u (Floyd), then for
    // each sampled w draws a same-shingle peer v among the other samples and
    // moves w into S_v when the objective strictly drops.
    void try_moves(NodeId u) {
        if (cfg_.sample_size == 0) return;
        const auto &neigh = adj_[u];
        const std::uint64_t deg = neigh.size();
        if (deg == 0) return;

        sampled_.clear();
        if (deg <= cfg_.sample_size) {
            sampled_.assign(neigh.begin(), neigh.end());
        } else {
            picked_.clear();
            for (std::uint64_t i = deg - cfg_.sample_size; i < deg; ++i) {
                const std::uint64_t t = rng_.next_below(i + 1);
                if (std::find(picked_.begin(), picked_.end(), t) != picked_.end())
                    picked_.push_back(i);
                else
                    picked_.push_back(t);
            }
            std::sort(picked_.begin(), picked_.end());
            for (std::uint64_t idx : picked_) sampled_.push_back(neigh[idx]);
        }

        for (std::size_t wi = 0; wi < sampled_.size(); ++wi) {
            const NodeId w = sampled_[wi];
            const SupernodeId sw = state_.partition().supernode_of(w);
            const std::uint64_t key = shingle(sw);
            candidates_.clear();
            for (std::size_t vi = 0; vi < sampled_.size(); ++vi) {
                if (vi == wi) continue;
                if (shingle(state_.partition().supernode_of(sampled_[vi])) == key)
                    candidates_.push_back(sampled_[vi]);
            }
            if (candidates_.empty()) continue;
            const NodeId v = candidates_[rng_.next_below(candidates_.size())];
            const SupernodeId sv = state_.partition().supernode_of(v);
            if (sv == sw) continue;
            const double delta = state_.eval_move(w, sv, adj_[w]);
            if (delta < 0.0) {
                const double applied = state_.apply_move(w, sv, adj_[w]);
                if (!(applied < 0.0)) ++stats_.strict_decrease_violations;
                ++stats_.accepted_moves;
                invalidate(sv);
                if (state_.partition().is_live(sw)) invalidate(sw);
            } else {
                ++stats_.rejected_moves;
            }
        }
    }

    std::uint64_t shingle(SupernodeId a) {
        if (shingle_cache_.size() < state_.partition().id_bound()) {
            shingle_cache_.resize(state_.partition().id_bound(), 0);
            shingle_fresh_.resize(state_.partition().id_bound(), false);
        }
        if (!shingle_fresh_[a]) {
            shingle_cache_[a] = shingle_of(
                state_.partition().members(a),
                [&](NodeId x) -> const std::vector<NodeId> & { return adj_[x]; },
                shingle_seed_);
            shingle_fresh_[a] = true;
        }
        return shingle_cache_[a];
    }

    void invalidate(SupernodeId a) {
        if (a < shingle_fresh_.size()) shingle_fresh_[a] = false;
    }

    IncrementalConfig cfg_;
    SummaryState state_;
    Rng rng_;
    std::uint64_t shingle_seed_;
    IncrementalStats stats_;
    std::vector<std::vector<NodeId>> adj_;
    std::unordered_map<std::uint64_t, NodeId> id_map_;
    std::vector<std::uint64_t> shingle_cache_;
    std::vector<char> shingle_fresh_;

    // Reused per-event scratch.
    std::vector<NodeId> sampled_;
    std::vector<std::uint64_t> picked_;
    std::vector<NodeId> candidates_;
};

// Feeds a stream file ("+ u v" / "- u v" lines) through the state.
inline void replay_stream(IncrementalState &st, std::istream &in) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view sv = detail::trim(line);
        if (sv.empty() || sv.front() == '#') continue;
        st.process(parse_stream_event(sv, line_no));
    }
}

// Replays an edge list as a pure insertion stream, in file order or shuffled
// with a seed. Self-loop lines are skipped; duplicates surface as ignored
// inserts. Returns the number of insertion events fed.
inline std::uint64_t replay_edge_list(IncrementalState &st, std::istream &in,
                                      bool shuffle = false, std::uint64_t shuffle_seed = 0,
                                      std::uint64_t max_events = 0) {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view sv = detail::trim(line);
        if (sv.empty() || sv.front() == '#') continue;
        const auto [u, v] = detail::parse_edge_line(sv, line_no);
        if (u == v) continue;
        pairs.emplace_back(u, v);
    }
    if (shuffle) {
        Rng rng(shuffle_seed);
        for (std::size_t i = pairs.size(); i > 1; --i)
            std::swap(pairs[i - 1], pairs[rng.next_below(i)]);
    }
    std::uint64_t fed = 0;
    for (const auto &[u, v] : pairs) {
        if (max_events > 0 && fed >= max_events) break;
        st.process({StreamEvent::Kind::insert, u, v});
        ++fed;
    }
    return fed;
}

}  // namespace graphsumm
