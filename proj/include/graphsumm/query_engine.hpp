#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "graphsumm/common.hpp"
#include "graphsumm/input_graph.hpp"
#include "graphsumm/summary_graph.hpp"

namespace graphsumm {

// Approximate neighborhood of a subnode, read off the summary: every member
// of a supernode joined to S_u appears once, u itself excluded. Weight is
// omega/Pi under the weighted model and 1 otherwise. Sorted by node id.
struct WeightedNeighborList {
    std::vector<std::pair<NodeId, double>> entries;
};

inline WeightedNeighborList get_neighbors(const SummaryGraph &s, NodeId u) {
    const Partition &p = s.partition();
    const SupernodeId su = p.supernode_of(u);
    WeightedNeighborList out;
    for (const auto &e : s.superedges_of(su)) {
        double w = 1.0;
        if (s.model() == Model::weighted) {
            const EdgeCount pi = pair_space(p.size_of(e.to), p.size_of(su), e.to == su);
            w = static_cast<double>(e.count) / static_cast<double>(pi);
        }
        for (NodeId v : p.members(e.to))
            if (v != u) out.entries.emplace_back(v, w);
    }
    std::sort(out.entries.begin(), out.entries.end());
    return out;
}

struct ScoreVector {
    std::vector<double> scores;
    bool converged = false;
    std::uint32_t iterations = 0;
};

namespace detail {

// One framework for PageRank (uniform restart) and RWR (single-node restart).
// Per sweep every node distributes its old score across its approximate
// neighbors proportionally to their weights, then
//   r_new <- d * r_new + (1 - d * sum(r_new)) * q.
// Nodes without neighbors distribute nothing; their mass re-enters through
// the correction term. Iterates until the L1 change drops below tol.
template <typename SweepFn>
ScoreVector power_iteration(std::size_t n, double damping, double tol,
                            std::uint32_t max_iter, NodeId restart_node,
                            bool uniform_restart, SweepFn &&sweep) {
    if (damping <= 0.0 || damping >= 1.0) throw Error("damping must be in (0,1)");
    ScoreVector result;
    if (n == 0) return result;
    std::vector<double> r_old(n, 0.0);
    std::vector<double> r_new(n, 1.0 / static_cast<double>(n));
    const double q_uniform = 1.0 / static_cast<double>(n);

    for (std::uint32_t iter = 0; iter < max_iter; ++iter) {
        r_old.swap(r_new);
        std::fill(r_new.begin(), r_new.end(), 0.0);
        sweep(r_old, r_new);
        double distributed = 0.0;
        for (double x : r_new) distributed += x;
        const double correction = 1.0 - damping * distributed;
        if (uniform_restart) {
            for (double &x : r_new) x = damping * x + correction * q_uniform;
        } else {
            for (double &x : r_new) x *= damping;
            r_new[restart_node] += correction;
        }
        double change = 0.0;
        for (std::size_t i = 0; i < n; ++i) change += std::abs(r_new[i] - r_old[i]);
        result.iterations = iter + 1;
        if (change < tol) {
            result.converged = true;
            break;
        }
    }
    result.scores = std::move(r_new);
    return result;
}

// Blockwise sweep over a summary graph in O(|P| + |V|). Every member of a
// supernode B has the same approximate neighborhood up to the self-exclusion,
// so per-node weight sums collapse to one value W(B) per supernode and
// superedge contributions aggregate at supernode granularity.
class SummarySweep {
public:
    explicit SummarySweep(const SummaryGraph &s) : s_(s), p_(s.partition()) {
        const SupernodeId bound = p_.id_bound();
        w_sum_.assign(bound, 0.0);
        self_weight_.assign(bound, 0.0);
        supernode_score_.assign(bound, 0.0);
        incoming_.assign(bound, 0.0);
        p_.for_each_live([&](SupernodeId b) {
            double w_sum = 0.0;
            for (const auto &e : s_.superedges_of(b)) {
                const double w = edge_weight(e.to, b, e.count);
                if (e.to == b) {
                    self_weight_[b] = w;
                    w_sum += w * static_cast<double>(p_.size_of(b) - 1);
                } else {
                    w_sum += w * static_cast<double>(p_.size_of(e.to));
                }
            }
            w_sum_[b] = w_sum;
        });
    }

    void operator()(const std::vector<double> &r_old, std::vector<double> &r_new) {
        std::fill(supernode_score_.begin(), supernode_score_.end(), 0.0);
        std::fill(incoming_.begin(), incoming_.end(), 0.0);
        for (NodeId v = 0; v < r_old.size(); ++v)
            supernode_score_[p_.supernode_of(v)] += r_old[v];
        p_.for_each_live([&](SupernodeId b) {
            if (w_sum_[b] <= 0.0) return;
            const double rate = supernode_score_[b] / w_sum_[b];
            for (const auto &e : s_.superedges_of(b))
                incoming_[e.to] += edge_weight(e.to, b, e.count) * rate;
        });
        for (NodeId v = 0; v < r_new.size(); ++v) {
            const SupernodeId sv = p_.supernode_of(v);
            double score = incoming_[sv];
            if (self_weight_[sv] > 0.0)
                score -= self_weight_[sv] * r_old[v] / w_sum_[sv];
            r_new[v] = score;
        }
    }

private:
    double edge_weight(SupernodeId a, SupernodeId b, EdgeCount count) const {
        if (s_.model() == Model::unweighted) return 1.0;
        const EdgeCount pi = pair_space(p_.size_of(a), p_.size_of(b), a == b);
        return static_cast<double>(count) / static_cast<double>(pi);
    }

    const SummaryGraph &s_;
    const Partition &p_;
    std::vector<double> w_sum_;
    std::vector<double> self_weight_;
    std::vector<double> supernode_score_;
    std::vector<double> incoming_;
};

}  // namespace detail

inline ScoreVector pagerank_summary(const SummaryGraph &s, double damping = 0.85,
                                    double tol = 1e-9, std::uint32_t max_iter = 10000) {
    detail::SummarySweep sweep(s);
    return detail::power_iteration(s.partition().node_count(), damping, tol, max_iter,
                                   0, true, sweep);
}

inline ScoreVector rwr_summary(const SummaryGraph &s, NodeId query, double damping = 0.95,
                               double tol = 1e-9, std::uint32_t max_iter = 10000) {
    if (query >= s.partition().node_count()) throw Error("unknown query node");
    detail::SummarySweep sweep(s);
    return detail::power_iteration(s.partition().node_count(), damping, tol, max_iter,
                                   query, false, sweep);
}

inline ScoreVector pagerank_exact(const InputGraph &g, double damping = 0.85,
                                  double tol = 1e-9, std::uint32_t max_iter = 10000) {
    auto sweep = [&](const std::vector<double> &r_old, std::vector<double> &r_new) {
        for (NodeId v = 0; v < g.node_count(); ++v) {
            const auto &neigh = g.neighbors(v);
            if (neigh.empty()) continue;
            const double share = r_old[v] / static_cast<double>(neigh.size());
            for (NodeId l : neigh) r_new[l] += share;
        }
    };
    return detail::power_iteration(g.node_count(), damping, tol, max_iter, 0, true, sweep);
}

inline ScoreVector rwr_exact(const InputGraph &g, NodeId query, double damping = 0.95,
                             double tol = 1e-9, std::uint32_t max_iter = 10000) {
    if (query >= g.node_count()) throw Error("unknown query node");
    auto sweep = [&](const std::vector<double> &r_old, std::vector<double> &r_new) {
        for (NodeId v = 0; v < g.node_count(); ++v) {
            const auto &neigh = g.neighbors(v);
            if (neigh.empty()) continue;
            const double share = r_old[v] / static_cast<double>(neigh.size());
            for (NodeId l : neigh) r_new[l] += share;
        }
    };
    return detail::power_iteration(g.node_count(), damping, tol, max_iter, query, false,
                                   sweep);
}

inline double l1_distance(const std::vector<double> &a, const std::vector<double> &b) {
    if (a.size() != b.size()) throw Error("score vectors differ in length");
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d += std::abs(a[i] - b[i]);
    return d;
}

// Sum of absolute PageRank differences between input and summary graph.
inline double node_importance_error(const InputGraph &g, const SummaryGraph &s,
                                    double damping = 0.85, double tol = 1e-9,
                                    std::uint32_t max_iter = 10000) {
    if (g.node_count() != s.partition().node_count())
        throw Error("summary and graph node counts differ");
    return l1_distance(pagerank_exact(g, damping, tol, max_iter).scores,
                       pagerank_summary(s, damping, tol, max_iter).scores);
}

// Uniform without-replacement sample of query nodes; num_queries >= |V|
// yields every node.
inline std::vector<NodeId> sample_query_nodes(NodeId node_count, std::uint32_t num_queries,
                                              std::uint64_t seed) {
    std::vector<NodeId> nodes(node_count);
    for (NodeId i = 0; i < node_count; ++i) nodes[i] = i;
    if (num_queries >= node_count) return nodes;
    Rng rng(seed);
    for (std::uint32_t i = 0; i < num_queries; ++i) {
        const std::uint64_t j = i + rng.next_below(node_count - i);
        std::swap(nodes[i], nodes[j]);
    }
    nodes.resize(num_queries);
    return nodes;
}

// Mean L1 distance between exact and summary RWR scores over seeded query
// nodes.
inline double node_proximity_error(const InputGraph &g, const SummaryGraph &s,
                                   double damping = 0.95, double tol = 1e-9,
                                   std::uint32_t num_queries = 100,
                                   std::uint64_t seed = 0,
                                   std::uint32_t max_iter = 10000) {
    if (g.node_count() != s.partition().node_count())
        throw Error("summary and graph node counts differ");
    if (g.node_count() == 0) throw Error("empty graph");
    const auto queries = sample_query_nodes(g.node_count(), num_queries, seed);
    detail::SummarySweep sweep(s);
    double total = 0.0;
    for (NodeId q : queries) {
        const auto exact = rwr_exact(g, q, damping, tol, max_iter);
        const auto approx = detail::power_iteration(s.partition().node_count(), damping,
                                                    tol, max_iter, q, false, sweep);
        total += l1_distance(exact.scores, approx.scores);
    }
    return total / static_cast<double>(queries.size());
}

}  // namespace graphsumm
