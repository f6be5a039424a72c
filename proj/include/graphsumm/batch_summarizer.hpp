#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <queue>
#include <unordered_map>
#include <vector>

#include "graphsumm/common.hpp"
#include "graphsumm/grouping.hpp"
#include "graphsumm/input_graph.hpp"
#include "graphsumm/metrics.hpp"
#include "graphsumm/summary_graph.hpp"
#include "graphsumm/summary_state.hpp"

namespace graphsumm {

struct KGrassConfig {
    // Exact greedy scans all supernode pairs; refuse inputs past this size
    // instead of silently sampling.
    NodeId max_nodes = 2000;
};

struct SsummConfig {
    std::uint32_t iterations = 20;  // T
    GroupingConfig grouping;
    // Iteration t accepts a group's best merge only if its relative saving is
    // at least 1/(1+t); the final iteration accepts any strict decrease.
    bool threshold_schedule = true;
    bool log_progress = true;
    // Instrumentation: number of accepted merges whose exact delta was >= 0.
    // Stays zero unless the strict-decrease guarantee is broken.
    std::uint64_t *strict_decrease_violations = nullptr;
};

namespace detail {

struct HeapEntry {
    double key = 0.0;
    SupernodeId a = 0;
    SupernodeId b = 0;
};

struct HeapEntryGreater {
    bool operator()(const HeapEntry &x, const HeapEntry &y) const {
        if (x.key != y.key) return x.key > y.key;
        if (x.a != y.a) return x.a > y.a;
        return x.b > y.b;
    }
};

using CandidateHeap =
    std::priority_queue<HeapEntry, std::vector<HeapEntry>, HeapEntryGreater>;

inline std::uint64_t pair_key(SupernodeId a, SupernodeId b) {
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

}  // namespace detail

// Exact change of the chosen loss caused by merging a and b (superedges of
// the merged supernode re-decided by the model's rule). Equals the difference
// of full objective evaluations.
inline double merge_delta(const InputGraph &g, const SummaryGraph &s, SupernodeId a,
                          SupernodeId b, LossKind loss) {
    SummaryState state(g, s, loss);
    return state.eval_merge(a, b).delta;
}

// Greedy pairwise merging down to exactly k supernodes, each step choosing
// the pair (over all live pairs) whose merge increases the L1 reconstruction
// error least. Ties go to the lexicographically smallest (min id, max id)
// pair. Deltas are pair-local under the L1 loss, so cached values stay exact
// until one endpoint is merged.
inline SummaryGraph kgrass(const InputGraph &g, SupernodeId k, Model model,
                           const KGrassConfig &cfg = {}) {
    const NodeId n = g.node_count();
    if (n == 0) throw Error("k-grass needs a nonempty graph");
    if (k < 1 || k > n) throw Error("target supernode count out of range");
    if (n > cfg.max_nodes)
        throw Error("k-grass refused: " + std::to_string(n) + " nodes exceeds the exact-greedy cap of " +
                    std::to_string(cfg.max_nodes) + " (raise max_nodes to override)");

    SummaryState state(g, model, LossKind::l1);
    const std::size_t stride = n;
    std::vector<double> cached(static_cast<std::size_t>(n) * n, 0.0);
    auto cache_at = [&](SupernodeId a, SupernodeId b) -> double & {
        return cached[static_cast<std::size_t>(a) * stride + b];
    };

    detail::CandidateHeap heap;
    for (SupernodeId a = 0; a + 1 < n; ++a)
        for (SupernodeId b = a + 1; b < n; ++b) {
            const double d = state.eval_merge(a, b).delta;
            cache_at(a, b) = d;
            heap.push({d, a, b});
        }

    while (state.live_supernode_count() > k) {
        if (heap.empty()) throw Error("k-grass ran out of merge candidates");
        const auto top = heap.top();
        heap.pop();
        if (!state.partition().is_live(top.a) || !state.partition().is_live(top.b))
            continue;
        if (cache_at(top.a, top.b) != top.key) continue;  // superseded entry
        state.apply_merge(top.a, top.b);
        // Survivor is min(a,b) = top.a; refresh its pair deltas.
        state.partition().for_each_live([&](SupernodeId c) {
            if (c == top.a) return;
            const SupernodeId lo = std::min(c, top.a);
            const SupernodeId hi = std::max(c, top.a);
            const double d = state.eval_merge(lo, hi).delta;
            cache_at(lo, hi) = d;
            heap.push({d, lo, hi});
        });
    }
    return state.export_summary();
}

namespace detail {

// Repeatedly merges the best loss-decreasing pair inside one group until the
// heap empties or the best candidate fails acceptance. Cached deltas can go
// stale as global terms drift; a popped candidate is re-evaluated and only
// accepted when its key matches the exact current delta.
template <typename AcceptFn, typename StopFn>
void merge_within_group(SummaryState &state, const std::vector<SupernodeId> &group,
                        AcceptFn &&accept, StopFn &&stop,
                        std::uint64_t *violations) {
    std::unordered_map<std::uint64_t, double> cache;
    CandidateHeap heap;
    auto refresh = [&](SupernodeId a, SupernodeId b) {
        const auto r = state.eval_merge(a, b);
        cache[pair_key(a, b)] = r.delta;
        heap.push({r.delta, a, b});
    };
    for (std::size_t i = 0; i + 1 < group.size(); ++i)
        for (std::size_t j = i + 1; j < group.size(); ++j)
            refresh(group[i], group[j]);

    while (!heap.empty()) {
        const auto top = heap.top();
        heap.pop();
        if (!state.partition().is_live(top.a) || !state.partition().is_live(top.b))
            continue;
        auto it = cache.find(pair_key(top.a, top.b));
        if (it == cache.end() || it->second != top.key) continue;
        const auto r = state.eval_merge(top.a, top.b);
        if (r.delta != top.key) {
            // Global terms moved under this entry; re-rank and retry.
            it->second = r.delta;
            heap.push({r.delta, top.a, top.b});
            continue;
        }
        if (!accept(r)) break;  // best candidate rejected: group is done
        if (violations && !(r.delta < 0.0)) ++*violations;
        state.apply_merge(top.a, top.b);
        for (SupernodeId c : group) {
            if (c == top.a || !state.partition().is_live(c)) continue;
            refresh(std::min(c, top.a), std::max(c, top.a));
        }
        if (stop()) return;
    }
}

}  // namespace detail

// Budgeted summarization: up to T rounds of min-hash grouping and in-group
// merging under the description-length objective, then greedy superedge
// sparsification if the bit budget is still not met. The returned summary
// always satisfies size_bits <= target_bits.
SummaryGraph sparsify(const InputGraph &g, SummaryGraph s, double target_bits);

inline SummaryGraph ssumm(const InputGraph &g, double target_bits, Model model,
                          const SsummConfig &cfg = {}) {
    if (g.node_count() == 0) throw Error("ssumm needs a nonempty graph");
    if (target_bits <= 0.0) throw Error("target_bits must be positive");
    if (cfg.iterations < 1) throw Error("at least one iteration required");

    SummaryState state(g, model, LossKind::mdl);
    for (std::uint32_t t = 1; t <= cfg.iterations; ++t) {
        if (state.summary_bits() <= target_bits) break;
        // Weight bits priced at the iteration-start maximum count; see
        // SummaryState::freeze_omega.
        state.freeze_omega(state.current_omega_max());
        GroupingConfig gcfg = cfg.grouping;
        gcfg.rng_seed = mix64(cfg.grouping.rng_seed, 0x55u + t);
        const auto groups = group_supernodes(g, state.partition(), gcfg);

        const bool final_round = t == cfg.iterations;
        const double theta = cfg.threshold_schedule && !final_round
                                 ? 1.0 / (1.0 + static_cast<double>(t))
                                 : 0.0;
        auto accept = [&](const SummaryState::MergeResult &r) {
            if (!(r.delta < 0.0)) return false;
            if (theta == 0.0) return true;
            if (r.cost_before <= 0.0) return false;
            return 1.0 - r.cost_after / r.cost_before >= theta;
        };
        auto stop = [&]() { return state.summary_bits() <= target_bits; };

        for (const auto &group : groups) {
            if (group.size() < 2) continue;
            detail::merge_within_group(state, group, accept, stop,
                                       cfg.strict_decrease_violations);
            if (stop()) break;
        }
        if (cfg.log_progress)
            std::fprintf(stderr, "iter=%u |S|=%u bits=%.6g\n", t,
                         state.live_supernode_count(), state.summary_bits());
    }

    // Sparsification cannot shed membership bits. If |V| log2|S| alone still
    // exceeds the budget, keep merging the least-damaging pairs (accepting
    // objective increases) until it does not; |S| = 1 reaches zero bits, so
    // any positive budget is attainable. Only degenerate budgets get here.
    const double node_bits = static_cast<double>(g.node_count());
    auto floor_bits = [&] {
        return node_bits * std::log2(static_cast<double>(state.live_supernode_count()));
    };
    std::uint32_t forcing_round = cfg.iterations;
    while (state.live_supernode_count() > 1 && floor_bits() > target_bits) {
        ++forcing_round;
        state.freeze_omega(state.current_omega_max());
        GroupingConfig gcfg = cfg.grouping;
        gcfg.rng_seed = mix64(cfg.grouping.rng_seed, 0x55u + forcing_round);
        const auto groups = group_supernodes(g, state.partition(), gcfg);
        bool merged_any = false;
        for (const auto &group : groups) {
            while (state.live_supernode_count() > 1 && floor_bits() > target_bits) {
                bool found = false;
                SupernodeId best_a = 0, best_b = 0;
                double best_delta = 0.0;
                for (std::size_t i = 0; i + 1 < group.size(); ++i) {
                    if (!state.partition().is_live(group[i])) continue;
                    for (std::size_t j = i + 1; j < group.size(); ++j) {
                        if (!state.partition().is_live(group[j])) continue;
                        const double d = state.eval_merge(group[i], group[j]).delta;
                        if (!found || d < best_delta) {
                            found = true;
                            best_delta = d;
                            best_a = group[i];
                            best_b = group[j];
                        }
                    }
                }
                if (!found) break;
                state.apply_merge(best_a, best_b);
                merged_any = true;
            }
            if (floor_bits() <= target_bits) break;
        }
        if (!merged_any && state.live_supernode_count() > 1 &&
            floor_bits() > target_bits) {
            const auto live = state.partition().live_ids();
            state.apply_merge(live[0], live[1]);
        }
        if (cfg.log_progress)
            std::fprintf(stderr, "iter=%u |S|=%u bits=%.6g (budget forcing)\n",
                         forcing_round, state.live_supernode_count(),
                         state.summary_bits());
    }
    state.unfreeze_omega();

    SummaryGraph out = state.export_summary();
    if (size_bits(out) > target_bits) out = sparsify(g, std::move(out), target_bits);
    return out;
}

// Greedy superedge removal until the bit budget holds, dropping the superedge
// with the smallest L1-error increase per bit saved. Never touches the
// partition. Stored counts equal E_AB, so the error change has a closed form.
inline SummaryGraph sparsify(const InputGraph &g, SummaryGraph s, double target_bits) {
    (void)g;
    if (size_bits(s) <= target_bits) return s;
    const Partition &p = s.partition();
    const double log_s = std::log2(static_cast<double>(p.live_supernode_count()));
    const double floor_bits = static_cast<double>(p.node_count()) * log_s;
    if (floor_bits > target_bits)
        throw Error("bit budget unreachable: membership alone needs " +
                    format_double(floor_bits) + " bits");

    auto re1_increase = [&](SupernodeId a, SupernodeId b, EdgeCount count) {
        const double e = static_cast<double>(count);
        const double pi = static_cast<double>(
            pair_space(p.size_of(a), p.size_of(b), a == b));
        // Dropping the block leaves its E edges unexplained; with the block,
        // the weighted error is 2E(Pi-E)/Pi and the unweighted one is Pi-E.
        return s.model() == Model::weighted ? e - 2.0 * e * (pi - e) / pi
                                            : 2.0 * e - pi;
    };
    auto bits_saved = [&](EdgeCount count) {
        double saved = 2.0 * log_s;
        if (s.model() == Model::weighted) {
            const double np = static_cast<double>(s.superedge_count());
            const double w_now = std::log2(static_cast<double>(s.omega_max()));
            const EdgeCount rest = s.omega_max_without(count);
            const double w_rest = rest > 0 ? std::log2(static_cast<double>(rest)) : 0.0;
            saved += np * w_now - (np - 1.0) * w_rest;
        }
        return saved;
    };
    auto ratio_of = [&](SupernodeId a, SupernodeId b, EdgeCount count) {
        return re1_increase(a, b, count) / bits_saved(count);
    };

    detail::CandidateHeap heap;
    std::unordered_map<std::uint64_t, double> cache;
    s.for_each_superedge([&](SupernodeId a, SupernodeId b, EdgeCount count) {
        const double r = ratio_of(a, b, count);
        cache[detail::pair_key(a, b)] = r;
        heap.push({r, a, b});
    });

    while (size_bits(s) > target_bits) {
        if (heap.empty()) throw Error("sparsify exhausted superedges above budget");
        const auto top = heap.top();
        heap.pop();
        auto it = cache.find(detail::pair_key(top.a, top.b));
        if (it == cache.end() || it->second != top.key) continue;
        const EdgeCount count = s.superedge_subedge_count(top.a, top.b);
        const double r = ratio_of(top.a, top.b, count);
        if (r != top.key) {
            // omega_max or |P| moved; re-rank this candidate.
            it->second = r;
            heap.push({r, top.a, top.b});
            continue;
        }
        s.remove_superedge(top.a, top.b);
        cache.erase(it);
    }
    return s;
}

}  // namespace graphsumm
