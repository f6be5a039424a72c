#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <vector>

#include "graphsumm/common.hpp"
#include "graphsumm/input_graph.hpp"
#include "graphsumm/partition.hpp"

namespace graphsumm {

struct GroupingConfig {
    std::uint32_t max_group_size = 300;
    std::uint64_t rng_seed = 0;
};

constexpr std::uint64_t kEmptyShingle = std::numeric_limits<std::uint64_t>::max();

// Min-hash shingle: minimum seeded permutation value over the neighbor ids of
// the supernode's members. Supernodes with identical neighborhoods collide
// under every seed. neighbors_fn(node) must yield an iterable of NodeId.
template <typename NeighborsFn>
std::uint64_t shingle_of(const std::vector<NodeId> &members, NeighborsFn &&neighbors_fn,
                         std::uint64_t seed) {
    std::uint64_t best = kEmptyShingle;
    for (NodeId u : members)
        for (NodeId v : neighbors_fn(u)) {
            const std::uint64_t h = mix64(seed, v);
            if (h < best) best = h;
        }
    return best;
}

inline std::uint64_t supernode_shingle(const InputGraph &g, const Partition &p,
                                       SupernodeId a, std::uint64_t seed) {
    return shingle_of(p.members(a), [&](NodeId u) -> const std::vector<NodeId> & {
        return g.neighbors(u);
    }, seed);
}

namespace detail {

template <typename ShingleFn>
void split_group(const std::vector<SupernodeId> &group, std::uint32_t max_size,
                 std::uint64_t seed, std::uint32_t depth, ShingleFn &&shingle_fn,
                 std::vector<std::vector<SupernodeId>> &out) {
    if (group.size() <= max_size) {
        out.push_back(group);
        return;
    }
    const std::uint64_t level_seed = mix64(seed, 0x5eedu + depth);
    std::map<std::uint64_t, std::vector<SupernodeId>> buckets;
    for (SupernodeId a : group) buckets[shingle_fn(a, level_seed)].push_back(a);
    if (buckets.size() == 1) {
        // No seed can separate identical neighborhoods; cut by id instead.
        for (std::size_t start = 0; start < group.size(); start += max_size) {
            const std::size_t stop = std::min(group.size(), start + max_size);
            out.emplace_back(group.begin() + start, group.begin() + stop);
        }
        return;
    }
    for (auto &[shingle, bucket] : buckets)
        split_group(bucket, max_size, seed, depth + 1, shingle_fn, out);
}

}  // namespace detail

// Disjoint groups of supernodes with equal min-hash shingles, covering every
// live supernode. Oversize groups are split recursively with fresh seeds.
// Output order: ascending shingle, then recursively by sub-shingle; members
// ascend by id. Singleton groups are included (callers skip them for merging).
template <typename ShingleFn>
std::vector<std::vector<SupernodeId>> group_by_shingle(const Partition &p,
                                                       const GroupingConfig &cfg,
                                                       ShingleFn &&shingle_fn) {
    if (cfg.max_group_size < 2) throw Error("max_group_size must be at least 2");
    std::map<std::uint64_t, std::vector<SupernodeId>> buckets;
    p.for_each_live([&](SupernodeId a) {
        buckets[shingle_fn(a, cfg.rng_seed)].push_back(a);
    });
    std::vector<std::vector<SupernodeId>> groups;
    for (auto &[shingle, bucket] : buckets)
        detail::split_group(bucket, cfg.max_group_size, cfg.rng_seed, 0, shingle_fn, groups);
    return groups;
}

inline std::vector<std::vector<SupernodeId>> group_supernodes(const InputGraph &g,
                                                              const Partition &p,
                                                              const GroupingConfig &cfg) {
    return group_by_shingle(p, cfg, [&](SupernodeId a, std::uint64_t seed) {
        return supernode_shingle(g, p, a, seed);
    });
}

}  // namespace graphsumm
