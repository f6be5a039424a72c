#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "graphsumm/common.hpp"

namespace graphsumm {

// Assignment of subnodes to supernodes. Supernodes partition the node set;
// ids of supernodes emptied by a merge or move are retired, never reused.
class Partition {
public:
    Partition() = default;

    // One singleton supernode per node, supernode id == node id.
    static Partition identity(NodeId node_count) {
        Partition p;
        p.assignment_.resize(node_count);
        p.members_.resize(node_count);
        p.live_.assign(node_count, true);
        p.live_count_ = node_count;
        for (NodeId i = 0; i < node_count; ++i) {
            p.assignment_[i] = i;
            p.members_[i] = {i};
        }
        return p;
    }

    // Rebuilds from a node -> supernode map with arbitrary (sparse) ids, as
    // read from a summary file. Ids above the maximum used id are dead slots.
    static Partition from_assignment(std::vector<SupernodeId> assignment) {
        Partition p;
        SupernodeId bound = 0;
        for (SupernodeId a : assignment) bound = std::max<SupernodeId>(bound, a + 1);
        p.members_.resize(bound);
        p.live_.assign(bound, false);
        for (NodeId i = 0; i < assignment.size(); ++i)
            p.members_[assignment[i]].push_back(i);
        for (SupernodeId a = 0; a < bound; ++a) {
            if (!p.members_[a].empty()) {
                p.live_[a] = true;
                ++p.live_count_;
            }
        }
        p.assignment_ = std::move(assignment);
        return p;
    }

    NodeId node_count() const { return static_cast<NodeId>(assignment_.size()); }
    SupernodeId live_supernode_count() const { return live_count_; }
    SupernodeId id_bound() const { return static_cast<SupernodeId>(members_.size()); }

    bool is_live(SupernodeId a) const { return a < members_.size() && live_[a]; }

    SupernodeId supernode_of(NodeId i) const {
        if (i >= assignment_.size()) throw Error("unknown node id " + std::to_string(i));
        return assignment_[i];
    }

    const std::vector<NodeId> &members(SupernodeId a) const {
        check_live(a);
        return members_[a];
    }

    std::uint64_t size_of(SupernodeId a) const {
        check_live(a);
        return members_[a].size();
    }

    // Registers a new node as a fresh singleton supernode; returns the node id.
    NodeId add_node() {
        const NodeId node = static_cast<NodeId>(assignment_.size());
        const SupernodeId sn = static_cast<SupernodeId>(members_.size());
        assignment_.push_back(sn);
        members_.push_back({node});
        live_.push_back(true);
        ++live_count_;
        return node;
    }

    // Merges b into a (or a into b); the smaller id survives and is returned.
    SupernodeId merge(SupernodeId a, SupernodeId b) {
        check_live(a);
        check_live(b);
        if (a == b) throw Error("cannot merge a supernode with itself");
        const SupernodeId keep = std::min(a, b);
        const SupernodeId kill = std::max(a, b);
        auto &into = members_[keep];
        auto &from = members_[kill];
        for (NodeId i : from) assignment_[i] = keep;
        into.insert(into.end(), from.begin(), from.end());
        from.clear();
        from.shrink_to_fit();
        live_[kill] = false;
        --live_count_;
        return keep;
    }

    // Moves one node into another live supernode. Returns true when the
    // source supernode became empty and was retired.
    bool move(NodeId node, SupernodeId to) {
        check_live(to);
        const SupernodeId from = supernode_of(node);
        if (from == to) throw Error("node already in target supernode");
        auto &src = members_[from];
        auto it = std::find(src.begin(), src.end(), node);
        *it = src.back();
        src.pop_back();
        members_[to].push_back(node);
        assignment_[node] = to;
        if (src.empty()) {
            src.shrink_to_fit();
            live_[from] = false;
            --live_count_;
            return true;
        }
        return false;
    }

    std::vector<SupernodeId> live_ids() const {
        std::vector<SupernodeId> ids;
        ids.reserve(live_count_);
        for (SupernodeId a = 0; a < members_.size(); ++a)
            if (live_[a]) ids.push_back(a);
        return ids;
    }

    template <typename F>
    void for_each_live(F &&f) const {
        for (SupernodeId a = 0; a < members_.size(); ++a)
            if (live_[a]) f(a);
    }

    void validate() const {
        std::vector<bool> covered(assignment_.size(), false);
        SupernodeId live_seen = 0;
        for (SupernodeId a = 0; a < members_.size(); ++a) {
            if (live_[a] != !members_[a].empty())
                throw Error("live flag inconsistent with members");
            if (live_[a]) ++live_seen;
            for (NodeId i : members_[a]) {
                if (i >= assignment_.size()) throw Error("member out of range");
                if (assignment_[i] != a) throw Error("assignment/members mismatch");
                if (covered[i]) throw Error("node in two supernodes");
                covered[i] = true;
            }
        }
        if (live_seen != live_count_) throw Error("live supernode count wrong");
        for (bool c : covered)
            if (!c) throw Error("node not covered by any supernode");
    }

private:
    void check_live(SupernodeId a) const {
        if (!is_live(a)) throw Error("supernode " + std::to_string(a) + " is not live");
    }

    std::vector<SupernodeId> assignment_;
    std::vector<std::vector<NodeId>> members_;
    std::vector<bool> live_;
    SupernodeId live_count_ = 0;
};

}  // namespace graphsumm
