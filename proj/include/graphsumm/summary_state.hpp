#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "graphsumm/common.hpp"
#include "graphsumm/input_graph.hpp"
#include "graphsumm/metrics.hpp"
#include "graphsumm/partition.hpp"
#include "graphsumm/summary_graph.hpp"

namespace graphsumm {

// Which objective drives the search. L1 is the reconstruction error used by
// the pure greedy merger; MDL is the description-length objective used by the
// budgeted and the incremental summarizers.
enum class LossKind { l1, mdl };

// Mutable summarization state: a partition, the exact subedge count E_AB for
// every supernode pair that has one, a presence flag per pair, and running
// aggregates from which the active objective is O(1).
//
// Evaluation and commit of a merge or move run through the same code path,
// so an evaluated delta equals the committed one bit for bit. Presence is
// re-decided only for pairs whose E or Pi changed; the closed-form rules
// live in decide_presence(). Integer unit sums are multiplied by the log
// factors only inside loss_value(), which keeps them exact while |V| and
// |S| drift.
class SummaryState {
public:
    struct PairState {
        EdgeCount count = 0;
        bool present = false;
    };

    SummaryState(Model model, LossKind loss) : model_(model), loss_(loss) {}

    // Identity start for batch search: every node a singleton, every input
    // edge a present superedge of count 1. All data terms start at zero.
    SummaryState(const InputGraph &g, Model model, LossKind loss)
        : model_(model), loss_(loss), partition_(Partition::identity(g.node_count())) {
        nbr_.resize(g.node_count());
        g.for_each_edge([&](NodeId i, NodeId j) {
            nbr_[i].emplace(j, PairState{1, true});
            nbr_[j].emplace(i, PairState{1, true});
        });
        agg_.n_present = static_cast<std::int64_t>(g.edge_count());
        if (g.edge_count() > 0) hist_[1] = static_cast<std::uint32_t>(g.edge_count());
    }

    // Rebuilds search state from an existing summary. Pair counts are
    // recomputed edge-driven; presence comes from the summary's superedges
    // (or from the L1 rules, which are memoryless).
    SummaryState(const InputGraph &g, const SummaryGraph &s, LossKind loss)
        : model_(s.model()), loss_(loss), partition_(s.partition()) {
        nbr_.resize(partition_.id_bound());
        g.for_each_edge([&](NodeId i, NodeId j) {
            const SupernodeId a = partition_.supernode_of(i);
            const SupernodeId b = partition_.supernode_of(j);
            ++nbr_[a][b].count;
            if (a != b) ++nbr_[b][a].count;
        });
        for_each_pair_sorted([&](SupernodeId a, SupernodeId b) {
            PairState ps = *find_pair(a, b);
            ps.present = loss_ == LossKind::l1
                             ? l1_presence_rule(model_, ps.count, pair_pi(a, b))
                             : s.has_superedge(a, b);
            set_pair(a, b, ps.count, ps.present);
            account_add(agg_, ps.count, pair_pi(a, b), ps.present);
            if (ps.present) hist_insert(ps.count);
        });
    }

    Model model() const { return model_; }
    LossKind loss_kind() const { return loss_; }
    const Partition &partition() const { return partition_; }
    NodeId node_count() const { return partition_.node_count(); }
    SupernodeId live_supernode_count() const { return partition_.live_supernode_count(); }
    std::uint64_t present_superedges() const {
        return static_cast<std::uint64_t>(agg_.n_present);
    }

    EdgeCount pair_count(SupernodeId a, SupernodeId b) const {
        const PairState *ps = find_pair(a, b);
        return ps ? ps->count : 0;
    }

    bool pair_present(SupernodeId a, SupernodeId b) const {
        const PairState *ps = find_pair(a, b);
        return ps && ps->present;
    }

    // Active objective of the current state.
    double loss() const { return loss_value(agg_, live_supernode_count(), omega_max()); }

    // Freezes the weight-bits price log2(omega_max) at the given value. The
    // budgeted search sets this once per outer iteration so that candidate
    // deltas stay local: exact repricing of every superedge whenever the
    // global maximum count moves would otherwise dominate, and the first
    // count-doubling merge would always look bad. While frozen, the active
    // loss and the presence rule both use the frozen price; summary_bits()
    // keeps using the true maximum.
    void freeze_omega(EdgeCount value) { frozen_omega_ = value; }
    void unfreeze_omega() { frozen_omega_.reset(); }
    EdgeCount current_omega_max() const { return omega_max(); }

    // Size in bits of the summary the current state would export.
    double summary_bits() const {
        const double log_s = std::log2(static_cast<double>(live_supernode_count()));
        double bits = (2.0 * static_cast<double>(agg_.n_present) +
                       static_cast<double>(node_count())) *
                      log_s;
        if (model_ == Model::weighted && agg_.n_present > 0)
            bits += static_cast<double>(agg_.n_present) *
                    std::log2(static_cast<double>(omega_max()));
        return bits;
    }

    struct MergeResult {
        double delta = 0.0;        // loss(after) - loss(before), exact
        double cost_before = 0.0;  // encoding cost of A and B (saving heuristic)
        double cost_after = 0.0;   // encoding cost of the merged supernode
    };

    MergeResult eval_merge(SupernodeId a, SupernodeId b) { return merge_impl<false>(a, b); }
    MergeResult apply_merge(SupernodeId a, SupernodeId b) { return merge_impl<true>(a, b); }

    // Node registration for the incremental path.
    NodeId add_node() {
        const NodeId node = partition_.add_node();
        if (nbr_.size() < partition_.id_bound()) nbr_.resize(partition_.id_bound());
        return node;
    }

    // Accounts for one edge {u,v} appearing (insert) or disappearing. The
    // caller maintains the adjacency itself and must report each change
    // exactly once. Returns the exact loss delta.
    double apply_edge(NodeId u, NodeId v, bool insert) {
        if (u == v) throw Error("self-loop edge event");
        const double before = loss();
        const SupernodeId a = partition_.supernode_of(u);
        const SupernodeId b = partition_.supernode_of(v);
        const PairState *ps = find_pair(a, b);
        const EdgeCount e_old = ps ? ps->count : 0;
        if (!insert && e_old == 0) throw Error("deleting an unaccounted edge");
        const EdgeCount e_new = insert ? e_old + 1 : e_old - 1;
        const EdgeCount pi = pair_pi(a, b);

        removed_counts_.clear();
        added_counts_.clear();
        if (ps) {
            account_remove(agg_, e_old, pi, ps->present);
            if (ps->present) removed_counts_.push_back(e_old);
        }
        const EdgeCount omega_ref = needs_omega() ? omega_max_excluding() : 0;
        if (e_new > 0) {
            const bool present = decide_presence(e_new, pi, live_supernode_count(), omega_ref);
            account_add(agg_, e_new, pi, present);
            if (present) added_counts_.push_back(e_new);
            set_pair(a, b, e_new, present);
        } else {
            erase_pair(a, b);
        }
        sync_hist();
        return loss() - before;
    }

    // Move of one node into another supernode (the incremental algorithm's
    // only structural move). w_neighbors is w's current adjacency. Pi changes
    // for every pair incident to the source or the target supernode, so all
    // of them are re-decided.
    double eval_move(NodeId w, SupernodeId target, const std::vector<NodeId> &w_neighbors) {
        return move_impl<false>(w, target, w_neighbors);
    }
    double apply_move(NodeId w, SupernodeId target, const std::vector<NodeId> &w_neighbors) {
        return move_impl<true>(w, target, w_neighbors);
    }

    SummaryGraph export_summary() const {
        SummaryGraph s(partition_, model_);
        for_each_pair_sorted([&](SupernodeId a, SupernodeId b) {
            const PairState *ps = find_pair(a, b);
            if (ps->present) s.add_superedge(a, b, ps->count);
        });
        return s;
    }

    // Full consistency check against a reference graph: counts, presence
    // domain, and aggregates recomputed from scratch. Test/debug aid.
    void verify_against(const InputGraph &g) const {
        partition_.validate();
        if (g.node_count() != node_count()) throw Error("node count mismatch");
        std::unordered_map<std::uint64_t, EdgeCount> expected;
        g.for_each_edge([&](NodeId i, NodeId j) {
            SupernodeId a = partition_.supernode_of(i);
            SupernodeId b = partition_.supernode_of(j);
            if (a > b) std::swap(a, b);
            ++expected[(static_cast<std::uint64_t>(a) << 32) | b];
        });
        std::uint64_t entries = 0;
        Agg fresh;
        for_each_pair_sorted([&](SupernodeId a, SupernodeId b) {
            const PairState *ps = find_pair(a, b);
            ++entries;
            if (ps->count == 0) throw Error("zero-count pair entry");
            auto it = expected.find((static_cast<std::uint64_t>(a) << 32) | b);
            if (it == expected.end() || it->second != ps->count)
                throw Error("pair count disagrees with graph");
            account_add(fresh, ps->count, pair_pi(a, b), ps->present);
        });
        if (entries != expected.size()) throw Error("missing pair entry");
        if (fresh.n_present != agg_.n_present || fresh.absent_units != agg_.absent_units ||
            fresh.present_units != agg_.present_units)
            throw Error("integer aggregates drifted");
        if (std::abs(fresh.sum_entropy - agg_.sum_entropy) >
            1e-6 * std::max(1.0, std::abs(fresh.sum_entropy)))
            throw Error("entropy aggregate drifted");
        if (std::abs(fresh.loss_l1 - agg_.loss_l1) >
            1e-6 * std::max(1.0, std::abs(fresh.loss_l1)))
            throw Error("l1 aggregate drifted");
    }

private:
    struct Agg {
        std::int64_t n_present = 0;
        double sum_entropy = 0.0;         // weighted MDL: sum of Pi*H(E/Pi), present pairs
        std::uint64_t present_units = 0;  // unweighted MDL: sum of (Pi-E), present pairs
        std::uint64_t absent_units = 0;   // both MDL models: sum of E, absent pairs
        double loss_l1 = 0.0;             // L1 mode: sum of per-pair block errors
    };

    static double l1_contribution(Model model, EdgeCount e, EdgeCount pi) {
        if (model == Model::weighted) {
            // Block error with w = E/Pi: E(1-w) + (Pi-E)w = 2E(Pi-E)/Pi.
            return 2.0 * static_cast<double>(e) * static_cast<double>(pi - e) /
                   static_cast<double>(pi);
        }
        return static_cast<double>(std::min(e, pi - e));
    }

    // k-Grass superedge rules: weighted keeps every E > 0 pair, unweighted
    // keeps a pair only when that lowers the L1 error (majority rule).
    static bool l1_presence_rule(Model model, EdgeCount e, EdgeCount pi) {
        return model == Model::weighted ? e > 0 : 2 * e > pi;
    }

    bool needs_omega() const {
        return loss_ == LossKind::mdl && model_ == Model::weighted && !frozen_omega_;
    }

    // Closed-form presence rules. A pair carries a superedge only when that
    // is strictly cheaper under the active objective; ties resolve to no
    // superedge. omega_ref is the largest present count among unaffected
    // pairs at decision time (weighted MDL only).
    bool decide_presence(EdgeCount e, EdgeCount pi, SupernodeId live_count,
                         EdgeCount omega_ref) const {
        if (loss_ == LossKind::l1) return l1_presence_rule(model_, e, pi);
        const double log_s = std::log2(static_cast<double>(live_count));
        const double log_v = std::log2(static_cast<double>(node_count()));
        const double absent_cost = 2.0 * static_cast<double>(e) * log_v;
        double present_cost = 2.0 * log_s;
        if (model_ == Model::weighted) {
            const EdgeCount price = frozen_omega_ ? *frozen_omega_ : omega_ref;
            present_cost += std::log2(static_cast<double>(std::max<EdgeCount>(price, 1)));
            present_cost += static_cast<double>(pi) *
                            entropy(static_cast<double>(e) / static_cast<double>(pi));
        } else {
            present_cost += 2.0 * static_cast<double>(pi - e) * log_v;
        }
        return present_cost < absent_cost;
    }

    void account_add(Agg &agg, EdgeCount e, EdgeCount pi, bool present) const {
        if (loss_ == LossKind::l1) {
            agg.loss_l1 += l1_contribution(model_, e, pi);
        }
        if (present) {
            ++agg.n_present;
            if (loss_ == LossKind::mdl) {
                if (model_ == Model::weighted)
                    agg.sum_entropy +=
                        static_cast<double>(pi) *
                        entropy(static_cast<double>(e) / static_cast<double>(pi));
                else
                    agg.present_units += pi - e;
            }
        } else {
            agg.absent_units += e;
        }
    }

    void account_remove(Agg &agg, EdgeCount e, EdgeCount pi, bool present) const {
        if (loss_ == LossKind::l1) {
            agg.loss_l1 -= l1_contribution(model_, e, pi);
        }
        if (present) {
            --agg.n_present;
            if (loss_ == LossKind::mdl) {
                if (model_ == Model::weighted)
                    agg.sum_entropy -=
                        static_cast<double>(pi) *
                        entropy(static_cast<double>(e) / static_cast<double>(pi));
                else
                    agg.present_units -= pi - e;
            }
        } else {
            agg.absent_units -= e;
        }
    }

    double loss_value(const Agg &agg, SupernodeId live_count, EdgeCount omega) const {
        if (node_count() == 0) return 0.0;
        if (loss_ == LossKind::l1) return agg.loss_l1;
        const double log_s = std::log2(static_cast<double>(live_count));
        const double log_v = std::log2(static_cast<double>(node_count()));
        double value = (2.0 * static_cast<double>(agg.n_present) +
                        static_cast<double>(node_count())) *
                       log_s;
        if (model_ == Model::weighted) {
            const EdgeCount price = frozen_omega_ ? *frozen_omega_ : omega;
            if (agg.n_present > 0)
                value += static_cast<double>(agg.n_present) *
                         std::log2(static_cast<double>(std::max<EdgeCount>(price, 1)));
            value += agg.sum_entropy;
        } else {
            value += 2.0 * log_v * static_cast<double>(agg.present_units);
        }
        value += 2.0 * log_v * static_cast<double>(agg.absent_units);
        return value;
    }

    // Heuristic encoding cost of one pair plus, at supernode level, the
    // membership bits; feeds only the saving ratio that gates budgeted
    // merges. Omega pricing is left out on purpose.
    double pair_cost(EdgeCount e, EdgeCount pi, bool present, double log_s,
                     double log_v) const {
        if (!present) return 2.0 * static_cast<double>(e) * log_v;
        double cost = 2.0 * log_s;
        if (loss_ == LossKind::mdl) {
            if (model_ == Model::weighted)
                cost += static_cast<double>(pi) *
                        entropy(static_cast<double>(e) / static_cast<double>(pi));
            else
                cost += 2.0 * static_cast<double>(pi - e) * log_v;
        }
        return cost;
    }

    EdgeCount pair_pi(SupernodeId a, SupernodeId b) const {
        return pair_space(partition_.size_of(a), partition_.size_of(b), a == b);
    }

    EdgeCount omega_max() const { return hist_.empty() ? 0 : hist_.begin()->first; }

    // Maximum present count once the counts queued in removed_counts_ are
    // taken out. Two-pointer walk over the descending histogram.
    EdgeCount omega_max_excluding() {
        if (hist_.empty()) return 0;
        std::sort(removed_counts_.begin(), removed_counts_.end(), std::greater<EdgeCount>());
        std::size_t r = 0;
        for (const auto &[count, mult] : hist_) {
            std::uint32_t removed_here = 0;
            while (r < removed_counts_.size() && removed_counts_[r] == count) {
                ++removed_here;
                ++r;
            }
            if (mult > removed_here) return count;
        }
        return 0;
    }

    void hist_insert(EdgeCount c) { ++hist_[c]; }
    void hist_erase(EdgeCount c) {
        auto it = hist_.find(c);
        if (--it->second == 0) hist_.erase(it);
    }
    void sync_hist() {
        for (EdgeCount c : removed_counts_) hist_erase(c);
        for (EdgeCount c : added_counts_) hist_insert(c);
    }

    const PairState *find_pair(SupernodeId a, SupernodeId b) const {
        if (!partition_.is_live(a) || !partition_.is_live(b))
            throw Error("supernode not live");
        auto it = nbr_[a].find(b);
        return it == nbr_[a].end() ? nullptr : &it->second;
    }

    void set_pair(SupernodeId a, SupernodeId b, EdgeCount e, bool present) {
        nbr_[a][b] = PairState{e, present};
        if (a != b) nbr_[b][a] = PairState{e, present};
    }
    void erase_pair(SupernodeId a, SupernodeId b) {
        nbr_[a].erase(b);
        if (a != b) nbr_[b].erase(a);
    }

    // Visits each pair once (a <= b), ascending lexicographically. Keeps
    // floating-point accumulation order independent of hash-map history.
    template <typename F>
    void for_each_pair_sorted(F &&f) const {
        std::vector<SupernodeId> keys;
        for (SupernodeId a = 0; a < nbr_.size(); ++a) {
            if (!partition_.is_live(a) || nbr_[a].empty()) continue;
            keys.clear();
            for (const auto &[c, ps] : nbr_[a])
                if (c >= a) keys.push_back(c);
            std::sort(keys.begin(), keys.end());
            for (SupernodeId c : keys) f(a, c);
        }
    }

    template <bool Commit>
    MergeResult merge_impl(SupernodeId a, SupernodeId b) {
        if (a == b) throw Error("cannot merge a supernode with itself");
        if (!partition_.is_live(a) || !partition_.is_live(b))
            throw Error("supernode not live");
        if (a > b) std::swap(a, b);

        const double loss_before = loss();
        const SupernodeId live_after = live_supernode_count() - 1;
        const double log_s_before = std::log2(static_cast<double>(live_supernode_count()));
        const double log_s_after = std::log2(static_cast<double>(live_after));
        const double log_v = std::log2(static_cast<double>(node_count()));
        const std::uint64_t za = partition_.size_of(a);
        const std::uint64_t zb = partition_.size_of(b);

        // Gather incident pairs of both endpoints.
        ++epoch_;
        touched_.clear();
        PairState self_a, self_b, cross;
        for (const auto &[c, ps] : nbr_[a]) {
            if (c == a) {
                self_a = ps;
            } else if (c == b) {
                cross = ps;
            } else {
                Slot &slot = slot_for(c);
                slot.e_a = ps.count;
                slot.present_a = ps.present;
            }
        }
        for (const auto &[c, ps] : nbr_[b]) {
            if (c == b) {
                self_b = ps;
            } else if (c != a) {
                Slot &slot = slot_for(c);
                slot.e_b = ps.count;
                slot.present_b = ps.present;
            }
        }
        std::sort(touched_.begin(), touched_.end());

        Agg local = agg_;
        Agg &acc = Commit ? agg_ : local;
        removed_counts_.clear();
        added_counts_.clear();

        MergeResult result;
        auto remove_one = [&](EdgeCount e, EdgeCount pi, bool present) {
            account_remove(acc, e, pi, present);
            if (present) removed_counts_.push_back(e);
            result.cost_before += pair_cost(e, pi, present, log_s_before, log_v);
        };
        for (SupernodeId c : touched_) {
            const Slot &slot = slots_[c];
            const std::uint64_t zc = partition_.size_of(c);
            if (slot.e_a) remove_one(slot.e_a, za * zc, slot.present_a);
            if (slot.e_b) remove_one(slot.e_b, zb * zc, slot.present_b);
        }
        if (self_a.count) remove_one(self_a.count, pair_space(za, za, true), self_a.present);
        if (self_b.count) remove_one(self_b.count, pair_space(zb, zb, true), self_b.present);
        if (cross.count) remove_one(cross.count, za * zb, cross.present);
        result.cost_before += static_cast<double>(za + zb) * log_s_before;

        const EdgeCount omega_ref = needs_omega() ? omega_max_excluding() : 0;

        if constexpr (Commit) {
            for (SupernodeId c : touched_) {
                nbr_[c].erase(a);
                nbr_[c].erase(b);
            }
            nbr_[a].clear();
            nbr_[b].clear();
            partition_.merge(a, b);
        }

        const std::uint64_t zm = za + zb;
        EdgeCount added_max = 0;
        auto add_one = [&](EdgeCount e, EdgeCount pi, bool present) {
            account_add(acc, e, pi, present);
            if (present) {
                added_counts_.push_back(e);
                added_max = std::max(added_max, e);
            }
            result.cost_after += pair_cost(e, pi, present, log_s_after, log_v);
        };
        for (SupernodeId c : touched_) {
            const Slot &slot = slots_[c];
            const EdgeCount e = slot.e_a + slot.e_b;
            const EdgeCount pi = zm * partition_.size_of(c);
            const bool present = decide_presence(e, pi, live_after, omega_ref);
            add_one(e, pi, present);
            if constexpr (Commit) {
                nbr_[a].emplace(c, PairState{e, present});
                nbr_[c].emplace(a, PairState{e, present});
            }
        }
        const EdgeCount self_e = self_a.count + self_b.count + cross.count;
        if (self_e > 0) {
            const EdgeCount pi = pair_space(zm, zm, true);
            const bool present = decide_presence(self_e, pi, live_after, omega_ref);
            add_one(self_e, pi, present);
            if constexpr (Commit) nbr_[a].emplace(a, PairState{self_e, present});
        }
        result.cost_after += static_cast<double>(zm) * log_s_after;

        const EdgeCount omega_after =
            needs_omega() ? std::max<EdgeCount>(omega_max_excluding(), added_max) : 0;
        result.delta = loss_value(acc, live_after, omega_after) - loss_before;
        if constexpr (Commit) sync_hist();
        return result;
    }

    template <bool Commit>
    double move_impl(NodeId w, SupernodeId target, const std::vector<NodeId> &w_adj) {
        const SupernodeId a = partition_.supernode_of(w);
        const SupernodeId b = target;
        if (a == b) throw Error("node already in target supernode");
        if (!partition_.is_live(b)) throw Error("supernode not live");

        const double loss_before = loss();
        const std::uint64_t za = partition_.size_of(a);
        const std::uint64_t zb = partition_.size_of(b);
        const std::uint64_t za_new = za - 1;
        const std::uint64_t zb_new = zb + 1;
        const SupernodeId live_after = live_supernode_count() - (za == 1 ? 1 : 0);

        ++epoch_;
        touched_.clear();
        for (NodeId x : w_adj) ++slot_for(partition_.supernode_of(x)).moved;
        for (const auto &[c, ps] : nbr_[a]) {
            if (c == a || c == b) continue;
            Slot &slot = slot_for(c);
            slot.e_a = ps.count;
            slot.present_a = ps.present;
        }
        for (const auto &[c, ps] : nbr_[b]) {
            if (c == a || c == b) continue;
            Slot &slot = slot_for(c);
            slot.e_b = ps.count;
            slot.present_b = ps.present;
        }
        const EdgeCount nw_a = moved_count(a);
        const EdgeCount nw_b = moved_count(b);
        std::sort(touched_.begin(), touched_.end());

        const PairState *p_self_a = find_pair(a, a);
        const PairState *p_self_b = find_pair(b, b);
        const PairState *p_cross = find_pair(a, b);
        const PairState self_a = p_self_a ? *p_self_a : PairState{};
        const PairState self_b = p_self_b ? *p_self_b : PairState{};
        const PairState cross = p_cross ? *p_cross : PairState{};

        Agg local = agg_;
        Agg &acc = Commit ? agg_ : local;
        removed_counts_.clear();
        added_counts_.clear();

        auto remove_one = [&](EdgeCount e, EdgeCount pi, bool present) {
            account_remove(acc, e, pi, present);
            if (present) removed_counts_.push_back(e);
        };
        for (SupernodeId c : touched_) {
            if (c == a || c == b) continue;
            const Slot &slot = slots_[c];
            if (slot.moved > slot.e_a)
                throw Error("adjacency out of sync with pair counts");
            const std::uint64_t zc = partition_.size_of(c);
            if (slot.e_a) remove_one(slot.e_a, za * zc, slot.present_a);
            if (slot.e_b) remove_one(slot.e_b, zb * zc, slot.present_b);
        }
        if (self_a.count) remove_one(self_a.count, pair_space(za, za, true), self_a.present);
        if (self_b.count) remove_one(self_b.count, pair_space(zb, zb, true), self_b.present);
        if (cross.count) remove_one(cross.count, za * zb, cross.present);

        const EdgeCount omega_ref = needs_omega() ? omega_max_excluding() : 0;

        if constexpr (Commit) {
            for (SupernodeId c : touched_) {
                if (c == a || c == b) continue;
                nbr_[c].erase(a);
                nbr_[c].erase(b);
                nbr_[a].erase(c);
                nbr_[b].erase(c);
            }
            nbr_[a].erase(a);
            nbr_[b].erase(b);
            nbr_[a].erase(b);
            nbr_[b].erase(a);
            partition_.move(w, b);
        }

        EdgeCount added_max = 0;
        auto add_one = [&](SupernodeId x, SupernodeId y, EdgeCount e, EdgeCount pi) {
            const bool present = decide_presence(e, pi, live_after, omega_ref);
            account_add(acc, e, pi, present);
            if (present) {
                added_counts_.push_back(e);
                added_max = std::max(added_max, e);
            }
            if constexpr (Commit) {
                nbr_[x][y] = PairState{e, present};
                if (x != y) nbr_[y][x] = PairState{e, present};
            }
        };
        for (SupernodeId c : touched_) {
            if (c == a || c == b) continue;
            const Slot &slot = slots_[c];
            const std::uint64_t zc = partition_.size_of(c);
            const EdgeCount e_a_new = slot.e_a - slot.moved;
            const EdgeCount e_b_new = slot.e_b + slot.moved;
            if (e_a_new > 0) add_one(a, c, e_a_new, za_new * zc);
            if (e_b_new > 0) add_one(b, c, e_b_new, zb_new * zc);
        }
        if (self_a.count - nw_a > 0)
            add_one(a, a, self_a.count - nw_a, pair_space(za_new, za_new, true));
        if (self_b.count + nw_b > 0)
            add_one(b, b, self_b.count + nw_b, pair_space(zb_new, zb_new, true));
        const EdgeCount cross_new = cross.count + nw_a - nw_b;
        if (cross_new > 0) add_one(a, b, cross_new, za_new * zb_new);

        const EdgeCount omega_after =
            needs_omega() ? std::max<EdgeCount>(omega_max_excluding(), added_max) : 0;
        const double delta = loss_value(acc, live_after, omega_after) - loss_before;
        if constexpr (Commit) sync_hist();
        return delta;
    }

    struct Slot {
        std::uint64_t epoch = 0;
        EdgeCount e_a = 0;
        EdgeCount e_b = 0;
        EdgeCount moved = 0;
        bool present_a = false;
        bool present_b = false;
    };

    Slot &slot_for(SupernodeId c) {
        if (slots_.size() <= c) slots_.resize(partition_.id_bound());
        Slot &slot = slots_[c];
        if (slot.epoch != epoch_) {
            slot = Slot{};
            slot.epoch = epoch_;
            touched_.push_back(c);
        }
        return slot;
    }

    EdgeCount moved_count(SupernodeId c) const {
        if (c >= slots_.size() || slots_[c].epoch != epoch_) return 0;
        return slots_[c].moved;
    }

    Model model_;
    LossKind loss_;
    Partition partition_;
    std::vector<std::unordered_map<SupernodeId, PairState>> nbr_;
    Agg agg_;
    std::map<EdgeCount, std::uint32_t, std::greater<>> hist_;
    std::optional<EdgeCount> frozen_omega_;

    // Reusable evaluation scratch.
    std::uint64_t epoch_ = 0;
    std::vector<Slot> slots_;
    std::vector<SupernodeId> touched_;
    std::vector<EdgeCount> removed_counts_;
    std::vector<EdgeCount> added_counts_;
};

}  // namespace graphsumm
