#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "graphsumm/query_engine.hpp"
#include "support/oracles.hpp"
#include "support/test_graphs.hpp"

using namespace graphsumm;
using namespace testsupport;
using Catch::Matchers::WithinAbs;

namespace {

InputGraph cycle(NodeId n) {
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
    return InputGraph::from_edges(n, edges);
}

double sum_of(const std::vector<double> &v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

}  // namespace

TEST_CASE("get_neighbors") {
    SECTION("weighted cross block") {
        SummaryGraph s(Partition::from_assignment({0, 0, 1}), Model::weighted);
        s.add_superedge(0, 1, 1);
        const auto n0 = get_neighbors(s, 0);
        REQUIRE(n0.entries.size() == 1);
        CHECK(n0.entries[0].first == 2);
        CHECK(n0.entries[0].second == 0.5);
    }
    SECTION("unweighted cross block") {
        SummaryGraph s(Partition::from_assignment({0, 0, 1}), Model::unweighted);
        s.add_superedge(0, 1, 1);
        const auto n0 = get_neighbors(s, 0);
        REQUIRE(n0.entries.size() == 1);
        CHECK(n0.entries[0] == std::pair<NodeId, double>{2, 1.0});
    }
    SECTION("self-superedge excludes the query node") {
        SummaryGraph s(Partition::from_assignment({0, 0}), Model::weighted);
        s.add_superedge(0, 0, 1);
        const auto n0 = get_neighbors(s, 0);
        REQUIRE(n0.entries.size() == 1);
        CHECK(n0.entries[0].first == 1);
        CHECK(n0.entries[0].second == 1.0);
    }
    SECTION("unknown node is an error") {
        SummaryGraph s(Partition::identity(2), Model::weighted);
        CHECK_THROWS_AS(get_neighbors(s, 5), Error);
    }
    SECTION("equals the positive entries of the materialized row") {
        for (std::uint64_t seed = 0; seed < 8; ++seed) {
            InputGraph g = random_graph(30, 20, seed + 3);
            Partition p = random_partition(30, 6, seed);
            for (Model m : {Model::weighted, Model::unweighted}) {
                SummaryGraph s = make_summary(g, p, m, PresenceRule::majority);
                const auto mat = s.materialize();
                for (NodeId u = 0; u < g.node_count(); ++u) {
                    const auto nb = get_neighbors(s, u);
                    std::size_t idx = 0;
                    for (NodeId v = 0; v < g.node_count(); ++v) {
                        if (mat[u][v] <= 0.0) continue;
                        REQUIRE(idx < nb.entries.size());
                        CHECK(nb.entries[idx].first == v);
                        CHECK(nb.entries[idx].second == mat[u][v]);  // exact
                        ++idx;
                    }
                    CHECK(idx == nb.entries.size());
                }
            }
        }
    }
}

TEST_CASE("exact pagerank") {
    SECTION("cycle symmetry") {
        const auto scores = pagerank_exact(cycle(3), 0.85, 1e-12);
        for (double s : scores.scores) CHECK_THAT(s, WithinAbs(1.0 / 3.0, 1e-9));
    }
    SECTION("star center outranks leaves") {
        InputGraph g = InputGraph::from_edges(4, {{0, 1}, {0, 2}, {0, 3}});
        const auto scores = pagerank_exact(g);
        CHECK(scores.scores[0] > scores.scores[1]);
        CHECK_THAT(scores.scores[1], WithinAbs(scores.scores[3], 1e-12));
    }
    SECTION("scores sum to one") {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            InputGraph g = random_graph(40, 10, seed);
            const auto scores = pagerank_exact(g);
            CHECK(scores.converged);
            CHECK_THAT(sum_of(scores.scores), WithinAbs(1.0, 1e-9));
        }
    }
    SECTION("damping validation") {
        CHECK_THROWS_AS(pagerank_exact(cycle(3), 1.0), Error);
        CHECK_THROWS_AS(pagerank_exact(cycle(3), 0.0), Error);
    }
}

TEST_CASE("summary pagerank") {
    SECTION("isolated node keeps the whole mass") {
        InputGraph g = InputGraph::from_edges(1, {});
        const auto scores = pagerank_summary(identity_summary(g, Model::weighted));
        REQUIRE(scores.scores.size() == 1);
        CHECK_THAT(scores.scores[0], WithinAbs(1.0, 1e-12));
    }
    SECTION("two nodes, one edge splits evenly") {
        InputGraph g = InputGraph::from_edges(2, {{0, 1}});
        const auto scores = pagerank_summary(identity_summary(g, Model::weighted), 0.85);
        CHECK_THAT(scores.scores[0], WithinAbs(0.5, 1e-9));
        CHECK_THAT(scores.scores[1], WithinAbs(0.5, 1e-9));
    }
    SECTION("identity summaries reproduce exact scores") {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            InputGraph g = random_graph(50, 8, seed + 13);
            const auto exact = pagerank_exact(g, 0.85, 1e-9);
            for (Model m : {Model::weighted, Model::unweighted}) {
                const auto approx = pagerank_summary(identity_summary(g, m), 0.85, 1e-9);
                CHECK(l1_distance(exact.scores, approx.scores) < 1e-6);
            }
        }
    }
    SECTION("blockwise sweep matches the literal per-node sweep") {
        for (std::uint64_t seed = 0; seed < 6; ++seed) {
            InputGraph g = random_graph(40, 12, seed + 23);
            Partition p = random_partition(40, 8, seed + 1);
            for (Model m : {Model::weighted, Model::unweighted}) {
                SummaryGraph s = make_summary(g, p, m, PresenceRule::majority);
                // Fixed sweep count on both paths: equivalence per sweep.
                const auto fast = pagerank_summary(s, 0.85, 0.0, 80);
                const auto naive = naive_pagerank(s, 0.85, 0.0, 80);
                CHECK(l1_distance(fast.scores, naive.scores) < 1e-12);
            }
        }
    }
    SECTION("non-convergence is reported") {
        InputGraph g = random_graph(30, 15, 1);
        const auto scores = pagerank_summary(identity_summary(g, Model::weighted), 0.85,
                                             1e-15, 2);
        CHECK_FALSE(scores.converged);
        CHECK(scores.iterations == 2);
    }
}

TEST_CASE("summary rwr") {
    SECTION("single node") {
        InputGraph g = InputGraph::from_edges(1, {});
        const auto scores = rwr_summary(identity_summary(g, Model::weighted), 0, 0.95);
        CHECK_THAT(scores.scores[0], WithinAbs(1.0, 1e-12));
    }
    SECTION("restart biases the query node") {
        InputGraph g = InputGraph::from_edges(2, {{0, 1}});
        const auto scores = rwr_summary(identity_summary(g, Model::weighted), 0, 0.95);
        CHECK(scores.scores[0] > scores.scores[1]);
    }
    SECTION("identity summaries reproduce exact scores") {
        InputGraph g = random_graph(40, 10, 3);
        const auto exact = rwr_exact(g, 7, 0.95, 1e-9);
        for (Model m : {Model::weighted, Model::unweighted}) {
            const auto approx = rwr_summary(identity_summary(g, m), 7, 0.95, 1e-9);
            CHECK(l1_distance(exact.scores, approx.scores) < 1e-6);
        }
    }
    SECTION("cycle scores are invariant to relabeling the non-query nodes") {
        const NodeId n = 9;
        const auto scores = rwr_exact(cycle(n), 0, 0.95, 1e-12);
        for (NodeId i = 1; i < n; ++i)
            CHECK_THAT(scores.scores[i], WithinAbs(scores.scores[n - i], 1e-10));
        const auto summary_scores =
            rwr_summary(identity_summary(cycle(n), Model::unweighted), 0, 0.95, 1e-12);
        for (NodeId i = 1; i < n; ++i)
            CHECK_THAT(summary_scores.scores[i],
                       WithinAbs(summary_scores.scores[n - i], 1e-10));
    }
    SECTION("blockwise rwr matches the literal sweep") {
        InputGraph g = random_graph(35, 14, 6);
        Partition p = random_partition(35, 7, 2);
        SummaryGraph s = make_summary(g, p, Model::weighted, PresenceRule::all_nonzero);
        const auto fast = rwr_summary(s, 4, 0.95, 0.0, 80);
        const auto naive = naive_rwr(s, 4, 0.95, 0.0, 80);
        CHECK(l1_distance(fast.scores, naive.scores) < 1e-12);
    }
    SECTION("unknown query node") {
        InputGraph g = InputGraph::from_edges(2, {{0, 1}});
        CHECK_THROWS_AS(rwr_summary(identity_summary(g, Model::weighted), 9, 0.95), Error);
        CHECK_THROWS_AS(rwr_exact(g, 9, 0.95), Error);
    }
}

TEST_CASE("node importance error") {
    InputGraph g = random_graph(40, 12, 17);
    SECTION("identity summaries are within twice the tolerance") {
        for (Model m : {Model::weighted, Model::unweighted})
            CHECK(node_importance_error(g, identity_summary(g, m), 0.85, 1e-9) < 2e-9);
    }
    SECTION("empty summaries of a nonempty graph have positive error") {
        SummaryGraph s(Partition::identity(g.node_count()), Model::weighted);
        CHECK(node_importance_error(g, s) > 0.0);
    }
    SECTION("collapsed 4-cycle matches a from-scratch computation") {
        InputGraph c4 = cycle(4);
        SummaryGraph s(Partition::from_assignment({0, 0, 0, 0}), Model::weighted);
        s.add_superedge(0, 0, 4);
        const double got = node_importance_error(c4, s, 0.85, 1e-12);
        const auto exact = pagerank_exact(c4, 0.85, 1e-12);
        const auto naive = naive_pagerank(s, 0.85, 1e-12, 10000);
        CHECK_THAT(got, WithinAbs(l1_distance(exact.scores, naive.scores), 1e-9));
    }
    SECTION("node count mismatch is an error") {
        SummaryGraph s(Partition::identity(5), Model::weighted);
        CHECK_THROWS_AS(node_importance_error(g, s), Error);
    }
}

TEST_CASE("node proximity error") {
    InputGraph g = random_graph(30, 14, 29);
    SECTION("identity summaries are within twice the tolerance") {
        CHECK(node_proximity_error(g, identity_summary(g, Model::unweighted), 0.95, 1e-9,
                                   10, 7) < 2e-9);
    }
    SECTION("asking for at least |V| queries enumerates every node") {
        const auto all = sample_query_nodes(12, 12, 3);
        REQUIRE(all.size() == 12);
        for (NodeId i = 0; i < 12; ++i) CHECK(all[i] == i);
        const auto more = sample_query_nodes(12, 100, 3);
        CHECK(more.size() == 12);
    }
    SECTION("sampling is deterministic and without replacement") {
        const auto a = sample_query_nodes(50, 20, 11);
        const auto b = sample_query_nodes(50, 20, 11);
        CHECK(a == b);
        std::set<NodeId> uniq(a.begin(), a.end());
        CHECK(uniq.size() == a.size());
    }
    SECTION("fixed seed gives a bit-identical error value") {
        Partition p = random_partition(30, 5, 4);
        SummaryGraph s = make_summary(g, p, Model::unweighted, PresenceRule::majority);
        const double e1 = node_proximity_error(g, s, 0.95, 1e-9, 7, 123);
        const double e2 = node_proximity_error(g, s, 0.95, 1e-9, 7, 123);
        CHECK(e1 == e2);
    }
}
