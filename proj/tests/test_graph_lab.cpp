#include "doctest.h"

#include <random>

#include "cqa/graph_lab.hpp"
#include "cqa/hypergraph.hpp"
#include "oracles.hpp"

using namespace cqa;

namespace {

SimpleGraph path3() {
    SimpleGraph g;
    g.add_vertex("a");
    g.add_vertex("b");
    g.add_vertex("c");
    g.add_edge("a", "b");
    g.add_edge("b", "c");
    return g;
}

SimpleGraph complete(int n) {
    SimpleGraph g;
    for (int i = 0; i < n; ++i) g.add_vertex("k" + std::to_string(i));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            g.add_edge(g.vertices()[i], g.vertices()[j]);
    return g;
}

SimpleGraph edgeless(int n) {
    SimpleGraph g;
    for (int i = 0; i < n; ++i) g.add_vertex("v" + std::to_string(i));
    return g;
}

}  // namespace

TEST_CASE("twin extension: the three conditions coincide") {
    SimpleGraph single = edgeless(1);
    SimpleGraph twin1 = twin_extension(single, "v0");
    CHECK(twin1.vertex_count() == 2);
    CHECK(twin1.edges().empty());
    CHECK(oracle::max_is_size(oracle::MaskGraph::from(twin1)) ==
          oracle::max_is_size(oracle::MaskGraph::from(single)) + 1);

    SimpleGraph k3 = complete(3);
    SimpleGraph tk3 = twin_extension(k3, "k0");
    CHECK(oracle::max_is_size(oracle::MaskGraph::from(tk3)) == 2);
    CHECK(oracle::in_all_max_is(oracle::MaskGraph::from(tk3), 0));

    SimpleGraph p = path3();
    SimpleGraph tp = twin_extension(p, "b");
    CHECK(oracle::max_is_size(oracle::MaskGraph::from(tp)) == 2);  // unchanged
    CHECK_FALSE(oracle::in_all_max_is(oracle::MaskGraph::from(tp), 1));
}

TEST_CASE("property: twin extension equivalences on random graphs") {
    std::mt19937 rng(41);
    for (int round = 0; round < 60; ++round) {
        int n = 1 + rng() % 10;
        SimpleGraph g = oracle::random_graph(rng, n);
        auto mg = oracle::MaskGraph::from(g);
        int base = oracle::max_is_size(mg);
        for (int v = 0; v < n; ++v) {
            SimpleGraph ext = twin_extension(g, g.vertices()[v]);
            auto me = oracle::MaskGraph::from(ext);
            bool cond1 = oracle::in_some_max_is(mg, v);
            bool cond2 = oracle::in_all_max_is(me, v);
            bool cond3 = oracle::max_is_size(me) == base + 1;
            CHECK(cond1 == cond2);
            CHECK(cond2 == cond3);
        }
    }
}

TEST_CASE("rhombus extension trades all-membership for some-membership") {
    std::mt19937 rng(43);
    for (int round = 0; round < 60; ++round) {
        int n = 1 + rng() % 9;
        SimpleGraph g = oracle::random_graph(rng, n);
        auto mg = oracle::MaskGraph::from(g);
        for (int v = 0; v < n; ++v) {
            SimpleGraph ext = rhombus_extension(g, g.vertices()[v]);
            CHECK(ext.vertex_count() == g.vertex_count() + 3);
            auto me = oracle::MaskGraph::from(ext);
            CHECK(oracle::in_all_max_is(mg, v) == oracle::in_some_max_is(me, v));
        }
    }
}

TEST_CASE("certain-positive to certain-negative tail") {
    // Isolated v: in every maximum IS, so s must lie in no maximum IS.
    SimpleGraph single = edgeless(1);
    auto [g1, s1] = reduce_certain_to_certain_neg(single, "v0");
    CHECK(g1.vertex_count() == 3);
    CHECK_FALSE(oracle::in_some_max_is(oracle::MaskGraph::from(g1), g1.index_of(s1)));

    // Path center: in no maximum IS, so s is in some maximum IS.
    auto [g2, s2] = reduce_certain_to_certain_neg(path3(), "b");
    CHECK(oracle::in_some_max_is(oracle::MaskGraph::from(g2), g2.index_of(s2)));

    std::mt19937 rng(47);
    for (int round = 0; round < 60; ++round) {
        int n = 1 + rng() % 9;
        SimpleGraph g = oracle::random_graph(rng, n);
        auto mg = oracle::MaskGraph::from(g);
        for (int v = 0; v < n; ++v) {
            auto [ext, s] = reduce_certain_to_certain_neg(g, g.vertices()[v]);
            auto me = oracle::MaskGraph::from(ext);
            CHECK(oracle::in_all_max_is(mg, v) ==
                  !oracle::in_some_max_is(me, ext.index_of(s)));
        }
    }
}

TEST_CASE("certain-negative to possible-negative") {
    std::mt19937 rng(53);
    for (int round = 0; round < 60; ++round) {
        int n = 1 + rng() % 9;
        SimpleGraph g = oracle::random_graph(rng, n);
        auto mg = oracle::MaskGraph::from(g);
        for (int v = 0; v < n; ++v) {
            auto [ext, s] = reduce_certain_neg_to_possible_neg(g, g.vertices()[v]);
            auto me = oracle::MaskGraph::from(ext);
            bool certain_neg = !oracle::in_some_max_is(mg, v);
            bool possible_neg = !oracle::in_all_max_is(me, ext.index_of(s));
            CHECK(certain_neg == possible_neg);
        }
    }
}

TEST_CASE("possible-negative to possible-positive") {
    std::mt19937 rng(59);
    for (int round = 0; round < 60; ++round) {
        int n = 1 + rng() % 9;
        SimpleGraph g = oracle::random_graph(rng, n);
        auto mg = oracle::MaskGraph::from(g);
        for (int v = 0; v < n; ++v) {
            auto [ext, s] = reduce_possible_neg_to_possible_pos(g, g.vertices()[v]);
            CHECK(ext.vertex_count() == g.vertex_count() + 4);
            auto me = oracle::MaskGraph::from(ext);
            bool possible_neg = !oracle::in_all_max_is(mg, v);
            bool possible_pos = oracle::in_some_max_is(me, ext.index_of(s));
            CHECK(possible_neg == possible_pos);
        }
    }
}

TEST_CASE("composed chain maps certain-positive to possible-positive") {
    std::mt19937 rng(61);
    for (int round = 0; round < 40; ++round) {
        int n = 1 + rng() % 8;
        SimpleGraph g = oracle::random_graph(rng, n);
        auto mg = oracle::MaskGraph::from(g);
        for (int v = 0; v < n; ++v) {
            bool certain_pos = oracle::in_all_max_is(mg, v);
            auto [g1, s1] = reduce_certain_to_certain_neg(g, g.vertices()[v]);
            auto [g2, s2] = reduce_certain_neg_to_possible_neg(g1, s1);
            auto [g3, s3] = reduce_possible_neg_to_possible_pos(g2, s2);
            bool possible_pos =
                oracle::in_some_max_is(oracle::MaskGraph::from(g3), g3.index_of(s3));
            CHECK(certain_pos == possible_pos);
        }
    }
}

TEST_CASE("block gadget on K2") {
    SimpleGraph k2 = complete(2);

    // max IS of K2 is 1 = k: t in all maximum IS, cardinality 2k+2 = 4.
    BlockGraph b1 = block_graph(k2, 1);
    CHECK(b1.graph.vertex_count() == 9);  // 2+2+1+2+t+b
    Hypergraph h1 = b1.graph.to_hypergraph();
    CHECK(max_is_size(h1) == 4);
    CHECK(in_all_max_is(h1, b1.graph.index_of(b1.t)));

    // k = 3: max IS 1 < k-1, cardinality 2k+1 = 7, t in none.
    BlockGraph b3 = block_graph(k2, 3);
    Hypergraph h3 = b3.graph.to_hypergraph();
    CHECK(max_is_size(h3) == 7);
    CHECK_FALSE(in_all_max_is(h3, b3.graph.index_of(b3.t)));

    CHECK_THROWS_AS(block_graph(k2, 0), EvalError);
}

TEST_CASE("block gadget: stable of size k+1 case") {
    // Edgeless on 3 vertices with k = 2: max IS = 3 = k+1, so t is in some
    // but not all maximum independent sets.
    SimpleGraph g = edgeless(3);
    BlockGraph blk = block_graph(g, 2);
    Hypergraph h = blk.graph.to_hypergraph();
    int t = blk.graph.index_of(blk.t);
    CHECK(max_is_size(h) == 2 * 2 + 3);
    CHECK(in_some_max_is(h, t));
    CHECK_FALSE(in_all_max_is(h, t));
}

namespace {

int block_case_expectation(int s, int k) {
    if (s < k - 1) return 2 * k + 1;
    if (s == k - 1) return 2 * k + 1;
    if (s == k) return 2 * k + 2;
    if (s == k + 1) return 2 * k + 3;
    return 2 * s + 1;
}

}  // namespace

TEST_CASE("property: block gadget five-case table") {
    std::mt19937 rng(67);
    for (int round = 0; round < 40; ++round) {
        int n = 1 + rng() % 6;
        SimpleGraph g = oracle::random_graph(rng, n);
        int s = oracle::max_is_size(oracle::MaskGraph::from(g));
        for (int k = 1; k <= n; ++k) {
            BlockGraph blk = block_graph(g, k);
            Hypergraph h = blk.graph.to_hypergraph();
            CHECK(max_is_size(h) == block_case_expectation(s, k));
            CHECK(in_all_max_is(h, blk.graph.index_of(blk.t)) == (s == k));
            CHECK(blk.graph.vertex_count() == 2 * g.vertex_count() + 2 * k + 3);
        }
    }
}

TEST_CASE("modk gadget fixtures") {
    // K4 with k=2: clique 4 is divisible by 2, apex not in all maximum IS.
    auto [g4, t4] = modk_graph(complete(4), 2);
    Hypergraph h4 = g4.to_hypergraph();
    CHECK_FALSE(in_all_max_is(h4, g4.index_of(t4)));

    // K3 with k=2: clique 3 is not divisible by 2, apex in all maximum IS.
    auto [g3, t3] = modk_graph(complete(3), 2);
    Hypergraph h3 = g3.to_hypergraph();
    CHECK(in_all_max_is(h3, g3.index_of(t3)));

    // Single vertex, k=1: clique 1 is divisible by 1.
    auto [g1, t1] = modk_graph(edgeless(1), 1);
    Hypergraph h1 = g1.to_hypergraph();
    CHECK_FALSE(in_all_max_is(h1, g1.index_of(t1)));

    CHECK_THROWS_AS(modk_graph(complete(3), 0), EvalError);
    CHECK_THROWS_AS(modk_graph(complete(3), 4), EvalError);
}

TEST_CASE("property: modk gadget against a brute-force clique oracle") {
    std::mt19937 rng(71);
    for (int round = 0; round < 15; ++round) {
        int n = 1 + rng() % 5;
        SimpleGraph g = oracle::random_graph(rng, n);
        int clique = oracle::max_clique_size(g);
        for (int k = 1; k <= n; ++k) {
            auto [ext, apex] = modk_graph(g, k);
            Hypergraph h = ext.to_hypergraph();
            bool in_all = in_all_max_is(h, ext.index_of(apex));
            CHECK(in_all == (clique % k != 0));

            // Size: the apex plus one block of 2n + 2m + 3 per multiple.
            std::size_t expect = 1;
            for (int m = k; m <= n; m += k) expect += 2 * n + 2 * m + 3;
            CHECK(ext.vertex_count() == expect);
        }
    }
}

TEST_CASE("complement is an involution and flips edges") {
    SimpleGraph k3 = complete(3);
    SimpleGraph c = complement(k3);
    CHECK(c.edges().empty());
    CHECK(complement(c) == k3);

    SimpleGraph e2 = edgeless(2);
    CHECK(complement(e2).edges().size() == 1);

    SimpleGraph p = path3();
    SimpleGraph pc = complement(p);
    CHECK(pc.edges().size() == 1);
    CHECK(pc.has_edge("a", "c"));
}

TEST_CASE("fresh labels never collide") {
    SimpleGraph g;
    g.add_vertex("__aux/0");
    g.add_vertex("x");
    SimpleGraph t = twin_extension(g, "x");
    CHECK(t.vertex_count() == 3);
    CHECK(t.has_vertex("__aux/1"));
}
