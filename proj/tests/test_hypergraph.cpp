#include "doctest.h"

#include <random>

#include "cqa/hypergraph.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace cqa;

namespace {

// Random small hypergraph: n vertices, edges of size 1..3.
Hypergraph random_hypergraph(std::mt19937& rng, int n, int max_edges) {
    std::vector<std::vector<int>> edges;
    int m = static_cast<int>(rng() % (max_edges + 1));
    for (int e = 0; e < m; ++e) {
        int size = 1 + rng() % 3;
        std::vector<int> edge;
        for (int i = 0; i < size; ++i) edge.push_back(static_cast<int>(rng() % n));
        edges.push_back(edge);
    }
    Hypergraph h;
    h.n = n;
    h.edges = minimalize_edges(std::move(edges));
    return h;
}

}  // namespace

TEST_CASE("running example: conflict hypergraph, repairs sizes, membership") {
    auto sp = fixtures::p_schema();
    auto ic = fixtures::p_fd(*sp);
    auto d = fixtures::p_instance(sp);
    ConflictHypergraph ch = build_hypergraph(d, ic);

    // Sorted tuple order: P(a,b,c)=0, P(a,c,d)=1, P(a,c,e)=2.
    REQUIRE(ch.hyper.n == 3);
    REQUIRE(ch.hyper.edges == std::vector<std::vector<int>>{{0, 1}, {0, 2}});

    CHECK(max_is_size(ch.hyper) == 2);
    CHECK(all_maximum_is(ch.hyper) == std::vector<VertexSet>{{1, 2}});
    CHECK(all_maximal_is(ch.hyper) == std::vector<VertexSet>{{0}, {1, 2}});
    CHECK(min_hitting_set_size(ch.hyper) == 1);

    CHECK(is_independent(ch.hyper, {1, 2}));
    CHECK(is_independent(ch.hyper, {}));
    CHECK_FALSE(is_independent(ch.hyper, {0, 1}));

    CHECK(in_all_max_is(ch.hyper, 1));
    CHECK(in_all_max_is(ch.hyper, 2));
    CHECK_FALSE(in_some_max_is(ch.hyper, 0));
}

TEST_CASE("five-pointed star from the two-relation example") {
    auto sp = fixtures::rs_schema();
    auto ic = fixtures::rs_denial(*sp);
    auto d = fixtures::rs_instance(sp, 5, true);
    ConflictHypergraph ch = build_hypergraph(d, ic);

    REQUIRE(ch.hyper.n == 6);
    REQUIRE(ch.hyper.edges.size() == 5);  // {R(i), S(0)} for each i
    for (const auto& e : ch.hyper.edges) {
        CHECK(e.size() == 2);
        CHECK(e[1] == 5);  // S(0) is the last tuple in sorted order
    }
    CHECK(max_is_size(ch.hyper) == 5);
    CHECK(all_maximal_is(ch.hyper) ==
          std::vector<VertexSet>{{0, 1, 2, 3, 4}, {5}});
    CHECK(min_hitting_set_size(ch.hyper) == 1);
}

TEST_CASE("consistent instance yields no hyperedges") {
    auto sp = fixtures::p_schema();
    auto ic = fixtures::p_fd(*sp);
    DatabaseInstance d2(sp, {fixtures::p("a", "c", "d"), fixtures::p("a", "c", "e")});
    ConflictHypergraph ch = build_hypergraph(d2, ic);
    CHECK(ch.hyper.edges.empty());
    CHECK(max_is_size(ch.hyper) == 2);
}

TEST_CASE("a tuple never conflicts with itself through an fd") {
    auto sp = fixtures::p_schema();
    auto ic = fixtures::p_fd(*sp);
    DatabaseInstance one(sp, {fixtures::p("a", "b", "c")});
    ConflictHypergraph ch = build_hypergraph(one, ic);
    CHECK(ch.hyper.edges.empty());
}

TEST_CASE("single-atom denials make self-violating tuples") {
    auto sp = fixtures::rs_schema();
    auto ic = parse_constraints("deny R(x) where x > 3", *sp);
    DatabaseInstance d(sp, {fixtures::r(2), fixtures::r(5)});
    ConflictHypergraph ch = build_hypergraph(d, ic);
    REQUIRE(ch.hyper.edges == std::vector<std::vector<int>>{{1}});
    CHECK(max_is_size(ch.hyper) == 1);
    CHECK_FALSE(in_some_max_is(ch.hyper, 1));
    CHECK(in_all_max_is(ch.hyper, 0));
}

TEST_CASE("edgeless and complete graphs") {
    Hypergraph edgeless;
    edgeless.n = 7;
    CHECK(max_is_size(edgeless) == 7);
    CHECK(all_maximal_is(edgeless) == std::vector<VertexSet>{{0, 1, 2, 3, 4, 5, 6}});
    CHECK(min_hitting_set_size(edgeless) == 0);

    Hypergraph k5;
    k5.n = 5;
    for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j) k5.edges.push_back({i, j});
    CHECK(max_is_size(k5) == 1);
    CHECK(all_maximum_is(k5).size() == 5);
    CHECK(min_hitting_set_size(k5) == 4);
}

TEST_CASE("vertex cap and structured errors") {
    Hypergraph h;
    h.n = 50;
    SolverLimits limits;
    limits.max_vertices = 10;
    CHECK_THROWS_AS(max_is_size(h, limits), CapExceeded);
    try {
        max_is_size(h, limits);
    } catch (const CapExceeded& e) {
        CHECK(e.kind() == CapExceeded::Kind::Vertices);
    }
}

TEST_CASE("property: edge minimality after construction") {
    std::mt19937 rng(23);
    for (int round = 0; round < 50; ++round) {
        Hypergraph h = random_hypergraph(rng, 8, 10);
        for (const auto& e : h.edges) {
            for (int v : e) {
                VertexSet rest;
                for (int u : e)
                    if (u != v) rest.push_back(u);
                CHECK(is_independent(h, rest));
            }
        }
    }
}

TEST_CASE("property: solver agrees with subset enumeration") {
    std::mt19937 rng(29);
    for (int round = 0; round < 120; ++round) {
        int n = 2 + rng() % 11;  // up to 12 vertices
        Hypergraph h = random_hypergraph(rng, n, 14);
        auto mg = oracle::MaskGraph::from(h);

        CHECK(max_is_size(h) == oracle::max_is_size(mg));

        auto mine = all_maximum_is(h);
        auto expect = oracle::all_maximum_is(mg);
        REQUIRE(mine.size() == expect.size());
        for (const auto& s : mine) {
            oracle::Mask m = 0;
            for (int v : s) m |= oracle::Mask(1) << v;
            CHECK(std::find(expect.begin(), expect.end(), m) != expect.end());
        }

        auto mine_maximal = all_maximal_is(h);
        auto expect_maximal = oracle::all_maximal_is(mg);
        REQUIRE(mine_maximal.size() == expect_maximal.size());

        for (int v = 0; v < n; ++v) {
            CHECK(in_some_max_is(h, v) == oracle::in_some_max_is(mg, v));
            CHECK(in_all_max_is(h, v) == oracle::in_all_max_is(mg, v));
            if (in_all_max_is(h, v)) CHECK(in_some_max_is(h, v));
        }
    }
}

TEST_CASE("property: complementarity of maximum IS and minimum hitting set") {
    std::mt19937 rng(31);
    for (int round = 0; round < 80; ++round) {
        int n = 2 + rng() % 13;  // up to 14 vertices
        Hypergraph h = random_hypergraph(rng, n, 16);
        auto mg = oracle::MaskGraph::from(h);
        int is = max_is_size(h);
        int hs = min_hitting_set_size(h);
        CHECK(is + hs == n);
        CHECK(hs == oracle::min_hitting_set_size(mg));
    }
}

TEST_CASE("weighted hitting sets: uniform weights match cardinality") {
    std::mt19937 rng(37);
    for (int round = 0; round < 40; ++round) {
        int n = 2 + rng() % 9;
        Hypergraph h = random_hypergraph(rng, n, 10);
        std::vector<long long> ones(n, 1);
        auto [w, sets] = min_weight_hitting_sets(h, ones);
        CHECK(w == min_hitting_set_size(h));
        for (const auto& s : sets) CHECK(static_cast<long long>(s.size()) == w);
    }
}

TEST_CASE("edge count stays within the assignment bound") {
    auto sp = fixtures::p_schema();
    auto ic = fixtures::p_fd(*sp);
    auto d = fixtures::p_instance(sp);
    ConflictHypergraph ch = build_hypergraph(d, ic);
    std::size_t bound = 1;
    for (std::size_t i = 0; i < ic[0].atoms.size(); ++i) bound *= d.size();
    CHECK(ch.hyper.edges.size() <= bound);
}

TEST_CASE("dot export names tuples") {
    auto sp = fixtures::p_schema();
    auto ic = fixtures::p_fd(*sp);
    auto d = fixtures::p_instance(sp);
    std::string dot = to_dot(build_hypergraph(d, ic));
    CHECK(dot.find("P(a,b,c)") != std::string::npos);
    CHECK(dot.find("--") != std::string::npos);
}

TEST_CASE("time budget raises a structured error on heavy searches") {
    std::mt19937 rng(97);
    SimpleGraph g = oracle::random_graph(rng, 60, 1, 3);
    Hypergraph h = g.to_hypergraph();
    SolverLimits tight;
    tight.time_budget = std::chrono::milliseconds(0);
    try {
        // Enumerating every maximal independent set of a sparse 60-vertex
        // graph passes the tick threshold quickly.
        all_maximal_is(h, tight);
        WARN("search finished before the first deadline check");
    } catch (const CapExceeded& e) {
        CHECK(e.kind() == CapExceeded::Kind::TimeBudget);
    }
}

TEST_CASE("property: solver agrees with enumeration up to 16 vertices") {
    std::mt19937 rng(167);
    for (int round = 0; round < 40; ++round) {
        int n = 13 + rng() % 4;
        Hypergraph h = random_hypergraph(rng, n, 24);
        auto mg = oracle::MaskGraph::from(h);
        CHECK(max_is_size(h) == oracle::max_is_size(mg));
        CHECK(min_hitting_set_size(h) == oracle::min_hitting_set_size(mg));
        for (int v = 0; v < n; v += 3) {
            CHECK(in_some_max_is(h, v) == oracle::in_some_max_is(mg, v));
            CHECK(in_all_max_is(h, v) == oracle::in_all_max_is(mg, v));
        }
    }
}
