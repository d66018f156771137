#include "doctest.h"

#include <random>

#include "cqa/incremental.hpp"
#include "cqa/parser.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace cqa;

namespace {

const SemanticsSpec kS{RepairSemantics::S, {}, {}};
const SemanticsSpec kC{RepairSemantics::C, {}, {}};

std::set<DatabaseInstance> as_set(const std::vector<DatabaseInstance>& v) {
    return {v.begin(), v.end()};
}

}  // namespace

TEST_CASE("apply_updates: order, no-ops, change errors") {
    auto sp = fixtures::p_schema();
    DatabaseInstance d2(sp, {fixtures::p("a", "c", "d"), fixtures::p("a", "c", "e")});

    UpdateSequence ins = parse_updates("insert P(a,f,d)", *sp);
    DatabaseInstance after = apply_updates(d2, ins);
    CHECK(after.size() == 3);
    CHECK(after.contains(fixtures::p("a", "f", "d")));

    CHECK(apply_updates(d2, UpdateSequence{}) == d2);

    UpdateSequence inout = parse_updates("insert P(q,q,q)\ndelete P(q,q,q)", *sp);
    CHECK(apply_updates(d2, inout) == d2);

    // Inserting an existing tuple and deleting a missing one are no-ops.
    UpdateSequence noops = parse_updates("insert P(a,c,d)\ndelete P(z,z,z)", *sp);
    CHECK(apply_updates(d2, noops) == d2);

    UpdateSequence ch = parse_updates("change P(a,c,d) Y = f", *sp);
    DatabaseInstance changed = apply_updates(d2, ch);
    CHECK(changed.contains(fixtures::p("a", "f", "d")));
    CHECK_FALSE(changed.contains(fixtures::p("a", "c", "d")));

    UpdateSequence missing = parse_updates("change P(z,z,z) Y = f", *sp);
    CHECK_THROWS_AS(apply_updates(d2, missing), EvalError);
}

TEST_CASE("change equals delete plus insert") {
    auto sp = fixtures::p_schema();
    DatabaseInstance d(sp, {fixtures::p("a", "b", "c")});
    UpdateSequence ch = parse_updates("change P(a,b,c) Y = q", *sp);
    UpdateSequence pair = parse_updates("delete P(a,b,c)\ninsert P(a,q,c)", *sp);
    CHECK(apply_updates(d, ch) == apply_updates(d, pair));

    UpdateSequence mini = minimized_updates(ch, *sp);
    REQUIRE(mini.size() == 2);
    CHECK(mini.ops[0].kind == UpdateOp::Kind::Delete);
    CHECK(mini.ops[1].kind == UpdateOp::Kind::Insert);
    CHECK(mini.ops[1].target == fixtures::p("a", "q", "c"));
}

TEST_CASE("minimized_updates drops deletions") {
    auto sp = fixtures::p_schema();
    UpdateSequence u = parse_updates("insert P(x,x,x)\ndelete P(y,y,y)", *sp);
    UpdateSequence m = minimized_updates(u, *sp);
    REQUIRE(m.size() == 1);
    CHECK(m.ops[0].kind == UpdateOp::Kind::Insert);

    UpdateSequence dels = parse_updates("delete P(a,a,a)\ndelete P(b,b,b)", *sp);
    CHECK(minimized_updates(dels, *sp).size() == 0);

    CHECK(update_parameter_bound(u, *sp) == 2);
    UpdateSequence ch = parse_updates("change P(a,b,c) Y = q\ninsert P(x,x,x)", *sp);
    CHECK(update_parameter_bound(ch, *sp) == 6);  // m=2 times arity 3
}

TEST_CASE("hitting_set_bounded on fixtures") {
    // Star with five edges: center hits everything.
    Hypergraph star;
    star.n = 6;
    for (int i = 0; i < 5; ++i) star.edges.push_back({i, 5});
    auto hs1 = hitting_set_bounded(star, 1);
    REQUIRE(hs1.has_value());
    CHECK(*hs1 == VertexSet{5});

    Hypergraph empty;
    empty.n = 3;
    auto hs0 = hitting_set_bounded(empty, 0);
    REQUIRE(hs0.has_value());
    CHECK(hs0->empty());

    // Triangle of 2-edges needs two vertices.
    Hypergraph tri;
    tri.n = 3;
    tri.edges = {{0, 1}, {0, 2}, {1, 2}};
    CHECK_FALSE(hitting_set_bounded(tri, 1).has_value());
    CHECK(hitting_set_bounded(tri, 2).has_value());
}

TEST_CASE("property: bounded hitting set agrees with brute force") {
    std::mt19937 rng(137);
    for (int round = 0; round < 80; ++round) {
        int n = 2 + rng() % 11;
        Hypergraph h;
        h.n = n;
        std::vector<std::vector<int>> edges;
        int m = static_cast<int>(rng() % 10);
        for (int e = 0; e < m; ++e) {
            std::vector<int> edge;
            int size = 1 + rng() % 3;
            for (int i = 0; i < size; ++i) edge.push_back(static_cast<int>(rng() % n));
            edges.push_back(edge);
        }
        h.edges = minimalize_edges(std::move(edges));
        auto mg = oracle::MaskGraph::from(h);
        for (int k = 0; k <= n; ++k) {
            bool mine = hitting_set_bounded(h, k).has_value();
            CHECK(mine == oracle::has_hitting_set_of_size(mg, k));
            if (auto hs = hitting_set_bounded(h, k)) {
                oracle::Mask mask = 0;
                for (int v : *hs) mask |= oracle::Mask(1) << v;
                CHECK(mg.hits_all(mask));
                CHECK(static_cast<int>(hs->size()) <= k);
            }
        }
    }
}

TEST_CASE("insertion into the repaired example: one repair back") {
    auto sp = fixtures::p_schema();
    auto ic = fixtures::p_fd(*sp);
    DatabaseInstance d2(sp, {fixtures::p("a", "c", "d"), fixtures::p("a", "c", "e")});
    UpdateSequence u = parse_updates("insert P(a,f,d)", *sp);

    RepairSet naive = incremental_c_repairs_naive(d2, u, ic);
    CHECK(as_set(naive.repairs) == std::set<DatabaseInstance>{d2});
    CHECK(naive.distance == 1);

    auto [size, witness] = fpt_min_deletions(d2, u, ic);
    CHECK(size == 1);
    REQUIRE(witness.size() == 1);
    CHECK(witness[0] == fixtures::p("a", "f", "d"));

    CHECK(incremental_certain(parse_query("P(\"a\",\"c\",\"d\")", *sp), d2, u, ic));
}

TEST_CASE("insertion into a singleton: two repairs") {
    auto sp = fixtures::p_schema();
    auto ic = fixtures::p_fd(*sp);
    DatabaseInstance dp(sp, {fixtures::p("a", "c", "d")});
    UpdateSequence u = parse_updates("insert P(a,f,d)", *sp);

    RepairSet naive = incremental_c_repairs_naive(dp, u, ic);
    CHECK(naive.distance == 1);
    DatabaseInstance other(sp, {fixtures::p("a", "f", "d")});
    CHECK(as_set(naive.repairs) == std::set<DatabaseInstance>{dp, other});

    auto [size, witness] = fpt_min_deletions(dp, u, ic);
    CHECK(size == 1);

    // Two repairs disagree on P(a,c,d), so it is no longer certain.
    CHECK_FALSE(incremental_certain(parse_query("P(\"a\",\"c\",\"d\")", *sp), dp, u, ic));
}

TEST_CASE("consistent update: distance zero") {
    auto sp = fixtures::p_schema();
    auto ic = fixtures::p_fd(*sp);
    DatabaseInstance d2(sp, {fixtures::p("a", "c", "d")});
    UpdateSequence u = parse_updates("insert P(b,b,b)", *sp);
    auto [size, witness] = fpt_min_deletions(d2, u, ic);
    CHECK(size == 0);
    CHECK(witness.empty());
    RepairSet naive = incremental_c_repairs_naive(d2, u, ic);
    CHECK(naive.distance == 0);
    REQUIRE(naive.repairs.size() == 1);
    CHECK(naive.repairs[0] == apply_updates(d2, u));
}

TEST_CASE("star example: inserting the conflicting singleton") {
    auto sp = fixtures::rs_schema();
    auto ic = fixtures::rs_denial(*sp);
    auto d = fixtures::rs_instance(sp, 5, false);
    UpdateSequence u = parse_updates("insert S(0)", *sp);

    auto [size, witness] = fpt_min_deletions(d, u, ic);
    CHECK(size == 1);
    REQUIRE(witness.size() == 1);
    CHECK(witness[0] == fixtures::s(0));

    RepairSet naive = incremental_c_repairs_naive(d, u, ic);
    CHECK(naive.distance == 1);
    REQUIRE(naive.repairs.size() == 1);
    CHECK(naive.repairs[0] == d);
}

TEST_CASE("naive deletion-set search is capped") {
    auto sp = fixtures::rs_schema();
    auto ic = fixtures::rs_denial(*sp);
    auto d = fixtures::rs_instance(sp, 5, false);
    UpdateSequence u = parse_updates("insert S(0)", *sp);
    CHECK_THROWS_AS(incremental_c_repairs_naive(d, u, ic, 0), CapExceeded);
}

TEST_CASE("incremental engines require a consistent start") {
    auto sp = fixtures::p_schema();
    auto ic = fixtures::p_fd(*sp);
    auto d = fixtures::p_instance(sp);  // inconsistent
    UpdateSequence u = parse_updates("insert P(q,q,q)", *sp);
    CHECK_THROWS_AS(fpt_min_deletions(d, u, ic), EvalError);
    CHECK_THROWS_AS(incremental_c_repairs_naive(d, u, ic), EvalError);
}

namespace {

// Consistent instance under fd X -> Y: one Y per X.
DatabaseInstance consistent_p(std::mt19937& rng, SchemaPtr sp, int n) {
    std::set<DbTuple> tuples;
    const char* pool = "abcdef";
    for (int i = 0; i < n; ++i) {
        std::string x = "x" + std::to_string(rng() % (n / 2 + 1));
        std::string y(1, pool[(std::hash<std::string>{}(x) % 6)]);
        std::string z(1, pool[rng() % 6]);
        tuples.insert(fixtures::p(x, y, z));
    }
    return DatabaseInstance(std::move(sp), std::move(tuples));
}

UpdateSequence random_updates(std::mt19937& rng, const DatabaseInstance& d, int m) {
    UpdateSequence u;
    const char* pool = "abcdef";
    std::vector<DbTuple> existing(d.tuples().begin(), d.tuples().end());
    for (int i = 0; i < m; ++i) {
        int kind = rng() % 5;
        if (kind <= 2 || existing.empty()) {
            std::string x = "x" + std::to_string(rng() % 4);
            UpdateOp op;
            op.kind = UpdateOp::Kind::Insert;
            op.target = fixtures::p(x, std::string(1, pool[rng() % 3]),
                                    std::string(1, pool[rng() % 6]));
            u.ops.push_back(op);
        } else if (kind == 3) {
            UpdateOp op;
            op.kind = UpdateOp::Kind::Delete;
            op.target = existing[rng() % existing.size()];
            u.ops.push_back(op);
        } else {
            UpdateOp op;
            op.kind = UpdateOp::Kind::Change;
            op.target = existing[rng() % existing.size()];
            op.attribute = "Y";
            op.new_value = Value::symbol(std::string(1, pool[rng() % 3]));
            u.ops.push_back(op);
        }
    }
    return u;
}

}  // namespace

TEST_CASE("property: fpt = naive = static distance; certain answers agree") {
    std::mt19937 rng(139);
    auto sp = fixtures::p_schema();
    auto ic = fixtures::p_fd(*sp);
    int rounds = 0;
    while (rounds < 40) {
        DatabaseInstance d = consistent_p(rng, sp, 3 + rng() % 8);
        if (!satisfies(d, ic)) continue;  // hash collisions can conflict
        ++rounds;
        UpdateSequence u = random_updates(rng, d, 1 + rng() % 3);
        bool valid = true;
        DatabaseInstance ud = d;
        try {
            ud = apply_updates(d, u);
        } catch (const EvalError&) {
            valid = false;  // change target vanished mid-sequence
        }
        if (!valid) continue;

        auto [size, witness] = fpt_min_deletions(d, u, ic);
        RepairSet naive = incremental_c_repairs_naive(d, u, ic);
        long long stat = c_repair_distance(ud, ic);
        CHECK(size == naive.distance);
        CHECK(size == stat);
        CHECK(static_cast<int>(witness.size()) == size);
        CHECK(as_set(naive.repairs) == as_set(c_repairs(ud, ic).repairs));

        // Every hyperedge of U(D) touches a fresh tuple.
        ConflictHypergraph inc = incremental_hypergraph(d, ud, ic);
        ConflictHypergraph full = build_hypergraph(ud, ic);
        CHECK(inc.hyper.edges == full.hyper.edges);
        for (const auto& e : full.hyper.edges) {
            bool touches_fresh = false;
            for (int v : e)
                if (!d.contains(full.tuples[v])) touches_fresh = true;
            CHECK(touches_fresh);
        }

        // Ground-atom certain answers match the enumerating engine.
        std::vector<DbTuple> probes(ud.tuples().begin(), ud.tuples().end());
        for (std::size_t i = 0; i < probes.size() && i < 3; ++i) {
            Query q;
            q.literals.push_back(
                {false,
                 AtomPattern{"P",
                             {Term::constant(probes[i].values[0]),
                              Term::constant(probes[i].values[1]),
                              Term::constant(probes[i].values[2])}}});
            CHECK(incremental_certain(q, d, u, ic) ==
                  certain_answers(q, ud, ic, kC).boolean_answer);
        }
    }
}

TEST_CASE("control wrapping preserves subset-certain answers") {
    auto sp = fixtures::p_schema();
    auto ic = fixtures::p_fd(*sp);
    auto d = fixtures::p_instance(sp);
    Query q = parse_query("q(x,y,z) := P(x,y,z)", *sp);

    ControlWrapped wrapped = control_wrap(d, ic, q);
    CHECK(wrapped.instance.size() == d.size());
    CHECK(wrapped.update.size() == 1);

    DatabaseInstance armed = apply_updates(wrapped.instance, wrapped.update);
    AnswerSet before = certain_answers(q, d, ic, kS);
    AnswerSet after = certain_answers(wrapped.query, armed, wrapped.constraints, kS);
    CHECK(before.answers == after.answers);

    // The pristine wrapped instance is consistent.
    CHECK(satisfies(wrapped.instance, wrapped.constraints));
    CHECK_FALSE(satisfies(armed, wrapped.constraints));
}

TEST_CASE("property: control wrapping on random instances and queries") {
    std::mt19937 rng(149);
    auto sp = fixtures::p_schema();
    auto ic = fixtures::p_fd(*sp);
    const char* pool = "abc";
    for (int round = 0; round < 25; ++round) {
        std::set<DbTuple> tuples;
        int n = 1 + rng() % 6;
        for (int i = 0; i < n; ++i)
            tuples.insert(fixtures::p(std::string(1, pool[rng() % 2]),
                                      std::string(1, pool[rng() % 2]),
                                      std::string(1, pool[rng() % 2])));
        DatabaseInstance d(sp, tuples);

        Query q;
        if (rng() % 2 == 0) {
            q = parse_query("q(x) := P(x,y,z)", *sp);
        } else {
            q = parse_query("q(x,y) := P(x,y,z), P(y,y,w)", *sp);
        }

        ControlWrapped wrapped = control_wrap(d, ic, q);
        DatabaseInstance armed = apply_updates(wrapped.instance, wrapped.update);
        AnswerSet before = certain_answers(q, d, ic, kS);
        AnswerSet after = certain_answers(wrapped.query, armed, wrapped.constraints, kS);
        CHECK(before.answers == after.answers);
    }
}

TEST_CASE("incremental run over integer attributes and range constraints") {
    auto sp = std::make_shared<const Schema>(
        parse_schema("relation T(K: sym, V: int)"));
    auto ic = parse_constraints(
        "fd T: K -> V\ndeny T(k, v) where v > 100", *sp);
    DatabaseInstance d(sp, {DbTuple{"T", {Value::symbol("k1"), Value::integer(5)}},
                            DbTuple{"T", {Value::symbol("k2"), Value::integer(9)}}});
    REQUIRE(satisfies(d, ic));

    // One key conflict plus one range violation.
    UpdateSequence u = parse_updates(
        "insert T(k1, 6)\n"
        "change T(k2, 9) V = 200\n",
        *sp);
    DatabaseInstance ud = apply_updates(d, u);

    auto [size, witness] = fpt_min_deletions(d, u, ic);
    CHECK(size == 2);
    CHECK(size == c_repair_distance(ud, ic));
    RepairSet naive = incremental_c_repairs_naive(d, u, ic);
    CHECK(naive.distance == 2);
    CHECK(as_set(naive.repairs) == as_set(c_repairs(ud, ic).repairs));

    // The resident tuple now shares its key with the insert, so neither is
    // certain; the range violator is certainly gone.
    CHECK_FALSE(incremental_certain(parse_query("T(\"k1\", 5)", *sp), d, u, ic));
    CHECK_FALSE(incremental_certain(parse_query("T(\"k1\", 6)", *sp), d, u, ic));
    CHECK(incremental_certain(parse_query("q() := not T(\"k2\", 200)", *sp), d, u, ic));
    for (const char* probe : {"T(\"k1\", 5)", "T(\"k1\", 6)", "q() := not T(\"k2\", 200)"}) {
        Query q = parse_query(probe, *sp);
        CHECK(incremental_certain(q, d, u, ic) ==
              certain_answers(q, ud, ic, kC).boolean_answer);
    }
}

TEST_CASE("control wrapping across two relations") {
    auto sp = fixtures::rs_schema();
    auto ic = fixtures::rs_denial(*sp);
    auto d = fixtures::rs_instance(sp, 5, true);
    Query q = parse_query("q(x) := R(x)", *sp);

    ControlWrapped wrapped = control_wrap(d, ic, q);
    // Only R (the constraint's first atom) gains a control attribute.
    CHECK(wrapped.schema->at("R").arity() == 2);
    CHECK(wrapped.schema->at("S").arity() == 1);
    CHECK(wrapped.schema->find("Controler"));

    DatabaseInstance armed = apply_updates(wrapped.instance, wrapped.update);
    AnswerSet before = certain_answers(q, d, ic, kS);
    AnswerSet after = certain_answers(wrapped.query, armed, wrapped.constraints, kS);
    CHECK(before.answers == after.answers);

    // A consistent start wraps to classical answers.
    auto consistent = fixtures::rs_instance(sp, 3, false);
    ControlWrapped cw = control_wrap(consistent, ic, q);
    DatabaseInstance ca = apply_updates(cw.instance, cw.update);
    CHECK(certain_answers(cw.query, ca, cw.constraints, kS).answers ==
          query_answers(consistent, q));
}
