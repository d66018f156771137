#include "cqa/gadget_db.hpp"

#include <algorithm>

#include "cqa/errors.hpp"

namespace cqa {

GraphEncoding encode_graph(const SimpleGraph& g) {
    if (g.vertex_count() == 0)
        throw EvalError("graph encoding requires at least one vertex");

    Schema schema;
    schema.add_relation(RelationDef{"Vertex", {{"v", ValueKind::Symbol}}});
    schema.add_relation(RelationDef{"Edges",
                                    {{"v1", ValueKind::Symbol},
                                     {"v2", ValueKind::Symbol},
                                     {"e", ValueKind::Integer}}});
    schema.add_relation(RelationDef{"N", {{"e", ValueKind::Integer}}});
    SchemaPtr sp = std::make_shared<const Schema>(std::move(schema));

    long long n = static_cast<long long>(g.vertex_count());
    std::set<DbTuple> tuples;
    std::map<std::string, DbTuple> vertex_tuples;
    for (const auto& label : g.vertices()) {
        DbTuple t{"Vertex", {Value::symbol(label)}};
        vertex_tuples.emplace(label, t);
        tuples.insert(std::move(t));
    }
    // Each graph edge contributes n padded rows with globally distinct ids,
    // consecutively numbered in edge order.
    long long next_id = 1;
    for (const auto& [a, b] : g.edges()) {
        for (long long i = 0; i < n; ++i) {
            tuples.insert(DbTuple{"Edges",
                                  {Value::symbol(g.vertices()[a]),
                                   Value::symbol(g.vertices()[b]),
                                   Value::integer(next_id)}});
            tuples.insert(DbTuple{"N", {Value::integer(next_id)}});
            ++next_id;
        }
    }

    GraphEncoding enc(sp, DatabaseInstance(sp, std::move(tuples)));
    enc.vertex_tuples = std::move(vertex_tuples);
    enc.constraint.atoms = {
        AtomPattern{"Vertex", {Term::var("v1")}},
        AtomPattern{"Vertex", {Term::var("v2")}},
        AtomPattern{"Edges", {Term::var("v1"), Term::var("v2"), Term::var("e")}},
        AtomPattern{"N", {Term::var("e")}},
    };
    return enc;
}

std::vector<std::string> decode_repair(const GraphEncoding& enc,
                                       const DatabaseInstance& repair) {
    for (const DbTuple& t : enc.instance.tuples()) {
        if (t.relation == "Vertex") continue;
        if (!repair.contains(t))
            throw EvalError("repair deleted a padding tuple " + to_string(t) +
                            "; the encoding guarantees vertex-only deletions");
    }
    std::vector<std::string> kept;
    for (const auto& [label, tuple] : enc.vertex_tuples)
        if (repair.contains(tuple)) kept.push_back(label);
    std::sort(kept.begin(), kept.end());
    return kept;
}

CToAImage c_to_a_reduction(const Schema& schema,
                           const std::vector<DenialConstraint>& ic,
                           const Query& ground_atom, const DatabaseInstance& d) {
    if (ground_atom.literals.size() != 1 || ground_atom.literals[0].negated ||
        !ground_atom.free_variables.empty() || !ground_atom.comparisons.empty())
        throw EvalError("the reduction requires a ground atomic query");
    for (const Term& t : ground_atom.literals[0].atom.terms)
        if (t.is_variable())
            throw EvalError("the reduction requires a ground atomic query");

    // Flag attribute per relation, named to avoid collisions.
    std::map<std::string, std::string> flag_of;
    Schema out;
    for (const auto& [name, def] : schema.relations()) {
        RelationDef nd = def;
        std::string flag = "e";
        while (nd.attribute_index(flag) >= 0) flag += "_";
        flag_of[name] = flag;
        nd.attributes.push_back({flag, ValueKind::Integer});
        out.add_relation(std::move(nd));
    }
    SchemaPtr sp = std::make_shared<const Schema>(std::move(out));

    std::set<DbTuple> padded;
    for (const DbTuple& t : d.tuples()) {
        DbTuple nt = t;
        nt.values.push_back(Value::integer(1));
        padded.insert(std::move(nt));
    }
    CToAImage image(sp, DatabaseInstance(sp, std::move(padded)));

    for (const auto& dc : ic) {
        DenialConstraint nd;
        nd.comparisons = dc.comparisons;
        int fresh = 0;
        for (const auto& atom : dc.atoms) {
            AtomPattern na = atom;
            std::string var = "__e" + std::to_string(fresh++);
            na.terms.push_back(Term::var(var));
            nd.atoms.push_back(std::move(na));
            Comparison cmp;
            cmp.lhs = Term::var(var);
            cmp.op = CompareOp::Eq;
            cmp.rhs = Term::constant(Value::integer(1));
            nd.comparisons.push_back(std::move(cmp));
        }
        image.constraints.push_back(std::move(nd));
    }

    Query nq = ground_atom;
    nq.literals[0].atom.terms.push_back(Term::constant(Value::integer(1)));
    image.query = std::move(nq);

    image.aspec.rule = ASpec::Rule::Squared;
    for (const auto& [name, flag] : flag_of)
        image.aspec.candidates[{name, flag}] = {Value::integer(0), Value::integer(1)};
    return image;
}

}  // namespace cqa
