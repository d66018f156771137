#pragma once

// Deterministic random problem generators shared by the property and
// acceptance suites. All draws go through rng() % k so runs are stable
// across standard libraries.

#include <random>
#include <set>
#include <string>
#include <vector>

#include "cqa/parser.hpp"
#include "cqa/relational.hpp"

namespace gen {

using namespace cqa;

struct RandomProblem {
    SchemaPtr schema;
    DatabaseInstance instance;
    std::vector<DenialConstraint> ic;

    RandomProblem(SchemaPtr s, DatabaseInstance i)
        : schema(std::move(s)), instance(std::move(i)) {}
};

// Up to three relations of arity 1..3, tuples over a tiny symbol pool, and
// one or two constraints (fds or cross-relation denials of <= 3 atoms).
inline RandomProblem random_problem(std::mt19937& rng, int max_tuples) {
    std::string schema_text;
    int nrel = 1 + rng() % 3;
    for (int r = 0; r < nrel; ++r) {
        std::string name(1, static_cast<char>('P' + r));
        int arity = 1 + rng() % 3;
        schema_text += "relation " + name + "(";
        for (int a = 0; a < arity; ++a) {
            if (a) schema_text += ", ";
            schema_text += "A" + std::to_string(a) + ": sym";
        }
        schema_text += ")\n";
    }
    auto sp = std::make_shared<const Schema>(parse_schema(schema_text));

    std::vector<std::string> names;
    for (const auto& [name, def] : sp->relations()) names.push_back(name);

    std::set<DbTuple> tuples;
    const char* pool = "abcd";
    int n = 1 + rng() % max_tuples;
    for (int i = 0; i < n; ++i) {
        const std::string& rel = names[rng() % names.size()];
        DbTuple t{rel, {}};
        for (std::size_t a = 0; a < sp->at(rel).arity(); ++a)
            t.values.push_back(Value::symbol(std::string(1, pool[rng() % 3])));
        tuples.insert(std::move(t));
    }
    RandomProblem out(sp, DatabaseInstance(sp, std::move(tuples)));

    int nics = 1 + rng() % 2;
    for (int c = 0; c < nics; ++c) {
        const std::string& rel = names[rng() % names.size()];
        const RelationDef& def = out.schema->at(rel);
        if (def.arity() >= 2 && rng() % 2 == 0) {
            int lhs = rng() % def.arity();
            int rhs = (lhs + 1 + rng() % (def.arity() - 1)) % def.arity();
            if (rhs == lhs) continue;
            auto fd = parse_constraints("fd " + rel + ": " + def.attributes[lhs].first +
                                            " -> " + def.attributes[rhs].first,
                                        *out.schema);
            out.ic.insert(out.ic.end(), fd.begin(), fd.end());
        } else {
            DenialConstraint dc;
            int atoms = 2 + rng() % 2;
            for (int a = 0; a < atoms; ++a) {
                const std::string& arel = names[rng() % names.size()];
                AtomPattern atom{arel, {}};
                for (std::size_t p = 0; p < out.schema->at(arel).arity(); ++p)
                    atom.terms.push_back(
                        Term::var("v" + std::to_string(a) + "_" + std::to_string(p)));
                dc.atoms.push_back(std::move(atom));
            }
            out.ic.push_back(std::move(dc));
        }
    }
    return out;
}

// Ternary P with fd X -> Y; instance consistent by key-determined Y values.
inline DatabaseInstance consistent_fd_instance(std::mt19937& rng, SchemaPtr sp, int n) {
    std::set<DbTuple> tuples;
    const char* pool = "abcdef";
    while (static_cast<int>(tuples.size()) < n) {
        int key = static_cast<int>(rng() % (2 * n + 1));
        std::string x = "x" + std::to_string(key);
        std::string y(1, pool[key % 6]);  // functionally determined by x
        std::string z(1, pool[rng() % 6]);
        tuples.insert(DbTuple{
            "P", {Value::symbol(x), Value::symbol(y), Value::symbol(z)}});
    }
    return DatabaseInstance(std::move(sp), std::move(tuples));
}

inline UpdateSequence random_fd_updates(std::mt19937& rng, const DatabaseInstance& d,
                                        int m) {
    UpdateSequence u;
    const char* pool = "abcdef";
    std::vector<DbTuple> existing(d.tuples().begin(), d.tuples().end());
    for (int i = 0; i < m; ++i) {
        int kind = static_cast<int>(rng() % 5);
        UpdateOp op;
        if (kind <= 2 || existing.empty()) {
            op.kind = UpdateOp::Kind::Insert;
            std::string x = "x" + std::to_string(rng() % (d.size() + 2));
            op.target = DbTuple{"P",
                                {Value::symbol(x),
                                 Value::symbol(std::string(1, pool[rng() % 6])),
                                 Value::symbol(std::string(1, pool[rng() % 6]))}};
        } else if (kind == 3) {
            op.kind = UpdateOp::Kind::Delete;
            op.target = existing[rng() % existing.size()];
        } else {
            op.kind = UpdateOp::Kind::Change;
            op.target = existing[rng() % existing.size()];
            op.attribute = "Y";
            op.new_value = Value::symbol(std::string(1, pool[rng() % 6]));
        }
        u.ops.push_back(std::move(op));
    }
    return u;
}

}  // namespace gen
