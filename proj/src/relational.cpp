#include "cqa/relational.hpp"

#include <algorithm>

#include "matcher.hpp"

namespace cqa {

void Schema::add_relation(RelationDef def) {
    if (def.attributes.empty())
        throw SchemaError("relation '" + def.name + "' must have arity >= 1");
    std::set<std::string> seen;
    for (const auto& [attr, kind] : def.attributes) {
        (void)kind;
        if (!seen.insert(attr).second)
            throw SchemaError("duplicate attribute '" + attr + "' in relation '" +
                              def.name + "'");
    }
    auto [it, inserted] = relations_.emplace(def.name, std::move(def));
    (void)it;
    if (!inserted)
        throw SchemaError("duplicate relation '" + it->first + "'");
}

const RelationDef& Schema::at(const std::string& name) const {
    const RelationDef* def = find(name);
    if (!def) throw SchemaError("unknown relation '" + name + "'");
    return *def;
}

std::size_t Schema::max_arity() const {
    std::size_t m = 0;
    for (const auto& [name, def] : relations_) {
        (void)name;
        m = std::max(m, def.arity());
    }
    return m;
}

std::string to_string(const DbTuple& t) {
    std::string out = t.relation + "(";
    for (std::size_t i = 0; i < t.values.size(); ++i) {
        if (i) out += ",";
        out += t.values[i].to_string();
    }
    out += ")";
    return out;
}

const char* to_string(CompareOp op) {
    switch (op) {
        case CompareOp::Eq: return "=";
        case CompareOp::Ne: return "!=";
        case CompareOp::Lt: return "<";
        case CompareOp::Le: return "<=";
        case CompareOp::Gt: return ">";
        case CompareOp::Ge: return ">=";
    }
    return "?";
}

void validate_tuple(const Schema& schema, const DbTuple& t) {
    const RelationDef& rel = schema.at(t.relation);
    if (t.values.size() != rel.arity())
        throw SchemaError("tuple " + to_string(t) + " has arity " +
                          std::to_string(t.values.size()) + ", schema says " +
                          std::to_string(rel.arity()));
    for (std::size_t i = 0; i < t.values.size(); ++i)
        if (t.values[i].kind() != rel.attributes[i].second)
            throw SchemaError("tuple " + to_string(t) + ": value kind mismatch at position " +
                              std::to_string(i + 1));
}

DatabaseInstance::DatabaseInstance(SchemaPtr schema, std::set<DbTuple> tuples)
    : schema_(std::move(schema)), tuples_(std::move(tuples)) {
    for (const DbTuple& t : tuples_) validate_tuple(*schema_, t);
}

bool DatabaseInstance::insert(DbTuple t) {
    validate_tuple(*schema_, t);
    return tuples_.insert(std::move(t)).second;
}

void validate_constraint(const Schema& schema, const DenialConstraint& dc) {
    if (dc.atoms.empty())
        throw SchemaError("denial constraint must have at least one atom");
    // compile_conjunction performs the arity/kind/safety checks.
    detail::compile_conjunction(schema, dc.atoms, dc.comparisons);
}

void validate_query(const Schema& schema, const Query& q) {
    std::vector<AtomPattern> positives;
    std::set<std::string> positive_vars;
    std::set<std::string> all_vars;
    for (const auto& lit : q.literals) {
        for (const Term& t : lit.atom.terms)
            if (t.is_variable()) all_vars.insert(t.var_name());
        if (!lit.negated) {
            positives.push_back(lit.atom);
            for (const Term& t : lit.atom.terms)
                if (t.is_variable()) positive_vars.insert(t.var_name());
        }
    }
    for (const std::string& v : q.free_variables)
        if (!positive_vars.count(v))
            throw SchemaError("free variable '" + v + "' does not occur in a positive literal");
    for (const auto& lit : q.literals) {
        if (!lit.negated) continue;
        schema.at(lit.atom.relation);
        if (lit.atom.terms.size() != schema.at(lit.atom.relation).arity())
            throw SchemaError("negated atom over '" + lit.atom.relation + "' has wrong arity");
        for (const Term& t : lit.atom.terms)
            if (t.is_variable() && !positive_vars.count(t.var_name()))
                throw SchemaError("variable '" + t.var_name() +
                                  "' of a negated literal is not bound by a positive literal");
    }
    for (const auto& cmp : q.comparisons)
        for (const Term* t : {&cmp.lhs, &cmp.rhs})
            if (t->is_variable() && !positive_vars.count(t->var_name()))
                throw SchemaError("comparison variable '" + t->var_name() +
                                  "' is not bound by a positive literal");
    for (const std::string& v : q.existential_variables) {
        if (!all_vars.count(v))
            throw SchemaError("existential variable '" + v + "' does not occur in the body");
        if (std::find(q.free_variables.begin(), q.free_variables.end(), v) !=
            q.free_variables.end())
            throw SchemaError("variable '" + v + "' is both free and existential");
    }
    // Kind checks across every literal and comparison (negated atoms add no
    // variables, so including them only tightens the inference).
    std::vector<AtomPattern> all_atoms = positives;
    for (const auto& lit : q.literals)
        if (lit.negated) all_atoms.push_back(lit.atom);
    detail::compile_conjunction(schema, all_atoms, q.comparisons);
}

bool satisfies(const DatabaseInstance& instance,
               const std::vector<DenialConstraint>& ic) {
    detail::MatchContext ctx(instance);
    for (const auto& dc : ic) {
        auto cc = detail::compile_conjunction(instance.schema(), dc.atoms, dc.comparisons);
        bool violated = detail::for_each_match(
            ctx, cc, [](const std::vector<int>&, const std::vector<Value>&) { return false; });
        if (violated) return false;
    }
    return true;
}

std::set<std::vector<Value>> query_answers(const DatabaseInstance& instance,
                                           const Query& q) {
    validate_query(instance.schema(), q);

    std::vector<AtomPattern> positives;
    std::vector<const AtomPattern*> negatives;
    for (const auto& lit : q.literals) {
        if (lit.negated)
            negatives.push_back(&lit.atom);
        else
            positives.push_back(lit.atom);
    }

    std::set<std::vector<Value>> answers;
    if (positives.empty()) {
        // Closed query with no positive literals: only comparisons over
        // constants can occur (validation enforced safety).
        bool ok = true;
        for (const auto& cmp : q.comparisons)
            ok = ok && detail::eval_comparison(cmp.lhs.const_value(), cmp.op,
                                               cmp.rhs.const_value());
        for (const AtomPattern* neg : negatives) {
            DbTuple t{neg->relation, {}};
            for (const Term& term : neg->terms) t.values.push_back(term.const_value());
            if (instance.contains(t)) ok = false;
        }
        if (ok) answers.insert(std::vector<Value>{});
        return answers;
    }

    auto cc = detail::compile_conjunction(instance.schema(), positives, q.comparisons);
    detail::MatchContext ctx(instance);
    detail::for_each_match(ctx, cc, [&](const std::vector<int>&,
                                        const std::vector<Value>& bindings) {
        for (const AtomPattern* neg : negatives) {
            DbTuple t{neg->relation, {}};
            for (const Term& term : neg->terms) {
                if (term.is_variable())
                    t.values.push_back(bindings[cc.var_id(term.var_name())]);
                else
                    t.values.push_back(term.const_value());
            }
            if (instance.contains(t)) return true;  // this assignment fails
        }
        std::vector<Value> row;
        row.reserve(q.free_variables.size());
        for (const std::string& v : q.free_variables)
            row.push_back(bindings[cc.var_id(v)]);
        answers.insert(std::move(row));
        return true;
    });
    return answers;
}

SymmetricDifference symmetric_difference(const DatabaseInstance& d1,
                                         const DatabaseInstance& d2) {
    if (!(d1.schema() == d2.schema()))
        throw SchemaError("symmetric difference requires a common schema");
    SymmetricDifference out;
    for (const DbTuple& t : d2.tuples())
        if (!d1.contains(t)) out.added.insert(t);
    for (const DbTuple& t : d1.tuples())
        if (!d2.contains(t)) out.removed.insert(t);
    out.cardinality = out.added.size() + out.removed.size();
    return out;
}

}  // namespace cqa
