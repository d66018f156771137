#include "cqa/cqa.hpp"

#include <algorithm>

#include "cqa/errors.hpp"
#include "query_util.hpp"

namespace cqa {

namespace detail {

std::vector<std::pair<bool, DbTuple>> ground_literals(const Query& q,
                                                      const Schema& schema,
                                                      bool atoms_only) {
    if (!q.free_variables.empty() || !q.comparisons.empty())
        throw EvalError("fast path requires a closed query without comparisons");
    if (atoms_only && (q.literals.size() != 1 || q.literals[0].negated))
        throw EvalError("fast path requires a single positive ground atom");
    std::vector<std::pair<bool, DbTuple>> out;
    for (const auto& lit : q.literals) {
        DbTuple t{lit.atom.relation, {}};
        for (const Term& term : lit.atom.terms) {
            if (term.is_variable())
                throw EvalError("fast path requires a ground query");
            t.values.push_back(term.const_value());
        }
        validate_tuple(schema, t);
        out.push_back({lit.negated, std::move(t)});
    }
    return out;
}

}  // namespace detail

namespace {

RepairSet repairs_for(const DatabaseInstance& instance,
                      const std::vector<DenialConstraint>& ic,
                      const SemanticsSpec& semantics, const SolverLimits& limits) {
    switch (semantics.kind) {
        case RepairSemantics::S:
            return s_repairs(instance, ic, limits);
        case RepairSemantics::C:
            return c_repairs(instance, ic, limits);
        case RepairSemantics::WeightedC:
            if (!semantics.weights)
                throw EvalError("weighted-C semantics requires tuple weights");
            return weighted_c_repairs(instance, ic, *semantics.weights, limits);
        case RepairSemantics::ABounded:
            if (!semantics.aspec)
                throw EvalError("A-bounded semantics requires an attribute spec");
            return a_repairs_bounded(instance, ic, *semantics.aspec);
    }
    throw EvalError("unknown semantics");
}

}  // namespace

AnswerSet certain_answers(const Query& q, const DatabaseInstance& instance,
                          const std::vector<DenialConstraint>& ic,
                          const SemanticsSpec& semantics, const SolverLimits& limits) {
    validate_query(instance.schema(), q);
    RepairSet reps = repairs_for(instance, ic, semantics, limits);

    AnswerSet out;
    out.mode = AnswerMode::Certain;
    out.semantics = semantics.kind;
    out.is_boolean = q.is_boolean();

    if (out.is_boolean) {
        out.boolean_answer = true;  // vacuous over an empty repair set
        for (const auto& rep : reps.repairs) {
            if (query_answers(rep, q).empty()) {
                out.boolean_answer = false;
                break;  // no need to look at further repairs
            }
        }
        return out;
    }

    bool first = true;
    for (const auto& rep : reps.repairs) {
        auto rows = query_answers(rep, q);
        if (first) {
            out.answers = std::move(rows);
            first = false;
        } else {
            std::set<std::vector<Value>> kept;
            std::set_intersection(out.answers.begin(), out.answers.end(), rows.begin(),
                                  rows.end(), std::inserter(kept, kept.begin()));
            out.answers = std::move(kept);
        }
        if (out.answers.empty()) break;
    }
    return out;
}

AnswerSet possible_answers(const Query& q, const DatabaseInstance& instance,
                           const std::vector<DenialConstraint>& ic,
                           const SemanticsSpec& semantics, const SolverLimits& limits) {
    validate_query(instance.schema(), q);
    RepairSet reps = repairs_for(instance, ic, semantics, limits);

    AnswerSet out;
    out.mode = AnswerMode::Possible;
    out.semantics = semantics.kind;
    out.is_boolean = q.is_boolean();

    if (out.is_boolean) {
        out.boolean_answer = false;
        for (const auto& rep : reps.repairs)
            if (!query_answers(rep, q).empty()) {
                out.boolean_answer = true;
                break;
            }
        return out;
    }
    for (const auto& rep : reps.repairs) {
        auto rows = query_answers(rep, q);
        out.answers.insert(rows.begin(), rows.end());
    }
    return out;
}

bool certain_c_fast(const Query& q, const DatabaseInstance& instance,
                    const std::vector<DenialConstraint>& ic,
                    const SolverLimits& limits) {
    auto literals = detail::ground_literals(q, instance.schema(), false);
    ConflictHypergraph ch = build_hypergraph(instance, ic);
    for (const auto& [negated, tuple] : literals) {
        int v = ch.vertex_of(tuple);
        if (!negated) {
            // Needs the tuple in every cardinality repair.
            if (v < 0 || !in_all_max_is(ch.hyper, v, limits)) return false;
        } else {
            // Needs the tuple in no cardinality repair.
            if (v >= 0 && in_some_max_is(ch.hyper, v, limits)) return false;
        }
    }
    return true;
}

bool certain_s_atomic_fast(const Query& q, const DatabaseInstance& instance,
                           const std::vector<DenialConstraint>& ic) {
    auto literals = detail::ground_literals(q, instance.schema(), true);
    const DbTuple& t = literals[0].second;
    if (!instance.contains(t)) return false;
    ConflictHypergraph ch = build_hypergraph(instance, ic);
    int v = ch.vertex_of(t);
    for (const auto& e : ch.hyper.edges)
        if (std::find(e.begin(), e.end(), v) != e.end()) return false;
    return true;
}

}  // namespace cqa
