#pragma once

// Backtracking matcher for conjunctions of relational atoms plus
// comparisons. Compiles a static join order (most-bound-variables-first)
// and uses per-step hash indexes on the bound positions, so FD-style joins
// over large relations stay near-linear.

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "cqa/relational.hpp"

namespace cqa::detail {

struct CompiledConjunction {
    struct Slot {
        enum class Kind { Const, Bind, Check } kind;
        // Const: expected value; Bind: first occurrence of var_id;
        // Check: var_id already bound earlier (earlier atom or earlier slot).
        Value value = Value::integer(0);
        int var_id = -1;
    };
    struct Step {
        int atom_index = -1;
        std::string relation;
        std::vector<Slot> slots;              // one per position
        std::vector<int> key_positions;       // positions bound before this step
        std::vector<int> comparisons_after;   // comparison ids evaluable here
    };

    std::vector<std::string> var_names;       // var_id -> name
    std::vector<ValueKind> var_kinds;
    std::vector<Step> steps;                  // join order
    std::vector<Comparison> comparisons;
    std::vector<int> const_false;             // nonempty => never satisfiable
    std::size_t atom_count = 0;

    int var_id(const std::string& name) const {
        for (std::size_t i = 0; i < var_names.size(); ++i)
            if (var_names[i] == name) return static_cast<int>(i);
        return -1;
    }
};

// Compiles atoms+comparisons against a schema. Infers variable kinds from
// atom positions, validates comparison kinds (order ops need integers) and
// safety (every comparison variable occurs in some atom). If `anchor_atom`
// is set, that atom becomes the first join step.
CompiledConjunction compile_conjunction(const Schema& schema,
                                        const std::vector<AtomPattern>& atoms,
                                        const std::vector<Comparison>& comparisons,
                                        std::optional<int> anchor_atom = std::nullopt);

// Tuples of one instance grouped by relation, with instance-wide ids
// (positions in the sorted tuple order).
struct MatchContext {
    explicit MatchContext(const DatabaseInstance& instance);

    const DatabaseInstance& instance;
    std::vector<const DbTuple*> tuples;                    // id -> tuple
    std::map<std::string, std::vector<int>> by_relation;   // relation -> ids

    int id_of(const DbTuple& t) const;                     // -1 if absent
};

// Enumerates all assignments of tuples to atoms (not necessarily distinct)
// satisfying every atom and comparison. The callback receives the tuple id
// per atom (indexed by original atom order) and the variable bindings; it
// returns false to stop the enumeration. When `anchor_tuple_id` is set, the
// compiled anchor step only considers that tuple. Returns true if at least
// one match was found.
bool for_each_match(const MatchContext& ctx, const CompiledConjunction& cc,
                    const std::function<bool(const std::vector<int>& atom_tuples,
                                             const std::vector<Value>& bindings)>& cb,
                    std::optional<int> anchor_tuple_id = std::nullopt);

bool eval_comparison(const Value& lhs, CompareOp op, const Value& rhs);

}  // namespace cqa::detail
