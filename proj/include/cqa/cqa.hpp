#pragma once

#include <set>
#include <vector>

#include "cqa/repairs.hpp"

namespace cqa {

enum class AnswerMode { Certain, Possible };

struct AnswerSet {
    AnswerMode mode = AnswerMode::Certain;
    RepairSemantics semantics = RepairSemantics::S;
    bool is_boolean = false;
    bool boolean_answer = false;
    std::set<std::vector<Value>> answers;  // empty for boolean queries
};

// Intersection of classical answers over all repairs; a boolean query
// answers yes iff it holds in every repair (vacuously yes when the repair
// set is empty, which can only happen under the A-bounded semantics).
AnswerSet certain_answers(const Query& q, const DatabaseInstance& instance,
                          const std::vector<DenialConstraint>& ic,
                          const SemanticsSpec& semantics,
                          const SolverLimits& limits = {});

// Union over repairs.
AnswerSet possible_answers(const Query& q, const DatabaseInstance& instance,
                           const std::vector<DenialConstraint>& ic,
                           const SemanticsSpec& semantics,
                           const SolverLimits& limits = {});

// Fast path for ground literal conjunctions under the cardinality
// semantics: a positive literal is certain iff its vertex lies in every
// maximum independent set of the conflict hypergraph, a negated literal
// iff its tuple is absent or lies in no maximum independent set.
bool certain_c_fast(const Query& q, const DatabaseInstance& instance,
                    const std::vector<DenialConstraint>& ic,
                    const SolverLimits& limits = {});

// Fast path for a ground atom under the subset semantics: certain iff the
// tuple is present and participates in no conflict.
bool certain_s_atomic_fast(const Query& q, const DatabaseInstance& instance,
                           const std::vector<DenialConstraint>& ic);

}  // namespace cqa
