#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cqa/hypergraph.hpp"
#include "cqa/relational.hpp"

namespace cqa {

enum class RepairSemantics { S, C, WeightedC, ABounded };

const char* to_string(RepairSemantics s);

// Tuple weights for the weighted-cardinality semantics; all positive.
using WeightMap = std::map<DbTuple, long long>;

// Bounded-domain attribute-repair specification: which attributes may
// change, the finite candidate set per attribute, and the change weight
// rule (aggregated by sum).
struct ASpec {
    enum class Rule { Unit, Squared };
    Rule rule = Rule::Unit;
    // (relation, attribute) -> candidate values.
    std::map<std::pair<std::string, std::string>, std::vector<Value>> candidates;
    // Cap on the number of enumerated assignments.
    long long max_combinations = 1000000;
};

struct SemanticsSpec {
    RepairSemantics kind = RepairSemantics::S;
    std::optional<WeightMap> weights;  // WeightedC
    std::optional<ASpec> aspec;        // ABounded
};

// The set of repairs under one semantics, with the optimal distance where
// the semantics defines one (cardinality, weight, or aggregate; absent for
// S). Repairs are ordered by their deleted-tuple sets.
struct RepairSet {
    RepairSemantics semantics = RepairSemantics::S;
    std::vector<DatabaseInstance> repairs;
    std::optional<long long> distance;
};

// Subset repairs induced by the maximal independent sets of the conflict
// hypergraph.
RepairSet s_repairs(const DatabaseInstance& instance,
                    const std::vector<DenialConstraint>& ic,
                    const SolverLimits& limits = {});

// Cardinality repairs: maximum independent sets; distance = deletions.
RepairSet c_repairs(const DatabaseInstance& instance,
                    const std::vector<DenialConstraint>& ic,
                    const SolverLimits& limits = {});

// Distance only, via a direct minimum hitting set computation.
long long c_repair_distance(const DatabaseInstance& instance,
                            const std::vector<DenialConstraint>& ic,
                            const SolverLimits& limits = {});

// Checks whether d_prime (a deletion-only subset of d) is a cardinality
// repair of d.
bool is_c_repair(const DatabaseInstance& d, const DatabaseInstance& d_prime,
                 const std::vector<DenialConstraint>& ic,
                 const SolverLimits& limits = {});

// Consistent subsets minimizing the total weight of deleted tuples, via an
// exact weighted minimum hitting set search. Every tuple needs a weight.
RepairSet weighted_c_repairs(const DatabaseInstance& instance,
                             const std::vector<DenialConstraint>& ic,
                             const WeightMap& weights,
                             const SolverLimits& limits = {});

// Attribute repairs over bounded candidate domains: enumerate all value
// assignments to fixable cells, keep the consistent ones of minimal
// aggregate weight. May be empty when no assignment is consistent.
RepairSet a_repairs_bounded(const DatabaseInstance& instance,
                            const std::vector<DenialConstraint>& ic,
                            const ASpec& spec);

// Exhaustive oracle: subsets (S/C/weighted-C, <= 16 tuples) or value
// assignments (A-bounded) filtered by the definitional minimality.
RepairSet brute_force_repairs(const DatabaseInstance& instance,
                              const std::vector<DenialConstraint>& ic,
                              const SemanticsSpec& semantics);

}  // namespace cqa
