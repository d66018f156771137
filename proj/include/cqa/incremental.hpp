#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "cqa/cqa.hpp"
#include "cqa/hypergraph.hpp"
#include "cqa/relational.hpp"
#include "cqa/repairs.hpp"

namespace cqa {

struct UpdateOp {
    enum class Kind { Insert, Delete, Change };
    Kind kind = Kind::Insert;
    DbTuple target;
    std::string attribute;              // Change only
    std::optional<Value> new_value;     // Change only
};

// Atomic, ordered update sequence; its length m is the parameter of the
// fixed-parameter algorithms.
struct UpdateSequence {
    std::vector<UpdateOp> ops;

    std::size_t size() const { return ops.size(); }
    bool has_change() const {
        for (const auto& op : ops)
            if (op.kind == UpdateOp::Kind::Change) return true;
        return false;
    }
};

// Applies ops in order. Inserting an existing tuple or deleting a missing
// one is a no-op; changing a missing tuple is an error.
DatabaseInstance apply_updates(const DatabaseInstance& d, const UpdateSequence& u);

// Violation-analysis form: deletions dropped (they never violate a denial),
// changes normalized to delete+insert pairs.
UpdateSequence minimized_updates(const UpdateSequence& u, const Schema& schema);

// Parameter bound for the bounded searches: m for pure-insert sequences,
// m * max-arity when changes are present.
int update_parameter_bound(const UpdateSequence& u, const Schema& schema);

// Bounded search tree for a hitting set of size <= k; deterministic,
// smallest-id un-hit edge first. Returns the found set or nullopt.
std::optional<VertexSet> hitting_set_bounded(const Hypergraph& h, int k);

// Hyperedges of U(D) restricted to those containing a tuple of U(D) \ D.
// When d is consistent these are exactly the hyperedges of U(D).
ConflictHypergraph incremental_hypergraph(const DatabaseInstance& d,
                                          const DatabaseInstance& ud,
                                          const std::vector<DenialConstraint>& ic);

// Searches deletion sets of sizes 0..k over U(D) (k = number of fresh
// tuples participating in a conflict), returning every success at the
// first size that works. Agrees with c_repairs(U(D)).
RepairSet incremental_c_repairs_naive(const DatabaseInstance& d,
                                      const UpdateSequence& u,
                                      const std::vector<DenialConstraint>& ic,
                                      long long max_candidates = 2000000);

// Binary search over the bounded hitting set search; returns the optimal
// deletion count and the lexicographically least witness.
std::pair<int, std::vector<DbTuple>> fpt_min_deletions(
    const DatabaseInstance& d, const UpdateSequence& u,
    const std::vector<DenialConstraint>& ic);

// Certain answer for a ground literal conjunction on U(D) under the
// cardinality semantics, decided through pairs of bounded hitting set
// computations (no repair enumeration).
bool incremental_certain(const Query& q, const DatabaseInstance& d,
                         const UpdateSequence& u,
                         const std::vector<DenialConstraint>& ic);

// Static-to-incremental wrapper: control attributes on one relation per
// constraint, a fresh controller relation, and a single insert that arms
// every constraint. Subset-repair certain answers are preserved.
struct ControlWrapped {
    SchemaPtr schema;
    DatabaseInstance instance;
    std::vector<DenialConstraint> constraints;
    Query query;
    UpdateSequence update;

    ControlWrapped(SchemaPtr s, DatabaseInstance i)
        : schema(std::move(s)), instance(std::move(i)) {}
};

ControlWrapped control_wrap(const DatabaseInstance& d,
                            const std::vector<DenialConstraint>& ic,
                            const Query& q);

}  // namespace cqa
