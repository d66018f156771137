#pragma once

#include <chrono>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cqa/relational.hpp"

namespace cqa {

// Vertices are 0..n-1; each hyperedge is a sorted set of vertex ids. The
// edge family is kept minimal (no edge contains another) and deduplicated.
struct Hypergraph {
    int n = 0;
    std::vector<std::vector<int>> edges;

    std::size_t max_edge_size() const {
        std::size_t m = 0;
        for (const auto& e : edges) m = std::max(m, e.size());
        return m;
    }
};

using VertexSet = std::vector<int>;  // sorted ascending

// Resource limits for the exact solver. Exceeding either raises CapExceeded.
struct SolverLimits {
    std::size_t max_vertices = 10000;
    std::chrono::milliseconds time_budget{10000};
};

// Keeps only the inclusion-minimal edges, sorted and deduplicated.
std::vector<std::vector<int>> minimalize_edges(std::vector<std::vector<int>> edges);

// True iff no hyperedge is fully contained in vs.
bool is_independent(const Hypergraph& h, const VertexSet& vs);

// Exact maximum independent set cardinality (branch and bound with
// unit propagation, component decomposition and a disjoint-edge bound).
int max_is_size(const Hypergraph& h, const SolverLimits& limits = {});

// All independent sets of maximum cardinality, lexicographically sorted.
std::vector<VertexSet> all_maximum_is(const Hypergraph& h, const SolverLimits& limits = {});

// All inclusion-maximal independent sets, lexicographically sorted.
std::vector<VertexSet> all_maximal_is(const Hypergraph& h, const SolverLimits& limits = {});

// Membership of v in some / in all maximum independent sets, decided by
// comparing maximum sizes of the conditioned hypergraphs.
bool in_some_max_is(const Hypergraph& h, int v, const SolverLimits& limits = {});
bool in_all_max_is(const Hypergraph& h, int v, const SolverLimits& limits = {});

// Exact minimum hitting set cardinality, computed directly (independent of
// the independent-set route; the two satisfy max_is + min_hs = n).
int min_hitting_set_size(const Hypergraph& h, const SolverLimits& limits = {});

// All hitting sets of minimum total weight (weights indexed by vertex,
// positive). Returns the optimum weight and every optimal set.
std::pair<long long, std::vector<VertexSet>> min_weight_hitting_sets(
    const Hypergraph& h, const std::vector<long long>& weights,
    const SolverLimits& limits = {});

// The conflict hypergraph of an instance: one vertex per tuple (in sorted
// tuple order), one hyperedge per minimal violating tuple set.
struct ConflictHypergraph {
    Hypergraph hyper;
    std::vector<DbTuple> tuples;  // vertex id -> tuple

    int vertex_of(const DbTuple& t) const;  // -1 if absent
};

ConflictHypergraph build_hypergraph(const DatabaseInstance& instance,
                                    const std::vector<DenialConstraint>& ic);

// DOT rendering: size-2 edges as plain edges, larger edges as star nodes.
std::string to_dot(const ConflictHypergraph& ch);

}  // namespace cqa
