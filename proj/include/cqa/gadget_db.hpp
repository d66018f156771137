#pragma once

#include <map>
#include <string>
#include <vector>

#include "cqa/graph.hpp"
#include "cqa/relational.hpp"
#include "cqa/repairs.hpp"

namespace cqa {

// Database encoding of a graph whose cardinality repairs correspond one to
// one with the maximum independent sets: Vertex(v), Edges(v1,v2,e) padded
// with n rows per graph edge (distinct e values), N(e), and the denial
// forbidding Vertex(v1), Vertex(v2), Edges(v1,v2,e), N(e) together.
struct GraphEncoding {
    SchemaPtr schema;
    DatabaseInstance instance;
    DenialConstraint constraint;
    std::map<std::string, DbTuple> vertex_tuples;  // label -> Vertex tuple

    GraphEncoding(SchemaPtr s, DatabaseInstance i)
        : schema(std::move(s)), instance(std::move(i)) {}
};

GraphEncoding encode_graph(const SimpleGraph& g);

// Surviving Vertex labels of a repair of the encoding; raises EvalError if
// the repair deleted any Edges or N tuple (the padding makes that
// suboptimal, so it indicates an internal inconsistency).
std::vector<std::string> decode_repair(const GraphEncoding& enc,
                                       const DatabaseInstance& repair);

// Image of the cardinality-to-attribute-repair reduction: every relation
// gains a fixable 0/1 flag, every denial requires flag = 1 on each atom,
// the instance sets all flags to 1, and the query asks for the flagged
// tuple. Certain answers under the squared-difference bounded-domain
// semantics on the image match certain answers under the cardinality
// semantics on the source.
struct CToAImage {
    SchemaPtr schema;
    std::vector<DenialConstraint> constraints;
    Query query;
    DatabaseInstance instance;
    ASpec aspec;

    CToAImage(SchemaPtr s, DatabaseInstance i)
        : schema(std::move(s)), instance(std::move(i)) {}
};

CToAImage c_to_a_reduction(const Schema& schema,
                           const std::vector<DenialConstraint>& ic,
                           const Query& ground_atom, const DatabaseInstance& d);

}  // namespace cqa
