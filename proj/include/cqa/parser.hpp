#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "cqa/graph.hpp"
#include "cqa/incremental.hpp"
#include "cqa/relational.hpp"
#include "cqa/repairs.hpp"

namespace cqa {

// Text formats, one statement per line unless noted. Variables are
// lowercase identifiers; constants are quoted strings, bare capitalized
// identifiers, or integers. Ground contexts (update scripts, weight files,
// candidate sets, CSV cells) have no variables, so bare words there are
// always constants of the schema-declared kind.

// `relation P(X: sym, Y: sym, Z: sym)`
Schema parse_schema(const std::string& text);

// `deny P(x,y,z), P(x,y2,z2) where y != y2` or the sugar
// `fd P: X -> Y` (multiple right-hand attributes expand to one denial each).
std::vector<DenialConstraint> parse_constraints(const std::string& text,
                                                const Schema& schema);

// `q(x,z) := P(x,y,z), not S(x) where y != "c"`; a bare ground atom is a
// boolean query. Non-head body variables are existential.
Query parse_query(const std::string& text, const Schema& schema);

// `insert P(a,f,d)` / `delete P(a,b,c)` / `change P(a,b,c) Y = f`
UpdateSequence parse_updates(const std::string& text, const Schema& schema);

// `weight P(a,b,c) = 5`
WeightMap parse_weights(const std::string& text, const Schema& schema);

// `fixable P.Y; candidates P.Y = {b,c}; rule = unit` — statements split on
// newlines or semicolons.
ASpec parse_aspec(const std::string& text, const Schema& schema);

// One headerless CSV file per relation (filename = relation name) in
// RFC-4180 style; duplicates collapse, integer columns are converted.
DatabaseInstance parse_instance_dir(const std::filesystem::path& dir, SchemaPtr schema);

// Inline form: `@relation NAME` headers followed by CSV rows.
DatabaseInstance parse_instance_text(const std::string& text, SchemaPtr schema);

// First line: vertex labels separated by spaces; following lines `u v`.
SimpleGraph parse_graph(const std::string& text);

std::string print_schema(const Schema& schema);
std::string print_constraints(const std::vector<DenialConstraint>& ics);
std::string print_query(const Query& q);
std::string print_updates(const UpdateSequence& u);
std::string print_weights(const WeightMap& weights);
std::string print_aspec(const ASpec& spec);
std::string print_instance_text(const DatabaseInstance& instance);
std::string print_graph(const SimpleGraph& g);

// CSV rows (no header) of one relation.
std::string print_relation_csv(const DatabaseInstance& instance,
                               const std::string& relation);

std::string print_answer_row(const std::vector<Value>& row);

}  // namespace cqa
