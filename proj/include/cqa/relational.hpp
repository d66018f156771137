#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cqa/errors.hpp"

namespace cqa {

enum class ValueKind { Integer, Symbol };

// A constant of the database domain: either a symbol (finite string) or an
// integer. Order comparisons are only meaningful between two integers, but a
// total order exists for deterministic iteration (integers before symbols).
class Value {
public:
    static Value symbol(std::string s) { return Value(std::move(s)); }
    static Value integer(std::int64_t i) { return Value(i); }

    ValueKind kind() const {
        return v_.index() == 0 ? ValueKind::Integer : ValueKind::Symbol;
    }
    bool is_integer() const { return v_.index() == 0; }
    std::int64_t as_integer() const { return std::get<0>(v_); }
    const std::string& as_symbol() const { return std::get<1>(v_); }

    // Display form: symbols bare, integers in decimal.
    std::string to_string() const {
        return is_integer() ? std::to_string(as_integer()) : as_symbol();
    }

    friend bool operator==(const Value& a, const Value& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Value& a, const Value& b) { return !(a == b); }
    friend bool operator<(const Value& a, const Value& b) {
        if (a.v_.index() != b.v_.index()) return a.v_.index() < b.v_.index();
        if (a.is_integer()) return a.as_integer() < b.as_integer();
        return a.as_symbol() < b.as_symbol();
    }

private:
    explicit Value(std::string s) : v_(std::move(s)) {}
    explicit Value(std::int64_t i) : v_(i) {}
    std::variant<std::int64_t, std::string> v_;
};

struct RelationDef {
    std::string name;
    std::vector<std::pair<std::string, ValueKind>> attributes;

    std::size_t arity() const { return attributes.size(); }
    // Index of an attribute by name, or -1.
    int attribute_index(const std::string& attr) const {
        for (std::size_t i = 0; i < attributes.size(); ++i)
            if (attributes[i].first == attr) return static_cast<int>(i);
        return -1;
    }

    friend bool operator==(const RelationDef& a, const RelationDef& b) {
        return a.name == b.name && a.attributes == b.attributes;
    }
};

// Relation name -> definition. Relation names are unique, arities >= 1,
// attribute names unique within a relation.
class Schema {
public:
    void add_relation(RelationDef def);
    const RelationDef* find(const std::string& name) const {
        auto it = relations_.find(name);
        return it == relations_.end() ? nullptr : &it->second;
    }
    const RelationDef& at(const std::string& name) const;
    const std::map<std::string, RelationDef>& relations() const { return relations_; }
    std::size_t max_arity() const;

    friend bool operator==(const Schema& a, const Schema& b) {
        return a.relations_ == b.relations_;
    }

private:
    std::map<std::string, RelationDef> relations_;
};

using SchemaPtr = std::shared_ptr<const Schema>;

struct DbTuple {
    std::string relation;
    std::vector<Value> values;

    friend bool operator==(const DbTuple& a, const DbTuple& b) {
        return a.relation == b.relation && a.values == b.values;
    }
    friend bool operator<(const DbTuple& a, const DbTuple& b) {
        if (a.relation != b.relation) return a.relation < b.relation;
        return a.values < b.values;
    }
};

// Ground display form `P(a,b,c)`.
std::string to_string(const DbTuple& t);

// A finite set of tuples conforming to a schema. Set semantics: duplicates
// collapse; iteration order is lexicographic by (relation, values).
class DatabaseInstance {
public:
    explicit DatabaseInstance(SchemaPtr schema) : schema_(std::move(schema)) {}
    DatabaseInstance(SchemaPtr schema, std::set<DbTuple> tuples);

    const Schema& schema() const { return *schema_; }
    const SchemaPtr& schema_ptr() const { return schema_; }
    const std::set<DbTuple>& tuples() const { return tuples_; }
    std::size_t size() const { return tuples_.size(); }
    bool contains(const DbTuple& t) const { return tuples_.count(t) > 0; }

    // Validates against the schema; returns false if already present.
    bool insert(DbTuple t);
    bool erase(const DbTuple& t) { return tuples_.erase(t) > 0; }

    DatabaseInstance with_tuples(std::set<DbTuple> tuples) const {
        return DatabaseInstance(schema_, std::move(tuples));
    }

    friend bool operator==(const DatabaseInstance& a, const DatabaseInstance& b) {
        return a.tuples_ == b.tuples_;
    }
    friend bool operator<(const DatabaseInstance& a, const DatabaseInstance& b) {
        return a.tuples_ < b.tuples_;
    }

private:
    SchemaPtr schema_;
    std::set<DbTuple> tuples_;
};

struct SymmetricDifference {
    std::set<DbTuple> added;
    std::set<DbTuple> removed;
    std::size_t cardinality = 0;
};

// A term of a constraint or query atom: a variable or a constant.
struct Term {
    static Term var(std::string name) {
        Term t;
        t.variable = std::move(name);
        return t;
    }
    static Term constant(Value v) {
        Term t;
        t.value = std::move(v);
        return t;
    }

    bool is_variable() const { return variable.has_value(); }
    const std::string& var_name() const { return *variable; }
    const Value& const_value() const { return *value; }

    std::optional<std::string> variable;
    std::optional<Value> value;

    friend bool operator==(const Term& a, const Term& b) {
        return a.variable == b.variable && a.value == b.value;
    }
};

enum class CompareOp { Eq, Ne, Lt, Le, Gt, Ge };

const char* to_string(CompareOp op);

struct Comparison {
    Term lhs;
    CompareOp op = CompareOp::Eq;
    Term rhs;

    friend bool operator==(const Comparison& a, const Comparison& b) {
        return a.lhs == b.lhs && a.op == b.op && a.rhs == b.rhs;
    }
};

struct AtomPattern {
    std::string relation;
    std::vector<Term> terms;

    friend bool operator==(const AtomPattern& a, const AtomPattern& b) {
        return a.relation == b.relation && a.terms == b.terms;
    }
};

// A forbidden conjunction of relational atoms plus comparisons; all
// variables implicitly universally quantified.
struct DenialConstraint {
    std::vector<AtomPattern> atoms;
    std::vector<Comparison> comparisons;

    friend bool operator==(const DenialConstraint& a, const DenialConstraint& b) {
        return a.atoms == b.atoms && a.comparisons == b.comparisons;
    }
};

struct QueryLiteral {
    bool negated = false;
    AtomPattern atom;

    friend bool operator==(const QueryLiteral& a, const QueryLiteral& b) {
        return a.negated == b.negated && a.atom == b.atom;
    }
};

// Conjunctive query with optional negated literals and comparisons. Free
// variables must occur in a positive literal; negated literals and
// comparisons may only use variables bound by positive literals.
struct Query {
    std::string head = "q";
    std::vector<std::string> free_variables;
    std::set<std::string> existential_variables;
    std::vector<QueryLiteral> literals;
    std::vector<Comparison> comparisons;

    bool is_boolean() const { return free_variables.empty(); }

    friend bool operator==(const Query& a, const Query& b) {
        return a.head == b.head && a.free_variables == b.free_variables &&
               a.existential_variables == b.existential_variables &&
               a.literals == b.literals && a.comparisons == b.comparisons;
    }
};

// Well-formedness checks; throw SchemaError on violation.
void validate_constraint(const Schema& schema, const DenialConstraint& dc);
void validate_query(const Schema& schema, const Query& q);
void validate_tuple(const Schema& schema, const DbTuple& t);

// True iff no assignment of instance tuples to the atoms of any constraint
// satisfies all atoms and comparisons simultaneously.
bool satisfies(const DatabaseInstance& instance,
               const std::vector<DenialConstraint>& ic);

// Classical evaluation. Returns the set of free-variable bindings; a boolean
// query answers { () } for yes and {} for no.
std::set<std::vector<Value>> query_answers(const DatabaseInstance& instance,
                                           const Query& q);

SymmetricDifference symmetric_difference(const DatabaseInstance& d1,
                                         const DatabaseInstance& d2);

}  // namespace cqa
