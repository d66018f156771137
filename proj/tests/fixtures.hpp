#pragma once

#include <memory>
#include <string>
#include <vector>

#include "cqa/parser.hpp"
#include "cqa/relational.hpp"

namespace fixtures {

using namespace cqa;

// Ternary P with the single dependency X -> Y and the inconsistent instance
// {P(a,b,c), P(a,c,d), P(a,c,e)}.
inline SchemaPtr p_schema() {
    return std::make_shared<const Schema>(
        parse_schema("relation P(X: sym, Y: sym, Z: sym)"));
}

inline std::vector<DenialConstraint> p_fd(const Schema& s) {
    return parse_constraints("fd P: X -> Y", s);
}

inline DbTuple p(const std::string& x, const std::string& y, const std::string& z) {
    return DbTuple{"P", {Value::symbol(x), Value::symbol(y), Value::symbol(z)}};
}

inline DatabaseInstance p_instance(SchemaPtr sp) {
    return parse_instance_text("@relation P\na,b,c\na,c,d\na,c,e\n", std::move(sp));
}

// Unary R and S with `deny R(x), S(y)` and the instance {R(1..n), S(0)}.
inline SchemaPtr rs_schema() {
    return std::make_shared<const Schema>(
        parse_schema("relation R(A: int)\nrelation S(B: int)"));
}

inline std::vector<DenialConstraint> rs_denial(const Schema& s) {
    return parse_constraints("deny R(x), S(y)", s);
}

inline DbTuple r(long long v) { return DbTuple{"R", {Value::integer(v)}}; }
inline DbTuple s(long long v) { return DbTuple{"S", {Value::integer(v)}}; }

inline DatabaseInstance rs_instance(SchemaPtr sp, int n, bool with_s) {
    DatabaseInstance d(std::move(sp));
    for (int i = 1; i <= n; ++i) d.insert(r(i));
    if (with_s) d.insert(s(0));
    return d;
}

}  // namespace fixtures
