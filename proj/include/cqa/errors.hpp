#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cqa {

// Position inside a parsed text. line/column are 1-based; offset is the
// byte offset from the start of the input.
struct SourceSpan {
    std::size_t line = 0;
    std::size_t column = 0;
    std::size_t offset = 0;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, SourceSpan span)
        : std::runtime_error(message), span_(span) {}

    const SourceSpan& span() const { return span_; }

private:
    SourceSpan span_;
};

// Schema violations: unknown relations, arity or kind mismatches.
class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Runtime evaluation errors (kind mismatch in a comparison, unbound
// variable, malformed query class for a fast path).
class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Exact-solver resource cap: too many vertices, time budget exhausted, or
// an enumeration space beyond the configured limit. Never a wrong answer.
class CapExceeded : public std::runtime_error {
public:
    enum class Kind { Vertices, TimeBudget, SearchSpace };

    CapExceeded(Kind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

}  // namespace cqa
