#include "cqa/parser.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "cqa/errors.hpp"

namespace cqa {

namespace {

struct Line {
    std::string text;
    std::size_t number;  // 1-based
    std::size_t offset;  // byte offset of the line start
};

// Non-empty, non-comment lines of the input.
std::vector<Line> logical_lines(const std::string& text) {
    std::vector<Line> lines;
    std::size_t line_no = 1;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        std::size_t len = (end == std::string::npos ? text.size() : end) - start;
        std::string raw = text.substr(start, len);
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        std::size_t first = raw.find_first_not_of(" \t");
        if (first != std::string::npos && raw[first] != '#')
            lines.push_back({raw, line_no, start});
        if (end == std::string::npos) break;
        start = end + 1;
        ++line_no;
    }
    return lines;
}

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

struct Lexer {
    const Line& line;
    std::size_t pos = 0;
    std::size_t input_size;

    Lexer(const Line& l, std::size_t total) : line(l), input_size(total) {}

    SourceSpan span() const {
        std::size_t off = std::min(line.offset + pos, input_size == 0 ? 0 : input_size - 1);
        return {line.number, pos + 1, off};
    }

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, span()); }

    void skip_ws() {
        while (pos < line.text.size() &&
               (line.text[pos] == ' ' || line.text[pos] == '\t'))
            ++pos;
    }
    bool eof() {
        skip_ws();
        return pos >= line.text.size();
    }
    char peek() {
        skip_ws();
        return pos < line.text.size() ? line.text[pos] : '\0';
    }
    bool try_take(const std::string& token) {
        skip_ws();
        if (line.text.compare(pos, token.size(), token) == 0) {
            // Keyword tokens must not swallow identifier prefixes.
            if (is_ident_start(token[0])) {
                std::size_t after = pos + token.size();
                if (after < line.text.size() && is_ident_char(line.text[after]))
                    return false;
            }
            pos += token.size();
            return true;
        }
        return false;
    }
    void expect(const std::string& token) {
        if (!try_take(token)) fail("expected '" + token + "'");
    }
    std::string ident() {
        skip_ws();
        if (pos >= line.text.size() || !is_ident_start(line.text[pos]))
            fail("expected an identifier");
        std::size_t s = pos;
        while (pos < line.text.size() && is_ident_char(line.text[pos])) ++pos;
        return line.text.substr(s, pos - s);
    }
    std::string quoted() {
        skip_ws();
        char q = line.text[pos];
        std::size_t s = ++pos;
        while (pos < line.text.size() && line.text[pos] != q) ++pos;
        if (pos >= line.text.size()) fail("unterminated string");
        std::string out = line.text.substr(s, pos - s);
        ++pos;
        return out;
    }
    std::int64_t integer() {
        skip_ws();
        std::size_t s = pos;
        if (pos < line.text.size() && (line.text[pos] == '-' || line.text[pos] == '+')) ++pos;
        std::size_t digits = pos;
        while (pos < line.text.size() && std::isdigit(static_cast<unsigned char>(line.text[pos])))
            ++pos;
        if (pos == digits) fail("expected an integer");
        return std::stoll(line.text.substr(s, pos - s));
    }
    bool at_integer() {
        skip_ws();
        if (pos >= line.text.size()) return false;
        char c = line.text[pos];
        if (std::isdigit(static_cast<unsigned char>(c))) return true;
        if ((c == '-' || c == '+') && pos + 1 < line.text.size() &&
            std::isdigit(static_cast<unsigned char>(line.text[pos + 1])))
            return true;
        return false;
    }
};

// Term in a rule context: lowercase words are variables, capitalized words
// and quoted strings are symbol constants, digits are integers.
Term parse_rule_term(Lexer& lx) {
    char c = lx.peek();
    if (c == '"' || c == '\'') return Term::constant(Value::symbol(lx.quoted()));
    if (lx.at_integer()) return Term::constant(Value::integer(lx.integer()));
    std::string word = lx.ident();
    if (std::islower(static_cast<unsigned char>(word[0]))) return Term::var(word);
    return Term::constant(Value::symbol(word));
}

// Ground value with a schema-declared kind: integer columns require an
// integer literal, symbol columns accept any bare word or quoted string.
Value parse_ground_value(Lexer& lx, ValueKind kind) {
    char c = lx.peek();
    if (c == '"' || c == '\'') {
        std::string s = lx.quoted();
        if (kind == ValueKind::Integer) lx.fail("integer value expected, got a string");
        return Value::symbol(s);
    }
    if (kind == ValueKind::Integer) {
        if (!lx.at_integer()) lx.fail("integer value expected");
        return Value::integer(lx.integer());
    }
    if (lx.at_integer()) {
        // Digits in a symbol column stay symbols.
        std::size_t s = lx.pos;
        lx.integer();
        return Value::symbol(lx.line.text.substr(s, lx.pos - s));
    }
    return Value::symbol(lx.ident());
}

AtomPattern parse_rule_atom(Lexer& lx, const Schema& schema) {
    std::string rel = lx.ident();
    if (!schema.find(rel)) lx.fail("unknown relation '" + rel + "'");
    AtomPattern atom;
    atom.relation = rel;
    lx.expect("(");
    if (!lx.try_take(")")) {
        do {
            atom.terms.push_back(parse_rule_term(lx));
        } while (lx.try_take(","));
        lx.expect(")");
    }
    if (atom.terms.size() != schema.at(rel).arity())
        lx.fail("atom over '" + rel + "' has arity " + std::to_string(atom.terms.size()) +
                ", schema says " + std::to_string(schema.at(rel).arity()));
    return atom;
}

DbTuple parse_ground_atom(Lexer& lx, const Schema& schema) {
    std::string rel = lx.ident();
    const RelationDef* def = schema.find(rel);
    if (!def) lx.fail("unknown relation '" + rel + "'");
    DbTuple t{rel, {}};
    lx.expect("(");
    std::size_t i = 0;
    if (!lx.try_take(")")) {
        do {
            if (i >= def->arity()) lx.fail("too many values for '" + rel + "'");
            t.values.push_back(parse_ground_value(lx, def->attributes[i].second));
            ++i;
        } while (lx.try_take(","));
        lx.expect(")");
    }
    if (i != def->arity())
        lx.fail("tuple over '" + rel + "' has arity " + std::to_string(i) +
                ", schema says " + std::to_string(def->arity()));
    return t;
}

CompareOp parse_op(Lexer& lx) {
    if (lx.try_take("<=")) return CompareOp::Le;
    if (lx.try_take(">=")) return CompareOp::Ge;
    if (lx.try_take("!=")) return CompareOp::Ne;
    if (lx.try_take("<")) return CompareOp::Lt;
    if (lx.try_take(">")) return CompareOp::Gt;
    if (lx.try_take("=")) return CompareOp::Eq;
    lx.fail("expected a comparison operator");
}

std::vector<Comparison> parse_where(Lexer& lx) {
    std::vector<Comparison> cmps;
    if (!lx.try_take("where")) return cmps;
    do {
        Comparison cmp;
        cmp.lhs = parse_rule_term(lx);
        cmp.op = parse_op(lx);
        cmp.rhs = parse_rule_term(lx);
        cmps.push_back(std::move(cmp));
    } while (lx.try_take(","));
    return cmps;
}

void expect_done(Lexer& lx) {
    if (!lx.eof()) lx.fail("unexpected trailing input");
}

}  // namespace

Schema parse_schema(const std::string& text) {
    Schema schema;
    for (const Line& line : logical_lines(text)) {
        Lexer lx(line, text.size());
        lx.expect("relation");
        RelationDef def;
        def.name = lx.ident();
        lx.expect("(");
        do {
            std::string attr = lx.ident();
            lx.expect(":");
            std::string kind = lx.ident();
            ValueKind vk;
            if (kind == "sym")
                vk = ValueKind::Symbol;
            else if (kind == "int")
                vk = ValueKind::Integer;
            else
                lx.fail("unknown kind '" + kind + "' (expected sym or int)");
            def.attributes.push_back({attr, vk});
        } while (lx.try_take(","));
        lx.expect(")");
        expect_done(lx);
        try {
            schema.add_relation(std::move(def));
        } catch (const SchemaError& e) {
            throw ParseError(e.what(), SourceSpan{line.number, 1, line.offset});
        }
    }
    return schema;
}

std::vector<DenialConstraint> parse_constraints(const std::string& text,
                                                const Schema& schema) {
    std::vector<DenialConstraint> out;
    for (const Line& line : logical_lines(text)) {
        Lexer lx(line, text.size());
        if (lx.try_take("deny")) {
            DenialConstraint dc;
            do {
                dc.atoms.push_back(parse_rule_atom(lx, schema));
            } while (lx.try_take(","));
            dc.comparisons = parse_where(lx);
            expect_done(lx);
            try {
                validate_constraint(schema, dc);
            } catch (const SchemaError& e) {
                throw ParseError(e.what(), SourceSpan{line.number, 1, line.offset});
            }
            out.push_back(std::move(dc));
        } else if (lx.try_take("fd")) {
            std::string rel = lx.ident();
            const RelationDef* def = schema.find(rel);
            if (!def) lx.fail("unknown relation '" + rel + "'");
            lx.expect(":");
            std::vector<int> lhs;
            do {
                std::string attr = lx.ident();
                int idx = def->attribute_index(attr);
                if (idx < 0) lx.fail("unknown attribute '" + attr + "' of '" + rel + "'");
                lhs.push_back(idx);
            } while (lx.try_take(","));
            lx.expect("->");
            std::vector<int> rhs;
            do {
                std::string attr = lx.ident();
                int idx = def->attribute_index(attr);
                if (idx < 0) lx.fail("unknown attribute '" + attr + "' of '" + rel + "'");
                if (std::find(lhs.begin(), lhs.end(), idx) != lhs.end())
                    lx.fail("attribute '" + attr + "' appears on both sides of the fd");
                rhs.push_back(idx);
            } while (lx.try_take(","));
            expect_done(lx);

            // One denial per dependent attribute: two atoms agreeing on the
            // left-hand positions with the dependent positions distinct.
            for (int dep : rhs) {
                DenialConstraint dc;
                AtomPattern a1{rel, {}}, a2{rel, {}};
                for (std::size_t i = 0; i < def->arity(); ++i) {
                    std::string suffix = std::to_string(i);
                    if (std::find(lhs.begin(), lhs.end(), static_cast<int>(i)) !=
                        lhs.end()) {
                        a1.terms.push_back(Term::var("x" + suffix));
                        a2.terms.push_back(Term::var("x" + suffix));
                    } else {
                        a1.terms.push_back(Term::var("y" + suffix));
                        a2.terms.push_back(Term::var("z" + suffix));
                    }
                }
                dc.atoms = {a1, a2};
                Comparison cmp;
                cmp.lhs = Term::var("y" + std::to_string(dep));
                cmp.op = CompareOp::Ne;
                cmp.rhs = Term::var("z" + std::to_string(dep));
                dc.comparisons.push_back(std::move(cmp));
                out.push_back(std::move(dc));
            }
        } else {
            lx.fail("expected 'deny' or 'fd'");
        }
    }
    return out;
}

Query parse_query(const std::string& text, const Schema& schema) {
    auto lines = logical_lines(text);
    if (lines.empty())
        throw ParseError("empty query", SourceSpan{1, 1, 0});
    if (lines.size() > 1)
        throw ParseError("a query is a single line",
                         SourceSpan{lines[1].number, 1, lines[1].offset});
    const Line& line = lines[0];
    Lexer lx(line, text.size());

    Query q;
    std::string head = lx.ident();
    lx.expect("(");
    std::vector<Term> head_terms;
    if (!lx.try_take(")")) {
        do {
            head_terms.push_back(parse_rule_term(lx));
        } while (lx.try_take(","));
        lx.expect(")");
    }

    if (lx.try_take(":=")) {
        q.head = head;
        for (const Term& t : head_terms) {
            if (!t.is_variable()) lx.fail("head arguments must be variables");
            if (std::find(q.free_variables.begin(), q.free_variables.end(),
                          t.var_name()) != q.free_variables.end())
                lx.fail("duplicate head variable '" + t.var_name() + "'");
            q.free_variables.push_back(t.var_name());
        }
        do {
            // `exists v1 v2 ... [not] Atom` — idents after `exists` up to
            // the literal (recognized by `not` or a following paren).
            std::set<std::string> marked;
            if (lx.try_take("exists")) {
                while (true) {
                    std::size_t save = lx.pos;
                    std::string word = lx.ident();
                    lx.skip_ws();
                    bool starts_atom = word == "not" ||
                                       (lx.pos < lx.line.text.size() &&
                                        lx.line.text[lx.pos] == '(');
                    if (starts_atom) {
                        lx.pos = save;
                        break;
                    }
                    marked.insert(word);
                }
            }
            bool negated = lx.try_take("not");
            AtomPattern atom = parse_rule_atom(lx, schema);
            q.literals.push_back({negated, std::move(atom)});
            q.existential_variables.insert(marked.begin(), marked.end());
        } while (lx.try_take(","));
        q.comparisons = parse_where(lx);
    } else {
        // Bare atom: a boolean query over that single literal.
        if (!schema.find(head)) lx.fail("unknown relation '" + head + "'");
        if (head_terms.size() != schema.at(head).arity())
            lx.fail("atom over '" + head + "' has wrong arity");
        q.head = "q";
        q.literals.push_back({false, AtomPattern{head, std::move(head_terms)}});
        q.comparisons = parse_where(lx);
    }
    expect_done(lx);

    // Normalize: every body variable outside the head is existential.
    std::set<std::string> declared = q.existential_variables;
    q.existential_variables.clear();
    for (const auto& lit : q.literals)
        for (const Term& t : lit.atom.terms)
            if (t.is_variable() &&
                std::find(q.free_variables.begin(), q.free_variables.end(),
                          t.var_name()) == q.free_variables.end())
                q.existential_variables.insert(t.var_name());
    for (const std::string& v : declared)
        if (!q.existential_variables.count(v))
            throw ParseError("exists-marked variable '" + v +
                                 "' is free or absent from the body",
                             SourceSpan{line.number, 1, line.offset});
    try {
        validate_query(schema, q);
    } catch (const SchemaError& e) {
        throw ParseError(e.what(), SourceSpan{line.number, 1, line.offset});
    }
    return q;
}

UpdateSequence parse_updates(const std::string& text, const Schema& schema) {
    UpdateSequence out;
    for (const Line& line : logical_lines(text)) {
        Lexer lx(line, text.size());
        UpdateOp op;
        if (lx.try_take("insert")) {
            op.kind = UpdateOp::Kind::Insert;
            op.target = parse_ground_atom(lx, schema);
        } else if (lx.try_take("delete")) {
            op.kind = UpdateOp::Kind::Delete;
            op.target = parse_ground_atom(lx, schema);
        } else if (lx.try_take("change")) {
            op.kind = UpdateOp::Kind::Change;
            op.target = parse_ground_atom(lx, schema);
            std::string attr = lx.ident();
            const RelationDef& def = schema.at(op.target.relation);
            int idx = def.attribute_index(attr);
            if (idx < 0)
                lx.fail("unknown attribute '" + attr + "' of '" + op.target.relation + "'");
            op.attribute = attr;
            lx.expect("=");
            op.new_value = parse_ground_value(lx, def.attributes[idx].second);
        } else {
            lx.fail("expected insert, delete or change");
        }
        expect_done(lx);
        out.ops.push_back(std::move(op));
    }
    return out;
}

WeightMap parse_weights(const std::string& text, const Schema& schema) {
    WeightMap out;
    for (const Line& line : logical_lines(text)) {
        Lexer lx(line, text.size());
        lx.expect("weight");
        DbTuple t = parse_ground_atom(lx, schema);
        lx.expect("=");
        std::int64_t w = lx.integer();
        if (w <= 0) lx.fail("weights must be positive");
        expect_done(lx);
        out[t] = w;
    }
    return out;
}

ASpec parse_aspec(const std::string& text, const Schema& schema) {
    // Split statements on semicolons, then treat each as a line.
    std::string normalized = text;
    std::replace(normalized.begin(), normalized.end(), ';', '\n');

    ASpec spec;
    std::set<std::pair<std::string, std::string>> fixable;
    bool rule_seen = false;
    for (const Line& line : logical_lines(normalized)) {
        Lexer lx(line, normalized.size());
        if (lx.try_take("fixable")) {
            std::string rel = lx.ident();
            lx.expect(".");
            std::string attr = lx.ident();
            const RelationDef* def = schema.find(rel);
            if (!def) lx.fail("unknown relation '" + rel + "'");
            if (def->attribute_index(attr) < 0)
                lx.fail("unknown attribute '" + attr + "' of '" + rel + "'");
            fixable.insert({rel, attr});
        } else if (lx.try_take("candidates")) {
            std::string rel = lx.ident();
            lx.expect(".");
            std::string attr = lx.ident();
            const RelationDef* def = schema.find(rel);
            if (!def) lx.fail("unknown relation '" + rel + "'");
            int idx = def->attribute_index(attr);
            if (idx < 0) lx.fail("unknown attribute '" + attr + "' of '" + rel + "'");
            lx.expect("=");
            lx.expect("{");
            std::vector<Value> values;
            do {
                values.push_back(parse_ground_value(lx, def->attributes[idx].second));
            } while (lx.try_take(","));
            lx.expect("}");
            if (!fixable.count({rel, attr}))
                lx.fail("candidates for an attribute not declared fixable");
            spec.candidates[{rel, attr}] = std::move(values);
        } else if (lx.try_take("rule")) {
            lx.expect("=");
            std::string r = lx.ident();
            if (r == "unit")
                spec.rule = ASpec::Rule::Unit;
            else if (r == "squared")
                spec.rule = ASpec::Rule::Squared;
            else
                lx.fail("rule must be unit or squared");
            rule_seen = true;
        } else {
            lx.fail("expected fixable, candidates or rule");
        }
        expect_done(lx);
    }
    (void)rule_seen;
    for (const auto& key : fixable)
        if (!spec.candidates.count(key))
            throw ParseError("fixable " + key.first + "." + key.second +
                                 " has no candidate set",
                             SourceSpan{1, 1, 0});
    return spec;
}

namespace {

std::vector<std::string> split_csv_row(const Line& line, std::size_t input_size) {
    std::vector<std::string> fields;
    const std::string& s = line.text;
    std::size_t pos = 0;
    while (true) {
        std::string field;
        // Leading whitespace before a quoted field is tolerated.
        std::size_t start = pos;
        while (start < s.size() && (s[start] == ' ' || s[start] == '\t')) ++start;
        if (start < s.size() && s[start] == '"') {
            pos = start + 1;
            while (true) {
                if (pos >= s.size())
                    throw ParseError("unterminated quoted field",
                                     SourceSpan{line.number, pos + 1,
                                                std::min(line.offset + pos,
                                                         input_size ? input_size - 1 : 0)});
                if (s[pos] == '"') {
                    if (pos + 1 < s.size() && s[pos + 1] == '"') {
                        field += '"';
                        pos += 2;
                    } else {
                        ++pos;
                        break;
                    }
                } else {
                    field += s[pos++];
                }
            }
            while (pos < s.size() && s[pos] != ',') ++pos;
        } else {
            std::size_t comma = s.find(',', pos);
            std::size_t end = comma == std::string::npos ? s.size() : comma;
            field = s.substr(pos, end - pos);
            // Trim unquoted fields.
            std::size_t b = field.find_first_not_of(" \t");
            std::size_t e = field.find_last_not_of(" \t");
            field = b == std::string::npos ? "" : field.substr(b, e - b + 1);
            pos = end;
        }
        fields.push_back(std::move(field));
        if (pos >= s.size()) break;
        ++pos;  // the comma
    }
    return fields;
}

void add_csv_row(std::set<DbTuple>& tuples, const RelationDef& def, const Line& line,
                 std::size_t input_size, const std::string& where) {
    auto fields = split_csv_row(line, input_size);
    if (fields.size() != def.arity())
        throw ParseError(where + ": row has " + std::to_string(fields.size()) +
                             " columns, relation '" + def.name + "' has " +
                             std::to_string(def.arity()),
                         SourceSpan{line.number, 1, line.offset});
    DbTuple t{def.name, {}};
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (def.attributes[i].second == ValueKind::Integer) {
            try {
                std::size_t used = 0;
                long long v = std::stoll(fields[i], &used);
                if (used != fields[i].size()) throw std::invalid_argument("trailing");
                t.values.push_back(Value::integer(v));
            } catch (...) {
                throw ParseError(where + ": '" + fields[i] +
                                     "' is not an integer (column " +
                                     std::to_string(i + 1) + ")",
                                 SourceSpan{line.number, 1, line.offset});
            }
        } else {
            t.values.push_back(Value::symbol(fields[i]));
        }
    }
    tuples.insert(std::move(t));
}

}  // namespace

DatabaseInstance parse_instance_dir(const std::filesystem::path& dir, SchemaPtr schema) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir))
        throw ParseError("instance directory '" + dir.string() + "' does not exist",
                         SourceSpan{1, 1, 0});
    std::set<DbTuple> tuples;
    for (const auto& [name, def] : schema->relations()) {
        fs::path file = dir / (name + ".csv");
        if (!fs::exists(file)) continue;  // empty relation
        std::ifstream in(file);
        std::stringstream ss;
        ss << in.rdbuf();
        std::string text = ss.str();
        for (const Line& line : logical_lines(text))
            add_csv_row(tuples, def, line, text.size(), file.filename().string());
    }
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.path().extension() != ".csv") continue;
        std::string stem = entry.path().stem().string();
        if (!schema->find(stem))
            throw ParseError("CSV file '" + entry.path().filename().string() +
                                 "' matches no schema relation",
                             SourceSpan{1, 1, 0});
    }
    return DatabaseInstance(std::move(schema), std::move(tuples));
}

DatabaseInstance parse_instance_text(const std::string& text, SchemaPtr schema) {
    std::set<DbTuple> tuples;
    const RelationDef* current = nullptr;
    for (const Line& line : logical_lines(text)) {
        if (line.text[line.text.find_first_not_of(" \t")] == '@') {
            Line stripped = line;
            std::size_t at = stripped.text.find('@');
            stripped.text = stripped.text.substr(at + 1);
            Lexer lx(stripped, text.size());
            lx.expect("relation");
            std::string name = lx.ident();
            expect_done(lx);
            current = schema->find(name);
            if (!current)
                throw ParseError("unknown relation '" + name + "'",
                                 SourceSpan{line.number, 1, line.offset});
            continue;
        }
        if (!current)
            throw ParseError("CSV row before any @relation header",
                             SourceSpan{line.number, 1, line.offset});
        add_csv_row(tuples, *current, line, text.size(), "inline instance");
    }
    return DatabaseInstance(std::move(schema), std::move(tuples));
}

SimpleGraph parse_graph(const std::string& text) {
    SimpleGraph g;
    auto lines = logical_lines(text);
    if (lines.empty()) return g;
    {
        std::istringstream ss(lines[0].text);
        std::string label;
        while (ss >> label) {
            try {
                g.add_vertex(label);
            } catch (const EvalError& e) {
                throw ParseError(e.what(), SourceSpan{lines[0].number, 1, lines[0].offset});
            }
        }
    }
    for (std::size_t i = 1; i < lines.size(); ++i) {
        std::istringstream ss(lines[i].text);
        std::string u, v, extra;
        if (!(ss >> u >> v) || (ss >> extra))
            throw ParseError("expected 'u v'", SourceSpan{lines[i].number, 1, lines[i].offset});
        try {
            g.add_edge(u, v);
        } catch (const EvalError& e) {
            throw ParseError(e.what(), SourceSpan{lines[i].number, 1, lines[i].offset});
        }
    }
    return g;
}

namespace {

bool plain_word(const std::string& s) {
    if (s.empty() || !is_ident_start(s[0])) return false;
    for (char c : s)
        if (!is_ident_char(c)) return false;
    return true;
}

// Constant in rule context: symbols are quoted unless capitalized (a bare
// lowercase word would read back as a variable).
std::string rule_const(const Value& v) {
    if (v.is_integer()) return std::to_string(v.as_integer());
    const std::string& s = v.as_symbol();
    if (plain_word(s) && std::isupper(static_cast<unsigned char>(s[0]))) return s;
    if (s.find('"') == std::string::npos) return "\"" + s + "\"";
    if (s.find('\'') == std::string::npos) return "'" + s + "'";
    throw EvalError("symbol mixes both quote characters and cannot be printed");
}

std::string rule_term(const Term& t) {
    return t.is_variable() ? t.var_name() : rule_const(t.const_value());
}

std::string rule_atom(const AtomPattern& a) {
    std::string out = a.relation + "(";
    for (std::size_t i = 0; i < a.terms.size(); ++i) {
        if (i) out += ", ";
        out += rule_term(a.terms[i]);
    }
    return out + ")";
}

std::string where_clause(const std::vector<Comparison>& cmps) {
    if (cmps.empty()) return "";
    std::string out = " where ";
    for (std::size_t i = 0; i < cmps.size(); ++i) {
        if (i) out += ", ";
        out += rule_term(cmps[i].lhs);
        out += " ";
        out += to_string(cmps[i].op);
        out += " ";
        out += rule_term(cmps[i].rhs);
    }
    return out;
}

// Ground value print: bare when it reads back identically, quoted otherwise.
std::string ground_value(const Value& v, ValueKind kind) {
    if (v.is_integer()) return std::to_string(v.as_integer());
    const std::string& s = v.as_symbol();
    if (kind == ValueKind::Symbol && plain_word(s)) return s;
    bool digits = !s.empty() && s.find_first_not_of("0123456789") == std::string::npos;
    if (kind == ValueKind::Symbol && digits) return s;
    if (s.find('"') == std::string::npos) return "\"" + s + "\"";
    if (s.find('\'') == std::string::npos) return "'" + s + "'";
    throw EvalError("symbol mixes both quote characters and cannot be printed");
}

std::string csv_field(const Value& v) {
    std::string s = v.to_string();
    if (s.find_first_of(",\"\r\n") == std::string::npos &&
        (s.empty() || (s.front() != ' ' && s.back() != ' ')))
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    return out + "\"";
}

}  // namespace

std::string print_schema(const Schema& schema) {
    std::string out;
    for (const auto& [name, def] : schema.relations()) {
        out += "relation " + name + "(";
        for (std::size_t i = 0; i < def.attributes.size(); ++i) {
            if (i) out += ", ";
            out += def.attributes[i].first;
            out += def.attributes[i].second == ValueKind::Symbol ? ": sym" : ": int";
        }
        out += ")\n";
    }
    return out;
}

std::string print_constraints(const std::vector<DenialConstraint>& ics) {
    std::string out;
    for (const auto& dc : ics) {
        out += "deny ";
        for (std::size_t i = 0; i < dc.atoms.size(); ++i) {
            if (i) out += ", ";
            out += rule_atom(dc.atoms[i]);
        }
        out += where_clause(dc.comparisons);
        out += "\n";
    }
    return out;
}

std::string print_query(const Query& q) {
    std::string out = q.head + "(";
    for (std::size_t i = 0; i < q.free_variables.size(); ++i) {
        if (i) out += ", ";
        out += q.free_variables[i];
    }
    out += ") := ";
    for (std::size_t i = 0; i < q.literals.size(); ++i) {
        if (i) out += ", ";
        if (q.literals[i].negated) out += "not ";
        out += rule_atom(q.literals[i].atom);
    }
    out += where_clause(q.comparisons);
    return out;
}

std::string print_updates(const UpdateSequence& u) {
    // Ground atoms need the schema for kind-aware printing; reconstruct a
    // minimal view from the tuples themselves (symbols print quoted when
    // they could read back as integers or variables would not arise here).
    std::string out;
    for (const auto& op : u.ops) {
        switch (op.kind) {
            case UpdateOp::Kind::Insert: out += "insert "; break;
            case UpdateOp::Kind::Delete: out += "delete "; break;
            case UpdateOp::Kind::Change: out += "change "; break;
        }
        out += op.target.relation + "(";
        for (std::size_t i = 0; i < op.target.values.size(); ++i) {
            if (i) out += ", ";
            out += ground_value(op.target.values[i], op.target.values[i].kind());
        }
        out += ")";
        if (op.kind == UpdateOp::Kind::Change) {
            out += " " + op.attribute + " = ";
            out += ground_value(*op.new_value, op.new_value->kind());
        }
        out += "\n";
    }
    return out;
}

std::string print_weights(const WeightMap& weights) {
    std::string out;
    for (const auto& [t, w] : weights) {
        out += "weight " + t.relation + "(";
        for (std::size_t i = 0; i < t.values.size(); ++i) {
            if (i) out += ", ";
            out += ground_value(t.values[i], t.values[i].kind());
        }
        out += ") = " + std::to_string(w) + "\n";
    }
    return out;
}

std::string print_aspec(const ASpec& spec) {
    std::string out;
    for (const auto& [key, values] : spec.candidates)
        out += "fixable " + key.first + "." + key.second + "\n";
    for (const auto& [key, values] : spec.candidates) {
        out += "candidates " + key.first + "." + key.second + " = {";
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) out += ", ";
            out += ground_value(values[i], values[i].kind());
        }
        out += "}\n";
    }
    out += std::string("rule = ") + (spec.rule == ASpec::Rule::Unit ? "unit" : "squared") +
           "\n";
    return out;
}

std::string print_instance_text(const DatabaseInstance& instance) {
    std::string out;
    std::string current;
    for (const DbTuple& t : instance.tuples()) {
        if (t.relation != current) {
            current = t.relation;
            out += "@relation " + current + "\n";
        }
        for (std::size_t i = 0; i < t.values.size(); ++i) {
            if (i) out += ",";
            out += csv_field(t.values[i]);
        }
        out += "\n";
    }
    return out;
}

std::string print_graph(const SimpleGraph& g) {
    std::string out;
    for (std::size_t i = 0; i < g.vertices().size(); ++i) {
        if (i) out += " ";
        out += g.vertices()[i];
    }
    out += "\n";
    for (const auto& [a, b] : g.edges())
        out += g.vertices()[a] + " " + g.vertices()[b] + "\n";
    return out;
}

std::string print_relation_csv(const DatabaseInstance& instance,
                               const std::string& relation) {
    instance.schema().at(relation);
    std::string out;
    for (const DbTuple& t : instance.tuples()) {
        if (t.relation != relation) continue;
        for (std::size_t i = 0; i < t.values.size(); ++i) {
            if (i) out += ",";
            out += csv_field(t.values[i]);
        }
        out += "\n";
    }
    return out;
}

std::string print_answer_row(const std::vector<Value>& row) {
    std::string out;
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out += ",";
        out += csv_field(row[i]);
    }
    return out;
}

}  // namespace cqa
