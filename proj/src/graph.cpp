#include "cqa/graph.hpp"

#include <algorithm>

#include "cqa/errors.hpp"

namespace cqa {

int SimpleGraph::add_vertex(const std::string& label) {
    if (index_of(label) >= 0)
        throw EvalError("duplicate vertex label '" + label + "'");
    labels_.push_back(label);
    return static_cast<int>(labels_.size()) - 1;
}

int SimpleGraph::index_of(const std::string& label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i)
        if (labels_[i] == label) return static_cast<int>(i);
    return -1;
}

void SimpleGraph::add_edge(const std::string& u, const std::string& v) {
    int a = index_of(u), b = index_of(v);
    if (a < 0) throw EvalError("unknown vertex '" + u + "'");
    if (b < 0) throw EvalError("unknown vertex '" + v + "'");
    if (a == b) throw EvalError("self-loop on '" + u + "'");
    edges_.insert({std::min(a, b), std::max(a, b)});
}

bool SimpleGraph::has_edge(const std::string& u, const std::string& v) const {
    int a = index_of(u), b = index_of(v);
    if (a < 0 || b < 0 || a == b) return false;
    return edges_.count({std::min(a, b), std::max(a, b)}) > 0;
}

std::vector<int> SimpleGraph::neighbors(int v) const {
    std::vector<int> out;
    for (const auto& [a, b] : edges_) {
        if (a == v) out.push_back(b);
        if (b == v) out.push_back(a);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string SimpleGraph::fresh_label() const {
    long long next = 0;
    for (const auto& l : labels_) {
        if (l.rfind("__aux/", 0) == 0) {
            try {
                next = std::max(next, std::stoll(l.substr(6)) + 1);
            } catch (...) {
            }
        }
    }
    return "__aux/" + std::to_string(next);
}

Hypergraph SimpleGraph::to_hypergraph() const {
    Hypergraph h;
    h.n = static_cast<int>(labels_.size());
    for (const auto& [a, b] : edges_) h.edges.push_back({a, b});
    return h;
}

SimpleGraph complement(const SimpleGraph& g) {
    SimpleGraph out;
    for (const auto& l : g.vertices()) out.add_vertex(l);
    int n = static_cast<int>(g.vertices().size());
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (!g.edges().count({a, b}))
                out.add_edge(g.vertices()[a], g.vertices()[b]);
    return out;
}

std::string to_dot(const SimpleGraph& g) {
    std::string out = "graph g {\n";
    for (std::size_t i = 0; i < g.vertices().size(); ++i)
        out += "  v" + std::to_string(i) + " [label=\"" + g.vertices()[i] + "\"];\n";
    for (const auto& [a, b] : g.edges())
        out += "  v" + std::to_string(a) + " -- v" + std::to_string(b) + ";\n";
    out += "}\n";
    return out;
}

}  // namespace cqa
