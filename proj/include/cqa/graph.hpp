#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cqa/hypergraph.hpp"

namespace cqa {

// Undirected simple graph over labelled vertices. No self-loops; vertex
// order is insertion order and determines the id space.
class SimpleGraph {
public:
    int add_vertex(const std::string& label);  // throws EvalError on duplicate
    bool has_vertex(const std::string& label) const { return index_of(label) >= 0; }
    int index_of(const std::string& label) const;
    void add_edge(const std::string& u, const std::string& v);
    bool has_edge(const std::string& u, const std::string& v) const;

    const std::vector<std::string>& vertices() const { return labels_; }
    // Index pairs with first < second.
    const std::set<std::pair<int, int>>& edges() const { return edges_; }
    std::size_t vertex_count() const { return labels_.size(); }

    std::vector<int> neighbors(int v) const;

    // A label of the form "__aux/N" not present in the graph.
    std::string fresh_label() const;

    // Size-2 hyperedges; vertex ids match this graph's indices.
    Hypergraph to_hypergraph() const;

    friend bool operator==(const SimpleGraph& a, const SimpleGraph& b) {
        return a.labels_ == b.labels_ && a.edges_ == b.edges_;
    }

private:
    std::vector<std::string> labels_;
    std::set<std::pair<int, int>> edges_;
};

// Complement on the same vertices.
SimpleGraph complement(const SimpleGraph& g);

std::string to_dot(const SimpleGraph& g);

}  // namespace cqa
