#include "cqa/graph_lab.hpp"

#include <algorithm>

#include "cqa/errors.hpp"

namespace cqa {

namespace {

int require_vertex(const SimpleGraph& g, const std::string& v) {
    int i = g.index_of(v);
    if (i < 0) throw EvalError("unknown vertex '" + v + "'");
    return i;
}

}  // namespace

SimpleGraph twin_extension(const SimpleGraph& g, const std::string& v) {
    int vi = require_vertex(g, v);
    SimpleGraph out = g;
    std::string twin = out.fresh_label();
    out.add_vertex(twin);
    for (int u : g.neighbors(vi)) out.add_edge(twin, g.vertices()[u]);
    return out;
}

SimpleGraph rhombus_extension(const SimpleGraph& g, const std::string& v) {
    require_vertex(g, v);
    SimpleGraph out = g;
    std::string w1 = out.fresh_label();
    out.add_vertex(w1);
    std::string w2 = out.fresh_label();
    out.add_vertex(w2);
    std::string w3 = out.fresh_label();
    out.add_vertex(w3);
    out.add_edge(v, w1);
    out.add_edge(v, w2);
    out.add_edge(w1, w3);
    out.add_edge(w2, w3);
    return out;
}

std::pair<SimpleGraph, std::string> reduce_certain_to_certain_neg(
    const SimpleGraph& g, const std::string& v) {
    require_vertex(g, v);
    SimpleGraph out = g;
    std::string s = out.fresh_label();
    out.add_vertex(s);
    std::string s2 = out.fresh_label();
    out.add_vertex(s2);
    out.add_edge(v, s);
    out.add_edge(s, s2);
    return {std::move(out), s};
}

std::pair<SimpleGraph, std::string> reduce_certain_neg_to_possible_neg(
    const SimpleGraph& g, const std::string& v) {
    // Twinning v swaps the certain question for the possible one on the
    // same vertex: v in no maximum independent set of g iff some maximum
    // independent set of the twin graph excludes v.
    return {twin_extension(g, v), v};
}

std::pair<SimpleGraph, std::string> reduce_possible_neg_to_possible_pos(
    const SimpleGraph& g, const std::string& v) {
    require_vertex(g, v);
    SimpleGraph out = g;
    std::string s1 = out.fresh_label();
    out.add_vertex(s1);
    std::string s2 = out.fresh_label();
    out.add_vertex(s2);
    std::string s3 = out.fresh_label();
    out.add_vertex(s3);
    std::string s = out.fresh_label();
    out.add_vertex(s);
    out.add_edge(s1, v);
    out.add_edge(s2, s1);
    out.add_edge(s3, s1);
    out.add_edge(s, s2);
    out.add_edge(s, s3);
    return {std::move(out), s};
}

BlockGraph block_graph(const SimpleGraph& g, int k) {
    if (k < 1) throw EvalError("block gadget requires k >= 1");
    BlockGraph block;
    SimpleGraph& out = block.graph;

    for (const auto& l : g.vertices()) {
        block.copy1.push_back("g1/" + l);
        out.add_vertex(block.copy1.back());
    }
    for (const auto& l : g.vertices()) {
        block.copy2.push_back("g2/" + l);
        out.add_vertex(block.copy2.back());
    }
    for (int i = 1; i <= k; ++i) {
        block.stable_k.push_back("ik/" + std::to_string(i));
        out.add_vertex(block.stable_k.back());
    }
    for (int i = 1; i <= k + 1; ++i) {
        block.stable_k1.push_back("ik1/" + std::to_string(i));
        out.add_vertex(block.stable_k1.back());
    }
    block.t = "t";
    block.b = "b";
    out.add_vertex(block.t);
    out.add_vertex(block.b);

    for (const auto& [a, b] : g.edges()) {
        out.add_edge(block.copy1[a], block.copy1[b]);
        out.add_edge(block.copy2[a], block.copy2[b]);
    }
    for (const auto& c : block.copy1)
        for (const auto& s : block.stable_k) out.add_edge(c, s);
    for (const auto& c : block.copy2)
        for (const auto& s : block.stable_k1) out.add_edge(c, s);
    for (const auto& s : block.stable_k) out.add_edge(s, block.t);
    for (const auto& s : block.stable_k1) out.add_edge(s, block.b);
    out.add_edge(block.t, block.b);
    return block;
}

std::pair<SimpleGraph, std::string> modk_graph(const SimpleGraph& g, int k) {
    int n = static_cast<int>(g.vertex_count());
    if (k < 1 || k > n)
        throw EvalError("modk gadget requires 1 <= k <= vertex count");

    SimpleGraph comp = complement(g);
    SimpleGraph out;
    std::string apex = "t_g";
    out.add_vertex(apex);

    for (int m = k; m <= n; m += k) {
        BlockGraph block = block_graph(comp, m);
        std::string prefix = "m" + std::to_string(m) + "/";
        for (const auto& l : block.graph.vertices()) out.add_vertex(prefix + l);
        for (const auto& [a, b] : block.graph.edges())
            out.add_edge(prefix + block.graph.vertices()[a],
                         prefix + block.graph.vertices()[b]);
        out.add_edge(apex, prefix + block.t);
    }
    return {std::move(out), apex};
}

}  // namespace cqa
