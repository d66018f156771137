#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cqa/graph.hpp"

namespace cqa {

// Membership-preserving graph extensions. Each construction adds O(1)
// fresh vertices except block_graph (O(k)) and modk_graph (O(n^2/k)).

// Adds a twin v' connected exactly to the neighbors of v. Afterwards:
// v lies in some maximum independent set of g iff v lies in every maximum
// independent set of the result iff the maximum sizes differ by one.
SimpleGraph twin_extension(const SimpleGraph& g, const std::string& v);

// Hangs a rhombus from v (two fresh vertices adjacent to v, a third
// adjacent to those two). v lies in all maximum independent sets of g iff
// v lies in some maximum independent set of the result.
SimpleGraph rhombus_extension(const SimpleGraph& g, const std::string& v);

// Appends a two-vertex path v - s - s'. v lies in every maximum independent
// set of g iff s lies in no maximum independent set of the result.
std::pair<SimpleGraph, std::string> reduce_certain_to_certain_neg(
    const SimpleGraph& g, const std::string& v);

// Twin construction, answering the complementary question: v lies in no
// maximum independent set of g iff some maximum independent set of the
// result excludes v. (The pendant-vertex variant decides membership of v in
// *every* maximum independent set instead, so it cannot serve this step.)
std::pair<SimpleGraph, std::string> reduce_certain_neg_to_possible_neg(
    const SimpleGraph& g, const std::string& v);

// Adds s1 adjacent to v, s2 and s3 adjacent to s1, and s adjacent to s2 and
// s3. Some maximum independent set of g excludes v iff s lies in some
// maximum independent set of the result.
std::pair<SimpleGraph, std::string> reduce_possible_neg_to_possible_pos(
    const SimpleGraph& g, const std::string& v);

// Block gadget: two copies of g, stables of size k and k+1, and apex
// vertices t and b. t lies in all maximum independent sets iff the maximum
// independent set of g has size exactly k.
struct BlockGraph {
    SimpleGraph graph;
    std::string t;
    std::string b;
    std::vector<std::string> copy1;     // labels of the first copy of g
    std::vector<std::string> copy2;
    std::vector<std::string> stable_k;  // k mutually non-adjacent vertices
    std::vector<std::string> stable_k1;
};

BlockGraph block_graph(const SimpleGraph& g, int k);

// Mod-k composition: blocks B_m over the complement of g for every multiple
// m of k up to n, joined through a fresh apex t_g. t_g lies in all maximum
// independent sets iff the maximum clique size of g is NOT divisible by k.
std::pair<SimpleGraph, std::string> modk_graph(const SimpleGraph& g, int k);

}  // namespace cqa
