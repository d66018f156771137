#include "cqa/hypergraph.hpp"

#include <algorithm>
#include <set>

#include "cqa/errors.hpp"
#include "matcher.hpp"

namespace cqa {

namespace {

using Clock = std::chrono::steady_clock;

struct Deadline {
    Clock::time_point end;
    long long counter = 0;

    explicit Deadline(std::chrono::milliseconds budget) : end(Clock::now() + budget) {}

    void tick() {
        if ((++counter & 1023) == 0 && Clock::now() > end)
            throw CapExceeded(CapExceeded::Kind::TimeBudget,
                              "exact solver exceeded its time budget");
    }
};

void check_vertex_cap(const Hypergraph& h, const SolverLimits& limits,
                      const char* what) {
    if (static_cast<std::size_t>(h.n) > limits.max_vertices)
        throw CapExceeded(CapExceeded::Kind::Vertices,
                          std::string(what) + ": " + std::to_string(h.n) +
                              " vertices exceed the cap of " +
                              std::to_string(limits.max_vertices));
}

enum : signed char { UND = 0, IN = 1, OUT = 2 };

// Shared state machine for the independent-set searches. Maintains per-edge
// undecided/out counters, per-vertex count of unhit incident edges, and a
// trail for backtracking. Invariant after propagation: every undecided
// vertex lies in at least one unhit edge, and every unhit edge has >= 2
// undecided vertices.
class IsState {
public:
    IsState(const Hypergraph& h, Deadline& dl)
        : h_(h), dl_(dl), state_(h.n, UND), active_deg_(h.n, 0),
          edge_und_(h.edges.size()), edge_out_(h.edges.size(), 0),
          vert_edges_(h.n) {
        for (std::size_t e = 0; e < h.edges.size(); ++e) {
            edge_und_[e] = static_cast<int>(h.edges[e].size());
            for (int v : h.edges[e]) {
                vert_edges_[v].push_back(static_cast<int>(e));
                ++active_deg_[v];
            }
        }
    }

    const Hypergraph& graph() const { return h_; }
    signed char state(int v) const { return state_[v]; }
    int active_deg(int v) const { return active_deg_[v]; }
    int in_count() const { return in_count_; }
    std::size_t mark() const { return trail_.size(); }

    // Applies the assignment and all consequences. Returns false on
    // conflict (some edge fully included); the trail still records all
    // changes, so the caller must undo to its mark.
    bool assign(int v, signed char s) {
        pending_.clear();
        pending_.push_back({v, s});
        std::size_t head = 0;
        while (head < pending_.size()) {
            auto [u, us] = pending_[head++];
            if (state_[u] != UND) {
                if (state_[u] != us) return false;
                continue;
            }
            if (!set_state(u, us)) return false;
        }
        return true;
    }

    // Root-level propagation: singleton edges and isolated vertices.
    bool propagate_root() {
        for (std::size_t e = 0; e < h_.edges.size(); ++e)
            if (h_.edges[e].size() == 1 && state_[h_.edges[e][0]] == UND)
                if (!assign(h_.edges[e][0], OUT)) return false;
        for (int v = 0; v < h_.n; ++v)
            if (state_[v] == UND && active_deg_[v] == 0)
                if (!assign(v, IN)) return false;
        return true;
    }

    void undo(std::size_t mark) {
        while (trail_.size() > mark) {
            int v = trail_.back();
            trail_.pop_back();
            signed char s = state_[v];
            if (s == IN) {
                --in_count_;
                for (int e : vert_edges_[v]) ++edge_und_[e];
            } else {
                for (int e : vert_edges_[v]) {
                    ++edge_und_[e];
                    if (--edge_out_[e] == 0)
                        for (int u : h_.edges[e])
                            if (state_[u] == UND) ++active_deg_[u];
                }
            }
            state_[v] = UND;
        }
    }

    // Undecided vertices connected to `v` through unhit edges (including v).
    std::vector<int> component_of(int v, std::vector<int>& visit_stamp, int stamp) const {
        std::vector<int> comp;
        std::vector<int> stack{v};
        visit_stamp[v] = stamp;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            comp.push_back(u);
            for (int e : vert_edges_[u]) {
                if (edge_out_[e] > 0) continue;
                for (int w : h_.edges[e])
                    if (state_[w] == UND && visit_stamp[w] != stamp) {
                        visit_stamp[w] = stamp;
                        stack.push_back(w);
                    }
            }
        }
        std::sort(comp.begin(), comp.end());
        return comp;
    }

    // Lower bound on the number of exclusions still required among `scope`:
    // greedily collects unhit edges with pairwise disjoint undecided parts.
    int forced_out_lower_bound(const std::vector<int>& scope) {
        ++stamp_;
        int count = 0;
        for (int v : scope) {
            for (int e : vert_edges_[v]) {
                if (edge_out_[e] > 0 || seen_edge_stamp_[e] == stamp_) continue;
                seen_edge_stamp_[e] = stamp_;
                bool disjoint = true;
                for (int u : h_.edges[e])
                    if (state_[u] == UND && mark_stamp_[u] == stamp_) {
                        disjoint = false;
                        break;
                    }
                if (disjoint) {
                    ++count;
                    for (int u : h_.edges[e])
                        if (state_[u] == UND) mark_stamp_[u] = stamp_;
                }
            }
        }
        return count;
    }

    void init_stamps() {
        mark_stamp_.assign(h_.n, 0);
        seen_edge_stamp_.assign(h_.edges.size(), 0);
        stamp_ = 0;
    }

    Deadline& deadline() { return dl_; }

    // Greedy independent set size within `scope` (vertices ascending by
    // (active degree, id)); a valid lower bound used to seed the search.
    int greedy_lb(const std::vector<int>& scope) {
        std::vector<int> order(scope);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            if (active_deg_[a] != active_deg_[b]) return active_deg_[a] < active_deg_[b];
            return a < b;
        });
        std::set<int> taken;
        int size = 0;
        for (int v : order) {
            bool ok = true;
            for (int e : vert_edges_[v]) {
                if (edge_out_[e] > 0) continue;
                int open = 0;  // members neither IN nor tentatively taken
                for (int u : h_.edges[e])
                    if (u != v && state_[u] == UND && !taken.count(u)) ++open;
                if (open == 0) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                taken.insert(v);
                ++size;
            }
        }
        return size;
    }

private:
    bool set_state(int v, signed char s) {
        state_[v] = s;
        trail_.push_back(v);
        if (s == IN) {
            ++in_count_;
            for (int e : vert_edges_[v]) {
                --edge_und_[e];
                if (edge_out_[e] == 0) {
                    if (edge_und_[e] == 0) return false;  // edge fully included
                    if (edge_und_[e] == 1) {
                        for (int u : h_.edges[e])
                            if (state_[u] == UND) {
                                pending_.push_back({u, OUT});
                                break;
                            }
                    }
                }
            }
        } else {
            for (int e : vert_edges_[v]) {
                --edge_und_[e];
                if (++edge_out_[e] == 1) {
                    // Edge newly hit: members lose an active edge.
                    for (int u : h_.edges[e])
                        if (state_[u] == UND && --active_deg_[u] == 0)
                            pending_.push_back({u, IN});
                }
            }
        }
        return true;
    }

    const Hypergraph& h_;
    Deadline& dl_;
    std::vector<signed char> state_;
    std::vector<int> active_deg_;
    std::vector<int> edge_und_;
    std::vector<int> edge_out_;
    std::vector<std::vector<int>> vert_edges_;
    std::vector<int> trail_;
    std::vector<std::pair<int, signed char>> pending_;
    int in_count_ = 0;

    std::vector<int> mark_stamp_;
    std::vector<int> seen_edge_stamp_;
    int stamp_ = 0;
};

// Exact maximum-size search over the current undecided vertices.
class MaxSolver {
public:
    MaxSolver(IsState& st) : st_(st) { st_.init_stamps(); visit_stamp_.assign(st.graph().n, 0); }

    // Max number of IN assignments achievable among all undecided vertices.
    int solve_all() {
        std::vector<std::vector<int>> comps = components();
        int total = 0;
        for (const auto& c : comps) total += solve_component(c);
        return total;
    }

private:
    std::vector<std::vector<int>> components() {
        ++comp_stamp_;
        std::vector<std::vector<int>> comps;
        for (int v = 0; v < st_.graph().n; ++v)
            if (st_.state(v) == UND && visit_stamp_[v] != comp_stamp_)
                comps.push_back(st_.component_of(v, visit_stamp_, comp_stamp_));
        return comps;
    }

    // Branch vertex: an articulation point of the component's primal graph
    // when the component is large (splitting pays off), otherwise the vertex
    // of maximum active degree.
    int pick_branch(const std::vector<int>& comp) {
        if (comp.size() > 40) {
            int art = find_articulation(comp);
            if (art >= 0) return art;
        }
        int best = comp[0];
        for (int v : comp)
            if (st_.active_deg(v) > st_.active_deg(best)) best = v;
        return best;
    }

    int find_articulation(const std::vector<int>& comp);

    int solve_component(const std::vector<int>& comp) {
        int best = st_.greedy_lb(comp);
        explore(comp, 0, best);
        return best;
    }

    void explore(const std::vector<int>& comp, int gained, int& best) {
        st_.deadline().tick();
        int und = 0;
        for (int v : comp)
            if (st_.state(v) == UND) ++und;
        if (und == 0) {
            best = std::max(best, gained);
            return;
        }
        std::vector<int> live;
        live.reserve(und);
        for (int v : comp)
            if (st_.state(v) == UND) live.push_back(v);

        int ub = gained + und - st_.forced_out_lower_bound(live);
        if (ub <= best) return;

        // Component may have split after earlier assignments.
        ++comp_stamp_;
        std::vector<std::vector<int>> sub;
        for (int v : live)
            if (visit_stamp_[v] != comp_stamp_)
                sub.push_back(st_.component_of(v, visit_stamp_, comp_stamp_));
        if (sub.size() > 1) {
            int total = gained;
            for (const auto& c : sub) total += solve_component(c);
            best = std::max(best, total);
            return;
        }

        int v = pick_branch(sub[0]);
        for (signed char s : {IN, OUT}) {
            std::size_t ck = st_.mark();
            int before = st_.in_count();
            if (st_.assign(v, s))
                explore(sub[0], gained + (st_.in_count() - before), best);
            st_.undo(ck);
        }
    }

    IsState& st_;
    std::vector<int> visit_stamp_;
    int comp_stamp_ = 0;
};

// Articulation points on the primal graph (vertices adjacent when they share
// an unhit edge); returns the one with maximum degree, or -1.
int MaxSolver::find_articulation(const std::vector<int>& comp) {
    const Hypergraph& h = st_.graph();
    std::map<int, int> local;  // vertex -> local index
    for (std::size_t i = 0; i < comp.size(); ++i) local[comp[i]] = static_cast<int>(i);
    std::vector<std::set<int>> adj(comp.size());
    for (std::size_t e = 0; e < h.edges.size(); ++e) {
        bool unhit = true;
        for (int v : h.edges[e])
            if (st_.state(v) == OUT) {
                unhit = false;
                break;
            }
        if (!unhit) continue;
        std::vector<int> members;
        for (int v : h.edges[e])
            if (st_.state(v) == UND && local.count(v)) members.push_back(local[v]);
        for (std::size_t i = 0; i < members.size(); ++i)
            for (std::size_t j = i + 1; j < members.size(); ++j) {
                adj[members[i]].insert(members[j]);
                adj[members[j]].insert(members[i]);
            }
    }
    int n = static_cast<int>(comp.size());
    std::vector<int> disc(n, -1), low(n, 0), parent(n, -1);
    std::vector<char> art(n, 0);
    int timer = 0;
    // Iterative DFS to avoid deep recursion.
    for (int root = 0; root < n; ++root) {
        if (disc[root] != -1) continue;
        std::vector<std::pair<int, std::set<int>::iterator>> stack;
        disc[root] = low[root] = timer++;
        stack.push_back({root, adj[root].begin()});
        int root_children = 0;
        while (!stack.empty()) {
            auto& [u, it] = stack.back();
            if (it != adj[u].end()) {
                int w = *it;
                ++it;
                if (disc[w] == -1) {
                    parent[w] = u;
                    if (u == root) ++root_children;
                    disc[w] = low[w] = timer++;
                    stack.push_back({w, adj[w].begin()});
                } else if (w != parent[u]) {
                    low[u] = std::min(low[u], disc[w]);
                }
            } else {
                int done = u;
                stack.pop_back();
                if (!stack.empty()) {
                    int p = stack.back().first;
                    low[p] = std::min(low[p], low[done]);
                    if (p != root && low[done] >= disc[p]) art[p] = 1;
                }
            }
        }
        if (root_children > 1) art[root] = 1;
    }
    int pick = -1;
    for (int i = 0; i < n; ++i)
        if (art[i] && (pick < 0 || adj[i].size() > adj[pick].size() ||
                       (adj[i].size() == adj[pick].size() && comp[i] < comp[pick])))
            pick = i;
    return pick < 0 ? -1 : comp[pick];
}

std::optional<int> solve_max(const Hypergraph& h, Deadline& dl,
                             const std::vector<int>& force_in,
                             const std::vector<int>& force_out) {
    IsState st(h, dl);
    for (int v : force_out)
        if (!st.assign(v, OUT)) return std::nullopt;
    for (int v : force_in)
        if (!st.assign(v, IN)) return std::nullopt;
    if (!st.propagate_root()) return std::nullopt;
    MaxSolver solver(st);
    return st.in_count() + solver.solve_all();
}

}  // namespace

std::vector<std::vector<int>> minimalize_edges(std::vector<std::vector<int>> edges) {
    for (auto& e : edges) {
        std::sort(e.begin(), e.end());
        e.erase(std::unique(e.begin(), e.end()), e.end());
    }
    std::sort(edges.begin(), edges.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    std::vector<std::vector<int>> kept;
    std::map<int, std::vector<int>> incident;  // vertex -> kept edge ids
    for (const auto& e : edges) {
        bool dominated = false;
        std::set<int> candidates;
        for (int v : e) {
            auto it = incident.find(v);
            if (it != incident.end())
                candidates.insert(it->second.begin(), it->second.end());
        }
        for (int k : candidates) {
            if (std::includes(e.begin(), e.end(), kept[k].begin(), kept[k].end())) {
                dominated = true;
                break;
            }
        }
        if (!dominated) {
            int id = static_cast<int>(kept.size());
            kept.push_back(e);
            for (int v : e) incident[v].push_back(id);
        }
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

bool is_independent(const Hypergraph& h, const VertexSet& vs) {
    std::vector<char> in(h.n, 0);
    for (int v : vs) {
        if (v < 0 || v >= h.n) throw EvalError("vertex id out of range");
        in[v] = 1;
    }
    for (const auto& e : h.edges) {
        bool contained = true;
        for (int v : e)
            if (!in[v]) {
                contained = false;
                break;
            }
        if (contained) return false;
    }
    return true;
}

int max_is_size(const Hypergraph& h, const SolverLimits& limits) {
    check_vertex_cap(h, limits, "max_is_size");
    Deadline dl(limits.time_budget);
    auto r = solve_max(h, dl, {}, {});
    return *r;  // no forced assignments: always feasible
}

bool in_some_max_is(const Hypergraph& h, int v, const SolverLimits& limits) {
    check_vertex_cap(h, limits, "in_some_max_is");
    if (v < 0 || v >= h.n) throw EvalError("vertex id out of range");
    Deadline dl(limits.time_budget);
    int whole = *solve_max(h, dl, {}, {});
    auto with_v = solve_max(h, dl, {v}, {});
    return with_v && *with_v == whole;
}

bool in_all_max_is(const Hypergraph& h, int v, const SolverLimits& limits) {
    check_vertex_cap(h, limits, "in_all_max_is");
    if (v < 0 || v >= h.n) throw EvalError("vertex id out of range");
    Deadline dl(limits.time_budget);
    int whole = *solve_max(h, dl, {}, {});
    auto without = solve_max(h, dl, {}, {v});
    return *without < whole;
}

namespace {

// Enumerates all independent sets of exactly `target` vertices (the known
// maximum), or all maximal independent sets when `target < 0`.
class EnumSolver {
public:
    EnumSolver(IsState& st, int target, std::vector<VertexSet>& out)
        : st_(st), target_(target), out_(out) {
        st_.init_stamps();
    }

    void run() { rec(); }

private:
    void emit() {
        VertexSet s;
        for (int v = 0; v < st_.graph().n; ++v)
            if (st_.state(v) == IN) s.push_back(v);
        if (target_ >= 0) {
            if (static_cast<int>(s.size()) == target_) out_.push_back(std::move(s));
            return;
        }
        // Maximality: every excluded vertex must be blocked by an edge whose
        // other members are all included.
        const Hypergraph& h = st_.graph();
        std::vector<char> in(h.n, 0);
        for (int v : s) in[v] = 1;
        for (int v = 0; v < h.n; ++v) {
            if (st_.state(v) != OUT) continue;
            bool blocked = false;
            for (const auto& e : h.edges) {
                bool members_in = false;
                if (std::find(e.begin(), e.end(), v) != e.end()) {
                    members_in = true;
                    for (int u : e)
                        if (u != v && !in[u]) {
                            members_in = false;
                            break;
                        }
                }
                if (members_in) {
                    blocked = true;
                    break;
                }
            }
            if (!blocked) return;
        }
        out_.push_back(std::move(s));
    }

    void rec() {
        st_.deadline().tick();
        std::vector<int> live;
        for (int v = 0; v < st_.graph().n; ++v)
            if (st_.state(v) == UND) live.push_back(v);
        if (live.empty()) {
            emit();
            return;
        }
        if (target_ >= 0) {
            int reachable = st_.in_count() + static_cast<int>(live.size()) -
                            st_.forced_out_lower_bound(live);
            if (reachable < target_) return;
        }
        int v = live[0];
        for (int u : live)
            if (st_.active_deg(u) > st_.active_deg(v)) v = u;
        for (signed char s : {IN, OUT}) {
            std::size_t ck = st_.mark();
            if (st_.assign(v, s)) rec();
            st_.undo(ck);
        }
    }

    IsState& st_;
    int target_;
    std::vector<VertexSet>& out_;
};

}  // namespace

std::vector<VertexSet> all_maximum_is(const Hypergraph& h, const SolverLimits& limits) {
    check_vertex_cap(h, limits, "all_maximum_is");
    Deadline dl(limits.time_budget);
    int target = *solve_max(h, dl, {}, {});
    std::vector<VertexSet> out;
    IsState st(h, dl);
    if (st.propagate_root()) {
        EnumSolver es(st, target, out);
        es.run();
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<VertexSet> all_maximal_is(const Hypergraph& h, const SolverLimits& limits) {
    check_vertex_cap(h, limits, "all_maximal_is");
    Deadline dl(limits.time_budget);
    std::vector<VertexSet> out;
    IsState st(h, dl);
    // Maximal enumeration shares the feasibility propagation; singleton
    // edges and isolated vertices are forced the same way.
    if (st.propagate_root()) {
        EnumSolver es(st, -1, out);
        es.run();
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

struct HittingSearch {
    const Hypergraph& h;
    Deadline& dl;
    const std::vector<long long>* weights;  // null for cardinality
    std::vector<int> edge_hits;
    std::vector<char> chosen;
    long long best = -1;
    std::vector<VertexSet>* all_best = nullptr;

    HittingSearch(const Hypergraph& hh, Deadline& d, const std::vector<long long>* w)
        : h(hh), dl(d), weights(w), edge_hits(hh.edges.size(), 0), chosen(hh.n, 0) {}

    long long vweight(int v) const { return weights ? (*weights)[v] : 1; }

    int first_unhit() const {
        for (std::size_t e = 0; e < h.edges.size(); ++e)
            if (edge_hits[e] == 0) return static_cast<int>(e);
        return -1;
    }

    void choose(int v, int delta) {
        chosen[v] = delta > 0;
        for (std::size_t e = 0; e < h.edges.size(); ++e)
            for (int u : h.edges[e])
                if (u == v) edge_hits[e] += delta;
    }

    void rec(long long cost, std::vector<int>& current) {
        dl.tick();
        if (best >= 0 && (all_best ? cost > best : cost >= best)) return;
        int e = first_unhit();
        if (e < 0) {
            if (best < 0 || cost < best) {
                best = cost;
                if (all_best) all_best->clear();
            }
            if (all_best && cost == best) {
                VertexSet s(current);
                std::sort(s.begin(), s.end());
                if (std::find(all_best->begin(), all_best->end(), s) == all_best->end())
                    all_best->push_back(std::move(s));
            }
            return;
        }
        for (int v : h.edges[e]) {
            if (chosen[v]) continue;
            choose(v, +1);
            current.push_back(v);
            rec(cost + vweight(v), current);
            current.pop_back();
            choose(v, -1);
        }
    }
};

}  // namespace

int min_hitting_set_size(const Hypergraph& h, const SolverLimits& limits) {
    check_vertex_cap(h, limits, "min_hitting_set_size");
    Deadline dl(limits.time_budget);
    HittingSearch hs(h, dl, nullptr);
    std::vector<int> cur;
    hs.rec(0, cur);
    return hs.best < 0 ? 0 : static_cast<int>(hs.best);
}

std::pair<long long, std::vector<VertexSet>> min_weight_hitting_sets(
    const Hypergraph& h, const std::vector<long long>& weights,
    const SolverLimits& limits) {
    check_vertex_cap(h, limits, "min_weight_hitting_sets");
    if (static_cast<int>(weights.size()) != h.n)
        throw EvalError("weight vector size mismatch");
    for (long long w : weights)
        if (w <= 0) throw EvalError("weights must be positive");
    Deadline dl(limits.time_budget);
    std::vector<VertexSet> sets;
    HittingSearch hs(h, dl, &weights);
    hs.all_best = &sets;
    std::vector<int> cur;
    hs.rec(0, cur);
    std::sort(sets.begin(), sets.end());
    if (hs.best < 0) return {0, {VertexSet{}}};
    return {hs.best, sets};
}

int ConflictHypergraph::vertex_of(const DbTuple& t) const {
    auto it = std::lower_bound(tuples.begin(), tuples.end(), t);
    if (it == tuples.end() || !(*it == t)) return -1;
    return static_cast<int>(it - tuples.begin());
}

ConflictHypergraph build_hypergraph(const DatabaseInstance& instance,
                                    const std::vector<DenialConstraint>& ic) {
    ConflictHypergraph ch;
    ch.tuples.assign(instance.tuples().begin(), instance.tuples().end());
    ch.hyper.n = static_cast<int>(ch.tuples.size());

    detail::MatchContext ctx(instance);
    std::vector<std::vector<int>> candidates;
    for (const auto& dc : ic) {
        auto cc = detail::compile_conjunction(instance.schema(), dc.atoms, dc.comparisons);
        detail::for_each_match(ctx, cc,
                               [&](const std::vector<int>& atom_tuples,
                                   const std::vector<Value>&) {
                                   std::vector<int> edge(atom_tuples);
                                   std::sort(edge.begin(), edge.end());
                                   edge.erase(std::unique(edge.begin(), edge.end()),
                                              edge.end());
                                   candidates.push_back(std::move(edge));
                                   return true;
                               });
    }
    ch.hyper.edges = minimalize_edges(std::move(candidates));
    return ch;
}

std::string to_dot(const ConflictHypergraph& ch) {
    std::string out = "graph conflicts {\n";
    for (std::size_t i = 0; i < ch.tuples.size(); ++i)
        out += "  v" + std::to_string(i) + " [label=\"" + to_string(ch.tuples[i]) + "\"];\n";
    int star = 0;
    for (const auto& e : ch.hyper.edges) {
        if (e.size() == 1) {
            out += "  v" + std::to_string(e[0]) + " -- v" + std::to_string(e[0]) + ";\n";
        } else if (e.size() == 2) {
            out += "  v" + std::to_string(e[0]) + " -- v" + std::to_string(e[1]) + ";\n";
        } else {
            std::string hub = "e" + std::to_string(star++);
            out += "  " + hub + " [shape=point, label=\"\"];\n";
            for (int v : e) out += "  " + hub + " -- v" + std::to_string(v) + ";\n";
        }
    }
    out += "}\n";
    return out;
}

}  // namespace cqa
