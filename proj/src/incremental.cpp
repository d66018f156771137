#include "cqa/incremental.hpp"

#include <algorithm>
#include <set>

#include "cqa/errors.hpp"
#include "matcher.hpp"
#include "query_util.hpp"

namespace cqa {

DatabaseInstance apply_updates(const DatabaseInstance& d, const UpdateSequence& u) {
    DatabaseInstance out = d;
    for (const auto& op : u.ops) {
        switch (op.kind) {
            case UpdateOp::Kind::Insert:
                out.insert(op.target);
                break;
            case UpdateOp::Kind::Delete:
                out.erase(op.target);
                break;
            case UpdateOp::Kind::Change: {
                if (!out.contains(op.target))
                    throw EvalError("change target absent: " + to_string(op.target));
                const RelationDef& rel = d.schema().at(op.target.relation);
                int pos = rel.attribute_index(op.attribute);
                if (pos < 0)
                    throw SchemaError("unknown attribute '" + op.attribute +
                                      "' of relation '" + op.target.relation + "'");
                DbTuple changed = op.target;
                changed.values[pos] = *op.new_value;
                out.erase(op.target);
                out.insert(changed);
                break;
            }
        }
    }
    return out;
}

UpdateSequence minimized_updates(const UpdateSequence& u, const Schema& schema) {
    UpdateSequence out;
    for (const auto& op : u.ops) {
        switch (op.kind) {
            case UpdateOp::Kind::Insert:
                out.ops.push_back(op);
                break;
            case UpdateOp::Kind::Delete:
                break;  // deletions never violate a denial
            case UpdateOp::Kind::Change: {
                const RelationDef& rel = schema.at(op.target.relation);
                int pos = rel.attribute_index(op.attribute);
                if (pos < 0)
                    throw SchemaError("unknown attribute '" + op.attribute +
                                      "' of relation '" + op.target.relation + "'");
                UpdateOp del;
                del.kind = UpdateOp::Kind::Delete;
                del.target = op.target;
                UpdateOp ins;
                ins.kind = UpdateOp::Kind::Insert;
                ins.target = op.target;
                ins.target.values[pos] = *op.new_value;
                out.ops.push_back(std::move(del));
                out.ops.push_back(std::move(ins));
                break;
            }
        }
    }
    return out;
}

int update_parameter_bound(const UpdateSequence& u, const Schema& schema) {
    int m = static_cast<int>(u.size());
    if (u.has_change()) m *= static_cast<int>(schema.max_arity());
    return m;
}

namespace {

struct BoundedHitting {
    const Hypergraph& h;
    std::vector<char> chosen;
    std::vector<int> edge_hits;

    explicit BoundedHitting(const Hypergraph& hh)
        : h(hh), chosen(hh.n, 0), edge_hits(hh.edges.size(), 0) {}

    void choose(int v, int delta) {
        chosen[v] = delta > 0;
        for (std::size_t e = 0; e < h.edges.size(); ++e)
            for (int u : h.edges[e])
                if (u == v) edge_hits[e] += delta;
    }

    int first_unhit() const {
        for (std::size_t e = 0; e < h.edges.size(); ++e)
            if (edge_hits[e] == 0) return static_cast<int>(e);
        return -1;
    }

    // Vertex forced by the 2-edge degree rule: more unhit size-2 edges than
    // remaining budget can only be covered by taking the vertex itself.
    int forced_vertex(int k) const {
        std::vector<int> deg2(h.n, 0);
        for (std::size_t e = 0; e < h.edges.size(); ++e) {
            if (edge_hits[e] != 0 || h.edges[e].size() != 2) continue;
            for (int v : h.edges[e]) ++deg2[v];
        }
        for (int v = 0; v < h.n; ++v)
            if (!chosen[v] && deg2[v] > k) return v;
        return -1;
    }

    bool rec(int k, std::vector<int>& picked) {
        // Forced choices: singleton edges and the degree rule.
        std::vector<int> forced;
        while (true) {
            int e = first_unhit();
            if (e < 0) break;
            int f = -1;
            if (h.edges[e].size() == 1)
                f = h.edges[e][0];
            else
                f = forced_vertex(k);
            if (f < 0) break;
            if (k == 0) {
                for (int v : forced) {
                    choose(v, -1);
                    picked.pop_back();
                }
                return false;
            }
            choose(f, +1);
            picked.push_back(f);
            forced.push_back(f);
            --k;
        }
        auto rollback = [&]() {
            for (auto it = forced.rbegin(); it != forced.rend(); ++it) {
                choose(*it, -1);
                picked.pop_back();
            }
        };
        int e = first_unhit();
        if (e < 0) return true;
        if (k == 0) {
            rollback();
            return false;
        }
        for (int v : h.edges[e]) {
            if (chosen[v]) continue;
            choose(v, +1);
            picked.push_back(v);
            if (rec(k - 1, picked)) return true;
            picked.pop_back();
            choose(v, -1);
        }
        rollback();
        return false;
    }
};

}  // namespace

std::optional<VertexSet> hitting_set_bounded(const Hypergraph& h, int k) {
    if (k < 0) return std::nullopt;
    BoundedHitting search(h);
    std::vector<int> picked;
    if (!search.rec(k, picked)) return std::nullopt;
    std::sort(picked.begin(), picked.end());
    return picked;
}

ConflictHypergraph incremental_hypergraph(const DatabaseInstance& d,
                                          const DatabaseInstance& ud,
                                          const std::vector<DenialConstraint>& ic) {
    ConflictHypergraph ch;
    ch.tuples.assign(ud.tuples().begin(), ud.tuples().end());
    ch.hyper.n = static_cast<int>(ch.tuples.size());

    std::vector<DbTuple> fresh;
    for (const DbTuple& t : ud.tuples())
        if (!d.contains(t)) fresh.push_back(t);

    detail::MatchContext ctx(ud);
    std::vector<std::vector<int>> candidates;
    for (const auto& dc : ic) {
        for (std::size_t ai = 0; ai < dc.atoms.size(); ++ai) {
            auto cc = detail::compile_conjunction(ud.schema(), dc.atoms, dc.comparisons,
                                                  static_cast<int>(ai));
            for (const DbTuple& t : fresh) {
                if (t.relation != dc.atoms[ai].relation) continue;
                int anchor = ctx.id_of(t);
                detail::for_each_match(
                    ctx, cc,
                    [&](const std::vector<int>& atom_tuples, const std::vector<Value>&) {
                        std::vector<int> edge(atom_tuples);
                        std::sort(edge.begin(), edge.end());
                        edge.erase(std::unique(edge.begin(), edge.end()), edge.end());
                        candidates.push_back(std::move(edge));
                        return true;
                    },
                    anchor);
            }
        }
    }
    ch.hyper.edges = minimalize_edges(std::move(candidates));
    return ch;
}

namespace {

void require_consistent_start(const DatabaseInstance& d,
                              const std::vector<DenialConstraint>& ic) {
    if (!satisfies(d, ic))
        throw EvalError("incremental algorithms require a consistent initial instance");
}

long long binomial_cap(long long n, long long k, long long cap) {
    long long r = 1;
    for (long long i = 0; i < k; ++i) {
        r = r * (n - i) / (i + 1);
        if (r > cap) return cap + 1;
    }
    return r;
}

// Minimum hitting set size via the bounded search, trying k upward;
// returns -1 when no hitting set exists (an edge went empty).
int min_hs_by_search(const Hypergraph& h, int max_k) {
    for (const auto& e : h.edges)
        if (e.empty()) return -1;
    for (int k = 0; k <= max_k; ++k)
        if (hitting_set_bounded(h, k)) return k;
    return -1;
}

int support_size(const Hypergraph& h) {
    std::set<int> s;
    for (const auto& e : h.edges) s.insert(e.begin(), e.end());
    return static_cast<int>(s.size());
}

}  // namespace

RepairSet incremental_c_repairs_naive(const DatabaseInstance& d,
                                      const UpdateSequence& u,
                                      const std::vector<DenialConstraint>& ic,
                                      long long max_candidates) {
    require_consistent_start(d, ic);
    DatabaseInstance ud = apply_updates(d, u);
    ConflictHypergraph ch = incremental_hypergraph(d, ud, ic);

    std::set<int> support_set;
    for (const auto& e : ch.hyper.edges) support_set.insert(e.begin(), e.end());
    std::vector<int> support(support_set.begin(), support_set.end());

    int k = 0;
    for (int v : support)
        if (!d.contains(ch.tuples[v])) ++k;

    RepairSet out;
    out.semantics = RepairSemantics::C;
    std::vector<DbTuple> all(ch.tuples);

    std::vector<int> combo;
    std::vector<std::vector<int>> hits;  // deletion sets that restore consistency
    auto hits_all_edges = [&](const std::vector<int>& del) {
        for (const auto& e : ch.hyper.edges) {
            bool hit = false;
            for (int v : e)
                if (std::binary_search(del.begin(), del.end(), v)) {
                    hit = true;
                    break;
                }
            if (!hit) return false;
        }
        return true;
    };

    for (int s = 0; s <= k; ++s) {
        if (binomial_cap(static_cast<long long>(support.size()), s, max_candidates) >
            max_candidates)
            throw CapExceeded(CapExceeded::Kind::SearchSpace,
                              "naive deletion-set search exceeds the candidate cap");
        hits.clear();
        // Enumerate support subsets of size s in lexicographic order.
        std::vector<int> idx(s);
        for (int i = 0; i < s; ++i) idx[i] = i;
        while (true) {
            std::vector<int> del;
            del.reserve(s);
            for (int i : idx) del.push_back(support[i]);
            if (hits_all_edges(del)) hits.push_back(del);
            if (s == 0) break;
            int i = s - 1;
            while (i >= 0 && idx[i] == static_cast<int>(support.size()) - s + i) --i;
            if (i < 0) break;
            ++idx[i];
            for (int j = i + 1; j < s; ++j) idx[j] = idx[j - 1] + 1;
        }
        if (!hits.empty()) {
            out.distance = s;
            for (const auto& del : hits) {
                std::set<DbTuple> kept(ud.tuples());
                for (int v : del) kept.erase(all[v]);
                out.repairs.push_back(ud.with_tuples(std::move(kept)));
            }
            return out;
        }
    }
    // Unreachable: deleting every fresh conflicting tuple always succeeds.
    out.distance = 0;
    out.repairs.push_back(ud);
    return out;
}

std::pair<int, std::vector<DbTuple>> fpt_min_deletions(
    const DatabaseInstance& d, const UpdateSequence& u,
    const std::vector<DenialConstraint>& ic) {
    require_consistent_start(d, ic);
    DatabaseInstance ud = apply_updates(d, u);
    ConflictHypergraph ch = incremental_hypergraph(d, ud, ic);
    if (ch.hyper.edges.empty()) return {0, {}};

    int hi = update_parameter_bound(u, d.schema());
    int lo = 0;
    while (lo < hi) {
        int mid = lo + (hi - lo) / 2;
        if (hitting_set_bounded(ch.hyper, mid))
            hi = mid;
        else
            lo = mid + 1;
    }
    int opt = lo;

    // Lexicographically least witness among the optimal hitting sets.
    std::set<int> support_set;
    for (const auto& e : ch.hyper.edges) support_set.insert(e.begin(), e.end());
    std::vector<int> witness;
    std::vector<char> in_witness(ch.hyper.n, 0);
    for (int v : support_set) {
        if (static_cast<int>(witness.size()) == opt) break;
        Hypergraph reduced;
        reduced.n = ch.hyper.n;
        for (const auto& e : ch.hyper.edges) {
            bool hit = false;
            for (int x : e)
                if (x == v || in_witness[x]) {
                    hit = true;
                    break;
                }
            if (!hit) reduced.edges.push_back(e);
        }
        int budget = opt - static_cast<int>(witness.size()) - 1;
        if (hitting_set_bounded(reduced, budget)) {
            witness.push_back(v);
            in_witness[v] = 1;
        }
    }
    std::vector<DbTuple> tuples;
    tuples.reserve(witness.size());
    for (int v : witness) tuples.push_back(ch.tuples[v]);
    return {opt, tuples};
}

bool incremental_certain(const Query& q, const DatabaseInstance& d,
                         const UpdateSequence& u,
                         const std::vector<DenialConstraint>& ic) {
    require_consistent_start(d, ic);
    auto literals = detail::ground_literals(q, d.schema(), false);
    DatabaseInstance ud = apply_updates(d, u);
    ConflictHypergraph ch = incremental_hypergraph(d, ud, ic);

    int max_k = support_size(ch.hyper);
    int opt = min_hs_by_search(ch.hyper, max_k);

    for (const auto& [negated, tuple] : literals) {
        int v = ch.vertex_of(tuple);
        if (!negated) {
            if (!ud.contains(tuple)) return false;
            // Certain iff the vertex lies in every maximum independent set:
            // dropping its edges must not lower the minimum hitting set.
            Hypergraph dropped;
            dropped.n = ch.hyper.n;
            for (const auto& e : ch.hyper.edges)
                if (std::find(e.begin(), e.end(), v) == e.end())
                    dropped.edges.push_back(e);
            if (min_hs_by_search(dropped, max_k) != opt) return false;
        } else {
            if (!ud.contains(tuple)) continue;
            // Certain iff the vertex lies in no maximum independent set:
            // forbidding it from the hitting set must cost extra.
            Hypergraph banned;
            banned.n = ch.hyper.n;
            bool infeasible = false;
            for (const auto& e : ch.hyper.edges) {
                std::vector<int> reduced;
                for (int x : e)
                    if (x != v) reduced.push_back(x);
                if (reduced.empty()) {
                    infeasible = true;
                    break;
                }
                banned.edges.push_back(std::move(reduced));
            }
            if (infeasible) continue;  // v is in every hitting set
            int alt = min_hs_by_search(banned, max_k);
            if (alt >= 0 && alt <= opt) return false;
        }
    }
    return true;
}

ControlWrapped control_wrap(const DatabaseInstance& d,
                            const std::vector<DenialConstraint>& ic,
                            const Query& q) {
    const Schema& schema = d.schema();
    validate_query(schema, q);
    for (const auto& lit : q.literals)
        if (lit.negated)
            throw EvalError("control wrapping requires a positive conjunctive query");
    for (const auto& dc : ic) validate_constraint(schema, dc);

    const std::string controller = "Controler";
    if (schema.find(controller))
        throw SchemaError("relation name '" + controller + "' already in use");

    // One control attribute per constraint, attached to its first atom's
    // relation.
    std::map<std::string, std::vector<int>> picked;
    for (std::size_t i = 0; i < ic.size(); ++i)
        picked[ic[i].atoms[0].relation].push_back(static_cast<int>(i));

    Schema wrapped;
    for (const auto& [name, def] : schema.relations()) {
        RelationDef nd = def;
        auto it = picked.find(name);
        if (it != picked.end())
            for (int ci : it->second)
                nd.attributes.push_back({"__ctl" + std::to_string(ci), ValueKind::Integer});
        wrapped.add_relation(std::move(nd));
    }
    wrapped.add_relation(RelationDef{controller, {{"val", ValueKind::Integer}}});
    SchemaPtr sp = std::make_shared<const Schema>(std::move(wrapped));

    std::set<DbTuple> padded;
    for (const DbTuple& t : d.tuples()) {
        DbTuple nt = t;
        auto it = picked.find(t.relation);
        if (it != picked.end())
            for (std::size_t j = 0; j < it->second.size(); ++j)
                nt.values.push_back(Value::integer(1));
        padded.insert(std::move(nt));
    }

    ControlWrapped out(sp, DatabaseInstance(sp, std::move(padded)));

    for (std::size_t i = 0; i < ic.size(); ++i) {
        DenialConstraint nd;
        const std::string ctl_var = "__contr";
        int fresh = 0;
        for (std::size_t ai = 0; ai < ic[i].atoms.size(); ++ai) {
            AtomPattern na = ic[i].atoms[ai];
            auto it = picked.find(na.relation);
            if (it != picked.end()) {
                for (int cj : it->second) {
                    if (cj == static_cast<int>(i) && ai == 0)
                        na.terms.push_back(Term::var(ctl_var));
                    else
                        na.terms.push_back(Term::var("__w" + std::to_string(fresh++)));
                }
            }
            nd.atoms.push_back(std::move(na));
        }
        nd.atoms.push_back(AtomPattern{controller, {Term::var(ctl_var)}});
        nd.comparisons = ic[i].comparisons;
        out.constraints.push_back(std::move(nd));
    }

    Query nq = q;
    nq.literals.clear();
    int fresh = 0;
    for (const auto& lit : q.literals) {
        AtomPattern na = lit.atom;
        auto it = picked.find(na.relation);
        if (it != picked.end()) {
            for (std::size_t j = 0; j < it->second.size(); ++j) {
                std::string y = "__y" + std::to_string(fresh++);
                na.terms.push_back(Term::var(y));
                nq.existential_variables.insert(y);
            }
        }
        nq.literals.push_back(QueryLiteral{false, std::move(na)});
    }
    out.query = std::move(nq);

    UpdateOp arm;
    arm.kind = UpdateOp::Kind::Insert;
    arm.target = DbTuple{controller, {Value::integer(1)}};
    out.update.ops.push_back(std::move(arm));
    return out;
}

}  // namespace cqa
