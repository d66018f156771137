#include "cqa/repairs.hpp"

#include <algorithm>
#include <set>

#include "cqa/errors.hpp"
#include "matcher.hpp"

namespace cqa {

const char* to_string(RepairSemantics s) {
    switch (s) {
        case RepairSemantics::S: return "s";
        case RepairSemantics::C: return "c";
        case RepairSemantics::WeightedC: return "wc";
        case RepairSemantics::ABounded: return "a";
    }
    return "?";
}

namespace {

DatabaseInstance instance_from_kept(const DatabaseInstance& original,
                                    const std::vector<DbTuple>& tuples,
                                    const VertexSet& kept) {
    std::set<DbTuple> out;
    for (int v : kept) out.insert(tuples[v]);
    return original.with_tuples(std::move(out));
}

// Orders repairs by their deleted-tuple sets (as sorted vertex id lists).
std::vector<DatabaseInstance> repairs_by_deleted(
    const DatabaseInstance& original, const std::vector<DbTuple>& tuples,
    std::vector<VertexSet> kept_sets) {
    int n = static_cast<int>(tuples.size());
    std::vector<std::pair<VertexSet, const VertexSet*>> order;
    order.reserve(kept_sets.size());
    for (const auto& kept : kept_sets) {
        VertexSet deleted;
        std::size_t pos = 0;
        for (int v = 0; v < n; ++v) {
            if (pos < kept.size() && kept[pos] == v)
                ++pos;
            else
                deleted.push_back(v);
        }
        order.push_back({std::move(deleted), &kept});
    }
    std::sort(order.begin(), order.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<DatabaseInstance> out;
    out.reserve(order.size());
    for (const auto& [deleted, kept] : order) {
        (void)deleted;
        out.push_back(instance_from_kept(original, tuples, *kept));
    }
    return out;
}

}  // namespace

RepairSet s_repairs(const DatabaseInstance& instance,
                    const std::vector<DenialConstraint>& ic,
                    const SolverLimits& limits) {
    ConflictHypergraph ch = build_hypergraph(instance, ic);
    RepairSet out;
    out.semantics = RepairSemantics::S;
    out.repairs = repairs_by_deleted(instance, ch.tuples,
                                     all_maximal_is(ch.hyper, limits));
    return out;
}

RepairSet c_repairs(const DatabaseInstance& instance,
                    const std::vector<DenialConstraint>& ic,
                    const SolverLimits& limits) {
    if (instance.size() > limits.max_vertices)
        throw CapExceeded(CapExceeded::Kind::Vertices,
                          "c_repairs: instance exceeds the vertex cap");
    ConflictHypergraph ch = build_hypergraph(instance, ic);
    RepairSet out;
    out.semantics = RepairSemantics::C;
    auto sets = all_maximum_is(ch.hyper, limits);
    out.distance = sets.empty() ? 0
                                : static_cast<long long>(ch.tuples.size()) -
                                      static_cast<long long>(sets[0].size());
    out.repairs = repairs_by_deleted(instance, ch.tuples, std::move(sets));
    return out;
}

long long c_repair_distance(const DatabaseInstance& instance,
                            const std::vector<DenialConstraint>& ic,
                            const SolverLimits& limits) {
    if (instance.size() > limits.max_vertices)
        throw CapExceeded(CapExceeded::Kind::Vertices,
                          "c_repair_distance: instance exceeds the vertex cap");
    ConflictHypergraph ch = build_hypergraph(instance, ic);
    return min_hitting_set_size(ch.hyper, limits);
}

bool is_c_repair(const DatabaseInstance& d, const DatabaseInstance& d_prime,
                 const std::vector<DenialConstraint>& ic,
                 const SolverLimits& limits) {
    for (const DbTuple& t : d_prime.tuples())
        if (!d.contains(t))
            throw EvalError("repair candidate is not a deletion-only subset");
    if (!satisfies(d_prime, ic)) return false;
    long long deleted =
        static_cast<long long>(d.size()) - static_cast<long long>(d_prime.size());
    return deleted == c_repair_distance(d, ic, limits);
}

RepairSet weighted_c_repairs(const DatabaseInstance& instance,
                             const std::vector<DenialConstraint>& ic,
                             const WeightMap& weights,
                             const SolverLimits& limits) {
    ConflictHypergraph ch = build_hypergraph(instance, ic);
    std::vector<long long> w;
    w.reserve(ch.tuples.size());
    for (const DbTuple& t : ch.tuples) {
        auto it = weights.find(t);
        if (it == weights.end())
            throw EvalError("missing weight for tuple " + to_string(t));
        if (it->second <= 0)
            throw EvalError("non-positive weight for tuple " + to_string(t));
        w.push_back(it->second);
    }
    auto [best, hitting_sets] = min_weight_hitting_sets(ch.hyper, w, limits);

    RepairSet out;
    out.semantics = RepairSemantics::WeightedC;
    out.distance = best;
    std::vector<VertexSet> kept_sets;
    int n = static_cast<int>(ch.tuples.size());
    for (const auto& hs : hitting_sets) {
        VertexSet kept;
        std::size_t pos = 0;
        for (int v = 0; v < n; ++v) {
            if (pos < hs.size() && hs[pos] == v)
                ++pos;
            else
                kept.push_back(v);
        }
        kept_sets.push_back(std::move(kept));
    }
    out.repairs = repairs_by_deleted(instance, ch.tuples, std::move(kept_sets));
    return out;
}

namespace {

struct FixableCell {
    const DbTuple* tuple;
    int position;
    std::vector<Value> choices;  // candidates plus the original value
};

std::vector<FixableCell> collect_cells(const DatabaseInstance& instance,
                                       const ASpec& spec) {
    std::vector<FixableCell> cells;
    for (const DbTuple& t : instance.tuples()) {
        const RelationDef& rel = instance.schema().at(t.relation);
        for (const auto& [key, candidates] : spec.candidates) {
            if (key.first != t.relation) continue;
            int pos = rel.attribute_index(key.second);
            if (pos < 0)
                throw SchemaError("fixable attribute '" + key.second +
                                  "' not in relation '" + key.first + "'");
            if (candidates.empty())
                throw EvalError("empty candidate set for " + key.first + "." + key.second);
            FixableCell cell{&t, pos, candidates};
            for (const Value& v : cell.choices)
                if (v.kind() != rel.attributes[pos].second)
                    throw SchemaError("candidate value kind mismatch for " + key.first +
                                      "." + key.second);
            if (std::find(cell.choices.begin(), cell.choices.end(), t.values[pos]) ==
                cell.choices.end())
                cell.choices.push_back(t.values[pos]);
            std::sort(cell.choices.begin(), cell.choices.end());
            cells.push_back(std::move(cell));
        }
    }
    return cells;
}

long long change_cost(const ASpec& spec, const Value& from, const Value& to) {
    if (from == to) return 0;
    if (spec.rule == ASpec::Rule::Unit) return 1;
    if (!from.is_integer() || !to.is_integer())
        throw EvalError("squared-difference weights require integer attributes");
    long long d = from.as_integer() - to.as_integer();
    return d * d;
}

struct AssignmentSearch {
    const DatabaseInstance& base;
    const std::vector<DenialConstraint>& ic;
    const ASpec& spec;
    std::vector<FixableCell>& cells;

    long long best = -1;
    std::set<DatabaseInstance> optima;
    std::map<const DbTuple*, DbTuple> working;

    void run() {
        for (const DbTuple& t : base.tuples())
            working.emplace(&t, t);
        rec(0, 0);
    }

    void rec(std::size_t idx, long long cost) {
        if (best >= 0 && cost > best) return;
        if (idx == cells.size()) {
            std::set<DbTuple> tuples;
            for (const auto& [orig, t] : working) {
                (void)orig;
                tuples.insert(t);
            }
            DatabaseInstance candidate = base.with_tuples(std::move(tuples));
            if (!satisfies(candidate, ic)) return;
            if (best < 0 || cost < best) {
                best = cost;
                optima.clear();
            }
            if (cost == best) optima.insert(std::move(candidate));
            return;
        }
        const FixableCell& cell = cells[idx];
        DbTuple& t = working.at(cell.tuple);
        Value saved = t.values[cell.position];
        for (const Value& choice : cell.choices) {
            t.values[cell.position] = choice;
            rec(idx + 1,
                cost + change_cost(spec, cell.tuple->values[cell.position], choice));
            t.values[cell.position] = saved;
        }
    }
};

}  // namespace

RepairSet a_repairs_bounded(const DatabaseInstance& instance,
                            const std::vector<DenialConstraint>& ic,
                            const ASpec& spec) {
    std::vector<FixableCell> cells = collect_cells(instance, spec);
    long long combinations = 1;
    for (const auto& cell : cells) {
        combinations *= static_cast<long long>(cell.choices.size());
        if (combinations > spec.max_combinations)
            throw CapExceeded(CapExceeded::Kind::SearchSpace,
                              "attribute-repair search space exceeds the cap");
    }
    AssignmentSearch search{instance, ic, spec, cells, -1, {}, {}};
    search.run();

    RepairSet out;
    out.semantics = RepairSemantics::ABounded;
    if (search.best >= 0) {
        out.distance = search.best;
        out.repairs.assign(search.optima.begin(), search.optima.end());
    }
    return out;
}

namespace {

bool subset_consistent(const DatabaseInstance& inst,
                       const std::vector<detail::CompiledConjunction>& ccs) {
    detail::MatchContext ctx(inst);
    for (const auto& cc : ccs) {
        bool violated = detail::for_each_match(
            ctx, cc, [](const std::vector<int>&, const std::vector<Value>&) { return false; });
        if (violated) return false;
    }
    return true;
}

}  // namespace

RepairSet brute_force_repairs(const DatabaseInstance& instance,
                              const std::vector<DenialConstraint>& ic,
                              const SemanticsSpec& semantics) {
    if (semantics.kind == RepairSemantics::ABounded) {
        if (!semantics.aspec)
            throw EvalError("A-bounded semantics requires an attribute spec");
        // Exhaustive assignment enumeration, then definitional minimality:
        // keep the consistent candidates of minimum aggregate.
        std::vector<FixableCell> cells = collect_cells(instance, *semantics.aspec);
        long long combos = 1;
        for (const auto& c : cells) {
            combos *= static_cast<long long>(c.choices.size());
            if (combos > semantics.aspec->max_combinations)
                throw CapExceeded(CapExceeded::Kind::SearchSpace,
                                  "brute-force assignment space exceeds the cap");
        }
        std::vector<std::pair<long long, DatabaseInstance>> consistent;
        std::vector<std::size_t> pick(cells.size(), 0);
        while (true) {
            std::map<const DbTuple*, DbTuple> working;
            for (const DbTuple& t : instance.tuples()) working.emplace(&t, t);
            long long cost = 0;
            for (std::size_t i = 0; i < cells.size(); ++i) {
                DbTuple& t = working.at(cells[i].tuple);
                const Value& choice = cells[i].choices[pick[i]];
                cost += change_cost(*semantics.aspec,
                                    cells[i].tuple->values[cells[i].position], choice);
                t.values[cells[i].position] = choice;
            }
            std::set<DbTuple> tuples;
            for (const auto& [o, t] : working) {
                (void)o;
                tuples.insert(t);
            }
            DatabaseInstance cand = instance.with_tuples(std::move(tuples));
            if (satisfies(cand, ic)) consistent.push_back({cost, std::move(cand)});

            std::size_t i = 0;
            for (; i < cells.size(); ++i) {
                if (++pick[i] < cells[i].choices.size()) break;
                pick[i] = 0;
            }
            if (i == cells.size()) break;
            if (cells.empty()) break;
        }
        RepairSet out;
        out.semantics = RepairSemantics::ABounded;
        if (!consistent.empty()) {
            long long best = consistent[0].first;
            for (const auto& [cost, inst] : consistent) best = std::min(best, cost);
            std::set<DatabaseInstance> optima;
            for (auto& [cost, inst] : consistent)
                if (cost == best) optima.insert(std::move(inst));
            out.distance = best;
            out.repairs.assign(optima.begin(), optima.end());
        }
        return out;
    }

    if (instance.size() > 16)
        throw CapExceeded(CapExceeded::Kind::SearchSpace,
                          "brute-force subset enumeration is capped at 16 tuples");
    std::vector<DbTuple> tuples(instance.tuples().begin(), instance.tuples().end());
    int n = static_cast<int>(tuples.size());

    std::vector<detail::CompiledConjunction> ccs;
    for (const auto& dc : ic)
        ccs.push_back(detail::compile_conjunction(instance.schema(), dc.atoms,
                                                  dc.comparisons));

    std::vector<unsigned> consistent_masks;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        std::set<DbTuple> kept;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) kept.insert(tuples[i]);
        DatabaseInstance sub = instance.with_tuples(std::move(kept));
        if (subset_consistent(sub, ccs)) consistent_masks.push_back(mask);
    }

    const unsigned full = n == 32 ? ~0u : (1u << n) - 1;
    std::vector<unsigned> chosen;
    RepairSet out;
    out.semantics = semantics.kind;

    if (semantics.kind == RepairSemantics::S) {
        // Keep the subsets whose deleted set is minimal under inclusion.
        std::vector<unsigned> by_deleted(consistent_masks);
        std::sort(by_deleted.begin(), by_deleted.end(), [&](unsigned a, unsigned b) {
            return __builtin_popcount(full & ~a) < __builtin_popcount(full & ~b);
        });
        std::vector<unsigned> minimal;
        for (unsigned mask : by_deleted) {
            unsigned deleted = full & ~mask;
            bool dominated = false;
            for (unsigned m : minimal) {
                unsigned md = full & ~m;
                if ((md & deleted) == md && md != deleted) {
                    dominated = true;
                    break;
                }
            }
            if (!dominated) minimal.push_back(mask);
        }
        chosen = minimal;
    } else if (semantics.kind == RepairSemantics::C) {
        int best = -1;
        for (unsigned mask : consistent_masks)
            best = std::max(best, __builtin_popcount(mask));
        for (unsigned mask : consistent_masks)
            if (__builtin_popcount(mask) == best) chosen.push_back(mask);
        out.distance = n - best;
    } else {
        if (!semantics.weights)
            throw EvalError("weighted-C semantics requires tuple weights");
        std::vector<long long> w(n);
        for (int i = 0; i < n; ++i) {
            auto it = semantics.weights->find(tuples[i]);
            if (it == semantics.weights->end())
                throw EvalError("missing weight for tuple " + to_string(tuples[i]));
            w[i] = it->second;
        }
        long long best = -1;
        auto deleted_weight = [&](unsigned mask) {
            long long sum = 0;
            for (int i = 0; i < n; ++i)
                if (!(mask & (1u << i))) sum += w[i];
            return sum;
        };
        for (unsigned mask : consistent_masks) {
            long long dw = deleted_weight(mask);
            if (best < 0 || dw < best) best = dw;
        }
        for (unsigned mask : consistent_masks)
            if (deleted_weight(mask) == best) chosen.push_back(mask);
        out.distance = best < 0 ? 0 : best;
    }

    std::vector<VertexSet> kept_sets;
    for (unsigned mask : chosen) {
        VertexSet kept;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) kept.push_back(i);
        kept_sets.push_back(std::move(kept));
    }
    out.repairs = repairs_by_deleted(instance, tuples, std::move(kept_sets));
    return out;
}

}  // namespace cqa
