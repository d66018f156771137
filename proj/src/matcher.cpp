#include "matcher.hpp"

#include <algorithm>

namespace cqa::detail {

bool eval_comparison(const Value& lhs, CompareOp op, const Value& rhs) {
    switch (op) {
        case CompareOp::Eq: return lhs == rhs;
        case CompareOp::Ne: return lhs != rhs;
        default: break;
    }
    if (!lhs.is_integer() || !rhs.is_integer())
        throw EvalError("order comparison requires integer operands");
    auto a = lhs.as_integer(), b = rhs.as_integer();
    switch (op) {
        case CompareOp::Lt: return a < b;
        case CompareOp::Le: return a <= b;
        case CompareOp::Gt: return a > b;
        case CompareOp::Ge: return a >= b;
        default: return false;
    }
}

namespace {

void note_var_kind(std::vector<ValueKind>& kinds, std::vector<char>& known,
                   int id, ValueKind k, const std::string& name) {
    if (!known[id]) {
        kinds[id] = k;
        known[id] = 1;
    } else if (kinds[id] != k) {
        throw SchemaError("variable '" + name + "' used at positions of different kinds");
    }
}

ValueKind term_kind(const CompiledConjunction& cc, const std::vector<char>& known,
                    const Term& t) {
    if (!t.is_variable()) return t.const_value().kind();
    int id = cc.var_id(t.var_name());
    if (id < 0 || !known[id])
        throw SchemaError("comparison variable '" + t.var_name() +
                          "' does not occur in any atom");
    return cc.var_kinds[id];
}

}  // namespace

CompiledConjunction compile_conjunction(const Schema& schema,
                                        const std::vector<AtomPattern>& atoms,
                                        const std::vector<Comparison>& comparisons,
                                        std::optional<int> anchor_atom) {
    CompiledConjunction cc;
    cc.atom_count = atoms.size();
    cc.comparisons = comparisons;

    // Collect variables and infer kinds from schema positions.
    std::vector<char> known;
    for (const auto& atom : atoms) {
        const RelationDef& rel = schema.at(atom.relation);
        if (atom.terms.size() != rel.arity())
            throw SchemaError("atom over '" + atom.relation + "' has arity " +
                              std::to_string(atom.terms.size()) + ", schema says " +
                              std::to_string(rel.arity()));
        for (std::size_t p = 0; p < atom.terms.size(); ++p) {
            const Term& t = atom.terms[p];
            ValueKind pk = rel.attributes[p].second;
            if (t.is_variable()) {
                int id = cc.var_id(t.var_name());
                if (id < 0) {
                    id = static_cast<int>(cc.var_names.size());
                    cc.var_names.push_back(t.var_name());
                    cc.var_kinds.push_back(pk);
                    known.push_back(0);
                }
                note_var_kind(cc.var_kinds, known, id, pk, t.var_name());
            } else if (t.const_value().kind() != pk) {
                throw SchemaError("constant '" + t.const_value().to_string() +
                                  "' does not match the kind of position " +
                                  std::to_string(p + 1) + " of '" + atom.relation + "'");
            }
        }
    }

    // Validate comparisons: safety and kind agreement.
    for (const auto& cmp : comparisons) {
        ValueKind lk = term_kind(cc, known, cmp.lhs);
        ValueKind rk = term_kind(cc, known, cmp.rhs);
        if (lk != rk)
            throw SchemaError("comparison between terms of different kinds");
        bool order_op = cmp.op != CompareOp::Eq && cmp.op != CompareOp::Ne;
        if (order_op && lk != ValueKind::Integer)
            throw SchemaError("order comparison requires integer terms");
    }

    // Greedy join order: next atom is the one with the most already-bound
    // positions (constants count), ties by original index.
    std::vector<char> chosen(atoms.size(), 0);
    std::vector<char> bound(cc.var_names.size(), 0);
    std::vector<char> cmp_done(comparisons.size(), 0);

    // Constant-only comparisons are decided now.
    for (std::size_t ci = 0; ci < comparisons.size(); ++ci) {
        const auto& cmp = comparisons[ci];
        if (!cmp.lhs.is_variable() && !cmp.rhs.is_variable()) {
            cmp_done[ci] = 1;
            if (!eval_comparison(cmp.lhs.const_value(), cmp.op, cmp.rhs.const_value()))
                cc.const_false.push_back(static_cast<int>(ci));
        }
    }

    for (std::size_t step = 0; step < atoms.size(); ++step) {
        int pick = -1;
        int pick_score = -1;
        if (step == 0 && anchor_atom) {
            pick = *anchor_atom;
        } else {
            for (std::size_t a = 0; a < atoms.size(); ++a) {
                if (chosen[a]) continue;
                int score = 0;
                for (const Term& t : atoms[a].terms) {
                    if (!t.is_variable() || bound[cc.var_id(t.var_name())]) ++score;
                }
                if (score > pick_score) {
                    pick_score = score;
                    pick = static_cast<int>(a);
                }
            }
        }
        chosen[pick] = 1;

        CompiledConjunction::Step s;
        s.atom_index = pick;
        s.relation = atoms[pick].relation;
        const auto& terms = atoms[pick].terms;
        std::vector<char> bound_here(cc.var_names.size(), 0);
        for (std::size_t p = 0; p < terms.size(); ++p) {
            CompiledConjunction::Slot slot;
            const Term& t = terms[p];
            if (!t.is_variable()) {
                slot.kind = CompiledConjunction::Slot::Kind::Const;
                slot.value = t.const_value();
                s.key_positions.push_back(static_cast<int>(p));
            } else {
                int id = cc.var_id(t.var_name());
                slot.var_id = id;
                if (bound[id]) {
                    slot.kind = CompiledConjunction::Slot::Kind::Check;
                    if (!bound_here[id]) s.key_positions.push_back(static_cast<int>(p));
                } else if (bound_here[id]) {
                    slot.kind = CompiledConjunction::Slot::Kind::Check;
                } else {
                    slot.kind = CompiledConjunction::Slot::Kind::Bind;
                    bound_here[id] = 1;
                }
            }
            s.slots.push_back(std::move(slot));
        }
        for (std::size_t v = 0; v < bound_here.size(); ++v)
            if (bound_here[v]) bound[v] = 1;

        // Comparisons whose variables are all bound after this step.
        for (std::size_t ci = 0; ci < comparisons.size(); ++ci) {
            if (cmp_done[ci]) continue;
            const auto& cmp = comparisons[ci];
            auto ready = [&](const Term& t) {
                return !t.is_variable() || bound[cc.var_id(t.var_name())];
            };
            if (ready(cmp.lhs) && ready(cmp.rhs)) {
                cmp_done[ci] = 1;
                s.comparisons_after.push_back(static_cast<int>(ci));
            }
        }
        cc.steps.push_back(std::move(s));
    }
    return cc;
}

MatchContext::MatchContext(const DatabaseInstance& inst) : instance(inst) {
    tuples.reserve(inst.size());
    int id = 0;
    for (const DbTuple& t : inst.tuples()) {
        tuples.push_back(&t);
        by_relation[t.relation].push_back(id);
        ++id;
    }
}

int MatchContext::id_of(const DbTuple& t) const {
    auto it = by_relation.find(t.relation);
    if (it == by_relation.end()) return -1;
    const auto& ids = it->second;
    int lo = 0, hi = static_cast<int>(ids.size()) - 1;
    while (lo <= hi) {
        int mid = (lo + hi) / 2;
        const DbTuple& cand = *tuples[ids[mid]];
        if (cand == t) return ids[mid];
        if (cand < t)
            lo = mid + 1;
        else
            hi = mid - 1;
    }
    return -1;
}

namespace {

struct Runner {
    const MatchContext& ctx;
    const CompiledConjunction& cc;
    const std::function<bool(const std::vector<int>&, const std::vector<Value>&)>& cb;
    std::optional<int> anchor_tuple_id;

    std::vector<std::optional<Value>> binding;
    std::vector<int> atom_tuple;  // original atom index -> tuple id
    // Lazily built per-step index: key projection -> tuple ids.
    std::vector<std::optional<std::map<std::vector<Value>, std::vector<int>>>> index;
    bool found = false;
    bool stopped = false;

    bool try_tuple(const CompiledConjunction::Step& s, int tuple_id,
                   std::vector<int>& bound_trail) {
        const DbTuple& t = *ctx.tuples[tuple_id];
        for (std::size_t p = 0; p < s.slots.size(); ++p) {
            const auto& slot = s.slots[p];
            switch (slot.kind) {
                case CompiledConjunction::Slot::Kind::Const:
                    if (!(t.values[p] == slot.value)) return false;
                    break;
                case CompiledConjunction::Slot::Kind::Check:
                    if (!(t.values[p] == *binding[slot.var_id])) return false;
                    break;
                case CompiledConjunction::Slot::Kind::Bind:
                    if (binding[slot.var_id]) {
                        if (!(t.values[p] == *binding[slot.var_id])) return false;
                    } else {
                        binding[slot.var_id] = t.values[p];
                        bound_trail.push_back(slot.var_id);
                    }
                    break;
            }
        }
        return true;
    }

    void run(std::size_t depth) {
        if (stopped) return;
        if (depth == cc.steps.size()) {
            std::vector<Value> vals;
            vals.reserve(binding.size());
            for (const auto& b : binding) vals.push_back(*b);
            found = true;
            if (!cb(atom_tuple, vals)) stopped = true;
            return;
        }
        const auto& s = cc.steps[depth];

        const std::vector<int>* candidates = nullptr;
        std::vector<int> anchor_single;
        if (depth == 0 && anchor_tuple_id) {
            if (ctx.tuples[*anchor_tuple_id]->relation != s.relation) return;
            anchor_single.push_back(*anchor_tuple_id);
            candidates = &anchor_single;
        } else if (!s.key_positions.empty()) {
            if (!index[depth]) {
                index[depth].emplace();
                auto it = ctx.by_relation.find(s.relation);
                if (it != ctx.by_relation.end()) {
                    for (int id : it->second) {
                        std::vector<Value> key;
                        key.reserve(s.key_positions.size());
                        for (int p : s.key_positions)
                            key.push_back(ctx.tuples[id]->values[p]);
                        (*index[depth])[std::move(key)].push_back(id);
                    }
                }
            }
            std::vector<Value> key;
            key.reserve(s.key_positions.size());
            for (int p : s.key_positions) {
                const auto& slot = s.slots[p];
                if (slot.kind == CompiledConjunction::Slot::Kind::Const)
                    key.push_back(slot.value);
                else
                    key.push_back(*binding[slot.var_id]);
            }
            auto it = index[depth]->find(key);
            if (it == index[depth]->end()) return;
            candidates = &it->second;
        } else {
            auto it = ctx.by_relation.find(s.relation);
            if (it == ctx.by_relation.end()) return;
            candidates = &it->second;
        }

        for (int tid : *candidates) {
            std::vector<int> trail;
            if (try_tuple(s, tid, trail)) {
                bool ok = true;
                for (int ci : s.comparisons_after) {
                    const auto& cmp = cc.comparisons[ci];
                    const Value& l = cmp.lhs.is_variable()
                                         ? *binding[cc.var_id(cmp.lhs.var_name())]
                                         : cmp.lhs.const_value();
                    const Value& r = cmp.rhs.is_variable()
                                         ? *binding[cc.var_id(cmp.rhs.var_name())]
                                         : cmp.rhs.const_value();
                    if (!eval_comparison(l, cmp.op, r)) {
                        ok = false;
                        break;
                    }
                }
                if (ok) {
                    atom_tuple[s.atom_index] = tid;
                    run(depth + 1);
                    atom_tuple[s.atom_index] = -1;
                }
            }
            for (int v : trail) binding[v].reset();
            if (stopped) return;
        }
    }
};

}  // namespace

bool for_each_match(const MatchContext& ctx, const CompiledConjunction& cc,
                    const std::function<bool(const std::vector<int>&,
                                             const std::vector<Value>&)>& cb,
                    std::optional<int> anchor_tuple_id) {
    if (!cc.const_false.empty()) return false;
    Runner r{ctx, cc, cb, anchor_tuple_id, {}, {}, {}, false, false};
    r.binding.resize(cc.var_names.size());
    r.atom_tuple.assign(cc.atom_count, -1);
    r.index.resize(cc.steps.size());
    r.run(0);
    return r.found;
}

}  // namespace cqa::detail
