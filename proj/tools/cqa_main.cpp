// Command-line front end: consistency checking, repair enumeration,
// consistent query answering, incremental updates, and gadget generation.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "cqa/cqa.hpp"
#include "cqa/gadget_db.hpp"
#include "cqa/graph_lab.hpp"
#include "cqa/incremental.hpp"
#include "cqa/parser.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace cqa;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNo = 1;       // inconsistent instance or boolean "no"
constexpr int kExitUsage = 2;    // usage or parse errors
constexpr int kExitCap = 3;      // solver cap exceeded
constexpr int kExitVerify = 4;   // --verify found a disagreement

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open '" + path.string() + "'", SourceSpan{1, 1, 0});
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw EvalError("cannot write '" + path.string() + "'");
    out << content;
}

struct ProblemFiles {
    std::string schema_path;
    std::string instance_path;
    std::string constraints_path;

    SchemaPtr schema;
    std::vector<DenialConstraint> ic;

    void add_options(CLI::App* cmd) {
        cmd->add_option("--schema", schema_path, "schema file")->required();
        cmd->add_option("--instance", instance_path, "instance directory (CSV per relation)")
            ->required();
        cmd->add_option("--constraints", constraints_path, "constraints file")->required();
    }

    DatabaseInstance load() {
        schema = std::make_shared<const Schema>(parse_schema(slurp(schema_path)));
        ic = parse_constraints(slurp(constraints_path), *schema);
        return parse_instance_dir(instance_path, schema);
    }
};

struct Caps {
    std::size_t max_vertices = 10000;
    long long time_budget_ms = 10000;

    void add_options(CLI::App* cmd) {
        cmd->add_option("--max-vertices", max_vertices, "exact solver vertex cap")
            ->envname("CQA_MAX_VERTICES");
        cmd->add_option("--time-budget-ms", time_budget_ms, "solver time budget")
            ->envname("CQA_TIME_BUDGET_MS");
    }

    SolverLimits limits() const {
        return SolverLimits{max_vertices, std::chrono::milliseconds(time_budget_ms)};
    }
};

json value_json(const Value& v) {
    if (v.is_integer()) return json(v.as_integer());
    return json(v.as_symbol());
}

json tuple_json(const DbTuple& t) {
    json j;
    j["relation"] = t.relation;
    j["values"] = json::array();
    for (const Value& v : t.values) j["values"].push_back(value_json(v));
    return j;
}

void print_tuples_line(const std::set<DbTuple>& tuples) {
    bool first = true;
    for (const DbTuple& t : tuples) {
        if (!first) std::cout << " ";
        std::cout << to_string(t);
        first = false;
    }
    std::cout << "\n";
}

void emit_repairs(const RepairSet& reps, const DatabaseInstance& original,
                  const std::string& format, long long max_repairs) {
    long long shown = 0;
    for (const auto& rep : reps.repairs) {
        if (max_repairs >= 0 && shown++ >= max_repairs) break;
        if (format == "jsonl") {
            json j;
            j["kind"] = "repair";
            j["tuples"] = json::array();
            for (const DbTuple& t : rep.tuples()) j["tuples"].push_back(tuple_json(t));
            json deleted = json::array();
            for (const DbTuple& t : original.tuples())
                if (!rep.contains(t)) deleted.push_back(tuple_json(t));
            j["deleted"] = deleted;
            std::cout << j.dump() << "\n";
        } else if (format == "csv") {
            bool first = true;
            for (const DbTuple& t : rep.tuples()) {
                std::cout << (first ? "" : ";") << to_string(t);
                first = false;
            }
            std::cout << "\n";
        } else {
            std::cout << "repair: ";
            print_tuples_line(rep.tuples());
        }
    }
    if (reps.distance) {
        if (format == "jsonl") {
            json j;
            j["kind"] = "distance";
            j["value"] = *reps.distance;
            std::cout << j.dump() << "\n";
        } else {
            std::cout << "distance: " << *reps.distance << "\n";
        }
    }
    if (format != "jsonl")
        std::cout << "repairs: " << reps.repairs.size() << "\n";
}

void emit_answers(const AnswerSet& ans, const std::string& format) {
    if (ans.is_boolean) {
        if (format == "jsonl") {
            json j;
            j["kind"] = "boolean";
            j["value"] = ans.boolean_answer;
            std::cout << j.dump() << "\n";
        } else {
            std::cout << (ans.boolean_answer ? "yes" : "no") << "\n";
        }
        return;
    }
    for (const auto& row : ans.answers) {
        if (format == "jsonl") {
            json j;
            j["kind"] = "answer";
            j["row"] = json::array();
            for (const Value& v : row) j["row"].push_back(value_json(v));
            std::cout << j.dump() << "\n";
        } else {
            std::cout << print_answer_row(row) << "\n";
        }
    }
}

SemanticsSpec semantics_from(const std::string& name, const std::string& weights_path,
                             const std::string& aspec_path, const Schema& schema) {
    SemanticsSpec spec;
    if (name == "s") {
        spec.kind = RepairSemantics::S;
    } else if (name == "c") {
        spec.kind = RepairSemantics::C;
    } else if (name == "wc") {
        spec.kind = RepairSemantics::WeightedC;
        if (weights_path.empty())
            throw EvalError("--semantics wc requires --weights");
        spec.weights = parse_weights(slurp(weights_path), schema);
    } else if (name == "a") {
        spec.kind = RepairSemantics::ABounded;
        if (aspec_path.empty())
            throw EvalError("--semantics a requires --aspec");
        spec.aspec = parse_aspec(slurp(aspec_path), schema);
    } else {
        throw EvalError("unknown semantics '" + name + "' (expected s, c, wc or a)");
    }
    return spec;
}

// Weighted repairs need a complete map; unlisted tuples default to 1.
void complete_weights(SemanticsSpec& spec, const DatabaseInstance& d) {
    if (spec.kind != RepairSemantics::WeightedC) return;
    for (const DbTuple& t : d.tuples())
        if (!spec.weights->count(t)) (*spec.weights)[t] = 1;
}

void write_instance_csvs(const DatabaseInstance& d, const fs::path& dir) {
    for (const auto& [name, def] : d.schema().relations()) {
        (void)def;
        spit(dir / (name + ".csv"), print_relation_csv(d, name));
    }
}

int run(int argc, char** argv) {
    CLI::App app{"repairs and consistent query answers for inconsistent databases"};
    app.require_subcommand(1);

    // --- check -----------------------------------------------------------
    auto* check = app.add_subcommand("check", "report conflicts of an instance");
    ProblemFiles check_files;
    Caps check_caps;
    std::string check_format = "table";
    std::string check_dot;
    check_files.add_options(check);
    check_caps.add_options(check);
    check->add_option("--format", check_format, "table, csv or jsonl");
    check->add_option("--dot", check_dot, "write the conflict hypergraph as DOT");

    // --- repairs ---------------------------------------------------------
    auto* repairs = app.add_subcommand("repairs", "enumerate repairs");
    ProblemFiles rep_files;
    Caps rep_caps;
    std::string rep_semantics = "c";
    std::string rep_weights, rep_aspec, rep_format = "table";
    bool rep_distance_only = false;
    long long rep_max = -1;
    rep_files.add_options(repairs);
    rep_caps.add_options(repairs);
    repairs->add_option("--semantics", rep_semantics, "s, c, wc or a");
    repairs->add_option("--weights", rep_weights, "weight file for wc");
    repairs->add_option("--aspec", rep_aspec, "attribute spec file for a");
    repairs->add_flag("--distance", rep_distance_only, "print only the distance");
    repairs->add_option("--max-repairs", rep_max, "limit enumerated repairs");
    repairs->add_option("--format", rep_format, "table, csv or jsonl");

    // --- cqa -------------------------------------------------------------
    auto* cqa_cmd = app.add_subcommand("cqa", "certain or possible answers");
    ProblemFiles cqa_files;
    Caps cqa_caps;
    std::string cqa_query, cqa_mode = "certain", cqa_semantics = "c";
    std::string cqa_weights, cqa_aspec, cqa_format = "table";
    bool cqa_fast = false, cqa_verify = false;
    cqa_files.add_options(cqa_cmd);
    cqa_caps.add_options(cqa_cmd);
    cqa_cmd->add_option("--query", cqa_query, "query text")->required();
    cqa_cmd->add_option("--mode", cqa_mode, "certain or possible");
    cqa_cmd->add_option("--semantics", cqa_semantics, "s, c, wc or a");
    cqa_cmd->add_option("--weights", cqa_weights, "weight file for wc");
    cqa_cmd->add_option("--aspec", cqa_aspec, "attribute spec file for a");
    cqa_cmd->add_flag("--fast", cqa_fast,
                      "conflict-structure path (certain mode; ground literal "
                      "conjunctions under c, ground atoms under s)");
    cqa_cmd->add_flag("--verify", cqa_verify, "cross-check the fast path");
    cqa_cmd->add_option("--format", cqa_format, "table, csv or jsonl");

    // --- update ----------------------------------------------------------
    auto* update = app.add_subcommand("update", "apply updates, repair incrementally");
    ProblemFiles upd_files;
    Caps upd_caps;
    std::string upd_script, upd_query, upd_algorithm = "fpt", upd_format = "table";
    upd_files.add_options(update);
    upd_caps.add_options(update);
    update->add_option("--updates", upd_script, "update script")->required();
    update->add_option("--query", upd_query, "ground literal conjunction to answer");
    update->add_option("--algorithm", upd_algorithm, "naive, fpt or both");
    update->add_option("--format", upd_format, "table, csv or jsonl");

    // --- gadget ----------------------------------------------------------
    auto* gadget = app.add_subcommand("gadget", "emit verified constructions");
    std::string gk_kind, gk_graph, gk_vertex, gk_out = ".";
    std::string gk_schema, gk_instance, gk_constraints, gk_query;
    int gk_k = 1;
    bool gk_dot = false;
    gadget->add_option("kind", gk_kind,
                       "twin | rhombus | block | modk | encode-graph | c-to-a | "
                       "control-wrap")
        ->required();
    gadget->add_option("--graph", gk_graph, "graph file (graph gadgets)");
    gadget->add_option("--vertex", gk_vertex, "distinguished vertex (twin, rhombus)");
    gadget->add_option("--k", gk_k, "parameter k (block, modk)");
    gadget->add_option("--schema", gk_schema, "schema file (c-to-a, control-wrap)");
    gadget->add_option("--instance", gk_instance, "instance dir (c-to-a, control-wrap)");
    gadget->add_option("--constraints", gk_constraints, "constraints file");
    gadget->add_option("--query", gk_query, "query text (c-to-a, control-wrap)");
    gadget->add_option("--out", gk_out, "output directory");
    gadget->add_flag("--dot", gk_dot, "also write DOT files");

    CLI11_PARSE(app, argc, argv);

    if (check->parsed()) {
        DatabaseInstance d = check_files.load();
        ConflictHypergraph ch = build_hypergraph(d, check_files.ic);
        if (!check_dot.empty()) spit(check_dot, to_dot(ch));
        if (ch.hyper.edges.empty()) {
            if (check_format == "jsonl")
                std::cout << json{{"kind", "consistent"}, {"value", true}}.dump() << "\n";
            else
                std::cout << "consistent\n";
            return kExitOk;
        }
        for (const auto& e : ch.hyper.edges) {
            if (check_format == "jsonl") {
                json j;
                j["kind"] = "violation";
                j["tuples"] = json::array();
                for (int v : e) j["tuples"].push_back(tuple_json(ch.tuples[v]));
                std::cout << j.dump() << "\n";
            } else {
                std::cout << "violation:";
                for (int v : e) std::cout << " " << to_string(ch.tuples[v]);
                std::cout << "\n";
            }
        }
        if (check_format != "jsonl")
            std::cout << ch.hyper.edges.size() << " violations\n";
        return kExitNo;
    }

    if (repairs->parsed()) {
        DatabaseInstance d = rep_files.load();
        SemanticsSpec spec =
            semantics_from(rep_semantics, rep_weights, rep_aspec, *rep_files.schema);
        complete_weights(spec, d);
        SolverLimits limits = rep_caps.limits();

        if (rep_distance_only) {
            long long distance = 0;
            switch (spec.kind) {
                case RepairSemantics::C:
                    distance = c_repair_distance(d, rep_files.ic, limits);
                    break;
                case RepairSemantics::WeightedC:
                    distance = *weighted_c_repairs(d, rep_files.ic, *spec.weights, limits)
                                    .distance;
                    break;
                case RepairSemantics::ABounded: {
                    RepairSet rs = a_repairs_bounded(d, rep_files.ic, *spec.aspec);
                    if (!rs.distance) {
                        std::cout << "no repair\n";
                        return kExitNo;
                    }
                    distance = *rs.distance;
                    break;
                }
                case RepairSemantics::S:
                    throw EvalError("--distance is undefined for the s semantics");
            }
            std::cout << distance << "\n";
            return kExitOk;
        }

        RepairSet reps;
        switch (spec.kind) {
            case RepairSemantics::S: reps = s_repairs(d, rep_files.ic, limits); break;
            case RepairSemantics::C: reps = c_repairs(d, rep_files.ic, limits); break;
            case RepairSemantics::WeightedC:
                reps = weighted_c_repairs(d, rep_files.ic, *spec.weights, limits);
                break;
            case RepairSemantics::ABounded:
                reps = a_repairs_bounded(d, rep_files.ic, *spec.aspec);
                break;
        }
        emit_repairs(reps, d, rep_format, rep_max);
        return kExitOk;
    }

    if (cqa_cmd->parsed()) {
        DatabaseInstance d = cqa_files.load();
        SemanticsSpec spec =
            semantics_from(cqa_semantics, cqa_weights, cqa_aspec, *cqa_files.schema);
        complete_weights(spec, d);
        Query q = parse_query(cqa_query, *cqa_files.schema);
        SolverLimits limits = cqa_caps.limits();

        if (cqa_mode != "certain" && cqa_mode != "possible")
            throw EvalError("--mode must be certain or possible");

        if (cqa_fast) {
            if (cqa_mode != "certain")
                throw EvalError("--fast only serves certain mode");
            bool fast;
            if (spec.kind == RepairSemantics::C)
                fast = certain_c_fast(q, d, cqa_files.ic, limits);
            else if (spec.kind == RepairSemantics::S)
                fast = certain_s_atomic_fast(q, d, cqa_files.ic);
            else
                throw EvalError("--fast supports the s and c semantics");
            if (cqa_verify) {
                bool slow = certain_answers(q, d, cqa_files.ic, spec, limits).boolean_answer;
                if (slow != fast) {
                    std::cerr << "verification mismatch: fast=" << fast
                              << " enumerated=" << slow << "\n";
                    return kExitVerify;
                }
            }
            AnswerSet ans;
            ans.is_boolean = true;
            ans.boolean_answer = fast;
            emit_answers(ans, cqa_format);
            return fast ? kExitOk : kExitNo;
        }

        AnswerSet ans = cqa_mode == "certain"
                            ? certain_answers(q, d, cqa_files.ic, spec, limits)
                            : possible_answers(q, d, cqa_files.ic, spec, limits);
        emit_answers(ans, cqa_format);
        if (ans.is_boolean) return ans.boolean_answer ? kExitOk : kExitNo;
        return kExitOk;
    }

    if (update->parsed()) {
        DatabaseInstance d = upd_files.load();
        UpdateSequence u = parse_updates(slurp(upd_script), *upd_files.schema);

        std::pair<int, std::vector<DbTuple>> fpt{0, {}};
        RepairSet naive;
        bool ran_fpt = false, ran_naive = false;
        if (upd_algorithm == "fpt" || upd_algorithm == "both") {
            fpt = fpt_min_deletions(d, u, upd_files.ic);
            ran_fpt = true;
        }
        if (upd_algorithm == "naive" || upd_algorithm == "both") {
            naive = incremental_c_repairs_naive(d, u, upd_files.ic);
            ran_naive = true;
        }
        if (!ran_fpt && !ran_naive)
            throw EvalError("--algorithm must be naive, fpt or both");
        if (ran_fpt && ran_naive && fpt.first != *naive.distance) {
            std::cerr << "algorithm disagreement: fpt=" << fpt.first
                      << " naive=" << *naive.distance << "\n";
            return kExitVerify;
        }

        long long distance = ran_fpt ? fpt.first : *naive.distance;
        if (upd_format == "jsonl") {
            std::cout << json{{"kind", "distance"}, {"value", distance}}.dump() << "\n";
            if (ran_fpt) {
                json j;
                j["kind"] = "witness";
                j["tuples"] = json::array();
                for (const DbTuple& t : fpt.second) j["tuples"].push_back(tuple_json(t));
                std::cout << j.dump() << "\n";
            }
        } else {
            std::cout << "distance: " << distance << "\n";
            if (ran_fpt) {
                std::cout << "witness:";
                for (const DbTuple& t : fpt.second) std::cout << " " << to_string(t);
                std::cout << "\n";
            }
        }
        if (ran_naive && upd_format != "jsonl")
            std::cout << "repairs: " << naive.repairs.size() << "\n";

        if (!upd_query.empty()) {
            Query q = parse_query(upd_query, *upd_files.schema);
            bool certain = incremental_certain(q, d, u, upd_files.ic);
            if (upd_format == "jsonl")
                std::cout << json{{"kind", "boolean"}, {"value", certain}}.dump() << "\n";
            else
                std::cout << (certain ? "yes" : "no") << "\n";
            return certain ? kExitOk : kExitNo;
        }
        return kExitOk;
    }

    // gadget
    fs::create_directories(gk_out);
    fs::path out(gk_out);

    auto need_graph = [&]() {
        if (gk_graph.empty()) throw EvalError("--graph is required for this gadget");
        return parse_graph(slurp(gk_graph));
    };
    auto need_problem = [&]() {
        if (gk_schema.empty() || gk_instance.empty() || gk_constraints.empty() ||
            gk_query.empty())
            throw EvalError("--schema, --instance, --constraints and --query are required");
        auto schema = std::make_shared<const Schema>(parse_schema(slurp(gk_schema)));
        auto ic = parse_constraints(slurp(gk_constraints), *schema);
        auto inst = parse_instance_dir(gk_instance, schema);
        auto q = parse_query(gk_query, *schema);
        return std::tuple(schema, ic, inst, q);
    };

    if (gk_kind == "twin" || gk_kind == "rhombus") {
        SimpleGraph g = need_graph();
        if (gk_vertex.empty()) throw EvalError("--vertex is required");
        SimpleGraph result = gk_kind == "twin" ? twin_extension(g, gk_vertex)
                                               : rhombus_extension(g, gk_vertex);
        spit(out / "graph.txt", print_graph(result));
        if (gk_dot) spit(out / "graph.dot", to_dot(result));
        std::cout << "vertices: " << result.vertex_count() << "\n";
    } else if (gk_kind == "block") {
        BlockGraph blk = block_graph(need_graph(), gk_k);
        spit(out / "graph.txt", print_graph(blk.graph));
        if (gk_dot) spit(out / "graph.dot", to_dot(blk.graph));
        std::cout << "vertices: " << blk.graph.vertex_count() << "\n";
        std::cout << "t: " << blk.t << "\nb: " << blk.b << "\n";
    } else if (gk_kind == "modk") {
        auto [g, apex] = modk_graph(need_graph(), gk_k);
        spit(out / "graph.txt", print_graph(g));
        if (gk_dot) spit(out / "graph.dot", to_dot(g));
        std::cout << "vertices: " << g.vertex_count() << "\n";
        std::cout << "apex: " << apex << "\n";
    } else if (gk_kind == "encode-graph") {
        GraphEncoding enc = encode_graph(need_graph());
        spit(out / "schema.txt", print_schema(*enc.schema));
        spit(out / "constraints.txt", print_constraints({enc.constraint}));
        write_instance_csvs(enc.instance, out);
        std::cout << "tuples: " << enc.instance.size() << "\n";
    } else if (gk_kind == "c-to-a") {
        auto [schema, ic, inst, q] = need_problem();
        CToAImage img = c_to_a_reduction(*schema, ic, q, inst);
        spit(out / "schema.txt", print_schema(*img.schema));
        spit(out / "constraints.txt", print_constraints(img.constraints));
        spit(out / "query.txt", print_query(img.query) + "\n");
        spit(out / "aspec.txt", print_aspec(img.aspec));
        write_instance_csvs(img.instance, out);
        std::cout << "tuples: " << img.instance.size() << "\n";
    } else if (gk_kind == "control-wrap") {
        auto [schema, ic, inst, q] = need_problem();
        ControlWrapped wrapped = control_wrap(inst, ic, q);
        spit(out / "schema.txt", print_schema(*wrapped.schema));
        spit(out / "constraints.txt", print_constraints(wrapped.constraints));
        spit(out / "query.txt", print_query(wrapped.query) + "\n");
        spit(out / "updates.txt", print_updates(wrapped.update));
        write_instance_csvs(wrapped.instance, out);
        std::cout << "tuples: " << wrapped.instance.size() << "\n";
    } else {
        throw EvalError("unknown gadget kind '" + gk_kind + "'");
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ParseError& e) {
        std::cerr << "parse error at line " << e.span().line << ", column "
                  << e.span().column << ": " << e.what() << "\n";
        return kExitUsage;
    } catch (const CapExceeded& e) {
        std::cerr << "cap exceeded: " << e.what() << "\n";
        return kExitCap;
    } catch (const SchemaError& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const EvalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
