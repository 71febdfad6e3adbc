#include "repairkit/cli.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <ostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "repairkit/count.hpp"
#include "repairkit/errors.hpp"
#include "repairkit/gaifman.hpp"
#include "repairkit/generators.hpp"
#include "repairkit/hypergraph.hpp"
#include "repairkit/oracle.hpp"
#include "repairkit/text_io.hpp"
#include "repairkit/treedec.hpp"

namespace repairkit {

namespace {

struct RunConfig {
    std::string db_path;
    std::string constraints_path;
    std::string query_path;
    std::string decomposition_path;
    std::string heuristic = "min-fill";
    bool json = false;
    bool trace = false;
    bool force = false;
    bool no_timings = false;
    std::size_t max_bag = kDefaultMaxBagSize;
    std::size_t oracle_limit = kDefaultOracleLimit;
    std::size_t exact_max = 12;
    bool dot = false;
    bool emit_mso = false;
    bool stats = false;
    bool compare_tw = false;
    bool list = false;

    // gen
    std::string family;
    std::size_t n = 0;
    std::string out_prefix;
    std::uint64_t seed = 0;
    std::string kind = "pk";
    std::size_t block_size = 2;
    std::size_t max_atoms = 3;
    std::size_t domain = 3;
    bool ucq = false;
};

struct Inputs {
    Database db;
    ConstraintSet constraints;
    Query query = Query::falsum();
};

class Stopwatch {
public:
    double lap() {
        const auto now = std::chrono::steady_clock::now();
        const double ms = std::chrono::duration<double, std::milli>(now - last_).count();
        last_ = now;
        return ms;
    }

private:
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

Inputs load_inputs(const RunConfig& cfg, std::ostream& err) {
    Inputs in;
    std::vector<Diagnostic> warnings;
    in.db = parse_database(read_text_file(cfg.db_path), cfg.db_path, &warnings);
    if (!cfg.constraints_path.empty()) {
        in.constraints =
            parse_constraints(read_text_file(cfg.constraints_path), cfg.constraints_path, &warnings);
    }
    if (!cfg.query_path.empty()) {
        in.query = parse_query(read_text_file(cfg.query_path), cfg.query_path);
    }
    for (const auto& w : warnings) err << "warning: " << w.to_string() << '\n';
    validate_constraints(in.constraints, in.db);
    validate_query(in.query, in.db);
    return in;
}

Heuristic heuristic_of(const RunConfig& cfg) {
    auto h = parse_heuristic(cfg.heuristic);
    if (!h) throw PreconditionError("unknown heuristic '" + cfg.heuristic + "'");
    return *h;
}

std::string fact_label(const Database& db, Vertex v) { return db.fact(v).to_string(); }

// count and cqa share everything up to the output.
Report run_count(const RunConfig& cfg, std::ostream& out, std::ostream& err, bool both_runs) {
    Stopwatch clock;
    Report report;
    const Inputs in = load_inputs(cfg, err);
    report.timings_ms["parse"] = clock.lap();

    const LabeledHypergraph h = build_solution_conflict(in.db, in.constraints, in.query);
    report.graph = {h.node_count, h.conflict_edges.size(), h.solution_edges.size()};
    report.timings_ms["hypergraph"] = clock.lap();

    RootedDecomposition t;
    if (!cfg.decomposition_path.empty()) {
        t = parse_decomposition(read_text_file(cfg.decomposition_path), in.db,
                                cfg.decomposition_path);
    } else {
        t = decompose(h, heuristic_of(cfg));
    }
    report.width_used = t.width();
    report.bags = t.bags.size();
    report.timings_ms["decompose"] = clock.lap();

    CountOptions options;
    options.max_bag_size = cfg.max_bag;
    options.force = cfg.force;
    if (cfg.trace) options.trace = &out;
    if (cfg.trace) out << "# query run\n";
    report.falsifying = number_falsify(in.db, h, t, options).count;
    if (both_runs) {
        if (cfg.trace) out << "# false-query run\n";
        report.total = number_falsify(in.db, h.conflicts_only(), t, options).count;
        report.satisfying = report.total - report.falsifying;
    }
    report.cqa = report.falsifying.is_zero();
    report.timings_ms["dp"] = clock.lap();
    return report;
}

int cmd_count(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const Report r = run_count(cfg, out, err, true);
    if (cfg.json) {
        out << emit_report(r, !cfg.no_timings) << '\n';
        return 0;
    }
    out << "repairs_total " << r.total << '\n'
        << "falsifying " << r.falsifying << '\n'
        << "satisfying " << r.satisfying << '\n'
        << "width " << r.width_used << '\n'
        << "bags " << r.bags << '\n';
    return 0;
}

int cmd_cqa(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const Report r = run_count(cfg, out, err, cfg.json);
    if (cfg.json) {
        out << emit_report(r, !cfg.no_timings) << '\n';
    } else {
        out << (r.cqa ? "true" : "false") << '\n';
    }
    return r.cqa ? kExitTrue : kExitFalse;
}

int cmd_graph(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const Inputs in = load_inputs(cfg, err);
    const LabeledHypergraph h = build_solution_conflict(in.db, in.constraints, in.query);
    if (cfg.dot) {
        out << primal_graph(h).to_dot([&](Vertex v) { return fact_label(in.db, v); });
        return 0;
    }
    if (cfg.json) {
        nlohmann::ordered_json j;
        j["nodes"] = h.node_count;
        auto edges = [&](const std::vector<FactSet>& list) {
            auto arr = nlohmann::json::array();
            for (const auto& e : list) {
                auto edge = nlohmann::json::array();
                for (FactId id : e) edge.push_back(in.db.fact(id).to_string());
                arr.push_back(edge);
            }
            return arr;
        };
        j["conflict_edges"] = edges(h.conflict_edges);
        j["solution_edges"] = edges(h.solution_edges);
        out << j.dump(2) << '\n';
        return 0;
    }
    out << "nodes " << h.node_count << '\n';
    for (const auto& e : h.conflict_edges) out << "conflict " << in.db.describe(e) << '\n';
    for (const auto& e : h.solution_edges) out << "solution " << in.db.describe(e) << '\n';
    return 0;
}

int cmd_tw(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const Inputs in = load_inputs(cfg, err);
    const LabeledHypergraph h = build_solution_conflict(in.db, in.constraints, in.query);
    const RootedDecomposition t = decompose(h, heuristic_of(cfg));
    out << serialize_decomposition(t, in.db);
    out << "# width " << t.width() << " (" << cfg.heuristic << ")\n";
    if (cfg.stats) {
        out << "# exact " << exact_treewidth(primal_graph(h), cfg.exact_max) << '\n';
    }
    return 0;
}

std::string tw_text(std::size_t upper, const std::optional<std::size_t>& exact) {
    if (exact) return std::to_string(*exact);
    return "<= " + std::to_string(upper);
}

int cmd_gaifman(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const Inputs in = load_inputs(cfg, err);
    if (cfg.emit_mso) {
        out << emit_mso(mso_encoding_for(in.constraints), in.query);
        return 0;
    }
    if (cfg.compare_tw) {
        const TwMeasures m =
            tw_measures(in.db, in.constraints, in.query, heuristic_of(cfg), cfg.exact_max);
        if (cfg.json) {
            nlohmann::ordered_json j;
            j["tw_H"] = m.tw_h_exact ? *m.tw_h_exact : m.tw_h_upper;
            j["tw_H_exact"] = m.tw_h_exact.has_value();
            j["tw_G"] = m.tw_g_exact ? *m.tw_g_exact : m.tw_g_upper;
            j["tw_G_exact"] = m.tw_g_exact.has_value();
            out << j.dump(2) << '\n';
        } else {
            out << "tw_H = " << tw_text(m.tw_h_upper, m.tw_h_exact) << '\n'
                << "tw_G = " << tw_text(m.tw_g_upper, m.tw_g_exact) << '\n';
        }
        return 0;
    }
    const GaifmanStructure s = build_structure(in.db, in.constraints, in.query);
    const Graph g = gaifman_graph(s);
    if (cfg.dot) {
        out << g.to_dot([&](Vertex v) { return fact_label(in.db, v); });
        return 0;
    }
    std::size_t linked = 0;
    for (const auto& [_, pairs] : s.linked) linked += pairs.size();
    out << "domain " << s.domain_size << '\n'
        << "encoding " << (s.dc_encoding ? "dc" : "fd") << '\n'
        << "depfails_arity " << s.depfails_arity << '\n'
        << "depfails " << s.depfails.size() << '\n'
        << "linked_symbols " << s.linked.size() << '\n'
        << "linked_pairs " << linked << '\n'
        << "gaifman_edges " << g.edge_count() << '\n';
    return 0;
}

int cmd_oracle(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const Inputs in = load_inputs(cfg, err);
    if (cfg.list) {
        for (const auto& r : enumerate_repairs(in.db, in.constraints, cfg.oracle_limit)) {
            out << in.db.describe(r) << (evaluate_query(in.db, r, in.query) ? " sat" : " fal")
                << '\n';
        }
    }
    const OracleCounts c = oracle_counts(in.db, in.constraints, in.query, cfg.oracle_limit);
    out << "repairs_total " << c.total << '\n'
        << "falsifying " << c.falsifying << '\n'
        << "satisfying " << c.satisfying << '\n';
    return 0;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw Error("cannot write " + path);
    f << text;
}

int cmd_gen(const RunConfig& cfg, std::ostream& out) {
    GenSpec spec;
    auto family = parse_family(cfg.family);
    if (!family) throw PreconditionError("unknown family '" + cfg.family + "'");
    auto kind = parse_constraint_kind(cfg.kind);
    if (!kind) throw PreconditionError("unknown constraint kind '" + cfg.kind + "'");
    spec.family = *family;
    spec.n = cfg.n;
    spec.seed = cfg.seed;
    spec.constraint_kind = *kind;
    spec.block_size = cfg.block_size;
    spec.max_atoms = cfg.max_atoms;
    spec.domain_size = cfg.domain;
    spec.query_kind = cfg.ucq ? QueryKind::bucq : QueryKind::bcq;
    const Instance inst = generate(spec);
    write_file(cfg.out_prefix + ".facts", serialize_database(inst.db));
    write_file(cfg.out_prefix + ".cst", serialize_constraints(inst.constraints));
    write_file(cfg.out_prefix + ".q", serialize_query(inst.query));
    out << "wrote " << cfg.out_prefix << ".{facts,cst,q} (" << inst.db.size() << " facts)\n";
    return 0;
}

void add_inputs(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--db", cfg.db_path, "facts file")->required();
    sub->add_option("--constraints", cfg.constraints_path, "constraint file (default: none)");
    sub->add_option("--query", cfg.query_path, "query file (default: false)");
}

void add_heuristic(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--heuristic", cfg.heuristic, "min-fill or min-degree")
        ->capture_default_str();
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Counting and certain answers over database repairs", "repairkit"};
    app.require_subcommand(1);

    auto* count = app.add_subcommand("count", "count repairs falsifying and satisfying the query");
    auto* cqa = app.add_subcommand("cqa", "decide whether every repair satisfies the query");
    for (auto* sub : {count, cqa}) {
        add_inputs(sub, cfg);
        add_heuristic(sub, cfg);
        sub->add_option("--decomposition", cfg.decomposition_path, "use this decomposition");
        sub->add_flag("--json", cfg.json, "JSON report");
        sub->add_flag("--no-timings", cfg.no_timings, "omit timings from the JSON report");
        sub->add_flag("--trace", cfg.trace, "print every stored f and g value");
        sub->add_flag("--force", cfg.force, "allow bags beyond --max-bag");
        sub->add_option("--max-bag", cfg.max_bag, "largest bag size accepted")
            ->capture_default_str();
    }

    auto* graph = app.add_subcommand("graph", "print the solution-conflict hypergraph");
    add_inputs(graph, cfg);
    graph->add_flag("--dot", cfg.dot, "primal graph as Graphviz");
    graph->add_flag("--json", cfg.json, "JSON edge lists");

    auto* tw = app.add_subcommand("tw", "print a tree decomposition");
    add_inputs(tw, cfg);
    add_heuristic(tw, cfg);
    tw->add_flag("--stats", cfg.stats, "also compute the exact treewidth");
    tw->add_option("--exact-max", cfg.exact_max, "component size limit for exact treewidth")
        ->capture_default_str();

    auto* gaifman = app.add_subcommand("gaifman", "MSO structure, Gaifman graph, MSO sentence");
    add_inputs(gaifman, cfg);
    add_heuristic(gaifman, cfg);
    gaifman->add_flag("--dot", cfg.dot, "Gaifman graph as Graphviz");
    gaifman->add_flag("--emit-mso", cfg.emit_mso, "print the MSO sentence");
    gaifman->add_flag("--stats", cfg.stats, "structure statistics (default)");
    gaifman->add_flag("--compare-tw", cfg.compare_tw, "treewidth of H versus the Gaifman graph");
    gaifman->add_flag("--json", cfg.json, "JSON output for --compare-tw");
    gaifman->add_option("--exact-max", cfg.exact_max, "component size limit for exact treewidth")
        ->capture_default_str();

    auto* oracle = app.add_subcommand("oracle", "brute-force repair enumeration");
    add_inputs(oracle, cfg);
    oracle->add_option("--limit", cfg.oracle_limit, "largest database accepted")
        ->capture_default_str();
    oracle->add_flag("--list", cfg.list, "print every repair");

    auto* gen = app.add_subcommand("gen", "write a generated instance");
    gen->add_option("family", cfg.family, "bipartite, chain, path or random")->required();
    gen->add_option("n", cfg.n, "size parameter")->required();
    gen->add_option("--out", cfg.out_prefix, "output prefix")->required();
    gen->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
    gen->add_option("--kind", cfg.kind, "pk, fd or dc")->capture_default_str();
    gen->add_option("--block-size", cfg.block_size, "largest key block")->capture_default_str();
    gen->add_option("--max-atoms", cfg.max_atoms, "atoms per disjunct")->capture_default_str();
    gen->add_option("--domain", cfg.domain, "constants per attribute")->capture_default_str();
    gen->add_flag("--ucq", cfg.ucq, "unions with inequalities");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : kExitInputError;
    }

    try {
        if (*count) return cmd_count(cfg, out, err);
        if (*cqa) return cmd_cqa(cfg, out, err);
        if (*graph) return cmd_graph(cfg, out, err);
        if (*tw) return cmd_tw(cfg, out, err);
        if (*gaifman) return cmd_gaifman(cfg, out, err);
        if (*oracle) return cmd_oracle(cfg, out, err);
        if (*gen) return cmd_gen(cfg, out);
    } catch (const SizeGuardError& e) {
        err << "error: " << e.what() << '\n';
        return kExitSizeGuard;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    }
    return kExitInputError;
}

}  // namespace repairkit
