// ncswitch: pattern generation, region and speedup analysis, frame schedules, simulation and
// the acceptance suite. JSON on stdout, diagnostics on stderr; exit 2 for usage errors and 1
// for domain errors.
#include "ncswitch/acceptance.hpp"
#include "ncswitch/corpus.hpp"
#include "ncswitch/error.hpp"
#include "ncswitch/graph.hpp"
#include "ncswitch/pattern_io.hpp"
#include "ncswitch/polytope.hpp"
#include "ncswitch/scheduler.hpp"
#include "ncswitch/sim.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using json = nlohmann::ordered_json;
using namespace ncswitch;

namespace {

constexpr const char* kSchema = "ncswitch/1";

// Bad flag values are usage errors, not domain errors.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Rational rational_flag(const std::string& text, const std::string& flag) {
    try {
        return Rational::parse_decimal(text);
    } catch (const std::invalid_argument&) {
        throw UsageError(flag + ": expected p/q or a decimal, got '" + text + "'");
    }
}

json envelope(const std::string& command) { return json{{"schema", kSchema}, {"command", command}}; }

json rational_list(const std::vector<Rational>& v) {
    json out = json::array();
    for (const auto& r : v) out.push_back(r.str());
    return out;
}

json vertex_list(const ConflictGraph& g, VertexSet s) {
    json out = json::array();
    for (int v : members(s)) out.push_back(g.label_string(v));
    return out;
}

json decomposition_json(const ConflictGraph& g, const StableSetDecomposition& d) {
    json terms = json::array();
    for (const auto& t : d.terms) terms.push_back({{"coefficient", t.coefficient.str()}, {"set", vertex_list(g, t.set)}});
    return terms;
}

json flow_key_json(const FlowKey& k) { return {{"input", k.input}, {"fanout", k.fanout}}; }

json metrics_json(const SimMetrics& m) {
    return {{"mean_delay", m.mean_delay},
            {"delay_samples", m.delay_samples},
            {"offered", m.offered},
            {"throughput", m.throughput},
            {"total_throughput", m.total_throughput},
            {"arrivals", m.arrivals},
            {"departures", m.departures},
            {"max_vq", m.max_vq},
            {"mean_backlog", m.mean_backlog},
            {"middle_window_backlog", m.middle_window_backlog},
            {"final_window_backlog", m.final_window_backlog},
            {"stable", m.stable},
            {"empty_visits", m.empty_visits},
            {"conservation_ok", m.conservation_ok},
            {"vq_consistent", m.vq_consistent}};
}

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

// --csv with no value writes to stdout.
void write_csv(const std::string& target, const std::string& text) {
    if (target.empty() || target == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(target);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + target);
    out << text;
}

struct Common {
    std::uint64_t seed = 1;
    bool json_out = false;
    std::optional<std::string> csv;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--seed", c.seed, "Random seed");
    cmd->add_flag("--json", c.json_out, "JSON output (default for most commands)");
    cmd->add_option("--csv", c.csv, "CSV output, to a file or stdout when no file is given")->expected(0, 1);
}

// ---- gen ----

struct GenOptions {
    std::string pattern;
    int n = 3;
    int k = 2;
    std::string r0 = "1/2";
    std::string rates;
    std::string rate = "1/4";
    int max_inputs = 3;
    int max_outputs = 4;
    int max_flows = 5;
};

std::vector<Rational> parse_rate_list(const std::string& text, const std::string& flag) {
    std::vector<Rational> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(rational_flag(item, flag));
    return out;
}

int cmd_gen(const GenOptions& o, const Common& c) {
    TrafficPattern tp = [&]() -> TrafficPattern {
        if (o.pattern == "special") return special_rate_point(o.n);
        if (o.pattern == "speedup2x3") return speedup_pattern_2x3();
        if (o.pattern == "splitting2x2") return splitting_pattern_2x2();
        if (o.pattern == "relaxed-bipartite") return relaxed_pattern_bipartite();
        if (o.pattern == "relaxed-hole") return relaxed_pattern_with_hole();
        if (o.pattern == "unicast-broadcast") return unicast_broadcast_pattern(o.k, o.n, rational_flag(o.rate, "--rate"));
        if (o.pattern == "corner") return corner_point_pattern(o.n, rational_flag(o.rate, "--rate"));
        if (o.pattern == "composite") return composite_pattern(o.k);
        if (o.pattern == "random") return random_pattern(c.seed, o.max_inputs, o.max_outputs, o.max_flows);
        // benefit: unicasts default to an even share of what the broadcast leaves
        const Rational r0 = rational_flag(o.r0, "--r0");
        std::vector<Rational> r = o.rates.empty()
                                      ? std::vector<Rational>(static_cast<std::size_t>(std::max(o.n, 1)), (Rational(1) - r0) / Rational(o.n))
                                      : parse_rate_list(o.rates, "--rates");
        return benefit_pattern(static_cast<int>(r.size()), r0, r);
    }();
    std::cout << serialize_pattern(tp);
    return 0;
}

// ---- analyze ----

int cmd_analyze(const std::string& file, bool edge_list, bool flow_graph) {
    json out = envelope("analyze");
    ConflictGraph g;
    if (edge_list) {
        g = load_edge_list(file);
        out["graph"] = "edge-list";
    } else {
        const auto tp = load_pattern_file(file);
        g = flow_graph ? build_flow_conflict_graph(tp) : build_enhanced_conflict_graph(tp);
        out["graph"] = flow_graph ? "flow-conflict" : "enhanced-conflict";
    }
    json labels = json::array();
    for (int v = 0; v < g.size(); ++v) labels.push_back(g.label_string(v));
    out["vertices"] = g.size();
    out["edges"] = g.num_edges();
    out["vertex_labels"] = labels;
    json cliques = json::array();
    for (VertexSet s : maximal_cliques(g)) cliques.push_back(vertex_list(g, s));
    out["maximal_cliques"] = cliques;
    out["perfect"] = is_perfect(g);
    auto as_cycle = [&](const std::optional<std::vector<int>>& c) -> json {
        if (!c) return nullptr;
        json cycle = json::array();
        for (int v : *c) cycle.push_back(g.label_string(v));
        return cycle;
    };
    out["odd_hole"] = as_cycle(find_odd_hole(g, g.size()));
    out["odd_antihole"] = as_cycle(find_odd_antihole(g, g.size()));
    emit(out);
    return 0;
}

// ---- region / speedup ----

int cmd_region(const std::string& file) {
    const auto tp = load_pattern_file(file);
    const auto g = build_enhanced_conflict_graph(tp);
    const auto w = enhanced_weights(tp);
    json out = envelope("region");
    out["admissible"] = is_admissible(tp);
    out["port_loads"] = rational_list(port_loads(tp));
    const auto q = qstab_membership(g, w);
    out["in_qstab"] = q.member;
    if (q.violated) out["violated_clique"] = {{"set", vertex_list(g, *q.violated)}, {"weight", q.violation.str()}};
    const auto s = stab_membership(g, w);
    out["in_stab"] = s.member;
    out["chi_f"] = s.chi_f.str();
    out["decomposition"] = s.decomposition ? decomposition_json(g, *s.decomposition) : json::array();
    emit(out);
    return 0;
}

int cmd_speedup(const std::string& file, bool exact_region) {
    const auto tp = load_pattern_file(file);
    const auto g = build_enhanced_conflict_graph(tp);
    const SpeedupReport r = exact_region ? min_speedup_exact(tp) : speedup_for_rate(tp);
    json out = envelope("speedup");
    out["mode"] = exact_region ? "exact-region" : "rate";
    out["chi_f"] = r.value.str();
    out["value"] = r.value.to_double();
    out["rates"] = rational_list(r.rates);
    out["witness"] = decomposition_json(g, r.witness);
    emit(out);
    return 0;
}

// ---- schedule ----

int cmd_schedule(const std::string& file, const std::string& speedup_text, bool verify) {
    const auto tp = load_pattern_file(file);
    const Rational speedup = rational_flag(speedup_text, "--speedup");
    const FrameSchedule s = offline_schedule(tp, speedup);
    json out = envelope("schedule");
    out["speedup"] = s.speedup.str();
    out["frame_size"] = s.frame_size;
    out["physical_slots"] = s.physical_slots;
    json slots = json::array();
    for (std::size_t t = 0; t < s.slots.size(); ++t) {
        json grants = json::object();
        for (const auto& [input, grant] : s.slots[t].grants) {
            grants[std::to_string(input)] = {{"fanout", grant.flow.fanout}, {"outputs", grant.outputs}};
        }
        slots.push_back({{"physical_slot", s.physical_slot[t]}, {"grants", grants}});
    }
    out["slots"] = slots;
    json codes = json::array();
    for (const auto& code : s.codes) {
        json entry = flow_key_json(code.flow);
        entry["packets"] = code.packets;
        entry["symbols"] = code.symbols;
        codes.push_back(entry);
    }
    out["codes"] = codes;
    if (verify) {
        const auto report = verify_frame_service(s, full_queues(s));
        json deficits = json::array();
        for (const auto& d : report.deficits) deficits.push_back({{"subflow", to_string(d.subflow)}, {"deficit", d.deficit}});
        out["verification"] = {{"served", report.served},
                               {"innovation_sets_stable", report.innovation_sets_stable},
                               {"deficits", deficits}};
    }
    emit(out);
    return 0;
}

// ---- simulate / sweep ----

struct SimOptions {
    std::string file;
    double alpha = 1.0;
    std::string scheduler = "mwss";
    int candidates = 10;
    std::int64_t delta = 3000;
    std::string eps = "1/200";
    std::int64_t horizon = 100000;
    std::string speedup = "1";
    bool no_batching = false;
    bool clip = false;
    int field_degree = 0;
    std::int64_t warmup = -1;
    std::string trace;
    std::string grid;
    unsigned threads = 0;
};

SimConfig sim_config(const SimOptions& o, const Common& c) {
    SimConfig cfg(load_pattern_file(o.file));
    cfg.alpha = o.alpha;
    try {
        cfg.scheduler = parse_scheduler(o.scheduler);
    } catch (const Error& e) {
        throw UsageError(std::string("--scheduler: ") + e.what());
    }
    cfg.candidates = o.candidates;
    cfg.batching = !o.no_batching;
    cfg.delta = o.delta;
    cfg.eps = rational_flag(o.eps, "--eps");
    cfg.horizon = o.horizon;
    cfg.seed = c.seed;
    cfg.speedup = rational_flag(o.speedup, "--speedup");
    cfg.clip = o.clip;
    cfg.field_degree = o.field_degree;
    cfg.warmup = o.warmup;
    cfg.trace_path = o.trace;
    return cfg;
}

json config_json(const SimConfig& cfg) {
    return {{"alpha", cfg.alpha},
            {"scheduler", to_string(cfg.scheduler)},
            {"candidates", cfg.candidates},
            {"batching", cfg.batching},
            {"delta", cfg.delta},
            {"eps", cfg.eps.str()},
            {"horizon", cfg.horizon},
            {"seed", cfg.seed},
            {"speedup", cfg.speedup.str()}};
}

int cmd_simulate(const SimOptions& o, const Common& c) {
    const SimConfig cfg = sim_config(o, c);
    const SimMetrics m = run(cfg);
    if (c.csv) {
        write_csv(*c.csv, sweep_csv({{cfg.alpha, to_string(cfg.scheduler), m}}));
        if (c.csv->empty() || *c.csv == "-") return 0;
    }
    json out = envelope("simulate");
    out["config"] = config_json(cfg);
    out["metrics"] = metrics_json(m);
    emit(out);
    return 0;
}

int cmd_sweep(const SimOptions& o, const Common& c) {
    const SimConfig cfg = sim_config(o, c);
    std::vector<double> grid;
    try {
        grid = parse_grid(o.grid);
    } catch (const Error& e) {
        throw UsageError(std::string("--alpha-grid: ") + e.what());
    }
    const auto rows = sweep(cfg, grid, o.threads);
    if (c.csv) {
        write_csv(*c.csv, sweep_csv(rows));
        if (c.csv->empty() || *c.csv == "-") return 0;
    }
    json out = envelope("sweep");
    out["config"] = config_json(cfg);
    json table = json::array();
    for (const auto& r : rows) {
        table.push_back({{"alpha", r.alpha},
                         {"scheduler", r.scheduler},
                         {"seed", cfg.seed + static_cast<std::uint64_t>(table.size())},
                         {"mean_delay", r.metrics.mean_delay},
                         {"throughput", r.metrics.total_throughput},
                         {"max_vq", r.metrics.max_vq},
                         {"stable", r.metrics.stable}});
    }
    out["rows"] = table;
    emit(out);
    return 0;
}

// ---- verify ----

int cmd_verify(const std::string& suite, const std::vector<int>& ids, int trials, const Common& c) {
    if (suite == "coding") {
        const auto tallies = coding_properties(c.seed, trials);
        bool ok = true;
        json rows = json::array();
        for (const auto& t : tallies) {
            ok = ok && t.failed == 0;
            rows.push_back({{"property", t.name}, {"passed", t.passed}, {"failed", t.failed}});
        }
        if (c.json_out) {
            json out = envelope("verify");
            out["suite"] = "coding";
            out["properties"] = rows;
            out["passed"] = ok;
            emit(out);
        } else {
            for (const auto& t : tallies)
                std::cout << (t.failed == 0 ? "PASS " : "FAIL ") << t.name << ": " << t.passed << " passed, " << t.failed << " failed\n";
        }
        return ok ? 0 : 1;
    }
    if (suite != "all") throw UsageError("verify: unknown suite '" + suite + "' (expected all or coding)");
    const auto results = run_acceptance(ids);
    bool ok = true;
    for (const auto& r : results) ok = ok && r.passed;
    if (c.csv) {
        std::ostringstream csv;
        csv << "criterion,name,passed,seconds\n";
        for (const auto& r : results) csv << r.id << ',' << r.name << ',' << (r.passed ? 1 : 0) << ',' << r.seconds << '\n';
        write_csv(*c.csv, csv.str());
    } else if (c.json_out) {
        json out = envelope("verify");
        json rows = json::array();
        for (const auto& r : results) {
            rows.push_back({{"criterion", r.id}, {"name", r.name}, {"passed", r.passed}, {"seconds", r.seconds}, {"detail", r.detail}});
        }
        out["criteria"] = rows;
        out["passed"] = ok;
        emit(out);
    } else {
        for (const auto& r : results) std::cout << format_result(r) << '\n';
    }
    return ok ? 0 : 1;
}

int domain_failure(const std::string& code, const std::string& message, json extra = json::object()) {
    json out{{"schema", kSchema}, {"error", {{"code", code}, {"message", message}}}};
    for (auto& [k, v] : extra.items()) out["error"][k] = v;
    emit(out);
    std::cerr << "ncswitch: " << message << '\n';
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multicast switch scheduling with network coding"};
    app.require_subcommand(1);
    app.name("ncswitch");

    Common common;
    GenOptions gen;
    SimOptions sim;
    std::string file;
    bool edge_list = false;
    bool flow_graph = false;
    bool exact_region = false;
    std::string speedup = "1";
    bool verify_schedule = false;
    std::string suite = "all";
    std::vector<int> criteria;
    int trials = 1000;

    auto* g = app.add_subcommand("gen", "Emit a named traffic pattern as JSON");
    g->add_option("--pattern", gen.pattern, "Pattern family")
        ->required()
        ->check(CLI::IsMember({"benefit", "special", "speedup2x3", "splitting2x2", "relaxed-bipartite", "relaxed-hole",
                               "unicast-broadcast", "corner", "composite", "random"}));
    g->add_option("--n", gen.n, "Outputs");
    g->add_option("--k", gen.k, "Inputs (unicast-broadcast, composite)");
    g->add_option("--r0", gen.r0, "Broadcast rate (benefit)");
    g->add_option("--rates", gen.rates, "Comma-separated unicast rates (benefit)");
    g->add_option("--rate", gen.rate, "Common rate (unicast-broadcast, corner)");
    g->add_option("--max-inputs", gen.max_inputs, "Random pattern bound");
    g->add_option("--max-outputs", gen.max_outputs, "Random pattern bound");
    g->add_option("--max-flows", gen.max_flows, "Random pattern bound");
    add_common(g, common);

    auto* an = app.add_subcommand("analyze", "Conflict graph structure: cliques, perfection, odd holes");
    an->add_option("file", file, "Pattern JSON (or edge list with --edge-list)")->required();
    an->add_flag("--edge-list", edge_list, "Input is an edge-list graph file");
    an->add_flag("--flow-graph", flow_graph, "Analyze the flow conflict graph instead");
    add_common(an, common);

    auto* rg = app.add_subcommand("region", "Admissibility, QSTAB and STAB membership with a decomposition");
    rg->add_option("file", file, "Pattern JSON")->required();
    add_common(rg, common);

    auto* sp = app.add_subcommand("speedup", "Speedup needed by the rate vector or its whole admissible region");
    sp->add_option("file", file, "Pattern JSON")->required();
    sp->add_flag("--exact-region", exact_region, "Worst case over the admissible region of the pattern's shape");
    add_common(sp, common);

    auto* sc = app.add_subcommand("schedule", "Coded frame schedule from a stable-set decomposition");
    sc->add_option("file", file, "Pattern JSON")->required();
    sc->add_option("--speedup", speedup, "Speedup p/q");
    sc->add_flag("--verify", verify_schedule, "Run one frame with real coded payloads");
    add_common(sc, common);

    auto sim_options = [&](CLI::App* cmd) {
        cmd->add_option("file", sim.file, "Pattern JSON")->required();
        cmd->add_option("--alpha", sim.alpha, "Load factor");
        cmd->add_option("--scheduler", sim.scheduler, "mwss, mwss-rand or fs");
        cmd->add_option("--candidates", sim.candidates, "Randomized MWSS candidates");
        cmd->add_option("--delta", sim.delta, "Batch length");
        cmd->add_option("--eps", sim.eps, "Clearing fraction, p/q or decimal");
        cmd->add_option("--horizon", sim.horizon, "Slots");
        cmd->add_option("--speedup", sim.speedup, "Speedup p/q");
        cmd->add_flag("--no-batching", sim.no_batching, "Coded switch without batches");
        cmd->add_flag("--clip", sim.clip, "Scale loads down to the admissible boundary");
        cmd->add_option("--field-degree", sim.field_degree, "GF(2^m) degree, 0 for automatic");
        cmd->add_option("--warmup", sim.warmup, "Warm-up slots, -1 for one batch period");
        cmd->add_option("--trace", sim.trace, "Per-slot CSV trace file");
        add_common(cmd, common);
    };
    auto* si = app.add_subcommand("simulate", "Simulate one load point");
    sim_options(si);
    auto* sw = app.add_subcommand("sweep", "Simulate a grid of load points");
    sim_options(sw);
    sw->add_option("--alpha-grid", sim.grid, "lo:hi:step")->required();
    sw->add_option("--threads", sim.threads, "Worker threads, 0 for all cores");

    auto* ve = app.add_subcommand("verify", "Run the acceptance suite or the coding property suite");
    ve->add_option("suite", suite, "all or coding");
    ve->add_option("--criteria", criteria, "Criterion numbers to run")->delimiter(',');
    ve->add_option("--trials", trials, "Trials per coding property");
    add_common(ve, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "ncswitch: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        if (*g) return cmd_gen(gen, common);
        if (*an) return cmd_analyze(file, edge_list, flow_graph);
        if (*rg) return cmd_region(file);
        if (*sp) return cmd_speedup(file, exact_region);
        if (*sc) return cmd_schedule(file, speedup, verify_schedule);
        if (*si) return cmd_simulate(sim, common);
        if (*sw) return cmd_sweep(sim, common);
        if (*ve) return cmd_verify(suite, criteria, trials, common);
    } catch (const UsageError& e) {
        std::cerr << "ncswitch: " << e.what() << '\n';
        return 2;
    } catch (const NotInStabError& e) {
        return domain_failure(std::string(to_string(e.code())), e.what(), {{"chi_f", e.chi_f().str()}});
    } catch (const Error& e) {
        return domain_failure(std::string(to_string(e.code())), e.what());
    } catch (const std::exception& e) {
        return domain_failure("internal", e.what());
    }
    return 2;
}
