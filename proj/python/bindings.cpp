// Python bindings. Rationals cross the boundary as fractions.Fraction; structured results
// come back as dicts.
#include "ncswitch/acceptance.hpp"
#include "ncswitch/coding.hpp"
#include "ncswitch/corpus.hpp"
#include "ncswitch/error.hpp"
#include "ncswitch/graph.hpp"
#include "ncswitch/pattern_io.hpp"
#include "ncswitch/polytope.hpp"
#include "ncswitch/scheduler.hpp"
#include "ncswitch/sim.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace ncswitch;

namespace {

py::object fraction(const Rational& r) {
    static py::object cls = py::module_::import("fractions").attr("Fraction");
    return cls(py::int_(py::str(r.numerator_string())), py::int_(py::str(r.denominator_string())));
}

// Accepts Fraction, int, or strings like "5/4" and "0.005".
Rational rational(const py::handle& h) {
    try {
        return Rational::parse_decimal(py::str(h).cast<std::string>());
    } catch (const std::invalid_argument& e) {
        throw py::value_error(e.what());
    }
}

py::list fractions(const std::vector<Rational>& v) {
    py::list out;
    for (const auto& r : v) out.append(fraction(r));
    return out;
}

py::list labels(const ConflictGraph& g, VertexSet s) {
    py::list out;
    for (int v : members(s)) out.append(g.label_string(v));
    return out;
}

py::list decomposition(const ConflictGraph& g, const StableSetDecomposition& d) {
    py::list out;
    for (const auto& t : d.terms) {
        py::dict term;
        term["coefficient"] = fraction(t.coefficient);
        term["set"] = labels(g, t.set);
        out.append(term);
    }
    return out;
}

std::vector<Rational> weight_vector(const py::iterable& w) {
    std::vector<Rational> out;
    for (auto h : w) out.push_back(rational(h));
    return out;
}

py::dict metrics(const SimMetrics& m) {
    py::dict d;
    d["mean_delay"] = m.mean_delay;
    d["delay_samples"] = m.delay_samples;
    d["offered"] = m.offered;
    d["throughput"] = m.throughput;
    d["total_throughput"] = m.total_throughput;
    d["arrivals"] = m.arrivals;
    d["departures"] = m.departures;
    d["max_vq"] = m.max_vq;
    d["mean_backlog"] = m.mean_backlog;
    d["middle_window_backlog"] = m.middle_window_backlog;
    d["final_window_backlog"] = m.final_window_backlog;
    d["stable"] = m.stable;
    d["empty_visits"] = m.empty_visits;
    d["conservation_ok"] = m.conservation_ok;
    d["vq_consistent"] = m.vq_consistent;
    return d;
}

SimConfig sim_config(const TrafficPattern& tp, double alpha, const std::string& scheduler, int candidates,
                     bool batching, std::int64_t delta, const py::object& eps, std::int64_t horizon, std::uint64_t seed,
                     const py::object& speedup, bool clip) {
    SimConfig c(tp);
    c.alpha = alpha;
    c.scheduler = parse_scheduler(scheduler);
    c.candidates = candidates;
    c.batching = batching;
    c.delta = delta;
    c.eps = rational(eps);
    c.horizon = horizon;
    c.seed = seed;
    c.speedup = rational(speedup);
    c.clip = clip;
    return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Multicast switch scheduling with network coding";

    // the module attribute keeps the type alive for the translator
    static PyObject* error_type = py::exception<Error>(m, "NcswitchError", PyExc_ValueError).ptr();
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object exc = py::reinterpret_borrow<py::object>(error_type)(py::str(e.what()));
            exc.attr("code") = std::string(to_string(e.code()));
            if (const auto* n = dynamic_cast<const NotInStabError*>(&e)) exc.attr("chi_f") = fraction(n->chi_f());
            PyErr_SetObject(error_type, exc.ptr());
        }
    });

    py::class_<TrafficPattern>(m, "TrafficPattern")
        .def(py::init([](int k, int n, const py::iterable& flows) {
                 std::vector<Flow> fs;
                 for (auto h : flows) {
                     auto t = h.cast<py::tuple>();
                     if (t.size() != 3) throw py::value_error("flows are (input, fanout, rate) triples");
                     fs.push_back({t[0].cast<int>(), t[1].cast<std::vector<int>>(), rational(t[2])});
                 }
                 return TrafficPattern(k, n, std::move(fs));
             }),
             py::arg("num_inputs"), py::arg("num_outputs"), py::arg("flows"))
        .def_property_readonly("num_inputs", &TrafficPattern::num_inputs)
        .def_property_readonly("num_outputs", &TrafficPattern::num_outputs)
        .def_property_readonly("flows",
                               [](const TrafficPattern& tp) {
                                   py::list out;
                                   for (const auto& f : tp.flows()) out.append(py::make_tuple(f.input, f.fanout, fraction(f.rate)));
                                   return out;
                               })
        .def("to_json", &serialize_pattern)
        .def_static("from_json", [](const std::string& text) { return parse_pattern(text); })
        .def_static("load", &load_pattern_file)
        .def("is_admissible", &is_admissible)
        .def("port_loads", [](const TrafficPattern& tp) { return fractions(port_loads(tp)); })
        .def("__len__", &TrafficPattern::size)
        .def("__eq__", [](const TrafficPattern& a, const TrafficPattern& b) { return a == b; })
        .def("__repr__", [](const TrafficPattern& tp) {
            return "<TrafficPattern " + std::to_string(tp.num_inputs()) + "x" + std::to_string(tp.num_outputs()) + " with " +
                   std::to_string(tp.size()) + " flows>";
        });

    m.def("special_rate_point", &special_rate_point, py::arg("n"));
    m.def("benefit_pattern",
          [](int n, const py::object& r0, const py::iterable& r) { return benefit_pattern(n, rational(r0), weight_vector(r)); },
          py::arg("n"), py::arg("r0"), py::arg("r"));
    m.def("speedup_pattern_2x3", &speedup_pattern_2x3);
    m.def("splitting_pattern_2x2", &splitting_pattern_2x2);
    m.def("relaxed_pattern_bipartite", &relaxed_pattern_bipartite);
    m.def("relaxed_pattern_with_hole", &relaxed_pattern_with_hole);
    m.def("unicast_broadcast_pattern",
          [](int k, int n, const py::object& rate) { return unicast_broadcast_pattern(k, n, rational(rate)); },
          py::arg("k"), py::arg("n"), py::arg("rate") = 0);
    m.def("corner_point_pattern", [](int n, const py::object& rate) { return corner_point_pattern(n, rational(rate)); },
          py::arg("n"), py::arg("rate") = 0);
    m.def("composite_pattern", &composite_pattern, py::arg("k"));
    m.def("random_pattern", &random_pattern, py::arg("seed"), py::arg("max_inputs") = 3, py::arg("max_outputs") = 4,
          py::arg("max_flows") = 5);
    m.def("pattern_corpus", [] {
        py::dict out;
        for (const auto& [name, tp] : pattern_corpus()) out[py::str(name)] = tp;
        return out;
    });

    py::class_<ConflictGraph>(m, "ConflictGraph")
        .def(py::init([](int n, const std::vector<std::pair<int, int>>& edges) { return ConflictGraph(n, edges); }),
             py::arg("num_vertices"), py::arg("edges") = std::vector<std::pair<int, int>>{})
        .def_property_readonly("size", &ConflictGraph::size)
        .def("edges", &ConflictGraph::edges)
        .def("adjacent", &ConflictGraph::adjacent)
        .def("labels", [](const ConflictGraph& g) { return labels(g, g.all()); })
        .def("maximal_cliques", [](const ConflictGraph& g) {
            py::list out;
            for (VertexSet s : maximal_cliques(g)) out.append(members(s));
            return out;
        })
        .def("is_perfect", [](const ConflictGraph& g) { return is_perfect(g); })
        .def("odd_hole", [](const ConflictGraph& g) { return find_odd_hole(g, g.size()); })
        .def("odd_antihole", [](const ConflictGraph& g) { return find_odd_antihole(g, g.size()); })
        .def("__len__", &ConflictGraph::size);

    m.def("enhanced_conflict_graph", &build_enhanced_conflict_graph, py::arg("pattern"));
    m.def("flow_conflict_graph", &build_flow_conflict_graph, py::arg("pattern"));
    m.def("enhanced_weights", [](const TrafficPattern& tp) { return fractions(enhanced_weights(tp)); });
    m.def("cycle_graph", &cycle_graph);

    m.def("speedup_for_rate", [](const TrafficPattern& tp) { return fraction(speedup_for_rate(tp).value); },
          py::arg("pattern"));
    m.def("min_speedup_exact", [](const TrafficPattern& tp) { return fraction(min_speedup_exact(tp).value); },
          py::arg("pattern"));
    m.def("imperfection_ratio", [](const ConflictGraph& g) { return fraction(imperfection_ratio(g).value); },
          py::arg("graph"));
    m.def("fractional_chromatic",
          [](const ConflictGraph& g, const py::iterable& w) {
              const auto r = fractional_chromatic(g, weight_vector(w));
              py::dict d;
              d["value"] = fraction(r.value);
              d["decomposition"] = decomposition(g, r.decomposition);
              return d;
          },
          py::arg("graph"), py::arg("weights"));
    m.def("region",
          [](const TrafficPattern& tp) {
              const auto g = build_enhanced_conflict_graph(tp);
              const auto w = enhanced_weights(tp);
              const auto s = stab_membership(g, w);
              py::dict d;
              d["admissible"] = is_admissible(tp);
              d["in_qstab"] = qstab_membership(g, w).member;
              d["in_stab"] = s.member;
              d["chi_f"] = fraction(s.chi_f);
              d["decomposition"] = s.decomposition ? decomposition(g, *s.decomposition) : py::list();
              return d;
          },
          py::arg("pattern"));
    m.def("fs_min_scaling", [](int n) { return fraction(fs_min_scaling(n)); }, py::arg("n"));
    m.def("fs_region_check",
          [](int n, const py::object& r0, const py::iterable& r) { return fs_region_check(n, rational(r0), weight_vector(r)); },
          py::arg("n"), py::arg("r0"), py::arg("r"));

    m.def("offline_schedule",
          [](const TrafficPattern& tp, const py::object& speedup, bool verify) {
              const FrameSchedule s = offline_schedule(tp, rational(speedup));
              py::dict d;
              d["frame_size"] = s.frame_size;
              d["physical_slots"] = s.physical_slots;
              py::list slots;
              for (const auto& c : s.slots) {
                  py::dict grants;
                  for (const auto& [input, grant] : c.grants) grants[py::int_(input)] = py::make_tuple(grant.flow.fanout, grant.outputs);
                  slots.append(grants);
              }
              d["slots"] = slots;
              d["physical_slot"] = s.physical_slot;
              py::list codes;
              for (const auto& c : s.codes) codes.append(py::make_tuple(c.flow.input, c.flow.fanout, c.packets, c.symbols));
              d["codes"] = codes;
              if (verify) {
                  const auto report = verify_frame_service(s, full_queues(s));
                  d["served"] = report.served;
                  d["innovation_sets_stable"] = report.innovation_sets_stable;
              }
              return d;
          },
          py::arg("pattern"), py::arg("speedup") = 1, py::arg("verify") = false);

    m.def("simulate",
          [](const TrafficPattern& tp, double alpha, const std::string& scheduler, int candidates, bool batching,
             std::int64_t delta, const py::object& eps, std::int64_t horizon, std::uint64_t seed, const py::object& speedup,
             bool clip) {
              const SimConfig c = sim_config(tp, alpha, scheduler, candidates, batching, delta, eps, horizon, seed, speedup, clip);
              py::gil_scoped_release release;
              SimMetrics result = run(c);
              py::gil_scoped_acquire acquire;
              return metrics(result);
          },
          py::arg("pattern"), py::arg("alpha"), py::arg("scheduler") = "mwss", py::arg("candidates") = 10,
          py::arg("batching") = true, py::arg("delta") = 3000, py::arg("eps") = "1/200", py::arg("horizon") = 100000,
          py::arg("seed") = 1, py::arg("speedup") = 1, py::arg("clip") = false);
    m.def("sweep",
          [](const TrafficPattern& tp, const std::vector<double>& alphas, const std::string& scheduler, std::int64_t delta,
             const py::object& eps, std::int64_t horizon, std::uint64_t seed, unsigned threads) {
              const SimConfig c = sim_config(tp, 1.0, scheduler, 10, true, delta, eps, horizon, seed, py::int_(1), false);
              std::vector<SweepRow> rows;
              {
                  py::gil_scoped_release release;
                  rows = sweep(c, alphas, threads);
              }
              py::dict d;
              py::list table;
              for (const auto& r : rows) {
                  py::dict row = metrics(r.metrics);
                  row["alpha"] = r.alpha;
                  row["scheduler"] = r.scheduler;
                  table.append(row);
              }
              d["rows"] = table;
              d["csv"] = sweep_csv(rows);
              return d;
          },
          py::arg("pattern"), py::arg("alphas"), py::arg("scheduler") = "mwss", py::arg("delta") = 3000,
          py::arg("eps") = "1/200", py::arg("horizon") = 100000, py::arg("seed") = 1, py::arg("threads") = 0);
    m.def("stability_probe",
          [](const TrafficPattern& tp, double alpha, std::int64_t horizon, std::uint64_t seed) {
              SimConfig c(tp);
              c.alpha = alpha;
              c.horizon = horizon;
              c.seed = seed;
              const auto r = stability_probe(c);
              py::dict d;
              d["slots"] = r.slots;
              d["empty_visits"] = r.empty_visits;
              d["flow_empty_visits"] = r.flow_empty_visits;
              d["max_gap"] = r.max_gap;
              d["mean_gap"] = r.mean_gap;
              d["inconsistent_visits"] = r.inconsistent_visits;
              return d;
          },
          py::arg("pattern"), py::arg("alpha"), py::arg("horizon") = 100000, py::arg("seed") = 1);

    m.def("mds_encode",
          [](const std::vector<py::bytes>& data, int n) {
              std::vector<Packet> packets;
              for (const auto& b : data) {
                  const std::string s = b;
                  packets.emplace_back(s.begin(), s.end());
              }
              py::list out;
              for (const auto& p : mds_encode(packets, n)) out.append(py::bytes(reinterpret_cast<const char*>(p.data()), p.size()));
              return out;
          },
          py::arg("data"), py::arg("n"));
    m.def("mds_decode",
          [](const std::vector<std::pair<int, py::bytes>>& symbols, int k, int n) {
              std::vector<std::pair<int, Packet>> in;
              for (const auto& [pos, b] : symbols) {
                  const std::string s = b;
                  in.emplace_back(pos, Packet(s.begin(), s.end()));
              }
              py::list out;
              for (const auto& p : mds_decode(in, k, n)) out.append(py::bytes(reinterpret_cast<const char*>(p.data()), p.size()));
              return out;
          },
          py::arg("symbols"), py::arg("k"), py::arg("n"));

    m.def("run_acceptance",
          [](const std::vector<int>& ids) {
              std::vector<CriterionResult> results;
              {
                  py::gil_scoped_release release;
                  results = run_acceptance(ids);
              }
              py::list out;
              for (const auto& r : results) {
                  py::dict d;
                  d["id"] = r.id;
                  d["name"] = r.name;
                  d["passed"] = r.passed;
                  d["detail"] = r.detail;
                  d["seconds"] = r.seconds;
                  out.append(d);
              }
              return out;
          },
          py::arg("ids") = std::vector<int>{});
}
