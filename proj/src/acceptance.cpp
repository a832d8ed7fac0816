#include "ncswitch/acceptance.hpp"

#include "ncswitch/coding.hpp"
#include "ncswitch/corpus.hpp"
#include "ncswitch/error.hpp"
#include "ncswitch/graph.hpp"
#include "ncswitch/polytope.hpp"
#include "ncswitch/scheduler.hpp"
#include "ncswitch/sim.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <functional>
#include <future>
#include <iomanip>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>

namespace ncswitch {

namespace {

struct Outcome {
    bool passed = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            if (passed) detail.str("");
            passed = false;
            detail << "FAILED: " << what << "; ";
        }
    }
};

std::string frac(const Rational& r) {
    std::ostringstream s;
    s << r;
    return s.str();
}

void speedup_constant(Outcome& o) {
    const Rational s = speedup_for_rate(speedup_pattern_2x3()).value;
    o.require(s == Rational(5, 4), "speedup_for_rate(speedup 2x3) = " + frac(s));
    if (o.passed) o.detail << "speedup_for_rate = " << s;
}

void fs_scaling(Outcome& o) {
    for (int n = 3; n <= 8; ++n) {
        const Rational got = fs_min_scaling(n);
        o.require(got == Rational(3, 2) - Rational(1, n), "N=" + std::to_string(n) + " gives " + frac(got));
    }
    o.require(fs_min_scaling(3) == Rational(7, 6), "N=3 is not 7/6");
    o.require(fs_min_scaling(4) == Rational(5, 4), "N=4 is not 5/4");
    if (o.passed) o.detail << "3/2 - 1/N for N = 3..8 (7/6, 5/4, ..., 11/8)";
}

void no_splitting(Outcome& o) {
    const auto tp = special_rate_point(3);
    const auto g = build_flow_conflict_graph(tp);
    const Rational chi = fractional_chromatic(g, flow_weights(tp)).value;
    o.require(chi == Rational(5, 3), "flow-graph chi_f = " + frac(chi));
    if (o.passed) o.detail << "flow conflict graph chi_f = " << chi;
}

void perfection(Outcome& o) {
    for (int n = 2; n <= 6; ++n) {
        const auto tp = benefit_pattern(n, Rational(1, 2), std::vector<Rational>(static_cast<std::size_t>(n), Rational(1, 4)));
        o.require(is_perfect(build_enhanced_conflict_graph(tp)), "benefit pattern N=" + std::to_string(n) + " not perfect");
    }
    o.require(is_perfect(build_enhanced_conflict_graph(relaxed_pattern_bipartite())), "relaxed bipartite pattern not perfect");
    const auto g = build_enhanced_conflict_graph(speedup_pattern_2x3());
    const auto hole = find_odd_hole(g, g.size());
    o.require(hole.has_value(), "no odd hole in the speedup 2x3 graph");
    o.require(!is_perfect(g), "speedup 2x3 graph reported perfect");
    if (o.passed) o.detail << "benefit N=2..6 and relaxed bipartite perfect; speedup 2x3 has a " << hole->size() << "-hole";
}

void perfect_covers(Outcome& o) {
    auto members_perfect = [&](const ConflictGraph& g, const std::vector<VertexSet>& family, const std::string& name) {
        for (VertexSet s : family) o.require(is_perfect(g.induced(s)), name + " has an imperfect member");
    };
    for (int k = 2; k <= 3; ++k) {
        const auto g = build_enhanced_conflict_graph(unicast_broadcast_pattern(k, 3, Rational(0)));
        const auto family = input_perfect_family(g, k, 3);
        members_perfect(g, family, "input family K=" + std::to_string(k));
        const Rational b = perfect_cover_bound(g, family);
        o.require(b == Rational(2 * k - 1, k), "K=" + std::to_string(k) + " bound " + frac(b));
    }
    for (int n = 3; n <= 4; ++n) {
        const auto g = build_enhanced_conflict_graph(unicast_broadcast_pattern(2, n, Rational(0)));
        const auto family = output_perfect_family(g, 2, n);
        members_perfect(g, family, "output family N=" + std::to_string(n));
        const Rational b = perfect_cover_bound(g, family);
        o.require(b == Rational(2 * n, n + 1), "N=" + std::to_string(n) + " bound " + frac(b));
    }
    if (o.passed) o.detail << "3/2, 5/3 (K=2,3) and 3/2, 8/5 (N=3,4)";
}

void speedup_chain(Outcome& o) {
    int checked = 0;
    int skipped = 0;
    for (const auto& [name, tp] : pattern_corpus()) {
        try {
            const Rational at_rate = speedup_for_rate(tp).value;
            const Rational worst = min_speedup_exact(tp).value;
            const Rational imp = imperfection_ratio(build_enhanced_conflict_graph(tp)).value;
            o.require(at_rate <= worst && worst <= imp,
                      name + ": " + frac(at_rate) + ", " + frac(worst) + ", " + frac(imp));
            ++checked;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::LimitExceeded) throw;
            ++skipped;
        }
    }
    o.require(checked > 0, "no corpus pattern within limits");
    const Rational c5 = imperfection_ratio(cycle_graph(5)).value;
    o.require(c5 == Rational(5, 4), "imp(C5) = " + frac(c5));
    if (o.passed) o.detail << checked << " corpus patterns satisfy the chain (" << skipped << " over limits); imp(C5) = 5/4";
}

void corner_points(Outcome& o) {
    std::size_t total = 0;
    for (int n = 3; n <= 5; ++n) {
        const auto g = build_enhanced_conflict_graph(corner_point_pattern(n, Rational(0)));
        for (const auto& cp : qstab_corner_points_2xN(n)) {
            const std::string where = "N=" + std::to_string(n) + " m=" + std::to_string(cp.m);
            o.require(cp.tight_rank == 3 * n, where + " tight rank " + std::to_string(cp.tight_rank));
            o.require(qstab_membership(g, cp.point).member, where + " outside QSTAB");
            const auto u = static_cast<std::int64_t>(cp.u.size());
            const Rational bound = Rational(1) + Rational(1, u) - Rational(1, u * u);
            const auto d = cornerpoint_decomposition(n, cp.m, cp.u, cp.v);
            o.require(d.total == bound && bound <= Rational(5, 4), where + " total " + frac(d.total));
            o.require(verify_decomposition(g, cp.point, d, true), where + " decomposition does not cover the point");
            ++total;
        }
    }
    o.require(total > 0, "no corner points");
    if (o.passed) o.detail << total << " corner points for N = 3..5 extreme, decomposed within 1 + 1/|U| - 1/|U|^2 <= 5/4";
}

void frame_schedules(Outcome& o) {
    int verified = 0;
    int outside = 0;
    for (const auto& [name, tp] : pattern_corpus()) {
        std::optional<FrameSchedule> s;
        try {
            s = offline_schedule(tp);
        } catch (const NotInStabError&) {
            ++outside;
            continue;
        }
        const auto report = verify_frame_service(*s, full_queues(*s));
        o.require(report.served, name + " not decoded at every output");
        o.require(report.innovation_sets_stable, name + " has an innovation set that is not stable");
        ++verified;
    }
    o.require(verified > 0, "no corpus pattern inside STAB");
    if (o.passed) o.detail << verified << " corpus patterns in STAB decoded; " << outside << " outside STAB skipped";
}

void coding(Outcome& o) {
    std::vector<KnowledgeSpace> binary_lines;
    std::vector<KnowledgeSpace> quaternary_lines;
    for (CoefficientVector d : {CoefficientVector{1, 0}, CoefficientVector{0, 1}, CoefficientVector{1, 1}}) {
        binary_lines.emplace_back(2, 1);
        binary_lines.back().insert(d);
        quaternary_lines.emplace_back(2, 2);
        quaternary_lines.back().insert(d);
    }
    const auto q2 = exists_uncovered_vector(2, binary_lines);
    o.require(!q2.exists && q2.exhaustive, "q=2: three lines should cover GF(2)^2");
    const auto q4 = exists_uncovered_vector(2, quaternary_lines);
    o.require(q4.exists && q4.exhaustive, "q=4: an uncovered vector should exist");

    std::mt19937_64 rng(9);
    std::int64_t patterns = 0;
    for (auto [n, k] : {std::pair{4, 2}, std::pair{5, 4}, std::pair{6, 3}}) {
        std::vector<Packet> data(static_cast<std::size_t>(k), Packet(16));
        for (auto& p : data)
            for (auto& b : p) b = static_cast<std::uint8_t>(rng());
        const auto code = mds_encode(data, n);
        for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
            if (std::popcount(mask) != k) continue;
            std::vector<std::pair<int, Packet>> got;
            for (int i = 0; i < n; ++i)
                if (mask >> i & 1U) got.emplace_back(i, code[static_cast<std::size_t>(i)]);
            o.require(mds_decode(got, k, n) == data,
                      "(n,k)=(" + std::to_string(n) + "," + std::to_string(k) + ") erasure pattern " + std::to_string(mask));
            ++patterns;
        }
    }
    if (o.passed) o.detail << "q=2 covered, q=4 uncovered (exhaustive); " << patterns << " MDS erasure patterns decoded";
}

void simulation_knees(Outcome& o) {
    auto config = [](double alpha, SimScheduler s) {
        SimConfig c{special_rate_point(4)};
        c.alpha = alpha;
        c.scheduler = s;
        c.delta = 3000;
        c.eps = Rational(1, 200);
        c.horizon = 300000;
        c.seed = 42;
        return c;
    };
    struct Case {
        double alpha;
        SimScheduler scheduler;
        bool want_stable;
    };
    const std::vector<Case> cases{{0.95, SimScheduler::MwssExact, true},
                                  {1.1, SimScheduler::MwssExact, false},
                                  {0.7, SimScheduler::FanoutSplitting, true},
                                  {0.9, SimScheduler::FanoutSplitting, false},
                                  {0.02, SimScheduler::MwssExact, true}};
    std::vector<std::future<SimMetrics>> runs;
    for (const auto& c : cases) runs.push_back(std::async(std::launch::async, [cfg = config(c.alpha, c.scheduler)] { return run(cfg); }));
    std::ostringstream summary;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const SimMetrics m = runs[i].get();
        const auto& c = cases[i];
        std::ostringstream what;
        what << to_string(c.scheduler) << " at alpha " << c.alpha << (m.stable ? " stable" : " unstable");
        o.require(m.stable == c.want_stable, what.str());
        o.require(m.conservation_ok && m.vq_consistent, what.str() + " broke an invariant");
        summary << what.str() << ", ";
        if (c.alpha < 0.1) {
            o.require(std::abs(m.mean_delay - 1500) <= 150, "light-load delay " + std::to_string(m.mean_delay));
            summary << "light-load delay " << std::fixed << std::setprecision(1) << m.mean_delay;
        }
    }
    if (o.passed) o.detail << summary.str();
}

struct Criterion {
    int id;
    const char* name;
    double budget;
    std::function<void(Outcome&)> check;
};

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> all{
        {1, "speedup constant 5/4", 1, speedup_constant},
        {2, "fanout-splitting scaling 3/2 - 1/N", 1, fs_scaling},
        {3, "no-splitting speedup 5/3", 5, no_splitting},
        {4, "perfection verdicts", 10, perfection},
        {5, "perfect-cover bounds", 30, perfect_covers},
        {6, "speedup chain and imp(C5) = 5/4", 60, speedup_chain},
        {7, "2xN corner points", 60, corner_points},
        {8, "coded frames decode on the corpus", 60, frame_schedules},
        {9, "coding properties", 30, coding},
        {10, "simulation knees and batching delay", 300, simulation_knees},
        {11, "volumes out of scope, speedups covered", 1, nullptr},
    };
    return all;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids) {
    std::vector<int> wanted = ids;
    if (wanted.empty()) {
        wanted.resize(kCriteriaCount);
        std::iota(wanted.begin(), wanted.end(), 1);
    }
    for (int id : wanted)
        if (id < 1 || id > kCriteriaCount) throw Error(ErrorCode::InvalidArgument, "no criterion " + std::to_string(id));

    std::vector<CriterionResult> out;
    std::map<int, bool> verdicts;
    for (int id : wanted) {
        const Criterion& c = criteria()[static_cast<std::size_t>(id - 1)];
        CriterionResult r{c.id, c.name, false, "", 0, c.budget};
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            if (c.check) {
                c.check(o);
            } else {
                // volumes are out of scope; the matching speedup constants are criteria 1 and 3
                bool covered = true;
                for (int dep : {1, 3}) {
                    if (!verdicts.contains(dep)) {
                        Outcome sub;
                        criteria()[static_cast<std::size_t>(dep - 1)].check(sub);
                        verdicts[dep] = sub.passed;
                    }
                    covered = covered && verdicts[dep];
                }
                o.require(covered, "speedup constants not confirmed by criteria 1 and 3");
                if (o.passed) o.detail << "volumes not computed by design; speedup constants confirmed by criteria 1 and 3";
            }
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (o.passed && r.seconds > r.budget_seconds) o.require(false, "over the time budget");
        r.passed = o.passed;
        r.detail = o.detail.str();
        verdicts[id] = r.passed;
        out.push_back(std::move(r));
    }
    return out;
}

std::string format_result(const CriterionResult& r) {
    std::ostringstream s;
    s << (r.passed ? "PASS " : "FAIL ") << std::setw(2) << r.id << "  " << r.name << " (" << std::fixed
      << std::setprecision(2) << r.seconds << " s): " << r.detail;
    return s.str();
}

std::vector<PropertyTally> coding_properties(std::uint64_t seed, int trials) {
    std::mt19937_64 rng(seed);
    std::vector<PropertyTally> out;
    auto tally = [&](const std::string& name, const std::function<bool()>& trial) {
        PropertyTally t{name, 0, 0};
        for (int i = 0; i < trials; ++i) (trial() ? t.passed : t.failed)++;
        out.push_back(t);
    };
    const GaloisField& f = GaloisField::get(8);
    auto element = [&] { return static_cast<FieldElement>(rng()); };

    tally("field axioms", [&] {
        const FieldElement a = element();
        const FieldElement b = element();
        const FieldElement c = element();
        bool ok = f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c));
        ok = ok && f.mul(a, GaloisField::add(b, c)) == GaloisField::add(f.mul(a, b), f.mul(a, c));
        ok = ok && f.mul(a, b) == f.mul(b, a);
        if (a != 0) ok = ok && f.mul(a, f.inv(a)) == 1;
        return ok;
    });

    tally("insert never lowers dimension", [&] {
        KnowledgeSpace s(6, 2);
        int last = 0;
        for (int i = 0; i < 10; ++i) {
            CoefficientVector v(6);
            for (auto& x : v) x = static_cast<FieldElement>(rng() % 4);
            const bool innovative = s.insert(v);
            if (s.dimension() < last || s.dimension() > s.ambient()) return false;
            if (innovative != (s.dimension() == last + 1)) return false;
            last = s.dimension();
        }
        return true;
    });

    tally("innovative combination reaches every receiver", [&] {
        const int n = 2 + static_cast<int>(rng() % 6);
        KnowledgeSpace input(n, 8);
        for (int c = 0; c < n; ++c) {
            CoefficientVector e(static_cast<std::size_t>(n), 0);
            e[static_cast<std::size_t>(c)] = 1;
            input.insert(e);
        }
        std::vector<KnowledgeSpace> receivers;
        const int count = 1 + static_cast<int>(rng() % 4);
        for (int r = 0; r < count; ++r) {
            KnowledgeSpace s(n, 8);
            const int dim = static_cast<int>(rng() % static_cast<unsigned>(n));
            while (s.dimension() < dim) {
                CoefficientVector v(static_cast<std::size_t>(n));
                for (auto& x : v) x = element();
                s.insert(v);
            }
            receivers.push_back(s);
        }
        const auto v = innovative_combination(input, receivers);
        return std::ranges::all_of(receivers, [&](KnowledgeSpace& s) { return s.insert(v); });
    });

    tally("MDS round trip", [&] {
        const int k = 1 + static_cast<int>(rng() % 6);
        const int n = k + static_cast<int>(rng() % static_cast<unsigned>(11 - k));
        std::vector<Packet> data(static_cast<std::size_t>(k), Packet(8));
        for (auto& p : data)
            for (auto& b : p) b = element();
        const auto code = mds_encode(data, n);
        std::vector<int> pos(static_cast<std::size_t>(n));
        std::iota(pos.begin(), pos.end(), 0);
        std::shuffle(pos.begin(), pos.end(), rng);
        std::vector<std::pair<int, Packet>> got;
        for (int i = 0; i < k; ++i) got.emplace_back(pos[static_cast<std::size_t>(i)], code[static_cast<std::size_t>(pos[static_cast<std::size_t>(i)])]);
        return mds_decode(got, k, n) == data;
    });
    return out;
}

}  // namespace ncswitch
