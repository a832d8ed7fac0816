#include "ncswitch/corpus.hpp"
#include "ncswitch/error.hpp"
#include "ncswitch/polytope.hpp"
#include "ncswitch/scheduler.hpp"

#include <doctest.h>

#include "oracles.hpp"

#include <random>

using namespace ncswitch;

namespace {

// Brute-force maximum stable-set weight.
std::int64_t best_stable_weight(const ConflictGraph& g, const QueueWeights& w) {
    std::int64_t best = 0;
    for (VertexSet s = 0; s <= g.all(); ++s)
        if (g.is_stable(s)) best = std::max(best, set_weight(w, s));
    return best;
}

ConflictGraph random_graph(std::mt19937_64& rng, int n, int percent) {
    ConflictGraph g(n);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (static_cast<int>(rng() % 100) < percent) g.add_edge(u, v);
    return g;
}

std::int64_t grants_for(const FrameSchedule& s, const SubflowId& id) {
    std::int64_t n = 0;
    for (const auto& slot : s.slots) {
        auto it = slot.grants.find(id.input);
        if (it != slot.grants.end() && it->second.flow == id.flow() &&
            std::binary_search(it->second.outputs.begin(), it->second.outputs.end(), id.output)) {
            ++n;
        }
    }
    return n;
}

void check_frame_invariants(const FrameSchedule& s) {
    CHECK(static_cast<std::int64_t>(s.slots.size()) == s.frame_size);
    for (const auto& slot : s.slots) CHECK(configuration_violation(s.pattern, slot).empty());
    const TrafficPattern scaled = s.pattern.scaled(Rational(1) / s.speedup);
    for (const auto& f : scaled.flows()) {
        const Rational need = f.rate * Rational(s.frame_size);
        REQUIRE(need.is_integer());
        for (int j : f.fanout) CHECK(grants_for(s, SubflowId{f.input, f.fanout, j}) == need.numerator_i64());
    }
}

}  // namespace

TEST_CASE("configuration validator") {
    const TrafficPattern tp = speedup_pattern_2x3();
    SwitchConfiguration ok;
    ok.grants[1] = {FlowKey{1, {1, 2, 3}}, {1, 2}};
    ok.grants[2] = {FlowKey{2, {1}}, {1}};
    CHECK(configuration_violation(tp, ok).find("two inputs") != std::string::npos);
    ok.grants[1].outputs = {2, 3};
    CHECK(configuration_violation(tp, ok).empty());
    SwitchConfiguration outside;
    outside.grants[2] = {FlowKey{2, {1}}, {2}};
    CHECK_FALSE(configuration_violation(tp, outside).empty());
    SwitchConfiguration unknown;
    unknown.grants[2] = {FlowKey{2, {3}}, {3}};
    CHECK_THROWS_AS(validate_configuration(tp, unknown), Error);
    SwitchConfiguration wrong_input;
    wrong_input.grants[2] = {FlowKey{1, {3}}, {3}};
    CHECK_FALSE(configuration_violation(tp, wrong_input).empty());
    CHECK(configuration_violation(tp, SwitchConfiguration{}).empty());

    const ConflictGraph g = build_enhanced_conflict_graph(tp);
    for (VertexSet s : maximal_stable_sets(g)) {
        const auto c = configuration_from_stable_set(g, s);
        CHECK(configuration_violation(tp, c).empty());
        CHECK(stable_set_of(g, c) == s);
    }
    CHECK_THROWS_AS(configuration_from_stable_set(g, g.all()), Error);
}

TEST_CASE("offline schedule at the special rate point") {
    const FrameSchedule s = offline_schedule(special_rate_point(3));
    CHECK(s.frame_size == 3);
    CHECK(s.physical_slots == 3);
    REQUIRE(s.slots.size() == 3);
    for (int t = 0; t < 3; ++t) {
        const int j = t + 1;
        const auto& slot = s.slots[static_cast<std::size_t>(t)];
        REQUIRE(slot.grants.count(2) == 1);
        CHECK(slot.grants.at(2).flow == FlowKey{2, {j}});
        std::vector<int> rest;
        for (int o = 1; o <= 3; ++o)
            if (o != j) rest.push_back(o);
        CHECK(slot.grants.at(1).outputs == rest);
    }
    REQUIRE(s.codes.size() == 4);
    CHECK(s.codes[0].flow == FlowKey{1, {1, 2, 3}});
    CHECK(s.codes[0].packets == 2);
    CHECK(s.codes[0].symbols == 3);
    CHECK(s.codes[1].packets == 1);
    CHECK(s.codes[1].symbols == 1);
    check_frame_invariants(s);
}

TEST_CASE("offline schedule with speedup") {
    try {
        (void)offline_schedule(speedup_pattern_2x3());
        FAIL("expected the pattern to be outside the rate region");
    } catch (const NotInStabError& e) {
        CHECK(e.chi_f() == Rational(5, 4));
        CHECK(e.code() == ErrorCode::NotInStab);
    }
    const FrameSchedule s = offline_schedule(speedup_pattern_2x3(), Rational(5, 4));
    CHECK(s.frame_size == 5);
    CHECK(s.physical_slots == 4);
    CHECK(s.physical_slot == std::vector<std::int64_t>{0, 0, 1, 2, 3});
    for (const auto& code : s.codes) CHECK(code.packets == 2);  // two packets per flow over 4 slots at rate 1/2
    check_frame_invariants(s);
    CHECK(verify_frame_service(s, full_queues(s)).served);
}

TEST_CASE("single flow at full rate") {
    const TrafficPattern tp(1, 2, {{1, {1, 2}, Rational(1)}});
    const FrameSchedule s = offline_schedule(tp);
    CHECK(s.frame_size == 1);
    REQUIRE(s.slots.size() == 1);
    CHECK(s.slots[0].grants.at(1).outputs == std::vector<int>{1, 2});
}

TEST_CASE("frame service") {
    const FrameSchedule s = offline_schedule(special_rate_point(4));
    const auto full = verify_frame_service(s, full_queues(s));
    CHECK(full.served);
    CHECK(full.deficits.empty());
    CHECK(full.innovation_sets_stable);
    CHECK(full.innovation_sets.size() == s.slots.size());

    CHECK(verify_frame_service(s, {}).served);
    std::map<FlowKey, std::int64_t> some{{FlowKey{1, {1, 2, 3, 4}}, 1}, {FlowKey{2, {3}}, 5}};
    CHECK(verify_frame_service(s, some).served);

    FrameSchedule cut = s;
    cut.slots.erase(cut.slots.begin() + 1);
    const auto r = verify_frame_service(cut, full_queues(cut));
    CHECK_FALSE(r.served);
    REQUIRE_FALSE(r.deficits.empty());
    for (const auto& d : r.deficits) CHECK(d.deficit == 1);
}

TEST_CASE("every corpus pattern gets a verified frame") {
    for (const auto& [name, tp] : pattern_corpus()) {
        CAPTURE(name);
        Rational speedup(1);
        try {
            (void)offline_schedule(tp);
        } catch (const NotInStabError& e) {
            speedup = e.chi_f();
        }
        const FrameSchedule s = offline_schedule(tp, speedup);
        check_frame_invariants(s);
        const auto report = verify_frame_service(s, full_queues(s));
        CHECK(report.served);
        CHECK(report.innovation_sets_stable);
    }
}

TEST_CASE("exact max-weight stable set") {
    const TrafficPattern tp = special_rate_point(3);
    const ConflictGraph g = build_enhanced_conflict_graph(tp);
    CHECK(mwss_exact(g, QueueWeights(6, 0)) == 0);
    const QueueWeights w{2, 2, 2, 1, 1, 1};
    const VertexSet s = mwss_exact(g, w);
    CHECK(s == make_set({0, 1, 2}));
    CHECK(set_weight(w, s) == 6);
    CHECK(mwss_exact(g, QueueWeights{0, 0, 0, 0, 7, 0}) == singleton(4));

    std::mt19937_64 rng(77);
    for (int t = 0; t < 300; ++t) {
        const int n = 1 + static_cast<int>(rng() % 10);
        const ConflictGraph h = random_graph(rng, n, static_cast<int>(rng() % 80));
        QueueWeights q(static_cast<std::size_t>(n));
        for (auto& x : q) x = static_cast<std::int64_t>(rng() % 5);
        const VertexSet best = mwss_exact(h, q);
        CHECK(h.is_stable(best));
        CHECK(set_weight(q, best) == best_stable_weight(h, q));
        for_each_member(best, [&](int v) { CHECK(q[static_cast<std::size_t>(v)] > 0); });
    }
    CHECK_THROWS_AS(mwss_exact(ConflictGraph(25), QueueWeights(25, 1)), Error);
}

TEST_CASE("randomized max-weight stable set") {
    std::mt19937_64 rng(78);
    for (int t = 0; t < 200; ++t) {
        const int n = 1 + static_cast<int>(rng() % 10);
        const ConflictGraph h = random_graph(rng, n, static_cast<int>(rng() % 80));
        QueueWeights q(static_cast<std::size_t>(n));
        for (auto& x : q) x = static_cast<std::int64_t>(rng() % 5);
        const VertexSet many = mwss_randomized(h, q, 0, 3000, rng());
        CHECK(set_weight(q, many) == best_stable_weight(h, q));
        const VertexSet previous = mwss_randomized(h, q, 0, 1, rng());
        const VertexSet next = mwss_randomized(h, q, previous, 2, rng());
        CHECK(h.is_stable(next));
        CHECK(set_weight(q, next) >= set_weight(q, previous));
        CHECK(mwss_randomized(h, q, previous, 4, 5) == mwss_randomized(h, q, previous, 4, 5));
    }
    const ConflictGraph one(1);
    CHECK(mwss_randomized(one, QueueWeights{3}, 0, 1, 1) == 1);
    CHECK(mwss_randomized(one, QueueWeights{0}, 0, 1, 1) == 0);
    CHECK_THROWS_AS(mwss_randomized(one, QueueWeights{0}, 0, 0, 1), Error);
}

TEST_CASE("online coded steps") {
    CodedSwitch idle(special_rate_point(3));
    OnlinePolicy policy;
    const auto nothing = online_step(idle, policy);
    CHECK(nothing.configuration.idle());
    CHECK(nothing.transmissions.empty());

    const TrafficPattern bcast(1, 3, {{1, {1, 2, 3}, Rational(1)}});
    CodedSwitch sw(bcast);
    sw.add_packets(0, 2);
    const auto step = online_step(sw, policy);
    REQUIRE(step.transmissions.size() == 1);
    CHECK(step.transmissions[0].vertices.size() == 3);
    CHECK(sw.virtual_queues() == QueueWeights{1, 1, 1});
    CHECK(sw.consistent());

    // mixed load: every step keeps the invariants, and the queues drain
    for (auto kind : {SchedulerKind::MwssExact, SchedulerKind::MwssRandomized}) {
        CodedSwitch s(speedup_pattern_2x3());
        OnlinePolicy p;
        p.kind = kind;
        p.rng.seed(3);
        for (int f = 0; f < 4; ++f) s.add_packets(f, 20);
        const std::int64_t start = s.total_virtual_queue();
        int slots = 0;
        while (s.total_virtual_queue() > 0 && slots < 1000) {
            const auto before = s.virtual_queues();
            const auto r = online_step(s, p);
            CHECK(configuration_violation(s.pattern(), r.configuration).empty());
            CHECK(s.graph().is_stable(r.chosen));
            for (int v = 0; v < s.graph().size(); ++v) {
                const auto drop = before[static_cast<std::size_t>(v)] - s.virtual_queue(v);
                CHECK(drop == (contains(r.chosen, v) ? 1 : 0));
            }
            CHECK(s.consistent());
            ++slots;
        }
        CHECK(s.total_virtual_queue() == 0);
        // 120 packet-outputs; no stable set has more than 3 vertices
        CHECK(start == 120);
        CHECK(slots >= 40);
        for (int f = 0; f < 4; ++f) {
            CHECK(s.flow_cleared(f));
            for (int v : s.vertices_of(f)) CHECK(s.output_space(v).decoded_count() == 20);
            CHECK(s.flush(f) == 20);
        }
    }
}

TEST_CASE("coding needs only a small field") {
    // fanout at most 3: GF(4) suffices for innovative combinations
    CodedSwitch s(special_rate_point(3), 2);
    OnlinePolicy p;
    for (int f = 0; f < 4; ++f) s.add_packets(f, 30);
    while (s.total_virtual_queue() > 0) (void)online_step(s, p);
    CHECK(s.consistent());
}

TEST_CASE("uncoded fanout-splitting steps") {
    const TrafficPattern bcast(1, 3, {{1, {1, 2, 3}, Rational(1)}});
    UncodedSwitch one(bcast);
    one.add_packet(0, 0);
    std::mt19937_64 rng(1);
    auto r = fanout_splitting_step(one, 4, rng);
    CHECK(r.configuration.grants.at(1).outputs == std::vector<int>{1, 2, 3});
    CHECK(r.departures.size() == 1);
    CHECK(one.queued_packets() == 0);

    const TrafficPattern contend(2, 1, {{1, {1}, Rational(1, 2)}, {2, {1}, Rational(1, 2)}});
    UncodedSwitch two(contend);
    for (int t = 0; t < 10; ++t) {
        two.add_packet(0, t);
        two.add_packet(1, t);
    }
    for (int t = 0; t < 20; ++t) {
        auto step = fanout_splitting_step(two, 4, rng);
        CHECK(step.configuration.grants.size() == 1);
        CHECK(step.departures.size() == 1);
    }
    CHECK(two.queued_packets() == 0);

    // head-of-line packet split across slots departs once its residual empties
    UncodedSwitch split(special_rate_point(3));
    split.add_packet(0, 0);
    split.add_packet(2, 0);  // unicast to output 2 competes for one output
    const QueueWeights before = split.residual_backlogs();
    CHECK(split.total_backlog() == 4);
    std::int64_t departed = 0;
    for (int t = 0; t < 4 && split.queued_packets() > 0; ++t) {
        auto step = fanout_splitting_step(split, 8, rng);
        CHECK(configuration_violation(split.pattern(), step.configuration).empty());
        departed += static_cast<std::int64_t>(step.departures.size());
    }
    CHECK(departed == 2);
    CHECK(before.size() == 6);
}

TEST_CASE("batch controller") {
    const BatchController a(3000, Rational(1, 200));
    CHECK(a.period() == 3015);
    CHECK(a.clearing_window() == 15);
    const BatchController b(1000, Rational(1, 200));
    CHECK(b.clearing_window() == 5);
    CHECK(b.batch_of(1004) == 0);
    CHECK(b.batch_of(1005) == 1);
    CHECK(b.opens_at(1) == 1005);
    CHECK(b.closes_at(0) == 1004);
    CHECK_FALSE(b.serviceable(1, 1004));
    CHECK(b.serviceable(1, 1005));
    CHECK_FALSE(b.flushable(1, 2008));
    CHECK(b.flushable(1, 2009));
    CHECK(BatchController(10, Rational(1, 3)).clearing_window() == 4);  // rounded up
    CHECK_THROWS_AS(BatchController(1000, Rational(0)), Error);
    CHECK_THROWS_AS(BatchController(0, Rational(1, 2)), Error);
}

namespace {

// Plays an uncoded schedule packet by packet and checks every packet reaches its whole fanout.
bool uncoded_frame_delivers(const FrameSchedule& s) {
    const auto& flows = s.pattern.flows();
    std::vector<std::int64_t> need(flows.size());
    for (std::size_t f = 0; f < flows.size(); ++f) {
        const Rational c = flows[f].rate * Rational(s.frame_size);
        if (!c.is_integer()) return false;
        need[f] = c.numerator_i64();
    }
    // per flow: packets delivered to each output
    std::vector<std::map<int, std::int64_t>> delivered(flows.size());
    for (const auto& slot : s.slots) {
        for (const auto& [input, g] : slot.grants) {
            for (std::size_t f = 0; f < flows.size(); ++f)
                if (flows[f].key() == g.flow)
                    for (int j : g.outputs) ++delivered[f][j];
        }
    }
    for (std::size_t f = 0; f < flows.size(); ++f)
        for (int j : flows[f].fanout)
            if (delivered[f][j] != need[f]) return false;
    return true;
}

}  // namespace

TEST_CASE("fanout-splitting frame construction") {
    // boundary 2 r0 + S = 2 with r0 / S > 1/2
    const std::vector<Rational> r{Rational(1, 6), Rational(1, 6), Rational(1, 6)};
    const FrameSchedule b = appendix_fs_schedule(3, Rational(3, 4), r);
    CHECK(static_cast<std::int64_t>(b.slots.size()) == b.frame_size);
    CHECK(uncoded_frame_delivers(b));
    for (const auto& slot : b.slots) CHECK(configuration_violation(b.pattern, slot).empty());

    const FrameSchedule u = appendix_fs_schedule(3, Rational(0), {Rational(1, 3), Rational(1, 2), Rational(1, 6)});
    CHECK(uncoded_frame_delivers(u));
    for (const auto& slot : u.slots) CHECK(slot.grants.count(1) == 0);
    CHECK(static_cast<std::int64_t>(u.slots.size()) == u.frame_size);  // input 2 fully loaded

    CHECK_THROWS_AS(appendix_fs_schedule(3, Rational(2, 3), {Rational(1, 3), Rational(1, 3), Rational(1, 3)}), Error);

    std::mt19937_64 rng(2024);
    int accepted = 0;
    while (accepted < 500) {
        const int n = 2 + static_cast<int>(rng() % 4);
        auto draw = [&] { return Rational(static_cast<std::int64_t>(rng() % 13), 12); };
        const Rational r0 = draw();
        std::vector<Rational> rates;
        for (int i = 0; i < n; ++i) rates.push_back(draw());
        if (!fs_region_check(n, r0, rates)) continue;
        ++accepted;
        const FrameSchedule s = appendix_fs_schedule(n, r0, rates);
        CHECK(static_cast<std::int64_t>(s.slots.size()) <= s.frame_size);
        CHECK(uncoded_frame_delivers(s));
        for (const auto& slot : s.slots) CHECK(configuration_violation(s.pattern, slot).empty());
    }
}

TEST_CASE("batched steps serve the oldest batch that still owes the output") {
    const auto tp = special_rate_point(3);
    CodedSwitch old_batch(tp, 2);
    CodedSwitch new_batch(tp, 2);
    // only the broadcast flow has packets in the old batch, only unicasts in the new one
    int broadcast = -1;
    for (std::size_t f = 0; f < tp.size(); ++f)
        if (tp.flows()[f].fanout.size() == 3) broadcast = static_cast<int>(f);
    REQUIRE(broadcast >= 0);
    old_batch.add_packets(broadcast, 2);
    for (std::size_t f = 0; f < tp.size(); ++f)
        if (static_cast<int>(f) != broadcast) new_batch.add_packets(static_cast<int>(f), 2);
    OnlinePolicy policy;
    std::int64_t before = old_batch.total_virtual_queue() + new_batch.total_virtual_queue();
    int slots = 0;
    while (old_batch.total_virtual_queue() + new_batch.total_virtual_queue() > 0) {
        auto step = batched_online_step({&old_batch, &new_batch}, policy);
        CHECK(configuration_violation(tp, step.configuration).empty());
        std::int64_t served = 0;
        for (const auto& t : step.transmissions) {
            served += static_cast<std::int64_t>(t.vertices.size());
            CHECK((t.flow == broadcast) == (t.batch == 0));
        }
        const std::int64_t after = old_batch.total_virtual_queue() + new_batch.total_virtual_queue();
        CHECK(before - after == served);
        before = after;
        REQUIRE(++slots <= 20);
    }
    CHECK(old_batch.consistent());
    CHECK(new_batch.consistent());
    CHECK(batched_online_step({}, policy).transmissions.empty());
}
