#include "ncswitch/error.hpp"
#include "ncswitch/scheduler.hpp"
#include "ncswitch/sim.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace ncswitch;

namespace {

SimConfig small(const TrafficPattern& tp, double alpha, SimScheduler s = SimScheduler::MwssExact) {
    SimConfig c{tp};
    c.alpha = alpha;
    c.scheduler = s;
    c.delta = 300;
    c.eps = Rational(1, 100);
    c.horizon = 20000;
    c.seed = 7;
    return c;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("scheduler names parse and print") {
    CHECK(parse_scheduler("mwss") == SimScheduler::MwssExact);
    CHECK(parse_scheduler("mwss-rand") == SimScheduler::MwssRandomized);
    CHECK(parse_scheduler("fs") == SimScheduler::FanoutSplitting);
    CHECK(parse_scheduler(to_string(SimScheduler::FanoutSplitting)) == SimScheduler::FanoutSplitting);
    CHECK_THROWS_AS(parse_scheduler("fifo"), Error);
}

TEST_CASE("stability verdict from window means") {
    CHECK(backlog_stable(0, 0));
    CHECK(backlog_stable(0, 1));
    CHECK(backlog_stable(100, 140));
    CHECK_FALSE(backlog_stable(100, 190));
}

TEST_CASE("zero load leaves every queue empty") {
    for (auto s : {SimScheduler::MwssExact, SimScheduler::MwssRandomized, SimScheduler::FanoutSplitting}) {
        auto m = run(small(special_rate_point(3), 0.0, s));
        CHECK(m.arrivals == 0);
        CHECK(m.delay_samples == 0);
        CHECK(m.mean_delay == 0);
        CHECK(m.max_vq == 0);
        CHECK(m.empty_visits == 20000);
        CHECK(m.stable);
    }
}

TEST_CASE("invalid configurations are rejected") {
    auto c = small(special_rate_point(3), 0.5);
    c.alpha = -1;
    CHECK_THROWS_AS(run(c), Error);
    c = small(special_rate_point(3), 0.5);
    c.horizon = 100;
    CHECK_THROWS_AS(run(c), Error);
    c = small(special_rate_point(3), 0.5);
    c.speedup = Rational(1, 2);
    CHECK_THROWS_AS(run(c), Error);
    // alpha * rate above one arrival per slot
    c = small(special_rate_point(3), 3.0);
    CHECK_THROWS_AS(run(c), Error);
    c.clip = true;
    CHECK_NOTHROW(run(c));
}

TEST_CASE("runs conserve packets and keep virtual queues exact") {
    for (auto s : {SimScheduler::MwssExact, SimScheduler::MwssRandomized, SimScheduler::FanoutSplitting}) {
        for (bool batching : {true, false}) {
            auto c = small(special_rate_point(4), 0.8, s);
            c.batching = batching;
            auto m = run(c);
            CHECK(m.conservation_ok);
            CHECK(m.vq_consistent);
            CHECK(m.mean_delay >= 0);
            CHECK(m.departures <= m.arrivals);
            REQUIRE(m.throughput.size() == m.offered.size());
            for (std::size_t f = 0; f < m.offered.size(); ++f) {
                // sampling noise on 20000 slots stays well under 0.03 per flow
                CHECK(m.throughput[f] <= m.offered[f] + 0.03);
            }
        }
    }
}

TEST_CASE("same seed gives an identical trace") {
    const auto dir = std::filesystem::temp_directory_path();
    auto c = small(special_rate_point(3), 0.9, SimScheduler::MwssRandomized);
    c.horizon = 5000;
    c.trace_path = (dir / "ncswitch_trace_a.csv").string();
    auto a = run(c);
    c.trace_path = (dir / "ncswitch_trace_b.csv").string();
    auto b = run(c);
    const auto ta = slurp(dir / "ncswitch_trace_a.csv");
    CHECK(ta.starts_with("slot,arrivals,departures,backlog,max_subflow_backlog\n"));
    CHECK(ta == slurp(dir / "ncswitch_trace_b.csv"));
    CHECK(a.mean_delay == b.mean_delay);
    c.seed = 8;
    c.trace_path = (dir / "ncswitch_trace_c.csv").string();
    (void)run(c);
    CHECK(ta != slurp(dir / "ncswitch_trace_c.csv"));
    for (const char* n : {"ncswitch_trace_a.csv", "ncswitch_trace_b.csv", "ncswitch_trace_c.csv"})
        std::filesystem::remove(dir / n);
}

TEST_CASE("light-load coded delay is half a batch") {
    auto c = small(special_rate_point(4), 0.02);
    c.delta = 1000;
    c.eps = Rational(1, 200);
    c.horizon = 60000;
    auto m = run(c);
    // period 1005, packets wait on average (1005 - 1) / 2 for their batch to close
    CHECK(m.mean_delay == doctest::Approx(502).epsilon(0.1));
}

TEST_CASE("coded throughput keeps up with unit load") {
    for (int n = 3; n <= 4; ++n) {
        auto c = small(special_rate_point(n), 1.0);
        c.delta = 1000;
        c.eps = Rational(1, 200);
        c.horizon = 60000;
        auto m = run(c);
        double offered = 0;
        for (double r : m.offered) offered += r;
        CAPTURE(n);
        CHECK(m.total_throughput >= (1 - 2 * 0.005) * offered - 0.01);
    }
}

TEST_CASE("uncoded baseline backs up between 0.7 and 0.9") {
    auto c = small(special_rate_point(4), 0.7, SimScheduler::FanoutSplitting);
    c.horizon = 100000;
    auto low = run(c);
    c.alpha = 0.9;
    auto high = run(c);
    CHECK(low.stable);
    CHECK_FALSE(high.stable);
    CHECK(high.mean_backlog > 50 * low.mean_backlog);
}

TEST_CASE("speedup doubles the service clock") {
    auto c = small(special_rate_point(4), 1.0, SimScheduler::MwssExact);
    c.alpha = 1.1;
    c.speedup = Rational(2);
    auto m = run(c);
    CHECK(m.stable);
}

TEST_CASE("sweep runs each point with its own seed") {
    auto c = small(special_rate_point(3), 0.5);
    c.horizon = 4000;
    CHECK(sweep(c, {}).empty());
    CHECK(sweep_csv({}) == "alpha,scheduler,mean_delay,throughput,max_vq,stable\n");
    auto rows = sweep(c, {0.2, 0.5, 0.8}, 2);
    REQUIRE(rows.size() == 3);
    CHECK(rows[1].alpha == 0.5);
    CHECK(rows[1].scheduler == "mwss-exact");
    c.seed += 1;
    auto single = run(c);
    CHECK(rows[1].metrics.arrivals == single.arrivals);
    CHECK(rows[1].metrics.mean_delay == single.mean_delay);
    const auto csv = sweep_csv(rows);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
    CHECK_THROWS_AS(sweep(c, {0.5, 0.2}), Error);
}

TEST_CASE("alpha grids") {
    auto g = parse_grid("0.1:0.5:0.1");
    REQUIRE(g.size() == 5);
    CHECK(g.front() == doctest::Approx(0.1));
    CHECK(g.back() == doctest::Approx(0.5));
    CHECK(parse_grid("1:1:0.5").size() == 1);
    CHECK_THROWS_AS(parse_grid("0.1:0.5"), Error);
    CHECK_THROWS_AS(parse_grid("0.5:0.1:0.1"), Error);
    CHECK_THROWS_AS(parse_grid("0.1:0.5:0"), Error);
}

TEST_CASE("coded switch keeps returning to empty") {
    SimConfig c{special_rate_point(3)};
    c.alpha = 0.9;
    c.horizon = 100000;
    c.seed = 42;
    auto r = stability_probe(c);
    CHECK(r.slots == 100000);
    CHECK(r.empty_visits >= 10);
    CHECK(r.inconsistent_visits == 0);
    CHECK(r.max_gap >= 1);

    c.alpha = 0;
    c.horizon = 1000;
    r = stability_probe(c);
    CHECK(r.empty_visits == 1000);
    CHECK(r.inconsistent_visits == 0);
}
