#include "ncswitch/error.hpp"
#include "ncswitch/pattern_io.hpp"
#include "ncswitch/traffic.hpp"

#include "oracles.hpp"

#include <doctest.h>

using namespace ncswitch;

TEST_CASE("admissibility examples") {
    CHECK(is_admissible(splitting_pattern_2x2()));
    CHECK(is_admissible(TrafficPattern(2, 3, {})));
    // a broadcast copied as three unicasts overbooks its input
    TrafficPattern copied(1, 3, {{1, {1}, Rational(1, 2)}, {1, {2}, Rational(1, 2)}, {1, {3}, Rational(1, 2)}});
    CHECK_FALSE(is_admissible(copied));
}

TEST_CASE("enhanced rate vector duplicates flow rates") {
    TrafficPattern one(1, 2, {{1, {1, 2}, Rational(1, 2)}});
    EnhancedRateVector e = enhanced_rate_vector(one);
    REQUIRE(e.size() == 2);
    CHECK(e.at(SubflowId{1, {1, 2}, 1}) == Rational(1, 2));
    CHECK(e.at(SubflowId{1, {1, 2}, 2}) == Rational(1, 2));
    CHECK(enhanced_rate_vector(TrafficPattern(1, 1, {})).empty());

    auto b = benefit_pattern(3, Rational(2, 3), {Rational(1, 3), Rational(1, 4), Rational(1, 5)});
    auto eb = enhanced_rate_vector(b);
    CHECK(eb.size() == 6);
    for (int j = 1; j <= 3; ++j) CHECK(eb.at(SubflowId{1, {1, 2, 3}, j}) == Rational(2, 3));
    CHECK(eb.at(SubflowId{2, {2}, 2}) == Rational(1, 4));
}

TEST_CASE("duplication law on random patterns") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 50; ++t) {
        auto tp = oracle::random_pattern(rng, 3, 4, 6);
        auto e = enhanced_rate_vector(tp);
        for (const Flow& f : tp.flows()) {
            Rational sum(0);
            for (int j : f.fanout) sum += e.at(SubflowId{f.input, f.fanout, j});
            CHECK(sum == Rational(static_cast<std::int64_t>(f.fanout.size())) * f.rate);
        }
        CHECK(is_admissible(tp));
        // lowering a rate keeps it admissible
        std::vector<Rational> lower;
        for (const Flow& f : tp.flows()) lower.push_back(f.rate / 2);
        CHECK(is_admissible(tp.with_rates(lower)));
    }
}

TEST_CASE("generators") {
    CHECK_THROWS_AS(benefit_pattern(1, Rational(0), {Rational(0)}), Error);
    CHECK(is_admissible(benefit_pattern(2, Rational(0), {Rational(0), Rational(0)})));
    CHECK(benefit_pattern(4, Rational(3, 4), std::vector<Rational>(4, Rational(1, 4))) == special_rate_point(4));
    CHECK_THROWS_AS(special_rate_point(2), Error);
    auto s3 = special_rate_point(3);
    CHECK(s3 == TrafficPattern(2, 3,
                               {{1, {1, 2, 3}, Rational(2, 3)},
                                {2, {1}, Rational(1, 3)},
                                {2, {2}, Rational(1, 3)},
                                {2, {3}, Rational(1, 3)}}));
    for (int n = 3; n <= 8; ++n) {
        CHECK(is_admissible(special_rate_point(n)));
        // input 2 and every output are saturated; input 1 carries only the broadcast
        auto loads = port_loads(special_rate_point(n));
        CHECK(loads[0] == Rational(n - 1, n));
        for (std::size_t p = 1; p < loads.size(); ++p) CHECK(loads[p] == Rational(1));
    }
    for (const Rational& load : port_loads(speedup_pattern_2x3())) CHECK(load == Rational(1));
    CHECK(is_admissible(unicast_broadcast_pattern(2, 3, Rational(1, 4))));
    CHECK(is_admissible(composite_pattern(3)));
    CHECK(is_admissible(composite_pattern(4)));
}

TEST_CASE("all admissible labelings of the 2x3 speedup pattern are isomorphic") {
    // The broadcast and unicast from input 1 plus two unicasts from input 2 at rate 1/2:
    // admissible labelings put the input-1 unicast on the output input 2 leaves idle.
    int admissible = 0;
    const auto reference = build_enhanced_conflict_graph(speedup_pattern_2x3());
    for (int j1 = 1; j1 <= 3; ++j1)
        for (int j2 = 1; j2 <= 3; ++j2)
            for (int j3 = j2 + 1; j3 <= 3; ++j3) {
                TrafficPattern tp(2, 3,
                                  {{1, {1, 2, 3}, Rational(1, 2)},
                                   {1, {j1}, Rational(1, 2)},
                                   {2, {j2}, Rational(1, 2)},
                                   {2, {j3}, Rational(1, 2)}});
                if (!is_admissible(tp)) continue;
                ++admissible;
                auto g = build_enhanced_conflict_graph(tp);
                CHECK(g.size() == reference.size());
                CHECK(g.num_edges() == reference.num_edges());
                CHECK(contains_induced(g, reference));
            }
    CHECK(admissible == 3);
}

TEST_CASE("pattern round trip and parse errors") {
    for (const auto& tp : {speedup_pattern_2x3(), special_rate_point(5), composite_pattern(4)}) {
        CHECK(parse_pattern(serialize_pattern(tp)) == tp);
    }
    auto over = parse_pattern(R"({"K":1,"N":1,"flows":[{"input":1,"fanout":[1],"rate":"3/2"}]})");
    CHECK_FALSE(is_admissible(over));

    auto code_of = [](const char* text) {
        try {
            parse_pattern(text);
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::InvalidConfig;
    };
    CHECK(code_of(R"({"K":1,"N":2,"flows":[{"input":1,"fanout":[1,1],"rate":"1/2"}]})") == ErrorCode::DuplicateOutput);
    CHECK(code_of(R"({"K":1,"N":2,"flows":[{"input":1,"fanout":[3],"rate":"1/2"}]})") == ErrorCode::FanoutOutOfRange);
    CHECK(code_of(R"({"K":1,"N":2,"flows":[{"input":1,"fanout":[1],"rate":"-1/2"}]})") == ErrorCode::RateOutOfRange);
    CHECK(code_of(R"({"K":1,"N":2,"flows":[{"input":1,"fanout":[1],"rate":"1/2"},{"input":1,"fanout":[1],"rate":"1/3"}]})") ==
          ErrorCode::DuplicateFlow);
    CHECK(code_of(R"({"K":1,"N":2,"flows":[)") == ErrorCode::MalformedDocument);
    CHECK(code_of(R"({"K":1,"N":2})") == ErrorCode::MalformedDocument);
}
