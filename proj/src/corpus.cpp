#include "ncswitch/corpus.hpp"

#include "ncswitch/error.hpp"

#include <algorithm>
#include <random>

namespace ncswitch {

TrafficPattern random_pattern(std::uint64_t seed, int max_inputs, int max_outputs, int max_flows) {
    if (max_inputs < 1 || max_outputs < 1 || max_flows < 1) {
        throw Error(ErrorCode::InvalidArgument, "random pattern bounds must be positive");
    }
    std::mt19937_64 rng(seed);
    auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    const int k = uniform(1, max_inputs);
    const int n = uniform(1, max_outputs);
    const int target = uniform(1, max_flows);
    std::vector<Flow> flows;
    for (int attempt = 0; attempt < 8 * target && static_cast<int>(flows.size()) < target; ++attempt) {
        Flow f{uniform(1, k), {}, Rational(0)};
        for (int j = 1; j <= n; ++j)
            if (uniform(0, 1) == 1) f.fanout.push_back(j);
        if (f.fanout.empty()) f.fanout.push_back(uniform(1, n));
        if (std::none_of(flows.begin(), flows.end(), [&](const Flow& g) { return g.key() == f.key(); })) {
            flows.push_back(std::move(f));
        }
    }
    TrafficPattern tp(k, n, flows);
    std::vector<Rational> rates(flows.size());
    for (;;) {
        for (auto& r : rates) r = Rational(uniform(1, 6), 12);
        TrafficPattern candidate = tp.with_rates(rates);
        if (is_admissible(candidate)) return candidate;
    }
}

std::vector<NamedPattern> pattern_corpus() {
    std::vector<NamedPattern> c{
        {"special-3", special_rate_point(3)},
        {"special-4", special_rate_point(4)},
        {"special-5", special_rate_point(5)},
        {"benefit-3-inner", benefit_pattern(3, Rational(1, 2), {Rational(1, 4), Rational(1, 4), Rational(1, 4)})},
        {"speedup-2x3", speedup_pattern_2x3()},
        {"splitting-2x2", splitting_pattern_2x2()},
        {"relaxed-bipartite", relaxed_pattern_bipartite()},
        {"relaxed-hole", relaxed_pattern_with_hole()},
        {"unicast-broadcast-2x2", unicast_broadcast_pattern(2, 2, Rational(1, 4))},
        {"unicast-broadcast-2x3", unicast_broadcast_pattern(2, 3, Rational(1, 4))},
        {"corner-2x3", corner_point_pattern(3, Rational(1, 4))},
        {"composite-3x3", composite_pattern(3)},
        {"composite-4x3", composite_pattern(4)},
    };
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
        c.push_back({"random-" + std::to_string(seed), random_pattern(seed, 3, 4, 5)});
    }
    return c;
}

}  // namespace ncswitch
