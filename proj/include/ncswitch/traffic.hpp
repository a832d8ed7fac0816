#pragma once

#include "ncswitch/rational.hpp"

#include <compare>
#include <map>
#include <string>
#include <vector>

namespace ncswitch {

/// A flow is identified by its input and fanout set; inputs and outputs are 1-indexed.
struct FlowKey {
    int input = 0;
    std::vector<int> fanout;  // sorted, distinct

    friend bool operator==(const FlowKey&, const FlowKey&) = default;
    friend auto operator<=>(const FlowKey&, const FlowKey&) = default;
};

struct Flow {
    int input = 0;
    std::vector<int> fanout;
    Rational rate;

    [[nodiscard]] FlowKey key() const { return {input, fanout}; }
    friend bool operator==(const Flow&, const Flow&) = default;
};

/// (input, fanout, output) with output in fanout.
struct SubflowId {
    int input = 0;
    std::vector<int> fanout;
    int output = 0;

    [[nodiscard]] FlowKey flow() const { return {input, fanout}; }
    friend bool operator==(const SubflowId&, const SubflowId&) = default;
    friend auto operator<=>(const SubflowId&, const SubflowId&) = default;
};

std::string to_string(const FlowKey& key);
std::string to_string(const SubflowId& id);

/// K x N workload. Construction validates structure and sorts flows by (input, fanout).
class TrafficPattern {
public:
    TrafficPattern(int num_inputs, int num_outputs, std::vector<Flow> flows);

    [[nodiscard]] int num_inputs() const { return num_inputs_; }
    [[nodiscard]] int num_outputs() const { return num_outputs_; }
    [[nodiscard]] const std::vector<Flow>& flows() const { return flows_; }
    [[nodiscard]] std::size_t size() const { return flows_.size(); }

    /// Subflows in canonical order: (input, fanout lexicographic, output).
    [[nodiscard]] std::vector<SubflowId> subflows() const;

    /// Same flows with every rate replaced.
    [[nodiscard]] TrafficPattern with_rates(const std::vector<Rational>& rates) const;
    [[nodiscard]] TrafficPattern scaled(const Rational& factor) const;

    friend bool operator==(const TrafficPattern&, const TrafficPattern&) = default;

private:
    int num_inputs_;
    int num_outputs_;
    std::vector<Flow> flows_;
};

using EnhancedRateVector = std::map<SubflowId, Rational>;

/// No input or output carries more than rate 1.
bool is_admissible(const TrafficPattern& tp);

/// Per-port loads: first K entries are inputs, next N are outputs.
std::vector<Rational> port_loads(const TrafficPattern& tp);

EnhancedRateVector enhanced_rate_vector(const TrafficPattern& tp);

/// 2 x N: broadcast (r0, 1, [N]) plus unicasts (r_i, 2, {i}).
TrafficPattern benefit_pattern(int n, const Rational& r0, const std::vector<Rational>& r);

/// benefit_pattern(N, 1 - 1/N, (1/N, ..., 1/N)); N >= 3.
TrafficPattern special_rate_point(int n);

/// 2 x 3 pattern needing speedup 5/4 even with coding: broadcast (1/2, 1, {1,2,3}),
/// unicasts (1/2, 1, {3}), (1/2, 2, {1}), (1/2, 2, {2}).
TrafficPattern speedup_pattern_2x3();

/// 2 x 2: broadcast (1/2, 1, {1,2}) with unicasts (1/2, 2, {1}) and (1/2, 2, {2}).
/// Admissible, but needs fanout splitting.
TrafficPattern splitting_pattern_2x2();

/// speedup_pattern_2x3 with the broadcast trimmed to {1, 3}. Its enhanced
/// conflict graph is a path, hence perfect.
TrafficPattern relaxed_pattern_bipartite();

/// speedup_pattern_2x3 with the broadcast trimmed to {1, 2}; still has the odd hole.
TrafficPattern relaxed_pattern_with_hole();

/// K x N unicasts to every output plus one broadcast per input, all at rate `rate`.
TrafficPattern unicast_broadcast_pattern(int k, int n, const Rational& rate);

/// 2 x N: input 1 carries unicasts and a broadcast, input 2 unicasts only, all at rate `rate`.
TrafficPattern corner_point_pattern(int n, const Rational& rate);

/// K x 3 (K = 3 or 4) mix of the 3-output benefit pattern weighted 2/3 and uniform
/// 0.01 unicasts, at load 1. Scale by the load factor before simulating.
TrafficPattern composite_pattern(int k);

}  // namespace ncswitch
