#include "ncswitch/traffic.hpp"

#include "ncswitch/error.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace ncswitch {

namespace {

std::string fanout_string(const std::vector<int>& fanout) {
    std::ostringstream os;
    os << '{';
    for (std::size_t i = 0; i < fanout.size(); ++i) os << (i ? "," : "") << fanout[i];
    os << '}';
    return os.str();
}

std::vector<int> all_outputs(int n) {
    std::vector<int> out(static_cast<std::size_t>(n));
    std::iota(out.begin(), out.end(), 1);
    return out;
}

}  // namespace

std::string to_string(const FlowKey& key) {
    return "(" + std::to_string(key.input) + "," + fanout_string(key.fanout) + ")";
}

std::string to_string(const SubflowId& id) {
    return "(" + std::to_string(id.input) + "," + fanout_string(id.fanout) + "," + std::to_string(id.output) + ")";
}

TrafficPattern::TrafficPattern(int num_inputs, int num_outputs, std::vector<Flow> flows)
    : num_inputs_(num_inputs), num_outputs_(num_outputs), flows_(std::move(flows)) {
    if (num_inputs_ < 1 || num_outputs_ < 1) {
        throw Error(ErrorCode::InvalidArgument, "switch needs at least one input and one output");
    }
    std::set<FlowKey> seen;
    for (const auto& f : flows_) {
        const std::string name = to_string(f.key());
        if (f.input < 1 || f.input > num_inputs_) {
            throw Error(ErrorCode::InputOutOfRange, "flow " + name + ": input outside [1," + std::to_string(num_inputs_) + "]");
        }
        if (f.fanout.empty()) throw Error(ErrorCode::EmptyFanout, "flow " + name + ": empty fanout");
        for (std::size_t i = 0; i < f.fanout.size(); ++i) {
            const int j = f.fanout[i];
            if (j < 1 || j > num_outputs_) {
                throw Error(ErrorCode::FanoutOutOfRange,
                            "flow " + name + ": output " + std::to_string(j) + " outside [1," + std::to_string(num_outputs_) + "]");
            }
            if (i > 0 && f.fanout[i - 1] == j) {
                throw Error(ErrorCode::DuplicateOutput, "flow " + name + ": output " + std::to_string(j) + " repeated");
            }
            if (i > 0 && f.fanout[i - 1] > j) {
                throw Error(ErrorCode::InvalidArgument, "flow " + name + ": fanout must be sorted");
            }
        }
        if (f.rate.sign() < 0) throw Error(ErrorCode::RateOutOfRange, "flow " + name + ": negative rate " + f.rate.str());
        if (!seen.insert(f.key()).second) throw Error(ErrorCode::DuplicateFlow, "flow " + name + " listed twice");
    }
    std::sort(flows_.begin(), flows_.end(), [](const Flow& a, const Flow& b) { return a.key() < b.key(); });
}

std::vector<SubflowId> TrafficPattern::subflows() const {
    std::vector<SubflowId> out;
    for (const auto& f : flows_) {
        for (int j : f.fanout) out.push_back({f.input, f.fanout, j});
    }
    return out;
}

TrafficPattern TrafficPattern::with_rates(const std::vector<Rational>& rates) const {
    if (rates.size() != flows_.size()) throw Error(ErrorCode::LengthMismatch, "rate vector length differs from flow count");
    auto flows = flows_;
    for (std::size_t i = 0; i < flows.size(); ++i) flows[i].rate = rates[i];
    return {num_inputs_, num_outputs_, std::move(flows)};
}

TrafficPattern TrafficPattern::scaled(const Rational& factor) const {
    auto flows = flows_;
    for (auto& f : flows) f.rate *= factor;
    return {num_inputs_, num_outputs_, std::move(flows)};
}

std::vector<Rational> port_loads(const TrafficPattern& tp) {
    std::vector<Rational> load(static_cast<std::size_t>(tp.num_inputs() + tp.num_outputs()));
    for (const auto& f : tp.flows()) {
        load[static_cast<std::size_t>(f.input - 1)] += f.rate;
        for (int j : f.fanout) load[static_cast<std::size_t>(tp.num_inputs() + j - 1)] += f.rate;
    }
    return load;
}

bool is_admissible(const TrafficPattern& tp) {
    const auto loads = port_loads(tp);
    return std::all_of(loads.begin(), loads.end(), [](const Rational& l) { return l <= Rational(1); });
}

EnhancedRateVector enhanced_rate_vector(const TrafficPattern& tp) {
    EnhancedRateVector e;
    for (const auto& f : tp.flows()) {
        for (int j : f.fanout) e.emplace(SubflowId{f.input, f.fanout, j}, f.rate);
    }
    return e;
}

TrafficPattern benefit_pattern(int n, const Rational& r0, const std::vector<Rational>& r) {
    if (n < 2) throw Error(ErrorCode::InvalidArgument, "benefit pattern needs N >= 2");
    if (static_cast<int>(r.size()) != n) throw Error(ErrorCode::LengthMismatch, "benefit pattern needs N unicast rates");
    std::vector<Flow> flows{{1, all_outputs(n), r0}};
    for (int i = 1; i <= n; ++i) flows.push_back({2, {i}, r[static_cast<std::size_t>(i - 1)]});
    return {2, n, std::move(flows)};
}

TrafficPattern special_rate_point(int n) {
    if (n < 3) throw Error(ErrorCode::InvalidArgument, "special rate point needs N >= 3");
    const Rational unicast(1, n);
    return benefit_pattern(n, Rational(1) - unicast, std::vector<Rational>(static_cast<std::size_t>(n), unicast));
}

TrafficPattern speedup_pattern_2x3() {
    const Rational half(1, 2);
    return {2, 3, {{1, {1, 2, 3}, half}, {1, {3}, half}, {2, {1}, half}, {2, {2}, half}}};
}

TrafficPattern splitting_pattern_2x2() {
    const Rational half(1, 2);
    return {2, 2, {{1, {1, 2}, half}, {2, {1}, half}, {2, {2}, half}}};
}

TrafficPattern relaxed_pattern_bipartite() {
    const Rational half(1, 2);
    return {2, 3, {{1, {1, 3}, half}, {1, {3}, half}, {2, {1}, half}, {2, {2}, half}}};
}

TrafficPattern relaxed_pattern_with_hole() {
    const Rational half(1, 2);
    return {2, 3, {{1, {1, 2}, half}, {1, {3}, half}, {2, {1}, half}, {2, {2}, half}}};
}

TrafficPattern unicast_broadcast_pattern(int k, int n, const Rational& rate) {
    if (k < 1 || n < 2) throw Error(ErrorCode::InvalidArgument, "unicast+broadcast pattern needs K >= 1, N >= 2");
    std::vector<Flow> flows;
    for (int i = 1; i <= k; ++i) {
        flows.push_back({i, all_outputs(n), rate});
        for (int j = 1; j <= n; ++j) flows.push_back({i, {j}, rate});
    }
    return {k, n, std::move(flows)};
}

TrafficPattern corner_point_pattern(int n, const Rational& rate) {
    if (n < 2) throw Error(ErrorCode::InvalidArgument, "corner point pattern needs N >= 2");
    std::vector<Flow> flows{{1, all_outputs(n), rate}};
    for (int j = 1; j <= n; ++j) {
        flows.push_back({1, {j}, rate});
        flows.push_back({2, {j}, rate});
    }
    return {2, n, std::move(flows)};
}

TrafficPattern composite_pattern(int k) {
    if (k != 3 && k != 4) throw Error(ErrorCode::InvalidArgument, "composite pattern is defined for K = 3 or 4");
    const Rational small(1, 100);
    std::vector<Flow> flows{{1, {1, 2, 3}, Rational(4, 9)}};
    for (int j = 1; j <= 3; ++j) {
        flows.push_back({1, {j}, small});
        flows.push_back({2, {j}, Rational(2, 9) + small});
        flows.push_back({3, {j}, small});
        if (k == 4) flows.push_back({4, {j}, small});
    }
    return {k, 3, std::move(flows)};
}

}  // namespace ncswitch
