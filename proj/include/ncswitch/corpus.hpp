#pragma once

#include "ncswitch/traffic.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ncswitch {

/// Random admissible pattern: up to `max_flows` distinct flows with rates on the 1/12 grid,
/// redrawn until no port exceeds load 1. Deterministic in the seed.
TrafficPattern random_pattern(std::uint64_t seed, int max_inputs, int max_outputs, int max_flows);

struct NamedPattern {
    std::string name;
    TrafficPattern pattern;
};

/// Fixed workload set used by the verification suite: the named constructions plus
/// a dozen seeded random patterns.
std::vector<NamedPattern> pattern_corpus();

}  // namespace ncswitch
