#pragma once

#include "ncswitch/traffic.hpp"

#include <string>
#include <string_view>

namespace ncswitch {

/// Pattern file: {"K": int, "N": int, "flows": [{"input": int, "fanout": [int...], "rate": "p/q"}]}.
/// Throws Error with a code naming the flaw (malformed document, duplicate output, ...).
TrafficPattern parse_pattern(std::string_view text);
std::string serialize_pattern(const TrafficPattern& tp);

TrafficPattern load_pattern_file(const std::string& path);

}  // namespace ncswitch
