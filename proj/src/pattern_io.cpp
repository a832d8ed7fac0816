#include "ncswitch/pattern_io.hpp"

#include "ncswitch/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace ncswitch {

using nlohmann::json;

namespace {

[[noreturn]] void malformed(const std::string& what) { throw Error(ErrorCode::MalformedDocument, what); }

int require_int(const json& obj, const char* field, const std::string& where) {
    if (!obj.contains(field)) malformed(where + ": missing \"" + field + "\"");
    const auto& v = obj.at(field);
    if (!v.is_number_integer()) malformed(where + ": \"" + field + "\" must be an integer");
    return v.get<int>();
}

}  // namespace

TrafficPattern parse_pattern(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        malformed(std::string("not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) malformed("pattern document must be a JSON object");
    const int k = require_int(doc, "K", "pattern");
    const int n = require_int(doc, "N", "pattern");
    if (!doc.contains("flows") || !doc.at("flows").is_array()) malformed("pattern: \"flows\" must be an array");

    std::vector<Flow> flows;
    std::size_t index = 0;
    for (const auto& entry : doc.at("flows")) {
        const std::string where = "flow #" + std::to_string(index++);
        if (!entry.is_object()) malformed(where + ": must be an object");
        Flow f;
        f.input = require_int(entry, "input", where);
        if (!entry.contains("fanout") || !entry.at("fanout").is_array()) malformed(where + ": \"fanout\" must be an array");
        for (const auto& j : entry.at("fanout")) {
            if (!j.is_number_integer()) malformed(where + ": fanout entries must be integers");
            f.fanout.push_back(j.get<int>());
        }
        std::sort(f.fanout.begin(), f.fanout.end());
        if (!entry.contains("rate") || !entry.at("rate").is_string()) malformed(where + ": \"rate\" must be a \"p/q\" string");
        try {
            f.rate = Rational::parse(entry.at("rate").get<std::string>());
        } catch (const std::invalid_argument& e) {
            malformed(where + ": " + e.what());
        }
        flows.push_back(std::move(f));
    }
    return {k, n, std::move(flows)};
}

std::string serialize_pattern(const TrafficPattern& tp) {
    json flows = json::array();
    for (const auto& f : tp.flows()) {
        flows.push_back({{"input", f.input}, {"fanout", f.fanout}, {"rate", f.rate.str()}});
    }
    json doc = {{"schema", "ncswitch/1"}, {"K", tp.num_inputs()}, {"N", tp.num_outputs()}, {"flows", flows}};
    return doc.dump(2) + "\n";
}

TrafficPattern load_pattern_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::MalformedDocument, "cannot read pattern file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_pattern(ss.str());
}

}  // namespace ncswitch
