#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ncswitch {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0;
    double budget_seconds = 0;  // a criterion over budget fails
};

inline constexpr int kCriteriaCount = 11;

/// Runs the listed criteria (all of them when empty) in order.
std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids = {});
/// "PASS  3  no-splitting speedup 5/3 (0.01 s): detail"
std::string format_result(const CriterionResult& r);

struct PropertyTally {
    std::string name;
    std::int64_t passed = 0;
    std::int64_t failed = 0;
};

/// Randomized coding properties: field axioms, rank agreement, innovation, MDS round trips.
std::vector<PropertyTally> coding_properties(std::uint64_t seed, int trials);

}  // namespace ncswitch
