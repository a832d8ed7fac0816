#pragma once

#include "ncswitch/rational.hpp"
#include "ncswitch/traffic.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace ncswitch {

enum class SimScheduler { MwssExact, MwssRandomized, FanoutSplitting };

std::string to_string(SimScheduler s);
/// Accepts "mwss", "mwss-exact", "mwss-rand", "mwss-randomized", "fs", "fanout-splitting", "uncoded".
SimScheduler parse_scheduler(const std::string& name);

struct SimConfig {
    explicit SimConfig(TrafficPattern tp) : pattern(std::move(tp)) {}

    TrafficPattern pattern;
    double alpha = 1.0;
    SimScheduler scheduler = SimScheduler::MwssExact;
    int candidates = 10;
    /// Coded schedulers serve arrivals in batches of delta (1 + eps) slots; without batching the
    /// coded switch mixes packets as they come and flushes a flow whenever it is fully decoded.
    bool batching = true;
    std::int64_t delta = 3000;
    Rational eps{1, 200};
    std::int64_t horizon = 100000;
    std::uint64_t seed = 1;
    Rational speedup{1};
    /// Scale alpha * rates down to the admissible boundary instead of rejecting them.
    bool clip = false;
    /// Field GF(2^m) for coding; 0 picks the smallest field with more elements than any fanout.
    int field_degree = 0;
    /// Arrivals before this slot are left out of the delay average; -1 means one batch period.
    std::int64_t warmup = -1;
    /// Optional per-slot CSV trace.
    std::string trace_path;
};

struct SimMetrics {
    double mean_delay = 0;
    std::int64_t delay_samples = 0;
    std::vector<double> offered;     // alpha * rate per flow (after clipping)
    std::vector<double> throughput;  // departures per slot per flow, measured after the warm-up
    double total_throughput = 0;
    std::int64_t arrivals = 0;
    std::int64_t departures = 0;
    std::int64_t max_vq = 0;         // largest single subflow backlog seen
    double mean_backlog = 0;         // time average of the summed subflow backlogs
    double middle_window_backlog = 0;
    double final_window_backlog = 0;
    bool stable = true;
    std::int64_t empty_visits = 0;   // slots ending with every queue empty
    bool conservation_ok = true;     // arrivals = departures + queued, every slot
    bool vq_consistent = true;       // virtual queues match knowledge-space dimensions, every slot
};

/// Stability verdict from the two window means of the total backlog.
bool backlog_stable(double middle_window, double final_window);

/// Bernoulli(alpha * r) arrivals per flow and slot, served by the configured scheduler.
/// Deterministic in the seed.
SimMetrics run(const SimConfig& config);

struct SweepRow {
    double alpha = 0;
    std::string scheduler;
    SimMetrics metrics;
};

/// One run per grid point, seeded seed + index, spread over `threads` workers (0 = hardware).
std::vector<SweepRow> sweep(const SimConfig& config, const std::vector<double>& alphas, unsigned threads = 0);
/// Header alpha,scheduler,mean_delay,throughput,max_vq,stable and one row per point.
std::string sweep_csv(const std::vector<SweepRow>& rows);
/// "lo:hi:step" inclusive of hi (within rounding).
std::vector<double> parse_grid(const std::string& spec);

struct StabilityReport {
    std::int64_t slots = 0;
    std::int64_t empty_visits = 0;
    std::vector<std::int64_t> flow_empty_visits;
    std::int64_t max_gap = 0;
    double mean_gap = 0;
    /// Visits where a flow's virtual queues were all zero but its packets were not all flushed,
    /// or the reverse.
    std::int64_t inconsistent_visits = 0;
};

/// Coded max-weight scheduling without batching; counts slots at which the switch is empty.
StabilityReport stability_probe(const SimConfig& config);

}  // namespace ncswitch
