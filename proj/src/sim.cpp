#include "ncswitch/sim.hpp"

#include "ncswitch/error.hpp"
#include "ncswitch/scheduler.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <exception>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

namespace ncswitch {

std::string to_string(SimScheduler s) {
    switch (s) {
        case SimScheduler::MwssExact: return "mwss-exact";
        case SimScheduler::MwssRandomized: return "mwss-rand";
        case SimScheduler::FanoutSplitting: return "fanout-splitting";
    }
    return "unknown";
}

SimScheduler parse_scheduler(const std::string& name) {
    if (name == "mwss" || name == "mwss-exact") return SimScheduler::MwssExact;
    if (name == "mwss-rand" || name == "mwss-randomized") return SimScheduler::MwssRandomized;
    if (name == "fs" || name == "fanout-splitting" || name == "uncoded") return SimScheduler::FanoutSplitting;
    throw Error(ErrorCode::InvalidConfig, "unknown scheduler '" + name + "'");
}

bool backlog_stable(double middle_window, double final_window) {
    // linear growth from zero puts the final window at 1.9x the middle one, so 1.5x separates
    // growth from noise; the +1 keeps nearly empty systems from being flagged on jitter
    return final_window <= 1.5 * middle_window + 1.0;
}

namespace {

constexpr std::uint64_t kSchedulerSeedMix = 0x9E3779B97F4A7C15ULL;

int auto_field_degree(const TrafficPattern& tp) {
    std::size_t fanout = 1;
    for (const auto& f : tp.flows()) fanout = std::max(fanout, f.fanout.size());
    int m = 1;
    while ((std::size_t{1} << m) <= fanout) ++m;
    if (m > 8) throw Error(ErrorCode::LimitExceeded, "fanouts above 255 outputs need a field larger than GF(256)");
    return m;
}

struct Prepared {
    std::vector<double> offered;
    std::int64_t warmup = 0;
    std::int64_t measure_from = 0;
    int field_degree = 8;
};

Prepared prepare(const SimConfig& c) {
    if (!(c.alpha >= 0) || !std::isfinite(c.alpha)) throw Error(ErrorCode::InvalidConfig, "alpha must be nonnegative");
    if (c.horizon < 1) throw Error(ErrorCode::InvalidConfig, "horizon must be positive");
    if (c.candidates < 1) throw Error(ErrorCode::InvalidConfig, "candidates must be at least 1");
    if (c.speedup < Rational(1)) throw Error(ErrorCode::InvalidConfig, "speedup below 1 is not supported");
    const bool coded = c.scheduler != SimScheduler::FanoutSplitting;
    const BatchController batches(c.delta, c.eps);
    if (coded && c.batching && c.horizon < batches.period()) {
        throw Error(ErrorCode::InvalidConfig, "horizon must cover at least one batch period");
    }
    Prepared p;
    double scale = c.alpha;
    if (c.clip) {
        double busiest = 0;
        for (const auto& load : port_loads(c.pattern)) busiest = std::max(busiest, load.to_double());
        if (busiest * c.alpha > 1) scale = 1 / busiest;
    }
    for (const auto& f : c.pattern.flows()) {
        const double rate = scale * f.rate.to_double();
        if (rate > 1) {
            throw Error(ErrorCode::InvalidConfig, "flow " + to_string(f.key()) + " would need " + std::to_string(rate) +
                                                      " arrivals per slot; Bernoulli arrivals allow at most 1");
        }
        p.offered.push_back(rate);
    }
    p.warmup = c.warmup >= 0 ? c.warmup : batches.period();
    p.measure_from = p.warmup < c.horizon ? p.warmup : 0;
    p.field_degree = c.field_degree > 0 ? c.field_degree : auto_field_degree(c.pattern);
    return p;
}

// Running totals shared by every scheduler.
struct Recorder {
    const SimConfig& config;
    const Prepared& prep;
    SimMetrics m;
    std::vector<std::int64_t> window_departures;
    double delay_sum = 0;
    double backlog_sum = 0;
    double middle_sum = 0;
    double final_sum = 0;
    std::int64_t middle_slots = 0;
    std::int64_t final_slots = 0;
    std::ofstream trace;

    Recorder(const SimConfig& c, const Prepared& p) : config(c), prep(p) {
        m.offered = p.offered;
        window_departures.assign(p.offered.size(), 0);
        if (!c.trace_path.empty()) {
            trace.open(c.trace_path);
            if (!trace) throw Error(ErrorCode::InvalidArgument, "cannot write trace file " + c.trace_path);
            trace << "slot,arrivals,departures,backlog,max_subflow_backlog\n";
        }
    }

    void depart(int flow, std::int64_t slot, std::int64_t count, double measured_arrival_sum, std::int64_t measured) {
        m.departures += count;
        if (slot >= prep.measure_from) window_departures[static_cast<std::size_t>(flow)] += count;
        delay_sum += static_cast<double>(measured) * static_cast<double>(slot) - measured_arrival_sum;
        m.delay_samples += measured;
    }

    void end_slot(std::int64_t slot, std::int64_t backlog, std::int64_t largest, std::int64_t queued) {
        backlog_sum += static_cast<double>(backlog);
        m.max_vq = std::max(m.max_vq, largest);
        if (backlog == 0) ++m.empty_visits;
        if (m.arrivals - m.departures != queued) m.conservation_ok = false;
        const std::int64_t h = config.horizon;
        if (slot * 20 >= h * 9 && slot * 20 < h * 11) {
            middle_sum += static_cast<double>(backlog);
            ++middle_slots;
        }
        if (slot * 10 >= h * 9) {
            final_sum += static_cast<double>(backlog);
            ++final_slots;
        }
        if (trace.is_open()) trace << slot << ',' << m.arrivals << ',' << m.departures << ',' << backlog << ',' << largest << '\n';
    }

    SimMetrics finish() {
        const auto h = config.horizon;
        m.mean_delay = m.delay_samples > 0 ? delay_sum / static_cast<double>(m.delay_samples) : 0.0;
        m.mean_backlog = backlog_sum / static_cast<double>(h);
        m.middle_window_backlog = middle_slots > 0 ? middle_sum / static_cast<double>(middle_slots) : 0.0;
        m.final_window_backlog = final_slots > 0 ? final_sum / static_cast<double>(final_slots) : 0.0;
        m.stable = backlog_stable(m.middle_window_backlog, m.final_window_backlog);
        const auto span = static_cast<double>(h - prep.measure_from);
        for (auto d : window_departures) {
            m.throughput.push_back(static_cast<double>(d) / span);
            m.total_throughput += static_cast<double>(d) / span;
        }
        return m;
    }
};

// Deterministic realisation of speedup s: floor(s) configurations per slot plus one more
// whenever the fractional parts accumulate past an integer.
class SpeedupClock {
public:
    explicit SpeedupClock(const Rational& s) : s_(s) {}
    int next() {
        acc_ += s_;
        const Rational whole = floor(acc_);
        acc_ -= whole;
        return static_cast<int>(whole.numerator_i64());
    }

private:
    Rational s_;
    Rational acc_;
};

struct PendingFlow {
    std::int64_t count = 0;
    double measured_sum = 0;
    std::int64_t measured = 0;
};

void subflow_backlogs(const CodedSwitch& sw, const std::vector<std::int64_t>& waiting, std::int64_t& total,
                      std::int64_t& largest) {
    total = 0;
    largest = 0;
    for (int v = 0; v < sw.graph().size(); ++v) {
        const std::int64_t b = sw.virtual_queue(v) + waiting[static_cast<std::size_t>(sw.flow_of(v))];
        total += b;
        largest = std::max(largest, b);
    }
}

struct OpenBatch {
    std::int64_t index = 0;
    CodedSwitch sw;
    std::vector<PendingFlow> flows;
    std::vector<bool> retired;
};

SimMetrics run_coded_batched(const SimConfig& c, const Prepared& p) {
    Recorder rec(c, p);
    const std::size_t flows = c.pattern.size();
    OnlinePolicy policy;
    policy.kind = c.scheduler == SimScheduler::MwssExact ? SchedulerKind::MwssExact : SchedulerKind::MwssRandomized;
    policy.candidates = c.candidates;
    policy.rng.seed(c.seed ^ kSchedulerSeedMix);
    std::mt19937_64 arrivals(c.seed);
    std::vector<std::bernoulli_distribution> coin;
    for (double r : p.offered) coin.emplace_back(r);
    const BatchController batches(c.delta, c.eps);
    SpeedupClock clock(c.speedup);
    const CodedSwitch blank(c.pattern, p.field_degree);
    const int vertices = blank.graph().size();

    // batches still owing packets, oldest first; the newest one is the arrival window
    std::deque<OpenBatch> open;
    auto retire = [&](std::int64_t t) {
        for (auto& b : open) {
            if (!batches.flushable(b.index, t)) continue;
            for (std::size_t f = 0; f < flows; ++f) {
                if (b.retired[f] || !b.sw.flow_cleared(static_cast<int>(f))) continue;
                const PendingFlow& pf = b.flows[f];
                if (pf.count > 0) rec.depart(static_cast<int>(f), t, pf.count, pf.measured_sum, pf.measured);
                b.sw.flush(static_cast<int>(f));
                b.retired[f] = true;
            }
        }
        std::erase_if(open, [](const OpenBatch& b) { return std::ranges::all_of(b.retired, [](bool r) { return r; }); });
    };

    for (std::int64_t t = 0; t < c.horizon; ++t) {
        const std::int64_t k = batches.batch_of(t);
        if (open.empty() || open.back().index != k) {
            open.push_back({k, blank, std::vector<PendingFlow>(flows), std::vector<bool>(flows, false)});
        }
        OpenBatch& current = open.back();
        for (std::size_t f = 0; f < flows; ++f) {
            if (!coin[f](arrivals)) continue;
            ++rec.m.arrivals;
            current.sw.add_packets(static_cast<int>(f), 1);
            PendingFlow& pf = current.flows[f];
            ++pf.count;
            if (t >= p.warmup) {
                pf.measured_sum += static_cast<double>(t);
                ++pf.measured;
            }
        }
        const int configurations = clock.next();
        for (int n = 0; n < configurations; ++n) {
            std::vector<CodedSwitch*> serving;
            for (auto& b : open)
                if (batches.serviceable(b.index, t)) serving.push_back(&b.sw);
            (void)batched_online_step(serving, policy);
            retire(t);
        }
        retire(t);
        std::int64_t total = 0;
        std::int64_t largest = 0;
        std::int64_t queued = 0;
        std::vector<std::int64_t> per_vertex(static_cast<std::size_t>(vertices), 0);
        for (const auto& b : open) {
            for (int v = 0; v < vertices; ++v) per_vertex[static_cast<std::size_t>(v)] += b.sw.virtual_queue(v);
            for (std::size_t f = 0; f < flows; ++f) queued += b.sw.packets(static_cast<int>(f));
            if (!b.sw.consistent()) rec.m.vq_consistent = false;
        }
        for (auto q : per_vertex) {
            total += q;
            largest = std::max(largest, q);
        }
        rec.end_slot(t, total, largest, queued);
    }
    return rec.finish();
}

// Unbatched coded switch; also feeds the recurrence probe.
SimMetrics run_coded_streaming(const SimConfig& c, const Prepared& p, StabilityReport* probe) {
    Recorder rec(c, p);
    const std::size_t flows = c.pattern.size();
    CodedSwitch sw(c.pattern, p.field_degree);
    OnlinePolicy policy;
    policy.kind = c.scheduler == SimScheduler::MwssRandomized ? SchedulerKind::MwssRandomized : SchedulerKind::MwssExact;
    policy.candidates = c.candidates;
    policy.rng.seed(c.seed ^ kSchedulerSeedMix);
    std::mt19937_64 arrivals(c.seed);
    std::vector<std::bernoulli_distribution> coin;
    for (double r : p.offered) coin.emplace_back(r);
    SpeedupClock clock(c.speedup);
    std::vector<PendingFlow> pending(flows);
    const std::vector<std::int64_t> none(flows, 0);
    std::int64_t last_visit = -1;
    std::int64_t gap_sum = 0;
    std::int64_t gaps = 0;

    for (std::int64_t t = 0; t < c.horizon; ++t) {
        for (std::size_t f = 0; f < flows; ++f) {
            if (!coin[f](arrivals)) continue;
            sw.add_packets(static_cast<int>(f), 1);
            ++pending[f].count;
            if (t >= p.warmup) {
                pending[f].measured_sum += static_cast<double>(t);
                ++pending[f].measured;
            }
            ++rec.m.arrivals;
        }
        const int configurations = clock.next();
        for (int k = 0; k < configurations; ++k) {
            (void)online_step(sw, policy);
            for (std::size_t f = 0; f < flows; ++f) {
                if (pending[f].count == 0 || !sw.flow_cleared(static_cast<int>(f))) continue;
                rec.depart(static_cast<int>(f), t, pending[f].count, pending[f].measured_sum, pending[f].measured);
                sw.flush(static_cast<int>(f));
                pending[f] = {};
            }
        }
        std::int64_t total = 0;
        std::int64_t largest = 0;
        subflow_backlogs(sw, none, total, largest);
        std::int64_t queued = 0;
        for (std::size_t f = 0; f < flows; ++f) queued += sw.packets(static_cast<int>(f));
        if (!sw.consistent()) rec.m.vq_consistent = false;
        rec.end_slot(t, total, largest, queued);

        if (probe != nullptr) {
            for (std::size_t f = 0; f < flows; ++f) {
                const bool virtual_empty = sw.flow_cleared(static_cast<int>(f));
                const bool physical_empty = sw.packets(static_cast<int>(f)) == 0;
                if (virtual_empty) ++probe->flow_empty_visits[f];
                if (virtual_empty != physical_empty) ++probe->inconsistent_visits;
            }
            if (total == 0) {
                if (last_visit >= 0) {
                    gap_sum += t - last_visit;
                    ++gaps;
                }
                probe->max_gap = std::max(probe->max_gap, t - last_visit);
                last_visit = t;
            }
        }
    }
    if (probe != nullptr) {
        probe->slots = c.horizon;
        probe->empty_visits = rec.m.empty_visits;
        probe->max_gap = std::max(probe->max_gap, c.horizon - 1 - last_visit);
        probe->mean_gap = gaps > 0 ? static_cast<double>(gap_sum) / static_cast<double>(gaps) : 0.0;
    }
    return rec.finish();
}

SimMetrics run_uncoded(const SimConfig& c, const Prepared& p) {
    Recorder rec(c, p);
    const std::size_t flows = c.pattern.size();
    UncodedSwitch sw(c.pattern);
    std::mt19937_64 rng(c.seed ^ kSchedulerSeedMix);
    std::mt19937_64 arrivals(c.seed);
    std::vector<std::bernoulli_distribution> coin;
    for (double r : p.offered) coin.emplace_back(r);
    SpeedupClock clock(c.speedup);

    for (std::int64_t t = 0; t < c.horizon; ++t) {
        for (std::size_t f = 0; f < flows; ++f) {
            if (!coin[f](arrivals)) continue;
            sw.add_packet(static_cast<int>(f), t);
            ++rec.m.arrivals;
        }
        const int configurations = clock.next();
        for (int k = 0; k < configurations; ++k) {
            for (const auto& [flow, packet] : fanout_splitting_step(sw, c.candidates, rng).departures) {
                const bool measured = packet.arrival >= p.warmup;
                rec.depart(flow, t, 1, measured ? static_cast<double>(packet.arrival) : 0.0, measured ? 1 : 0);
            }
        }
        std::int64_t largest = 0;
        for (auto b : sw.residual_backlogs()) largest = std::max(largest, b);
        rec.end_slot(t, sw.total_backlog(), largest, sw.queued_packets());
    }
    return rec.finish();
}

}  // namespace

SimMetrics run(const SimConfig& config) {
    const Prepared p = prepare(config);
    if (config.scheduler == SimScheduler::FanoutSplitting) return run_uncoded(config, p);
    if (config.batching) return run_coded_batched(config, p);
    return run_coded_streaming(config, p, nullptr);
}

StabilityReport stability_probe(const SimConfig& config) {
    SimConfig c = config;
    if (c.scheduler == SimScheduler::FanoutSplitting) c.scheduler = SimScheduler::MwssExact;
    c.batching = false;
    const Prepared p = prepare(c);
    StabilityReport report;
    report.flow_empty_visits.assign(c.pattern.size(), 0);
    (void)run_coded_streaming(c, p, &report);
    return report;
}

std::vector<SweepRow> sweep(const SimConfig& config, const std::vector<double>& alphas, unsigned threads) {
    if (!std::is_sorted(alphas.begin(), alphas.end())) throw Error(ErrorCode::InvalidConfig, "alpha grid must be ascending");
    std::vector<SweepRow> rows(alphas.size());
    if (alphas.empty()) return rows;
    if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(alphas.size()));

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_lock;
    auto worker = [&] {
        for (std::size_t i = next++; i < alphas.size(); i = next++) {
            try {
                SimConfig c = config;
                c.alpha = alphas[i];
                c.seed = config.seed + i;
                if (!c.trace_path.empty()) c.trace_path += "." + std::to_string(i);
                rows[i] = {alphas[i], to_string(c.scheduler), run(c)};
            } catch (...) {
                std::lock_guard<std::mutex> hold(failure_lock);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < threads; ++w) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << "alpha,scheduler,mean_delay,throughput,max_vq,stable\n";
    out << std::setprecision(10);
    for (const auto& r : rows) {
        out << r.alpha << ',' << r.scheduler << ',' << r.metrics.mean_delay << ',' << r.metrics.total_throughput << ','
            << r.metrics.max_vq << ',' << (r.metrics.stable ? 1 : 0) << '\n';
    }
    return out.str();
}

std::vector<double> parse_grid(const std::string& spec) {
    std::vector<double> parts;
    std::stringstream in(spec);
    std::string item;
    while (std::getline(in, item, ':')) {
        try {
            std::size_t used = 0;
            parts.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw Error(ErrorCode::InvalidArgument, "bad grid value '" + item + "' in '" + spec + "'");
        }
    }
    if (parts.size() != 3) throw Error(ErrorCode::InvalidArgument, "grid must look like lo:hi:step");
    const double lo = parts[0];
    const double hi = parts[1];
    const double step = parts[2];
    if (!(step > 0) || hi < lo) throw Error(ErrorCode::InvalidArgument, "grid needs lo <= hi and a positive step");
    const auto count = static_cast<std::int64_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    std::vector<double> grid;
    for (std::int64_t i = 0; i < count; ++i) grid.push_back(std::round((lo + static_cast<double>(i) * step) * 1e9) / 1e9);
    return grid;
}

}  // namespace ncswitch
