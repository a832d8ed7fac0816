#pragma once

#include "ncswitch/coding.hpp"
#include "ncswitch/error.hpp"
#include "ncswitch/graph.hpp"
#include "ncswitch/rational.hpp"
#include "ncswitch/traffic.hpp"

#include <cstdint>
#include <deque>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace ncswitch {

/// What one input does in a slot: one flow, served to some outputs of its fanout.
struct Grant {
    FlowKey flow;
    std::vector<int> outputs;  // sorted, nonempty

    friend bool operator==(const Grant&, const Grant&) = default;
};

/// Grants keyed by input; idle inputs are absent.
struct SwitchConfiguration {
    std::map<int, Grant> grants;

    [[nodiscard]] bool idle() const { return grants.empty(); }
    friend bool operator==(const SwitchConfiguration&, const SwitchConfiguration&) = default;
};

/// Empty when the configuration respects both switch constraints for this pattern,
/// otherwise a description of the first violation.
std::string configuration_violation(const TrafficPattern& tp, const SwitchConfiguration& c);
/// Throws Error(InvalidConfig) on the first violation.
void validate_configuration(const TrafficPattern& tp, const SwitchConfiguration& c);

/// Maps a stable set of an enhanced conflict graph to the grants it stands for.
SwitchConfiguration configuration_from_stable_set(const ConflictGraph& g, VertexSet s);
/// The subflow vertices a configuration serves.
VertexSet stable_set_of(const ConflictGraph& g, const SwitchConfiguration& c);

/// Per-flow MDS code of a frame: the input encodes `packets` data packets into `symbols`
/// coded packets, one per slot in which it serves the flow.
struct FlowCode {
    FlowKey flow;
    std::int64_t packets = 0;
    std::int64_t symbols = 0;
};

struct FrameSchedule {
    TrafficPattern pattern;
    Rational speedup{1};
    std::int64_t frame_size = 0;               // F
    std::int64_t physical_slots = 0;           // external slots the frame occupies (F / speedup)
    std::vector<SwitchConfiguration> slots;    // one configuration per internal slot
    std::vector<std::int64_t> physical_slot;   // internal slot -> external slot
    std::vector<FlowCode> codes;               // empty for uncoded schedules
};

/// The rate vector is outside the stable set polytope; chi_f() is the speedup that would fix it.
class NotInStabError : public Error {
public:
    NotInStabError(const Rational& chi_f, const std::string& message)
        : Error(ErrorCode::NotInStab, message), chi_f_(chi_f) {}
    [[nodiscard]] const Rational& chi_f() const { return chi_f_; }

private:
    Rational chi_f_;
};

/// Frame schedule from an exact stable-set decomposition of e(r / speedup).
/// F is the smallest frame making every rate, coefficient and F / speedup integral.
FrameSchedule offline_schedule(const TrafficPattern& tp, const Rational& speedup = Rational(1));

struct SubflowDeficit {
    SubflowId subflow;
    std::int64_t deficit = 0;  // coded packets short of a full decode

    friend bool operator==(const SubflowDeficit&, const SubflowDeficit&) = default;
};

struct FrameServiceReport {
    bool served = false;
    std::vector<SubflowDeficit> deficits;
    /// Per slot, the subflows that received a packet innovative to them.
    std::vector<VertexSet> innovation_sets;
    bool innovation_sets_stable = true;
};

/// Runs one frame of the schedule with real MDS-coded payloads. `queue` holds the backlog of each
/// flow (missing flows count as empty); the oldest min(backlog, packets) must decode at every
/// fanout output.
FrameServiceReport verify_frame_service(const FrameSchedule& schedule, const std::map<FlowKey, std::int64_t>& queue);
/// Backlog of exactly one frame's worth for every flow.
std::map<FlowKey, std::int64_t> full_queues(const FrameSchedule& schedule);

using VirtualQueueState = std::map<SubflowId, std::int64_t>;
/// Weights aligned with the vertices of an enhanced conflict graph.
using QueueWeights = std::vector<std::int64_t>;

QueueWeights queue_weights(const ConflictGraph& g, const VirtualQueueState& state);
std::int64_t set_weight(const QueueWeights& w, VertexSet s);

inline constexpr int kMaxMwssVertices = 24;
/// Maximum-weight stable set by branch and bound; zero-weight vertices are never returned.
VertexSet mwss_exact(const ConflictGraph& g, const QueueWeights& w);

/// Best of the previous set (made maximal again) and `candidates` greedy maximal stable sets over
/// random vertex orders. Zero-weight vertices are dropped from the result.
VertexSet mwss_randomized(const ConflictGraph& g, const QueueWeights& w, VertexSet previous, int candidates,
                          std::mt19937_64& rng);
VertexSet mwss_randomized(const ConflictGraph& g, const QueueWeights& w, VertexSet previous, int candidates,
                          std::uint64_t seed);

/// Coded switch: one knowledge space per flow input and per subflow output. A flow's packets are
/// columns of its spaces; flush() forgets them once every output has decoded.
class CodedSwitch {
public:
    explicit CodedSwitch(const TrafficPattern& tp, int field_degree = 8);

    [[nodiscard]] const TrafficPattern& pattern() const { return pattern_; }
    [[nodiscard]] const ConflictGraph& graph() const { return graph_; }
    [[nodiscard]] int flow_of(int vertex) const { return vertex_flow_[static_cast<std::size_t>(vertex)]; }
    [[nodiscard]] const std::vector<int>& vertices_of(int flow) const {
        return flow_vertices_[static_cast<std::size_t>(flow)];
    }

    void add_packets(int flow, int count);
    /// Moves `combination` from the flow's input to the given subflow outputs.
    /// Returns the vertices for which it was innovative.
    std::vector<int> transmit(int flow, const SparseVector& combination, const std::vector<int>& vertices);

    [[nodiscard]] std::int64_t virtual_queue(int vertex) const { return vq_[static_cast<std::size_t>(vertex)]; }
    [[nodiscard]] const QueueWeights& virtual_queues() const { return vq_; }
    [[nodiscard]] VirtualQueueState queue_state() const;
    [[nodiscard]] std::int64_t total_virtual_queue() const;
    /// Recomputes every virtual queue from the space dimensions and compares with the counters.
    [[nodiscard]] bool consistent() const;

    [[nodiscard]] int packets(int flow) const { return inputs_[static_cast<std::size_t>(flow)].ambient(); }
    [[nodiscard]] bool flow_cleared(int flow) const;
    /// Drops a cleared flow's packets. Throws Error(InvalidArgument) while some output still lacks one.
    int flush(int flow);

    [[nodiscard]] const KnowledgeSpace& input_space(int flow) const { return inputs_[static_cast<std::size_t>(flow)]; }
    [[nodiscard]] const KnowledgeSpace& output_space(int vertex) const {
        return outputs_[static_cast<std::size_t>(vertex)];
    }

private:
    TrafficPattern pattern_;
    ConflictGraph graph_;
    std::vector<int> vertex_flow_;
    std::vector<std::vector<int>> flow_vertices_;
    std::vector<KnowledgeSpace> inputs_;
    std::vector<KnowledgeSpace> outputs_;
    QueueWeights vq_;
};

enum class SchedulerKind { MwssExact, MwssRandomized };

/// Online policy state that survives between slots.
struct OnlinePolicy {
    SchedulerKind kind = SchedulerKind::MwssExact;
    int candidates = 10;
    std::mt19937_64 rng{0};
    VertexSet previous = 0;
};

struct Transmission {
    int flow = 0;
    int batch = 0;  // index into the batch list of batched_online_step, else 0
    SparseVector combination;
    std::vector<int> vertices;
};

struct StepResult {
    SwitchConfiguration configuration;
    VertexSet chosen = 0;
    std::vector<Transmission> transmissions;
};

/// One slot of the max-weight policy: choose a stable set by virtual queue weight and send one
/// innovative combination per chosen flow. Every targeted virtual queue drops by one.
StepResult online_step(CodedSwitch& state, OnlinePolicy& policy);

/// One slot over several separately coded batches of the same pattern. The stable set is chosen on
/// the virtual queues summed over batches; each chosen flow sends one combination from the oldest
/// batch that still owes a packet to one of its chosen outputs, innovative for all such outputs.
StepResult batched_online_step(const std::vector<CodedSwitch*>& batches, OnlinePolicy& policy);

struct UncodedPacket {
    std::int64_t arrival = 0;
    std::uint64_t residual = 0;  // bit j-1 set while output j still misses the packet
};

/// Uncoded fanout-splitting switch: a FIFO per flow; only head-of-line packets move.
class UncodedSwitch {
public:
    explicit UncodedSwitch(const TrafficPattern& tp);

    [[nodiscard]] const TrafficPattern& pattern() const { return pattern_; }
    [[nodiscard]] const ConflictGraph& graph() const { return graph_; }
    [[nodiscard]] int flow_of(int vertex) const { return vertex_flow_[static_cast<std::size_t>(vertex)]; }
    [[nodiscard]] int output_of(int vertex) const { return vertex_output_[static_cast<std::size_t>(vertex)]; }

    void add_packet(int flow, std::int64_t arrival);
    [[nodiscard]] const std::deque<UncodedPacket>& queue(int flow) const {
        return queues_[static_cast<std::size_t>(flow)];
    }
    /// Packets of the vertex's flow that its output still misses.
    [[nodiscard]] std::int64_t residual_backlog(int vertex) const { return backlog_[static_cast<std::size_t>(vertex)]; }
    [[nodiscard]] const QueueWeights& residual_backlogs() const { return backlog_; }
    [[nodiscard]] std::int64_t total_backlog() const;
    [[nodiscard]] std::int64_t queued_packets() const;

    /// Vertices whose flow's head-of-line packet still needs the vertex's output.
    [[nodiscard]] VertexSet eligible() const;
    /// Delivers head-of-line packets to the outputs of the chosen vertices; returns the departed packets.
    std::vector<std::pair<int, UncodedPacket>> serve(VertexSet chosen);

    VertexSet previous = 0;

private:
    TrafficPattern pattern_;
    ConflictGraph graph_;
    std::vector<int> vertex_flow_;
    std::vector<int> vertex_output_;
    std::vector<std::deque<UncodedPacket>> queues_;
    QueueWeights backlog_;
};

struct UncodedStepResult {
    SwitchConfiguration configuration;
    VertexSet chosen = 0;
    std::vector<std::pair<int, UncodedPacket>> departures;  // (flow, packet)
};

/// One slot of the uncoded baseline: randomized max-weight departure vector over head-of-line
/// packets, weighted by residual backlog.
UncodedStepResult fanout_splitting_step(UncodedSwitch& state, int candidates, std::mt19937_64& rng);
UncodedStepResult fanout_splitting_step(UncodedSwitch& state, int candidates, std::uint64_t seed);

/// Batching: arrivals in [k P, (k+1) P) form batch k, P = delta + ceil(eps * delta). Batches are
/// coded separately and served oldest first: max-weight scheduling works on batch k while its
/// packets arrive, the last eps * delta slots of the period absorb its leftover backlog, and the
/// batch is flushed once its window has closed and every output has decoded it.
class BatchController {
public:
    BatchController(std::int64_t delta, const Rational& eps);

    [[nodiscard]] std::int64_t delta() const { return delta_; }
    [[nodiscard]] std::int64_t clearing_window() const { return clearing_; }
    [[nodiscard]] std::int64_t period() const { return delta_ + clearing_; }
    [[nodiscard]] std::int64_t batch_of(std::int64_t slot) const { return slot / period(); }
    [[nodiscard]] std::int64_t opens_at(std::int64_t batch) const { return batch * period(); }
    /// Last slot in which the batch receives arrivals.
    [[nodiscard]] std::int64_t closes_at(std::int64_t batch) const { return (batch + 1) * period() - 1; }
    [[nodiscard]] bool serviceable(std::int64_t batch, std::int64_t slot) const { return slot >= opens_at(batch); }
    /// Whether a decoded batch may be flushed in this slot.
    [[nodiscard]] bool flushable(std::int64_t batch, std::int64_t slot) const { return slot >= closes_at(batch); }

private:
    std::int64_t delta_;
    std::int64_t clearing_;
};

/// Uncoded fanout-splitting frame for benefit_pattern(N, r0, r): phase 0 broadcasts the overflow
/// group, phases 1..N pair unicast j with the broadcast group j sent to every other output, and
/// the last phase clears the remaining single-output packets with bipartite matchings.
/// Throws Error(OutsideRegion) when the rates are outside the fanout-splitting region.
FrameSchedule appendix_fs_schedule(int n, const Rational& r0, const std::vector<Rational>& r);

}  // namespace ncswitch
