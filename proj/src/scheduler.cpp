#include "ncswitch/scheduler.hpp"

#include "ncswitch/polytope.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace ncswitch {

namespace {

const SubflowId& subflow_label(const ConflictGraph& g, int v) {
    const auto* id = std::get_if<SubflowId>(&g.labels().at(static_cast<std::size_t>(v)));
    if (id == nullptr) throw Error(ErrorCode::InvalidArgument, "graph vertices must be labelled by subflows");
    return *id;
}

int flow_index(const TrafficPattern& tp, const FlowKey& key) {
    const auto& flows = tp.flows();
    for (std::size_t f = 0; f < flows.size(); ++f)
        if (flows[f].key() == key) return static_cast<int>(f);
    return -1;
}

std::vector<int> vertex_flows(const TrafficPattern& tp, const ConflictGraph& g) {
    std::vector<int> out(static_cast<std::size_t>(g.size()));
    for (int v = 0; v < g.size(); ++v) out[static_cast<std::size_t>(v)] = flow_index(tp, subflow_label(g, v).flow());
    return out;
}

std::int64_t to_count(const Rational& r) {
    if (!r.is_integer()) throw Error(ErrorCode::InvalidArgument, "expected an integral slot count, got " + r.str());
    return r.numerator_i64();
}

VertexSet greedy_closure(const ConflictGraph& g, VertexSet start, const std::vector<int>& order) {
    VertexSet s = start;
    VertexSet blocked = 0;
    for_each_member(s, [&](int v) { blocked |= g.neighbors(v); });
    for (int v : order) {
        if (contains(s, v) || contains(blocked, v)) continue;
        s |= singleton(v);
        blocked |= g.neighbors(v);
    }
    return s;
}

VertexSet positive_part(const QueueWeights& w, VertexSet s) {
    VertexSet out = 0;
    for_each_member(s, [&](int v) {
        if (w[static_cast<std::size_t>(v)] > 0) out |= singleton(v);
    });
    return out;
}

void check_weights(const ConflictGraph& g, const QueueWeights& w) {
    if (static_cast<int>(w.size()) != g.size()) throw Error(ErrorCode::LengthMismatch, "one weight per vertex expected");
    for (auto x : w)
        if (x < 0) throw Error(ErrorCode::InvalidArgument, "queue weights must be nonnegative");
}

struct BranchAndBound {
    const ConflictGraph& g;
    const QueueWeights& w;
    VertexSet best = 0;
    std::int64_t best_weight = 0;

    void search(VertexSet candidates, VertexSet current, std::int64_t weight) {
        if (weight > best_weight) {
            best = current;
            best_weight = weight;
        }
        if (candidates == 0 || weight + set_weight(w, candidates) <= best_weight) return;
        int pick = -1;
        for_each_member(candidates, [&](int v) {
            if (pick < 0 || w[static_cast<std::size_t>(v)] > w[static_cast<std::size_t>(pick)]) pick = v;
        });
        search(candidates & ~g.neighbors(pick) & ~singleton(pick), current | singleton(pick),
               weight + w[static_cast<std::size_t>(pick)]);
        search(candidates & ~singleton(pick), current, weight);
    }
};

}  // namespace

std::string configuration_violation(const TrafficPattern& tp, const SwitchConfiguration& c) {
    std::set<int> used;
    for (const auto& [input, grant] : c.grants) {
        const std::string where = "input " + std::to_string(input) + ": ";
        if (grant.flow.input != input) return where + "grant names flow " + to_string(grant.flow);
        const int f = flow_index(tp, grant.flow);
        if (f < 0) return where + "unknown flow " + to_string(grant.flow);
        if (grant.outputs.empty()) return where + "grant serves no output";
        for (std::size_t k = 0; k < grant.outputs.size(); ++k) {
            const int j = grant.outputs[k];
            if (k > 0 && grant.outputs[k - 1] >= j) return where + "outputs must be sorted and distinct";
            if (!std::binary_search(grant.flow.fanout.begin(), grant.flow.fanout.end(), j)) {
                return where + "output " + std::to_string(j) + " is outside the fanout of " + to_string(grant.flow);
            }
            if (!used.insert(j).second) return "output " + std::to_string(j) + " is granted to two inputs";
        }
    }
    return {};
}

void validate_configuration(const TrafficPattern& tp, const SwitchConfiguration& c) {
    const std::string violation = configuration_violation(tp, c);
    if (!violation.empty()) throw Error(ErrorCode::InvalidConfig, violation);
}

SwitchConfiguration configuration_from_stable_set(const ConflictGraph& g, VertexSet s) {
    if (!g.is_stable(s)) throw Error(ErrorCode::InvalidConfig, "vertex set is not stable");
    SwitchConfiguration c;
    for_each_member(s, [&](int v) {
        const SubflowId& id = subflow_label(g, v);
        auto [it, fresh] = c.grants.try_emplace(id.input, Grant{id.flow(), {}});
        if (!fresh && it->second.flow != id.flow()) {
            throw Error(ErrorCode::InvalidConfig, "input " + std::to_string(id.input) + " granted two flows");
        }
        it->second.outputs.push_back(id.output);
    });
    for (auto& [input, grant] : c.grants) std::sort(grant.outputs.begin(), grant.outputs.end());
    return c;
}

VertexSet stable_set_of(const ConflictGraph& g, const SwitchConfiguration& c) {
    VertexSet s = 0;
    for (const auto& [input, grant] : c.grants) {
        for (int j : grant.outputs) {
            const int v = g.find(SubflowId{input, grant.flow.fanout, j});
            if (v < 0) throw Error(ErrorCode::InvalidConfig, "no subflow for output " + std::to_string(j));
            s |= singleton(v);
        }
    }
    return s;
}

FrameSchedule offline_schedule(const TrafficPattern& tp, const Rational& speedup) {
    if (speedup.sign() <= 0) throw Error(ErrorCode::InvalidArgument, "speedup must be positive");
    const TrafficPattern scaled = tp.scaled(Rational(1) / speedup);
    const ConflictGraph g = build_enhanced_conflict_graph(scaled);
    const WeightVector w = enhanced_weights(scaled);
    const StabResult stab = stab_membership(g, w);
    if (!stab.member) {
        const Rational needed = stab.chi_f * speedup;
        throw NotInStabError(needed, "rate vector is outside the rate region at speedup " + speedup.str() +
                                         "; fractional chromatic number " + needed.str());
    }
    const StableSetDecomposition& d = *stab.decomposition;

    std::vector<Rational> parts;
    for (const auto& f : scaled.flows()) parts.push_back(f.rate);
    for (const auto& t : d.terms) parts.push_back(t.coefficient);
    std::int64_t frame = lcm_of_denominators(parts);
    frame = std::lcm(frame, speedup.numerator_i64());

    FrameSchedule out{tp, speedup, frame, to_count(Rational(frame) / speedup), {}, {}, {}};
    std::vector<DecompositionTerm> terms = d.terms;
    std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.set < b.set; });
    for (const auto& t : terms) {
        const SwitchConfiguration c = configuration_from_stable_set(g, t.set);
        const std::int64_t count = to_count(t.coefficient * Rational(frame));
        out.slots.insert(out.slots.end(), static_cast<std::size_t>(count), c);
    }
    out.slots.resize(static_cast<std::size_t>(frame));  // idle slots when chi_f < 1
    for (std::int64_t t = 0; t < frame; ++t) out.physical_slot.push_back(t * out.physical_slots / frame);

    for (const auto& f : scaled.flows()) {
        FlowCode code{f.key(), to_count(f.rate * Rational(frame)), 0};
        for (const auto& slot : out.slots) {
            auto it = slot.grants.find(f.input);
            if (it != slot.grants.end() && it->second.flow == f.key()) ++code.symbols;
        }
        out.codes.push_back(code);
    }
    return out;
}

std::map<FlowKey, std::int64_t> full_queues(const FrameSchedule& schedule) {
    std::map<FlowKey, std::int64_t> q;
    for (const auto& code : schedule.codes) q[code.flow] = code.packets;
    return q;
}

FrameServiceReport verify_frame_service(const FrameSchedule& schedule,
                                        const std::map<FlowKey, std::int64_t>& queue) {
    const TrafficPattern& tp = schedule.pattern;
    const ConflictGraph g = build_enhanced_conflict_graph(tp);
    const std::vector<int> owner = vertex_flows(tp, g);
    const auto& flows = tp.flows();
    if (schedule.codes.size() != flows.size()) throw Error(ErrorCode::InvalidArgument, "one code per flow expected");

    constexpr std::size_t kPayload = 8;
    std::vector<std::vector<Packet>> payloads(flows.size());
    std::vector<std::vector<Packet>> coded(flows.size());
    for (std::size_t f = 0; f < flows.size(); ++f) {
        const FlowCode& code = schedule.codes[f];
        if (code.flow != flows[f].key()) throw Error(ErrorCode::InvalidArgument, "codes are out of flow order");
        auto it = queue.find(code.flow);
        const std::int64_t backlog = it == queue.end() ? 0 : it->second;
        const std::int64_t m = std::min(backlog, code.packets);
        if (m <= 0) continue;
        if (code.symbols > 65535) throw Error(ErrorCode::LimitExceeded, "frame code longer than 65535 symbols");
        for (std::int64_t p = 0; p < m; ++p) {
            Packet pk(kPayload);
            for (std::size_t b = 0; b < kPayload; ++b) {
                pk[b] = static_cast<std::uint8_t>(f * 131 + static_cast<std::size_t>(p) * 31 + b * 7 + 1);
            }
            payloads[f].push_back(std::move(pk));
        }
        coded[f] = frame_encode(payloads[f], static_cast<int>(code.packets), static_cast<int>(code.symbols), kPayload);
    }

    FrameServiceReport report;
    std::vector<std::vector<std::pair<int, Packet>>> received(static_cast<std::size_t>(g.size()));
    std::vector<std::int64_t> position(flows.size(), 0);
    for (const auto& slot : schedule.slots) {
        validate_configuration(tp, slot);
        VertexSet innovative = 0;
        for (const auto& [input, grant] : slot.grants) {
            const auto f = static_cast<std::size_t>(flow_index(tp, grant.flow));
            const std::int64_t pos = position[f]++;
            if (payloads[f].empty() || pos >= static_cast<std::int64_t>(coded[f].size())) continue;
            for (int j : grant.outputs) {
                const int v = g.find(SubflowId{input, grant.flow.fanout, j});
                auto& got = received[static_cast<std::size_t>(v)];
                // distinct positions of an MDS code stay independent until k are held
                if (static_cast<std::int64_t>(got.size()) < schedule.codes[f].packets) {
                    got.emplace_back(static_cast<int>(pos), coded[f][static_cast<std::size_t>(pos)]);
                    innovative |= singleton(v);
                }
            }
        }
        report.innovation_sets.push_back(innovative);
        if (!g.is_stable(innovative)) report.innovation_sets_stable = false;
    }

    for (int v = 0; v < g.size(); ++v) {
        const auto f = static_cast<std::size_t>(owner[static_cast<std::size_t>(v)]);
        if (payloads[f].empty()) continue;
        const FlowCode& code = schedule.codes[f];
        const auto& got = received[static_cast<std::size_t>(v)];
        std::int64_t deficit = code.packets - static_cast<std::int64_t>(got.size());
        if (deficit == 0 &&
            frame_decode(got, static_cast<int>(code.packets), static_cast<int>(code.symbols)) != payloads[f]) {
            deficit = code.packets;
        }
        if (deficit > 0) report.deficits.push_back({subflow_label(g, v), deficit});
    }
    report.served = report.deficits.empty();
    return report;
}

QueueWeights queue_weights(const ConflictGraph& g, const VirtualQueueState& state) {
    QueueWeights w(static_cast<std::size_t>(g.size()), 0);
    for (const auto& [id, q] : state) {
        const int v = g.find(id);
        if (v < 0) throw Error(ErrorCode::InvalidArgument, "no vertex for subflow " + to_string(id));
        w[static_cast<std::size_t>(v)] = q;
    }
    return w;
}

std::int64_t set_weight(const QueueWeights& w, VertexSet s) {
    std::int64_t total = 0;
    for_each_member(s, [&](int v) { total += w.at(static_cast<std::size_t>(v)); });
    return total;
}

VertexSet mwss_exact(const ConflictGraph& g, const QueueWeights& w) {
    if (g.size() > kMaxMwssVertices) {
        throw Error(ErrorCode::LimitExceeded, "exact max-weight stable set is limited to " +
                                                  std::to_string(kMaxMwssVertices) + " vertices, graph has " +
                                                  std::to_string(g.size()));
    }
    check_weights(g, w);
    BranchAndBound bnb{g, w};
    bnb.search(positive_part(w, g.all()), 0, 0);
    return bnb.best;
}

VertexSet mwss_randomized(const ConflictGraph& g, const QueueWeights& w, VertexSet previous, int candidates,
                          std::mt19937_64& rng) {
    if (candidates < 1) throw Error(ErrorCode::InvalidArgument, "at least one candidate is needed");
    check_weights(g, w);
    std::vector<int> order(static_cast<std::size_t>(g.size()));
    std::iota(order.begin(), order.end(), 0);
    // queues served last slot may have emptied; grow the previous set back to a maximal one
    VertexSet prev = previous & g.all();
    if (!g.is_stable(prev)) prev = 0;
    VertexSet best = greedy_closure(g, prev, order);
    std::int64_t best_weight = set_weight(w, best);
    for (int c = 0; c < candidates; ++c) {
        std::shuffle(order.begin(), order.end(), rng);
        const VertexSet s = greedy_closure(g, 0, order);
        const std::int64_t weight = set_weight(w, s);
        if (weight > best_weight) {
            best = s;
            best_weight = weight;
        }
    }
    return positive_part(w, best);
}

VertexSet mwss_randomized(const ConflictGraph& g, const QueueWeights& w, VertexSet previous, int candidates,
                          std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return mwss_randomized(g, w, previous, candidates, rng);
}

CodedSwitch::CodedSwitch(const TrafficPattern& tp, int field_degree)
    : pattern_(tp), graph_(build_enhanced_conflict_graph(tp)), vertex_flow_(vertex_flows(tp, graph_)) {
    flow_vertices_.resize(tp.size());
    for (int v = 0; v < graph_.size(); ++v) flow_vertices_[static_cast<std::size_t>(flow_of(v))].push_back(v);
    inputs_.assign(tp.size(), KnowledgeSpace(0, field_degree));
    outputs_.assign(static_cast<std::size_t>(graph_.size()), KnowledgeSpace(0, field_degree));
    vq_.assign(static_cast<std::size_t>(graph_.size()), 0);
}

void CodedSwitch::add_packets(int flow, int count) {
    if (count < 0) throw Error(ErrorCode::InvalidArgument, "negative packet count");
    if (count == 0) return;
    auto& in = inputs_.at(static_cast<std::size_t>(flow));
    const int before = in.ambient();
    in.extend(before + count);
    for (int c = before; c < before + count; ++c) in.insert(SparseVector{{c, FieldElement{1}}});
    for (int v : vertices_of(flow)) {
        outputs_[static_cast<std::size_t>(v)].extend(before + count);
        vq_[static_cast<std::size_t>(v)] += count;
    }
}

std::vector<int> CodedSwitch::transmit(int flow, const SparseVector& combination, const std::vector<int>& vertices) {
    if (!input_space(flow).contains(combination)) {
        throw Error(ErrorCode::InvalidArgument, "combination is not known at the input");
    }
    std::vector<int> innovative;
    for (int v : vertices) {
        if (flow_of(v) != flow) throw Error(ErrorCode::InvalidArgument, "vertex belongs to another flow");
        if (outputs_[static_cast<std::size_t>(v)].insert(combination)) {
            --vq_[static_cast<std::size_t>(v)];
            innovative.push_back(v);
        }
    }
    return innovative;
}

VirtualQueueState CodedSwitch::queue_state() const {
    VirtualQueueState s;
    for (int v = 0; v < graph_.size(); ++v) s[subflow_label(graph_, v)] = vq_[static_cast<std::size_t>(v)];
    return s;
}

std::int64_t CodedSwitch::total_virtual_queue() const { return std::accumulate(vq_.begin(), vq_.end(), std::int64_t{0}); }

bool CodedSwitch::consistent() const {
    for (int v = 0; v < graph_.size(); ++v) {
        const auto gap = static_cast<std::int64_t>(input_space(flow_of(v)).dimension()) - output_space(v).dimension();
        if (gap != vq_[static_cast<std::size_t>(v)] || gap < 0) return false;
    }
    return true;
}

bool CodedSwitch::flow_cleared(int flow) const {
    return std::all_of(vertices_of(flow).begin(), vertices_of(flow).end(),
                       [&](int v) { return vq_[static_cast<std::size_t>(v)] == 0; });
}

int CodedSwitch::flush(int flow) {
    if (!flow_cleared(flow)) throw Error(ErrorCode::InvalidArgument, "flow still has undecoded packets");
    const int n = packets(flow);
    inputs_[static_cast<std::size_t>(flow)].clear();
    for (int v : vertices_of(flow)) outputs_[static_cast<std::size_t>(v)].clear();
    return n;
}

StepResult online_step(CodedSwitch& state, OnlinePolicy& policy) {
    const ConflictGraph& g = state.graph();
    const QueueWeights& w = state.virtual_queues();
    StepResult out;
    out.chosen = policy.kind == SchedulerKind::MwssExact
                     ? mwss_exact(g, w)
                     : mwss_randomized(g, w, policy.previous, policy.candidates, policy.rng);
    policy.previous = out.chosen;
    out.configuration = configuration_from_stable_set(g, out.chosen);

    std::map<int, std::vector<int>> by_flow;
    for_each_member(out.chosen, [&](int v) { by_flow[state.flow_of(v)].push_back(v); });
    for (auto& [flow, vertices] : by_flow) {
        std::vector<const KnowledgeSpace*> receivers;
        for (int v : vertices) receivers.push_back(&state.output_space(v));
        SparseVector combination = innovative_combination(state.input_space(flow), receivers);
        const auto innovative = state.transmit(flow, combination, vertices);
        if (innovative.size() != vertices.size()) {
            throw Error(ErrorCode::ImpossibleReceiver, "coded packet was not innovative for every chosen output");
        }
        out.transmissions.push_back({flow, 0, std::move(combination), std::move(vertices)});
    }
    return out;
}

StepResult batched_online_step(const std::vector<CodedSwitch*>& batches, OnlinePolicy& policy) {
    if (batches.empty()) return {};
    const CodedSwitch& first = *batches.front();
    const ConflictGraph& g = first.graph();
    QueueWeights w(static_cast<std::size_t>(g.size()), 0);
    for (const CodedSwitch* b : batches)
        for (std::size_t v = 0; v < w.size(); ++v) w[v] += b->virtual_queues()[v];
    StepResult out;
    out.chosen = policy.kind == SchedulerKind::MwssExact
                     ? mwss_exact(g, w)
                     : mwss_randomized(g, w, policy.previous, policy.candidates, policy.rng);
    policy.previous = out.chosen;

    std::map<int, std::vector<int>> by_flow;
    for_each_member(out.chosen, [&](int v) { by_flow[first.flow_of(v)].push_back(v); });
    VertexSet served = 0;
    for (auto& [flow, vertices] : by_flow) {
        for (std::size_t b = 0; b < batches.size(); ++b) {
            CodedSwitch& sw = *batches[b];
            std::vector<int> owed;
            for (int v : vertices)
                if (sw.virtual_queue(v) > 0) owed.push_back(v);
            if (owed.empty()) continue;
            std::vector<const KnowledgeSpace*> receivers;
            for (int v : owed) receivers.push_back(&sw.output_space(v));
            SparseVector combination = innovative_combination(sw.input_space(flow), receivers);
            if (sw.transmit(flow, combination, owed).size() != owed.size()) {
                throw Error(ErrorCode::ImpossibleReceiver, "coded packet was not innovative for every chosen output");
            }
            for (int v : owed) served |= singleton(v);
            out.transmissions.push_back({flow, static_cast<int>(b), std::move(combination), std::move(owed)});
            break;
        }
    }
    // grants cover what was actually sent, a subset of the stable set
    out.configuration = configuration_from_stable_set(g, served);
    return out;
}

UncodedSwitch::UncodedSwitch(const TrafficPattern& tp)
    : pattern_(tp), graph_(build_enhanced_conflict_graph(tp)), vertex_flow_(vertex_flows(tp, graph_)) {
    if (tp.num_outputs() > 64) throw Error(ErrorCode::LimitExceeded, "at most 64 outputs");
    for (int v = 0; v < graph_.size(); ++v) vertex_output_.push_back(subflow_label(graph_, v).output);
    queues_.resize(tp.size());
    backlog_.assign(static_cast<std::size_t>(graph_.size()), 0);
}

void UncodedSwitch::add_packet(int flow, std::int64_t arrival) {
    std::uint64_t residual = 0;
    for (int j : pattern_.flows().at(static_cast<std::size_t>(flow)).fanout) residual |= std::uint64_t{1} << (j - 1);
    queues_[static_cast<std::size_t>(flow)].push_back({arrival, residual});
    for (int v = 0; v < graph_.size(); ++v)
        if (flow_of(v) == flow) ++backlog_[static_cast<std::size_t>(v)];
}

std::int64_t UncodedSwitch::total_backlog() const {
    return std::accumulate(backlog_.begin(), backlog_.end(), std::int64_t{0});
}

std::int64_t UncodedSwitch::queued_packets() const {
    std::int64_t n = 0;
    for (const auto& q : queues_) n += static_cast<std::int64_t>(q.size());
    return n;
}

VertexSet UncodedSwitch::eligible() const {
    VertexSet s = 0;
    for (int v = 0; v < graph_.size(); ++v) {
        const auto& q = queues_[static_cast<std::size_t>(flow_of(v))];
        if (!q.empty() && (q.front().residual >> (output_of(v) - 1) & 1U)) s |= singleton(v);
    }
    return s;
}

std::vector<std::pair<int, UncodedPacket>> UncodedSwitch::serve(VertexSet chosen) {
    if ((chosen & ~eligible()) != 0) throw Error(ErrorCode::InvalidConfig, "served output does not need the head packet");
    if (!graph_.is_stable(chosen)) throw Error(ErrorCode::InvalidConfig, "departure vector is not a stable set");
    std::set<int> touched;
    for_each_member(chosen, [&](int v) {
        auto& head = queues_[static_cast<std::size_t>(flow_of(v))].front();
        head.residual &= ~(std::uint64_t{1} << (output_of(v) - 1));
        --backlog_[static_cast<std::size_t>(v)];
        touched.insert(flow_of(v));
    });
    std::vector<std::pair<int, UncodedPacket>> departed;
    for (int f : touched) {
        auto& q = queues_[static_cast<std::size_t>(f)];
        if (q.front().residual == 0) {
            departed.emplace_back(f, q.front());
            q.pop_front();
        }
    }
    return departed;
}

UncodedStepResult fanout_splitting_step(UncodedSwitch& state, int candidates, std::mt19937_64& rng) {
    const VertexSet eligible = state.eligible();
    QueueWeights w = state.residual_backlogs();
    for (int v = 0; v < state.graph().size(); ++v)
        if (!contains(eligible, v)) w[static_cast<std::size_t>(v)] = 0;
    UncodedStepResult out;
    out.chosen = mwss_randomized(state.graph(), w, state.previous & eligible, candidates, rng);
    state.previous = out.chosen;
    out.configuration = configuration_from_stable_set(state.graph(), out.chosen);
    out.departures = state.serve(out.chosen);
    return out;
}

UncodedStepResult fanout_splitting_step(UncodedSwitch& state, int candidates, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return fanout_splitting_step(state, candidates, rng);
}

BatchController::BatchController(std::int64_t delta, const Rational& eps) : delta_(delta) {
    if (delta < 1) throw Error(ErrorCode::InvalidArgument, "batch length must be at least 1");
    if (eps.sign() <= 0) throw Error(ErrorCode::InvalidArgument, "clearing fraction must be positive");
    clearing_ = ceil(eps * Rational(delta)).numerator_i64();
}

namespace {

// Kuhn's augmenting paths on the support of a square nonnegative matrix.
bool augment(const std::vector<std::vector<std::int64_t>>& m, int row, std::vector<int>& match_col,
             std::vector<bool>& seen) {
    for (std::size_t c = 0; c < m.size(); ++c) {
        if (m[static_cast<std::size_t>(row)][c] == 0 || seen[c]) continue;
        seen[c] = true;
        if (match_col[c] < 0 || augment(m, match_col[c], match_col, seen)) {
            match_col[c] = row;
            return true;
        }
    }
    return false;
}

// Splits a K x N demand matrix into max-line-sum many matchings (row -> column or -1 per slot).
std::vector<std::vector<int>> birkhoff_slots(const std::vector<std::vector<std::int64_t>>& demand) {
    const std::size_t k = demand.size();
    const std::size_t n = k == 0 ? 0 : demand[0].size();
    std::vector<std::int64_t> rows(k, 0);
    std::vector<std::int64_t> cols(n, 0);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            rows[i] += demand[i][j];
            cols[j] += demand[i][j];
        }
    std::int64_t load = 0;
    for (auto x : rows) load = std::max(load, x);
    for (auto x : cols) load = std::max(load, x);

    // [[D, diag(load - rows)], [diag(load - cols), D^T]] has every line sum equal to load
    const std::size_t size = k + n;
    std::vector<std::vector<std::int64_t>> m(size, std::vector<std::int64_t>(size, 0));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            m[i][j] = demand[i][j];
            m[k + j][n + i] = demand[i][j];
        }
    for (std::size_t i = 0; i < k; ++i) m[i][n + i] = load - rows[i];
    for (std::size_t j = 0; j < n; ++j) m[k + j][j] = load - cols[j];

    std::vector<std::vector<int>> slots;
    std::int64_t left = load;
    while (left > 0) {
        std::vector<int> match_col(size, -1);
        for (std::size_t r = 0; r < size; ++r) {
            std::vector<bool> seen(size, false);
            if (!augment(m, static_cast<int>(r), match_col, seen)) {
                throw Error(ErrorCode::InvalidArgument, "regular bipartite multigraph without a perfect matching");
            }
        }
        std::int64_t times = left;
        for (std::size_t c = 0; c < size; ++c) times = std::min(times, m[static_cast<std::size_t>(match_col[c])][c]);
        std::vector<int> slot(k, -1);
        for (std::size_t c = 0; c < size; ++c) {
            const auto r = static_cast<std::size_t>(match_col[c]);
            m[r][c] -= times;
            if (r < k && c < n) slot[r] = static_cast<int>(c);
        }
        slots.insert(slots.end(), static_cast<std::size_t>(times), slot);
        left -= times;
    }
    return slots;
}

}  // namespace

FrameSchedule appendix_fs_schedule(int n, const Rational& r0, const std::vector<Rational>& r) {
    if (n < 2 || static_cast<int>(r.size()) != n) throw Error(ErrorCode::InvalidArgument, "need N >= 2 and N unicast rates");
    if (!fs_region_check(n, r0, r)) {
        throw Error(ErrorCode::OutsideRegion, "rates are outside the fanout-splitting rate region");
    }
    const TrafficPattern tp = benefit_pattern(n, r0, r);
    Rational total;
    for (const auto& x : r) total += x;
    const Rational half(1, 2);
    const Rational alpha = total.is_zero() ? half : min(r0 / total, half);

    std::vector<Rational> parts{r0, r0 - alpha * total};
    for (const auto& x : r) {
        parts.push_back(x);
        parts.push_back(alpha * x);
    }
    const std::int64_t frame = lcm_of_denominators(parts);
    const Rational f(frame);

    std::vector<int> everyone(static_cast<std::size_t>(n));
    std::iota(everyone.begin(), everyone.end(), 1);
    const FlowKey broadcast{1, everyone};
    auto unicast = [](int j) { return FlowKey{2, {j}}; };

    FrameSchedule out{tp, Rational(1), frame, frame, {}, {}, {}};
    // phase 0: overflow group to everyone
    SwitchConfiguration all;
    all.grants[1] = {broadcast, everyone};
    out.slots.insert(out.slots.end(), static_cast<std::size_t>(to_count((r0 - alpha * total) * f)), all);
    // phases 1..N: group j to the others, alongside unicast j
    std::vector<std::vector<std::int64_t>> demand(2, std::vector<std::int64_t>(static_cast<std::size_t>(n), 0));
    for (int j = 1; j <= n; ++j) {
        const Rational& rj = r[static_cast<std::size_t>(j - 1)];
        const std::int64_t len = to_count(alpha * rj * f);
        SwitchConfiguration c;
        std::vector<int> others;
        for (int o : everyone)
            if (o != j) others.push_back(o);
        c.grants[1] = {broadcast, others};
        c.grants[2] = {unicast(j), {j}};
        out.slots.insert(out.slots.end(), static_cast<std::size_t>(len), c);
        demand[0][static_cast<std::size_t>(j - 1)] = len;
        demand[1][static_cast<std::size_t>(j - 1)] = to_count((Rational(1) - alpha) * rj * f);
    }
    // phase N+1: group j still owes output j; the rest of the unicasts
    for (const auto& slot : birkhoff_slots(demand)) {
        SwitchConfiguration c;
        if (slot[0] >= 0) c.grants[1] = {broadcast, {slot[0] + 1}};
        if (slot[1] >= 0) c.grants[2] = {unicast(slot[1] + 1), {slot[1] + 1}};
        out.slots.push_back(std::move(c));
    }
    for (std::size_t t = 0; t < out.slots.size(); ++t) out.physical_slot.push_back(static_cast<std::int64_t>(t));
    return out;
}

}  // namespace ncswitch
