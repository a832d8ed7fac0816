#include "ncswitch/graph.hpp"

#include "ncswitch/error.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>

namespace ncswitch {

std::vector<int> members(VertexSet s) {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(set_size(s)));
    for_each_member(s, [&](int v) { out.push_back(v); });
    return out;
}

VertexSet make_set(const std::vector<int>& vertices) {
    VertexSet s = 0;
    for (int v : vertices) s |= singleton(v);
    return s;
}

ConflictGraph::ConflictGraph(int num_vertices) {
    if (num_vertices < 0 || num_vertices > kMaxVertices) {
        throw Error(ErrorCode::LimitExceeded,
                    "graph with " + std::to_string(num_vertices) + " vertices exceeds the 64-vertex limit");
    }
    adjacency_.assign(static_cast<std::size_t>(num_vertices), 0);
    labels_.assign(static_cast<std::size_t>(num_vertices), std::monostate{});
}

ConflictGraph::ConflictGraph(int num_vertices, const std::vector<std::pair<int, int>>& edges)
    : ConflictGraph(num_vertices) {
    for (auto [u, v] : edges) add_edge(u, v);
}

void ConflictGraph::add_edge(int u, int v) {
    if (u < 0 || v < 0 || u >= size() || v >= size()) {
        throw Error(ErrorCode::InvalidArgument,
                    "edge (" + std::to_string(u) + "," + std::to_string(v) + ") out of range");
    }
    if (u == v) throw Error(ErrorCode::InvalidArgument, "self-loop at vertex " + std::to_string(u));
    adjacency_[static_cast<std::size_t>(u)] |= singleton(v);
    adjacency_[static_cast<std::size_t>(v)] |= singleton(u);
}

int ConflictGraph::num_edges() const {
    int total = 0;
    for (VertexSet a : adjacency_) total += set_size(a);
    return total / 2;
}

std::vector<std::pair<int, int>> ConflictGraph::edges() const {
    std::vector<std::pair<int, int>> out;
    for (int u = 0; u < size(); ++u) {
        for_each_member(neighbors(u) & ~full_set(u + 1), [&](int v) { out.emplace_back(u, v); });
    }
    return out;
}

bool ConflictGraph::is_stable(VertexSet s) const {
    bool ok = true;
    for_each_member(s, [&](int v) { ok = ok && (neighbors(v) & s) == 0; });
    return ok;
}

bool ConflictGraph::is_clique(VertexSet s) const {
    bool ok = true;
    for_each_member(s, [&](int v) { ok = ok && (s & ~singleton(v) & ~neighbors(v)) == 0; });
    return ok;
}

ConflictGraph ConflictGraph::complement() const {
    ConflictGraph c(size());
    const VertexSet everything = all();
    for (int v = 0; v < size(); ++v) {
        c.adjacency_[static_cast<std::size_t>(v)] = everything & ~neighbors(v) & ~singleton(v);
    }
    c.labels_ = labels_;
    return c;
}

ConflictGraph ConflictGraph::induced(VertexSet s) const {
    const std::vector<int> keep = members(s & all());
    ConflictGraph sub(static_cast<int>(keep.size()));
    for (std::size_t a = 0; a < keep.size(); ++a) {
        for (std::size_t b = a + 1; b < keep.size(); ++b) {
            if (adjacent(keep[a], keep[b])) sub.add_edge(static_cast<int>(a), static_cast<int>(b));
        }
        sub.labels_[a] = labels_[static_cast<std::size_t>(keep[a])];
    }
    return sub;
}

void ConflictGraph::set_labels(std::vector<VertexLabel> labels) {
    if (labels.size() != adjacency_.size()) {
        throw Error(ErrorCode::LengthMismatch, "label count does not match vertex count");
    }
    labels_ = std::move(labels);
}

std::string ConflictGraph::label_string(int v) const {
    const VertexLabel& label = labels_.at(static_cast<std::size_t>(v));
    if (const auto* s = std::get_if<SubflowId>(&label)) return to_string(*s);
    if (const auto* f = std::get_if<FlowKey>(&label)) return to_string(*f);
    return std::to_string(v);
}

int ConflictGraph::find(const SubflowId& id) const {
    for (int v = 0; v < size(); ++v) {
        const auto* s = std::get_if<SubflowId>(&labels_[static_cast<std::size_t>(v)]);
        if (s != nullptr && *s == id) return v;
    }
    return -1;
}

int ConflictGraph::find(const FlowKey& key) const {
    for (int v = 0; v < size(); ++v) {
        const auto* f = std::get_if<FlowKey>(&labels_[static_cast<std::size_t>(v)]);
        if (f != nullptr && *f == key) return v;
    }
    return -1;
}

ConflictGraph build_enhanced_conflict_graph(const TrafficPattern& tp) {
    const std::vector<SubflowId> subs = tp.subflows();
    ConflictGraph g(static_cast<int>(subs.size()));
    for (std::size_t a = 0; a < subs.size(); ++a) {
        for (std::size_t b = a + 1; b < subs.size(); ++b) {
            const bool same_output = subs[a].output == subs[b].output;
            const bool same_input_other_flow = subs[a].input == subs[b].input && subs[a].fanout != subs[b].fanout;
            if (same_output || same_input_other_flow) g.add_edge(static_cast<int>(a), static_cast<int>(b));
        }
    }
    g.set_labels(std::vector<VertexLabel>(subs.begin(), subs.end()));
    return g;
}

ConflictGraph build_flow_conflict_graph(const TrafficPattern& tp) {
    const auto& flows = tp.flows();
    ConflictGraph g(static_cast<int>(flows.size()));
    std::vector<VertexLabel> labels;
    for (std::size_t a = 0; a < flows.size(); ++a) {
        labels.emplace_back(flows[a].key());
        for (std::size_t b = a + 1; b < flows.size(); ++b) {
            std::vector<int> common;
            std::set_intersection(flows[a].fanout.begin(), flows[a].fanout.end(), flows[b].fanout.begin(),
                                  flows[b].fanout.end(), std::back_inserter(common));
            if (flows[a].input == flows[b].input || !common.empty()) {
                g.add_edge(static_cast<int>(a), static_cast<int>(b));
            }
        }
    }
    g.set_labels(std::move(labels));
    return g;
}

std::vector<Rational> enhanced_weights(const TrafficPattern& tp) {
    std::vector<Rational> w;
    for (const Flow& f : tp.flows()) w.insert(w.end(), f.fanout.size(), f.rate);
    return w;
}

std::vector<Rational> flow_weights(const TrafficPattern& tp) {
    std::vector<Rational> w;
    for (const Flow& f : tp.flows()) w.push_back(f.rate);
    return w;
}

namespace {

void check_limit(const ConflictGraph& g, int limit, const char* what) {
    if (g.size() > limit) {
        throw Error(ErrorCode::LimitExceeded, std::string(what) + ": graph has |V| = " + std::to_string(g.size()) +
                                                  " vertices, limit is " + std::to_string(limit));
    }
}

// Bron-Kerbosch with Tomita pivoting.
void bron_kerbosch(const ConflictGraph& g, VertexSet r, VertexSet p, VertexSet x, std::vector<VertexSet>& out) {
    if (p == 0 && x == 0) {
        out.push_back(r);
        return;
    }
    int pivot = -1;
    int best = -1;
    for_each_member(p | x, [&](int u) {
        const int c = set_size(p & g.neighbors(u));
        if (c > best) {
            best = c;
            pivot = u;
        }
    });
    VertexSet candidates = p & ~g.neighbors(pivot);
    while (candidates != 0) {
        const int v = std::countr_zero(candidates);
        candidates &= candidates - 1;
        bron_kerbosch(g, r | singleton(v), p & g.neighbors(v), x & g.neighbors(v), out);
        p &= ~singleton(v);
        x |= singleton(v);
    }
}

void sort_sets(std::vector<VertexSet>& sets) {
    std::sort(sets.begin(), sets.end(), [](VertexSet a, VertexSet b) { return members(a) < members(b); });
}

}  // namespace

std::vector<VertexSet> maximal_cliques(const ConflictGraph& g, int limit) {
    check_limit(g, limit, "clique enumeration");
    std::vector<VertexSet> out;
    if (g.size() == 0) return out;
    bron_kerbosch(g, 0, g.all(), 0, out);
    sort_sets(out);
    return out;
}

std::vector<VertexSet> maximal_stable_sets(const ConflictGraph& g, int limit) {
    check_limit(g, limit, "stable set enumeration");
    return maximal_cliques(g.complement(), limit);
}

namespace {

// Induced cycle of exactly `length` vertices whose smallest vertex is `start`.
bool extend_hole(const ConflictGraph& g, int length, int start, std::vector<int>& path, VertexSet on_path,
                 VertexSet blocked) {
    const int last = path.back();
    const VertexSet above = ~full_set(start + 1);
    const int next_index = static_cast<int>(path.size());
    VertexSet candidates = g.neighbors(last) & above & ~on_path & ~blocked;
    if (next_index == length - 1) {
        // closing vertex: adjacent to start, and oriented so path[1] < closing vertex
        candidates &= g.neighbors(start) & ~full_set(path[1] + 1);
    } else {
        candidates &= ~g.neighbors(start);
    }
    while (candidates != 0) {
        const int v = std::countr_zero(candidates);
        candidates &= candidates - 1;
        path.push_back(v);
        if (next_index == length - 1) return true;
        // v's predecessor may not touch any later vertex
        if (extend_hole(g, length, start, path, on_path | singleton(v), blocked | g.neighbors(last))) return true;
        path.pop_back();
    }
    return false;
}

}  // namespace

std::optional<std::vector<int>> find_odd_hole(const ConflictGraph& g, int max_length) {
    for (int length = 5; length <= std::min(max_length, g.size()); length += 2) {
        for (int start = 0; start < g.size(); ++start) {
            VertexSet firsts = g.neighbors(start) & ~full_set(start + 1);
            while (firsts != 0) {
                const int p1 = std::countr_zero(firsts);
                firsts &= firsts - 1;
                std::vector<int> path{start, p1};
                if (extend_hole(g, length, start, path, singleton(start) | singleton(p1), 0)) return path;
            }
        }
    }
    return std::nullopt;
}

std::optional<std::vector<int>> find_odd_antihole(const ConflictGraph& g, int max_length) {
    return find_odd_hole(g.complement(), max_length);
}

bool is_perfect(const ConflictGraph& g, int limit) {
    check_limit(g, limit, "perfection test");
    return !find_odd_hole(g, g.size()) && !find_odd_antihole(g, g.size());
}

std::optional<std::vector<int>> find_induced(const ConflictGraph& g, const ConflictGraph& pattern) {
    const int k = pattern.size();
    if (k > 12) {
        throw Error(ErrorCode::LimitExceeded,
                    "induced-subgraph pattern has " + std::to_string(k) + " vertices, limit is 12");
    }
    if (k > g.size()) return std::nullopt;
    if (k == 0) return std::vector<int>{};

    // Order pattern vertices so that each one (after the first in its component) has an earlier neighbour.
    std::vector<int> order;
    VertexSet placed = 0;
    while (static_cast<int>(order.size()) < k) {
        int pick = -1;
        for (int v = 0; v < k; ++v) {
            if (contains(placed, v)) continue;
            if (pick < 0) pick = v;
            const int linked = set_size(pattern.neighbors(v) & placed);
            const int best = set_size(pattern.neighbors(pick) & placed);
            if (linked > best || (linked == best && pattern.degree(v) > pattern.degree(pick))) pick = v;
        }
        order.push_back(pick);
        placed |= singleton(pick);
    }

    std::vector<int> image(static_cast<std::size_t>(k), -1);
    std::function<bool(int, VertexSet)> assign = [&](int depth, VertexSet used) -> bool {
        if (depth == k) return true;
        const int p = order[static_cast<std::size_t>(depth)];
        VertexSet candidates = g.all() & ~used;
        for (int d = 0; d < depth; ++d) {
            const int q = order[static_cast<std::size_t>(d)];
            const int gq = image[static_cast<std::size_t>(q)];
            candidates &= pattern.adjacent(p, q) ? g.neighbors(gq) : ~g.neighbors(gq);
        }
        while (candidates != 0) {
            const int v = std::countr_zero(candidates);
            candidates &= candidates - 1;
            image[static_cast<std::size_t>(p)] = v;
            if (assign(depth + 1, used | singleton(v))) return true;
        }
        image[static_cast<std::size_t>(p)] = -1;
        return false;
    };
    if (assign(0, 0)) return image;
    return std::nullopt;
}

bool contains_induced(const ConflictGraph& g, const ConflictGraph& pattern) {
    return find_induced(g, pattern).has_value();
}

ConflictGraph mycielskian(const ConflictGraph& g) {
    const int n = g.size();
    ConflictGraph m(2 * n + 1);
    for (auto [u, v] : g.edges()) {
        m.add_edge(u, v);
        m.add_edge(n + u, v);
        m.add_edge(u, n + v);
    }
    for (int v = 0; v < n; ++v) m.add_edge(n + v, 2 * n);
    return m;
}

ConflictGraph cycle_graph(int n) {
    ConflictGraph g(n);
    for (int v = 0; v < n && n >= 3; ++v) g.add_edge(v, (v + 1) % n);
    return g;
}

ConflictGraph complete_graph(int n) {
    ConflictGraph g(n);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) g.add_edge(u, v);
    return g;
}

ConflictGraph path_graph(int n) {
    ConflictGraph g(n);
    for (int v = 0; v + 1 < n; ++v) g.add_edge(v, v + 1);
    return g;
}

ConflictGraph co_p3() { return ConflictGraph(3, {{0, 1}}); }

ConflictGraph grotzsch_graph() { return mycielskian(cycle_graph(5)); }

ConflictGraph parse_edge_list(std::string_view text) {
    std::istringstream in{std::string(text)};
    int n = 0;
    int m = 0;
    if (!(in >> n >> m) || n < 0 || m < 0) {
        throw Error(ErrorCode::MalformedDocument, "edge list must start with \"n m\"");
    }
    ConflictGraph g(n);
    for (int e = 0; e < m; ++e) {
        int u = 0;
        int v = 0;
        if (!(in >> u >> v)) {
            throw Error(ErrorCode::MalformedDocument, "edge list ended after " + std::to_string(e) + " of " +
                                                          std::to_string(m) + " edges");
        }
        if (u < 0 || v < 0 || u >= n || v >= n || u == v) {
            throw Error(ErrorCode::MalformedDocument,
                        "bad edge " + std::to_string(u) + " " + std::to_string(v));
        }
        g.add_edge(u, v);
    }
    return g;
}

std::string serialize_edge_list(const ConflictGraph& g) {
    std::ostringstream out;
    const auto edges = g.edges();
    out << g.size() << ' ' << edges.size() << '\n';
    for (auto [u, v] : edges) out << u << ' ' << v << '\n';
    return out.str();
}

ConflictGraph load_edge_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open graph file " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_edge_list(buffer.str());
}

}  // namespace ncswitch
