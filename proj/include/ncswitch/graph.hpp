#pragma once

#include "ncswitch/traffic.hpp"

#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace ncswitch {

/// Vertex subset of a graph with at most 64 vertices; bit v is vertex v.
using VertexSet = std::uint64_t;

inline constexpr int kMaxVertices = 64;

inline VertexSet singleton(int v) { return VertexSet{1} << v; }
inline bool contains(VertexSet s, int v) { return (s >> v) & 1U; }
inline int set_size(VertexSet s) { return std::popcount(s); }
inline VertexSet full_set(int n) { return n >= 64 ? ~VertexSet{0} : (VertexSet{1} << n) - 1; }
std::vector<int> members(VertexSet s);
VertexSet make_set(const std::vector<int>& vertices);

/// Call f(v) for every member of s in increasing order.
template <typename F>
void for_each_member(VertexSet s, F&& f) {
    while (s != 0) {
        const int v = std::countr_zero(s);
        f(v);
        s &= s - 1;
    }
}

using VertexLabel = std::variant<std::monostate, SubflowId, FlowKey>;

/// Simple undirected graph: no self-loops, symmetric adjacency, at most 64 vertices.
class ConflictGraph {
public:
    explicit ConflictGraph(int num_vertices = 0);
    ConflictGraph(int num_vertices, const std::vector<std::pair<int, int>>& edges);

    [[nodiscard]] int size() const { return static_cast<int>(adjacency_.size()); }
    [[nodiscard]] bool adjacent(int u, int v) const { return contains(adjacency_[static_cast<std::size_t>(u)], v); }
    [[nodiscard]] VertexSet neighbors(int v) const { return adjacency_[static_cast<std::size_t>(v)]; }
    [[nodiscard]] int degree(int v) const { return set_size(neighbors(v)); }
    [[nodiscard]] int num_edges() const;
    [[nodiscard]] std::vector<std::pair<int, int>> edges() const;
    [[nodiscard]] VertexSet all() const { return full_set(size()); }

    void add_edge(int u, int v);

    [[nodiscard]] bool is_stable(VertexSet s) const;
    [[nodiscard]] bool is_clique(VertexSet s) const;

    [[nodiscard]] ConflictGraph complement() const;
    /// Subgraph induced by `s`; vertex order (and labels) follow increasing index.
    [[nodiscard]] ConflictGraph induced(VertexSet s) const;

    [[nodiscard]] const std::vector<VertexLabel>& labels() const { return labels_; }
    void set_labels(std::vector<VertexLabel> labels);
    [[nodiscard]] std::string label_string(int v) const;
    /// Index of the vertex labelled `id`, or -1.
    [[nodiscard]] int find(const SubflowId& id) const;
    [[nodiscard]] int find(const FlowKey& key) const;

    friend bool operator==(const ConflictGraph& a, const ConflictGraph& b) { return a.adjacency_ == b.adjacency_; }

private:
    std::vector<VertexSet> adjacency_;
    std::vector<VertexLabel> labels_;
};

/// One vertex per subflow (canonical order); (i,J,j) ~ (i',J',j') iff j = j' or (i = i' and J != J').
ConflictGraph build_enhanced_conflict_graph(const TrafficPattern& tp);

/// One vertex per flow; flows conflict iff they share an input or an output.
ConflictGraph build_flow_conflict_graph(const TrafficPattern& tp);

/// Weights of e(r) laid out on the enhanced conflict graph's vertices.
std::vector<Rational> enhanced_weights(const TrafficPattern& tp);
/// Flow rates laid out on the flow conflict graph's vertices.
std::vector<Rational> flow_weights(const TrafficPattern& tp);

inline constexpr int kDefaultEnumerationLimit = 40;
inline constexpr int kDefaultPerfectionLimit = 24;

/// Exact, duplicate-free Bron-Kerbosch enumeration sorted by (first member, ...).
/// Throws Error(LimitExceeded) when |V| > limit.
std::vector<VertexSet> maximal_cliques(const ConflictGraph& g, int limit = kDefaultEnumerationLimit);
std::vector<VertexSet> maximal_stable_sets(const ConflictGraph& g, int limit = kDefaultEnumerationLimit);

/// Shortest induced odd cycle with 5 <= length <= max_length, as a vertex cycle.
std::optional<std::vector<int>> find_odd_hole(const ConflictGraph& g, int max_length);
std::optional<std::vector<int>> find_odd_antihole(const ConflictGraph& g, int max_length);

/// Strong Perfect Graph Theorem check: no odd hole, no odd antihole.
bool is_perfect(const ConflictGraph& g, int limit = kDefaultPerfectionLimit);

/// Some vertex subset of g induces a graph isomorphic to `pattern` (|pattern| <= 12).
bool contains_induced(const ConflictGraph& g, const ConflictGraph& pattern);
/// Witness embedding: result[p] is the g-vertex playing pattern vertex p.
std::optional<std::vector<int>> find_induced(const ConflictGraph& g, const ConflictGraph& pattern);

ConflictGraph mycielskian(const ConflictGraph& g);

ConflictGraph cycle_graph(int n);
ConflictGraph complete_graph(int n);
ConflictGraph path_graph(int n);
/// One edge plus an isolated vertex.
ConflictGraph co_p3();
ConflictGraph grotzsch_graph();

/// Edge-list text: first line "n m", then m lines "u v" (0-indexed).
ConflictGraph parse_edge_list(std::string_view text);
std::string serialize_edge_list(const ConflictGraph& g);
ConflictGraph load_edge_list(const std::string& path);

}  // namespace ncswitch
