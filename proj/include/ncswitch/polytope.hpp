#pragma once

#include "ncswitch/graph.hpp"
#include "ncswitch/rational.hpp"
#include "ncswitch/traffic.hpp"

#include <optional>
#include <vector>

namespace ncswitch {

using WeightVector = std::vector<Rational>;

struct DecompositionTerm {
    Rational coefficient;
    VertexSet set = 0;
};

/// Weighted stable sets; total = sum of coefficients.
struct StableSetDecomposition {
    std::vector<DecompositionTerm> terms;
    Rational total;

    /// Sum of coefficient * indicator over the terms.
    [[nodiscard]] WeightVector coverage(int num_vertices) const;
};

struct QstabResult {
    bool member = true;
    std::optional<VertexSet> violated;  // a clique with the largest weight, when > 1
    Rational violation;                 // that clique's weight
};

/// Clique inequalities over all maximal cliques.
QstabResult qstab_membership(const ConflictGraph& g, const WeightVector& w);

struct ChromaticResult {
    Rational value;
    StableSetDecomposition decomposition;  // covers w exactly
};

/// Weighted fractional chromatic number by exact LP over maximal stable sets.
ChromaticResult fractional_chromatic(const ConflictGraph& g, const WeightVector& w,
                                     int limit = kDefaultEnumerationLimit);
/// Same, reusing a precomputed list of maximal stable sets.
ChromaticResult fractional_chromatic(const ConflictGraph& g, const WeightVector& w,
                                     const std::vector<VertexSet>& stable_sets);

/// Shrinks members of an over-covering decomposition until it covers w exactly.
/// Subsets of stable sets stay stable, and the total is unchanged.
StableSetDecomposition trim_decomposition(const StableSetDecomposition& d, const WeightVector& w);

/// True iff every term is a stable set of g and the coverage is >= w (== w when `exact`).
bool verify_decomposition(const ConflictGraph& g, const WeightVector& w, const StableSetDecomposition& d,
                          bool exact);

struct StabResult {
    bool member = false;
    Rational chi_f;
    std::optional<StableSetDecomposition> decomposition;
};

StabResult stab_membership(const ConflictGraph& g, const WeightVector& w);

struct SpeedupReport {
    Rational value;
    StableSetDecomposition witness;
    std::vector<Rational> rates;  // flow rates at which the value is attained
};

/// Minimum speedup for this rate vector: chi_f of e(r) on the enhanced conflict graph.
SpeedupReport speedup_for_rate(const TrafficPattern& tp);

inline constexpr int kMaxSpeedupFlows = 10;
/// Largest speedup_for_rate over the admissible region of the pattern's shape (rates ignored).
SpeedupReport min_speedup_exact(const TrafficPattern& shape);

inline constexpr int kMaxImperfectionVertices = 14;
struct ImperfectionReport {
    Rational value;
    WeightVector worst_point;  // a QSTAB vertex attaining the value
    std::size_t qstab_vertices = 0;
};
ImperfectionReport imperfection_ratio(const ConflictGraph& g);

/// Vertices of QSTAB(g), lexicographically sorted.
std::vector<WeightVector> qstab_vertices(const ConflictGraph& g);

/// p / q for a family of p induced perfect subgraphs covering every vertex exactly q times.
Rational perfect_cover_bound(const ConflictGraph& g, const std::vector<VertexSet>& family);

/// Vertex u_ij / b_ij of the unicast+broadcast graph built from unicast_broadcast_pattern(K, N).
int unicast_vertex(const ConflictGraph& gkn, int input, int output);
int broadcast_vertex(const ConflictGraph& gkn, int num_outputs, int input, int output);

/// (K - 1) copies of the all-unicast subgraph plus, for each input i, all broadcasts with U_i.
std::vector<VertexSet> input_perfect_family(const ConflictGraph& gkn, int k, int n);
/// For each output i: U^o_i with all broadcasts, and B^o_i with all unicasts.
std::vector<VertexSet> output_perfect_family(const ConflictGraph& gkn, int k, int n);

/// Conditions of the exact fanout-splitting (no coding) region of benefit_pattern(N, r0, r).
bool fs_region_check(int n, const Rational& r0, const std::vector<Rational>& r);

/// Smallest s with special_rate_point(N) / s inside that region; equals 3/2 - 1/N.
Rational fs_min_scaling(int n);

/// Extreme point v(m, U, V) of QSTAB(G) for the 2 x N pattern of corner_point_pattern(N).
struct CornerPoint {
    int m = 0;
    std::vector<int> u;  // sorted, 2 <= |U| <= N - 1
    std::vector<int> v;  // sorted superset of U, m not in V
    WeightVector point;  // on the corner pattern's enhanced graph
    int tight_rank = 0;  // rank of the tight constraints (3N for an extreme point)
};

/// Enumerates every v(m, U, V) for 3 <= N <= 8 and checks extremality by the rank of its
/// tight constraints; throws Error(RankDeficient) if any point fails.
std::vector<CornerPoint> qstab_corner_points_2xN(int n);

/// The corner point itself, without extremality checks.
WeightVector corner_point(int n, int m, const std::vector<int>& u, const std::vector<int>& v);

/// Explicit decomposition of v(m, U, V) with total 1 + 1/|U| - 1/|U|^2, verified exact.
StableSetDecomposition cornerpoint_decomposition(int n, int m, const std::vector<int>& u, const std::vector<int>& v);

}  // namespace ncswitch
