#include "ncswitch/polytope.hpp"

#include "ncswitch/error.hpp"
#include "ncswitch/lp.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace ncswitch {

WeightVector StableSetDecomposition::coverage(int num_vertices) const {
    WeightVector cover(static_cast<std::size_t>(num_vertices));
    for (const auto& term : terms) {
        for_each_member(term.set, [&](int v) {
            if (v < num_vertices) cover[static_cast<std::size_t>(v)] += term.coefficient;
        });
    }
    return cover;
}

namespace {

void check_weights(const ConflictGraph& g, const WeightVector& w) {
    if (static_cast<int>(w.size()) != g.size()) {
        throw Error(ErrorCode::LengthMismatch, "weight vector has " + std::to_string(w.size()) +
                                                   " entries for a graph with " + std::to_string(g.size()) +
                                                   " vertices");
    }
    for (const Rational& x : w)
        if (x.sign() < 0) throw Error(ErrorCode::InvalidArgument, "weights must be nonnegative");
}

Rational set_weight(VertexSet s, const WeightVector& w) {
    Rational total(0);
    for_each_member(s, [&](int v) { total += w[static_cast<std::size_t>(v)]; });
    return total;
}

// Merge equal sets and order terms by their member lists.
StableSetDecomposition normalise(std::vector<DecompositionTerm> terms) {
    std::map<std::vector<int>, Rational> merged;
    for (const auto& t : terms) {
        if (t.coefficient.is_zero()) continue;
        merged[members(t.set)] += t.coefficient;
    }
    StableSetDecomposition out;
    out.total = Rational(0);
    for (const auto& [list, c] : merged) {
        out.terms.push_back({c, make_set(list)});
        out.total += c;
    }
    return out;
}

}  // namespace

QstabResult qstab_membership(const ConflictGraph& g, const WeightVector& w) {
    check_weights(g, w);
    QstabResult result;
    result.violation = Rational(0);
    for (VertexSet q : maximal_cliques(g)) {
        const Rational weight = set_weight(q, w);
        if (weight > Rational(1) && (!result.violated || weight > result.violation)) {
            result.member = false;
            result.violated = q;
            result.violation = weight;
        }
    }
    return result;
}

StableSetDecomposition trim_decomposition(const StableSetDecomposition& d, const WeightVector& w) {
    std::vector<DecompositionTerm> terms = d.terms;
    WeightVector cover = d.coverage(static_cast<int>(w.size()));
    for (std::size_t v = 0; v < w.size(); ++v) {
        Rational surplus = cover[v] - w[v];
        if (surplus.sign() < 0) throw Error(ErrorCode::InvalidArgument, "decomposition does not cover the weights");
        const int vi = static_cast<int>(v);
        for (std::size_t t = 0; t < terms.size() && surplus.sign() > 0; ++t) {
            if (!contains(terms[t].set, vi)) continue;
            if (terms[t].coefficient <= surplus) {
                surplus -= terms[t].coefficient;
                terms[t].set &= ~singleton(vi);
            } else {
                terms[t].coefficient -= surplus;
                terms.push_back({surplus, terms[t].set & ~singleton(vi)});
                surplus = Rational(0);
            }
        }
    }
    return normalise(std::move(terms));
}

bool verify_decomposition(const ConflictGraph& g, const WeightVector& w, const StableSetDecomposition& d,
                          bool exact) {
    Rational total(0);
    for (const auto& t : d.terms) {
        if (t.coefficient.sign() <= 0 || !g.is_stable(t.set) || (t.set & ~g.all()) != 0) return false;
        total += t.coefficient;
    }
    if (total != d.total) return false;
    const WeightVector cover = d.coverage(g.size());
    for (std::size_t v = 0; v < w.size(); ++v) {
        if (cover[v] < w[v]) return false;
        if (exact && cover[v] != w[v]) return false;
    }
    return true;
}

ChromaticResult fractional_chromatic(const ConflictGraph& g, const WeightVector& w,
                                     const std::vector<VertexSet>& stable_sets) {
    check_weights(g, w);
    // Only positive-weight vertices give constraints.
    std::vector<int> rows;
    VertexSet support = 0;
    for (int v = 0; v < g.size(); ++v) {
        if (w[static_cast<std::size_t>(v)].sign() > 0) {
            rows.push_back(v);
            support |= singleton(v);
        }
    }
    ChromaticResult result;
    result.value = Rational(0);
    if (rows.empty()) return result;

    std::vector<VertexSet> columns;
    for (VertexSet s : stable_sets)
        if ((s & support) != 0) columns.push_back(s & support);
    std::sort(columns.begin(), columns.end(), [](VertexSet a, VertexSet b) { return members(a) < members(b); });
    columns.erase(std::unique(columns.begin(), columns.end()), columns.end());
    const std::size_t sets = columns.size();
    for (int v : rows) columns.push_back(singleton(v));  // identity block: feasible start lambda_v = w_v

    const std::size_t m = rows.size();
    const std::size_t n = columns.size() + m;  // plus one surplus column per row
    RationalMatrix a(m, std::vector<Rational>(n));
    std::vector<Rational> b(m);
    std::vector<Rational> c(n);
    std::vector<int> basis(m);
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t col = 0; col < columns.size(); ++col)
            if (contains(columns[col], rows[r])) a[r][col] = Rational(1);
        a[r][columns.size() + r] = Rational(-1);
        b[r] = w[static_cast<std::size_t>(rows[r])];
        basis[r] = static_cast<int>(sets + r);
    }
    for (std::size_t col = 0; col < columns.size(); ++col) c[col] = Rational(1);

    auto solution = simplex_from_basis(a, b, c, basis);
    if (!solution) throw Error(ErrorCode::InvalidArgument, "covering LP reported unbounded");
    StableSetDecomposition raw;
    raw.total = Rational(0);
    for (std::size_t col = 0; col < columns.size(); ++col) {
        if (solution->x[col].sign() > 0) {
            raw.terms.push_back({solution->x[col], columns[col]});
            raw.total += solution->x[col];
        }
    }
    result.value = solution->objective;
    result.decomposition = trim_decomposition(raw, w);
    return result;
}

ChromaticResult fractional_chromatic(const ConflictGraph& g, const WeightVector& w, int limit) {
    return fractional_chromatic(g, w, maximal_stable_sets(g, limit));
}

StabResult stab_membership(const ConflictGraph& g, const WeightVector& w) {
    auto chi = fractional_chromatic(g, w);
    StabResult result;
    result.chi_f = chi.value;
    result.member = chi.value <= Rational(1);
    if (result.member) result.decomposition = std::move(chi.decomposition);
    return result;
}

SpeedupReport speedup_for_rate(const TrafficPattern& tp) {
    if (!is_admissible(tp)) throw Error(ErrorCode::Inadmissible, "speedup is only defined for admissible patterns");
    const ConflictGraph g = build_enhanced_conflict_graph(tp);
    auto chi = fractional_chromatic(g, enhanced_weights(tp));
    return {chi.value, std::move(chi.decomposition), flow_weights(tp)};
}

namespace {

// Admissible region { r >= 0 : port loads <= 1 } of the pattern's flow shape.
std::pair<std::vector<std::vector<std::int64_t>>, std::vector<std::int64_t>> admissible_region(
    const TrafficPattern& shape) {
    const auto& flows = shape.flows();
    std::vector<std::vector<std::int64_t>> a;
    std::vector<std::int64_t> b;
    for (int i = 1; i <= shape.num_inputs(); ++i) {
        std::vector<std::int64_t> row(flows.size());
        for (std::size_t f = 0; f < flows.size(); ++f) row[f] = flows[f].input == i ? 1 : 0;
        if (std::any_of(row.begin(), row.end(), [](auto x) { return x != 0; })) {
            a.push_back(row);
            b.push_back(1);
        }
    }
    for (int j = 1; j <= shape.num_outputs(); ++j) {
        std::vector<std::int64_t> row(flows.size());
        for (std::size_t f = 0; f < flows.size(); ++f)
            row[f] = std::binary_search(flows[f].fanout.begin(), flows[f].fanout.end(), j) ? 1 : 0;
        if (std::any_of(row.begin(), row.end(), [](auto x) { return x != 0; })) {
            a.push_back(row);
            b.push_back(1);
        }
    }
    return {a, b};
}

}  // namespace

SpeedupReport min_speedup_exact(const TrafficPattern& shape) {
    const int d = static_cast<int>(shape.size());
    if (d > kMaxSpeedupFlows) {
        throw Error(ErrorCode::LimitExceeded, "exact minimum speedup needs at most " +
                                                  std::to_string(kMaxSpeedupFlows) + " flows, pattern has " +
                                                  std::to_string(d));
    }
    const ConflictGraph g = build_enhanced_conflict_graph(shape);
    const auto stable = maximal_stable_sets(g);
    const auto [a, b] = admissible_region(shape);
    // chi_f(e(r)) is the optimum of a covering LP with right-hand side e(r), hence convex in r;
    // its maximum over the polytope is attained at a vertex.
    SpeedupReport best{Rational(0), {}, std::vector<Rational>(static_cast<std::size_t>(d))};
    for (const auto& rates : enumerate_vertices(a, b)) {
        const TrafficPattern tp = shape.with_rates(rates);
        auto chi = fractional_chromatic(g, enhanced_weights(tp), stable);
        if (chi.value > best.value) best = {chi.value, std::move(chi.decomposition), rates};
    }
    return best;
}

std::vector<WeightVector> qstab_vertices(const ConflictGraph& g) {
    std::vector<std::vector<std::int64_t>> a;
    std::vector<std::int64_t> b;
    for (VertexSet q : maximal_cliques(g)) {
        std::vector<std::int64_t> row(static_cast<std::size_t>(g.size()));
        for_each_member(q, [&](int v) { row[static_cast<std::size_t>(v)] = 1; });
        a.push_back(std::move(row));
        b.push_back(1);
    }
    if (g.size() == 0) return {WeightVector{}};
    return enumerate_vertices(a, b);
}

ImperfectionReport imperfection_ratio(const ConflictGraph& g) {
    if (g.size() > kMaxImperfectionVertices) {
        throw Error(ErrorCode::LimitExceeded, "imperfection ratio needs |V| <= " +
                                                  std::to_string(kMaxImperfectionVertices) + ", graph has |V| = " +
                                                  std::to_string(g.size()));
    }
    ImperfectionReport report{Rational(1), WeightVector(static_cast<std::size_t>(g.size())), 0};
    const auto vertices = qstab_vertices(g);
    report.qstab_vertices = vertices.size();
    const auto stable = maximal_stable_sets(g);
    for (const auto& x : vertices) {
        // 0/1 vertices are stable sets, where chi_f <= 1.
        if (std::all_of(x.begin(), x.end(), [](const Rational& v) { return v.is_integer(); })) continue;
        const Rational value = fractional_chromatic(g, x, stable).value;
        if (value > report.value) {
            report.value = value;
            report.worst_point = x;
        }
    }
    return report;
}

Rational perfect_cover_bound(const ConflictGraph& g, const std::vector<VertexSet>& family) {
    if (family.empty()) throw Error(ErrorCode::InvalidArgument, "empty subgraph family");
    std::vector<int> count(static_cast<std::size_t>(g.size()), 0);
    for (std::size_t k = 0; k < family.size(); ++k) {
        if (!is_perfect(g.induced(family[k]))) {
            throw Error(ErrorCode::NonPerfectMember, "family member " + std::to_string(k) + " is not perfect");
        }
        for_each_member(family[k] & g.all(), [&](int v) { ++count[static_cast<std::size_t>(v)]; });
    }
    const int q = count.empty() ? 1 : count[0];
    for (std::size_t v = 0; v < count.size(); ++v) {
        if (count[v] != q) {
            throw Error(ErrorCode::UnevenCover, "vertex " + g.label_string(static_cast<int>(v)) + " covered " +
                                                    std::to_string(count[v]) + " times, expected " +
                                                    std::to_string(q));
        }
    }
    if (q == 0) throw Error(ErrorCode::UnevenCover, "family covers no vertex");
    return Rational(static_cast<std::int64_t>(family.size()), q);
}

namespace {

std::vector<int> outputs_up_to(int n) {
    std::vector<int> out(static_cast<std::size_t>(n));
    std::iota(out.begin(), out.end(), 1);
    return out;
}

int require_vertex(int v, const std::string& what) {
    if (v < 0) throw Error(ErrorCode::InvalidArgument, "graph has no vertex " + what);
    return v;
}

}  // namespace

int unicast_vertex(const ConflictGraph& gkn, int input, int output) {
    return require_vertex(gkn.find(SubflowId{input, {output}, output}),
                          "u" + std::to_string(input) + std::to_string(output));
}

int broadcast_vertex(const ConflictGraph& gkn, int num_outputs, int input, int output) {
    return require_vertex(gkn.find(SubflowId{input, outputs_up_to(num_outputs), output}),
                          "b" + std::to_string(input) + std::to_string(output));
}

std::vector<VertexSet> input_perfect_family(const ConflictGraph& gkn, int k, int n) {
    VertexSet unicasts = 0;
    VertexSet broadcasts = 0;
    for (int i = 1; i <= k; ++i)
        for (int j = 1; j <= n; ++j) {
            unicasts |= singleton(unicast_vertex(gkn, i, j));
            broadcasts |= singleton(broadcast_vertex(gkn, n, i, j));
        }
    std::vector<VertexSet> family(static_cast<std::size_t>(k - 1), unicasts);
    for (int i = 1; i <= k; ++i) {
        VertexSet gi = broadcasts;
        for (int j = 1; j <= n; ++j) gi |= singleton(unicast_vertex(gkn, i, j));
        family.push_back(gi);
    }
    return family;
}

std::vector<VertexSet> output_perfect_family(const ConflictGraph& gkn, int k, int n) {
    VertexSet unicasts = 0;
    VertexSet broadcasts = 0;
    for (int i = 1; i <= k; ++i)
        for (int j = 1; j <= n; ++j) {
            unicasts |= singleton(unicast_vertex(gkn, i, j));
            broadcasts |= singleton(broadcast_vertex(gkn, n, i, j));
        }
    std::vector<VertexSet> family;
    for (int j = 1; j <= n; ++j) {
        VertexSet first = broadcasts;
        VertexSet second = unicasts;
        for (int i = 1; i <= k; ++i) {
            first |= singleton(unicast_vertex(gkn, i, j));
            second |= singleton(broadcast_vertex(gkn, n, i, j));
        }
        family.push_back(first);
        family.push_back(second);
    }
    return family;
}

namespace {

// Each constraint of the benefit pattern's fanout-splitting region as (lhs, rhs) with rhs > 0.
std::vector<std::pair<Rational, Rational>> fs_constraints(const Rational& r0, const std::vector<Rational>& r) {
    std::vector<std::pair<Rational, Rational>> out;
    Rational unicast_sum(0);
    for (const Rational& x : r) unicast_sum += x;
    out.emplace_back(unicast_sum, Rational(1));
    for (const Rational& x : r) out.emplace_back(r0 + x, Rational(1));
    out.emplace_back(Rational(2) * r0 + unicast_sum, Rational(2));
    return out;
}

}  // namespace

bool fs_region_check(int n, const Rational& r0, const std::vector<Rational>& r) {
    if (static_cast<int>(r.size()) != n) throw Error(ErrorCode::LengthMismatch, "need N unicast rates");
    if (r0.sign() < 0) return false;
    for (const Rational& x : r)
        if (x.sign() < 0) return false;
    for (const auto& [lhs, rhs] : fs_constraints(r0, r))
        if (lhs > rhs) return false;
    return true;
}

Rational fs_min_scaling(int n) {
    const TrafficPattern point = special_rate_point(n);
    const Rational r0 = point.flows()[0].rate;
    std::vector<Rational> r;
    for (std::size_t f = 1; f < point.size(); ++f) r.push_back(point.flows()[f].rate);
    // All constraints are homogeneous in the rates, so point / s fits iff s >= lhs / rhs for each.
    Rational s(0);
    for (const auto& [lhs, rhs] : fs_constraints(r0, r)) s = max(s, lhs / rhs);
    return s;
}

namespace {

void check_corner_args(int n, int m, const std::vector<int>& u, const std::vector<int>& v) {
    auto inside = [n](int j) { return j >= 1 && j <= n; };
    const bool ok = n >= 3 && inside(m) && u.size() >= 2 && static_cast<int>(u.size()) <= n - 1 &&
                    std::is_sorted(u.begin(), u.end()) && std::is_sorted(v.begin(), v.end()) &&
                    std::all_of(u.begin(), u.end(), inside) && std::all_of(v.begin(), v.end(), inside) &&
                    std::adjacent_find(u.begin(), u.end()) == u.end() &&
                    std::adjacent_find(v.begin(), v.end()) == v.end() &&
                    !std::binary_search(u.begin(), u.end(), m) && std::includes(v.begin(), v.end(), u.begin(), u.end());
    if (!ok) throw Error(ErrorCode::InvalidArgument, "corner point needs 2 <= |U| <= N-1, m outside U, V containing U");
}

}  // namespace

WeightVector corner_point(int n, int m, const std::vector<int>& u, const std::vector<int>& v) {
    check_corner_args(n, m, u, v);
    const ConflictGraph g = build_enhanced_conflict_graph(corner_point_pattern(n, Rational(0)));
    const Rational inv(1, static_cast<std::int64_t>(u.size()));
    WeightVector x(static_cast<std::size_t>(g.size()));
    x[static_cast<std::size_t>(unicast_vertex(g, 1, m))] = inv;
    for (int j : v) x[static_cast<std::size_t>(broadcast_vertex(g, n, 1, j))] = Rational(1) - inv;
    for (int j : u) x[static_cast<std::size_t>(unicast_vertex(g, 2, j))] = inv;
    return x;
}

std::vector<CornerPoint> qstab_corner_points_2xN(int n) {
    if (n < 3 || n > 8) throw Error(ErrorCode::InvalidArgument, "corner points are enumerated for 3 <= N <= 8");
    const ConflictGraph g = build_enhanced_conflict_graph(corner_point_pattern(n, Rational(0)));
    const auto cliques = maximal_cliques(g);
    const int dim = g.size();
    std::vector<CornerPoint> out;
    for (unsigned umask = 0; umask < (1U << n); ++umask) {
        const int usize = std::popcount(umask);
        if (usize < 2 || usize > n - 1) continue;
        std::vector<int> u;
        for (int j = 1; j <= n; ++j)
            if (umask & (1U << (j - 1))) u.push_back(j);
        for (int m = 1; m <= n; ++m) {
            if (umask & (1U << (m - 1))) continue;
            for (unsigned vmask = 0; vmask < (1U << n); ++vmask) {
                if ((vmask & umask) != umask) continue;
                std::vector<int> v;
                for (int j = 1; j <= n; ++j)
                    if (vmask & (1U << (j - 1))) v.push_back(j);
                CornerPoint cp{m, u, v, corner_point(n, m, u, v), 0};
                RationalMatrix tight;
                for (int k = 0; k < dim; ++k) {
                    if (cp.point[static_cast<std::size_t>(k)].is_zero()) {
                        std::vector<Rational> row(static_cast<std::size_t>(dim));
                        row[static_cast<std::size_t>(k)] = Rational(1);
                        tight.push_back(std::move(row));
                    }
                }
                for (VertexSet q : cliques) {
                    const Rational load = set_weight(q, cp.point);
                    if (load > Rational(1)) {
                        throw Error(ErrorCode::RankDeficient, "corner point violates a clique inequality");
                    }
                    if (load == Rational(1)) {
                        std::vector<Rational> row(static_cast<std::size_t>(dim));
                        for_each_member(q, [&](int k) { row[static_cast<std::size_t>(k)] = Rational(1); });
                        tight.push_back(std::move(row));
                    }
                }
                cp.tight_rank = matrix_rank(tight);
                if (cp.tight_rank != dim) {
                    throw Error(ErrorCode::RankDeficient, "tight constraints at corner point have rank " +
                                                              std::to_string(cp.tight_rank) + " < " +
                                                              std::to_string(dim));
                }
                out.push_back(std::move(cp));
            }
        }
    }
    return out;
}

StableSetDecomposition cornerpoint_decomposition(int n, int m, const std::vector<int>& u, const std::vector<int>& v) {
    const WeightVector target = corner_point(n, m, u, v);
    const ConflictGraph g = build_enhanced_conflict_graph(corner_point_pattern(n, Rational(0)));
    const auto size = static_cast<std::int64_t>(u.size());
    const Rational first(1, size * size);
    const Rational rest = Rational(1, size) - first;
    std::vector<DecompositionTerm> terms;
    // one set per j in U: {u_1m, u_2j}
    for (int j : u)
        terms.push_back({first, singleton(unicast_vertex(g, 1, m)) | singleton(unicast_vertex(g, 2, j))});
    // one set per j in U: u_2j with every b_1k, k in V \ {j}
    for (int j : u) {
        VertexSet s = singleton(unicast_vertex(g, 2, j));
        for (int k : v)
            if (k != j) s |= singleton(broadcast_vertex(g, n, 1, k));
        terms.push_back({rest, s});
    }
    // b_1k for k in U; the remaining k in V \ U are already covered by the previous row
    VertexSet last = 0;
    for (int k : u) last |= singleton(broadcast_vertex(g, n, 1, k));
    terms.push_back({rest, last});

    StableSetDecomposition d = normalise(std::move(terms));
    if (!verify_decomposition(g, target, d, true) || d.total != Rational(1) + rest) {
        throw Error(ErrorCode::InvalidArgument, "corner point decomposition failed verification");
    }
    return d;
}

}  // namespace ncswitch
