#pragma once

// Brute-force reference implementations used only by tests.

#include "ncswitch/graph.hpp"
#include "ncswitch/traffic.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

using ncswitch::ConflictGraph;
using ncswitch::VertexSet;

inline bool is_clique(const ConflictGraph& g, VertexSet s) {
    for (int u = 0; u < g.size(); ++u)
        for (int v = u + 1; v < g.size(); ++v)
            if (ncswitch::contains(s, u) && ncswitch::contains(s, v) && !g.adjacent(u, v)) return false;
    return true;
}

inline int clique_number(const ConflictGraph& g) {
    int best = 0;
    for (VertexSet s = 0; s < (VertexSet{1} << g.size()); ++s)
        if (is_clique(g, s)) best = std::max(best, ncswitch::set_size(s));
    return best;
}

// Smallest k admitting a proper k-colouring, by exhaustive search.
inline int chromatic_number(const ConflictGraph& g) {
    const int n = g.size();
    if (n == 0) return 0;
    std::vector<int> colour(static_cast<std::size_t>(n), -1);
    for (int k = 1;; ++k) {
        std::function<bool(int)> go = [&](int v) {
            if (v == n) return true;
            for (int c = 0; c < k; ++c) {
                bool ok = true;
                for (int u = 0; u < v; ++u)
                    if (g.adjacent(u, v) && colour[static_cast<std::size_t>(u)] == c) ok = false;
                if (!ok) continue;
                colour[static_cast<std::size_t>(v)] = c;
                if (go(v + 1)) return true;
            }
            return false;
        };
        if (go(0)) return k;
    }
}

// Definition of perfection: chi = omega on every induced subgraph.
inline bool is_perfect_by_definition(const ConflictGraph& g) {
    for (VertexSet s = 1; s < (VertexSet{1} << g.size()); ++s) {
        const ConflictGraph h = g.induced(s);
        if (chromatic_number(h) != clique_number(h)) return false;
    }
    return true;
}

inline bool is_maximal_clique(const ConflictGraph& g, VertexSet s) {
    if (!is_clique(g, s)) return false;
    for (int v = 0; v < g.size(); ++v)
        if (!ncswitch::contains(s, v) && is_clique(g, s | ncswitch::singleton(v))) return false;
    return true;
}

// Can g be realised as an enhanced conflict graph? Each vertex gets an (input, flow, output)
// label; distinct vertices of one flow need distinct outputs.
inline bool realizable_as_enhanced_graph(const ConflictGraph& g) {
    const int n = g.size();
    struct Label {
        int input, flow, output;
    };
    std::vector<Label> lab(static_cast<std::size_t>(n));
    std::function<bool(int, int, int)> go = [&](int v, int inputs_used, int outputs_used) {
        if (v == n) return true;
        for (int i = 0; i <= inputs_used && i < n; ++i) {
            int flows_used = 0;
            for (int u = 0; u < v; ++u)
                if (lab[static_cast<std::size_t>(u)].input == i)
                    flows_used = std::max(flows_used, lab[static_cast<std::size_t>(u)].flow + 1);
            for (int f = 0; f <= flows_used; ++f) {
                for (int o = 0; o <= outputs_used && o < n; ++o) {
                    bool ok = true;
                    for (int u = 0; u < v && ok; ++u) {
                        const Label& a = lab[static_cast<std::size_t>(u)];
                        if (a.input == i && a.flow == f && a.output == o) ok = false;
                        const bool edge = a.output == o || (a.input == i && a.flow != f);
                        if (edge != g.adjacent(u, v)) ok = false;
                    }
                    if (!ok) continue;
                    lab[static_cast<std::size_t>(v)] = {i, f, o};
                    if (go(v + 1, std::max(inputs_used, i + 1), std::max(outputs_used, o + 1))) return true;
                }
            }
        }
        return false;
    };
    return go(0, 0, 0);
}

// Seeded random admissible pattern with up to max_k inputs and max_n outputs.
inline ncswitch::TrafficPattern random_pattern(std::mt19937_64& rng, int max_k, int max_n, int max_flows) {
    std::uniform_int_distribution<int> kd(1, max_k);
    std::uniform_int_distribution<int> nd(1, max_n);
    const int k = kd(rng);
    const int n = nd(rng);
    std::vector<ncswitch::Flow> flows;
    std::vector<ncswitch::FlowKey> seen;
    std::uniform_int_distribution<int> count(1, max_flows);
    const int target = count(rng);
    for (int t = 0; t < 4 * target && static_cast<int>(flows.size()) < target; ++t) {
        const int input = std::uniform_int_distribution<int>(1, k)(rng);
        std::vector<int> fanout;
        for (int j = 1; j <= n; ++j)
            if (rng() % 2 == 0) fanout.push_back(j);
        if (fanout.empty()) fanout.push_back(std::uniform_int_distribution<int>(1, n)(rng));
        ncswitch::FlowKey key{input, fanout};
        if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
        seen.push_back(key);
        flows.push_back({input, fanout, ncswitch::Rational(0)});
    }
    // Rates: random positive numerators scaled so the busiest port is exactly 1.
    std::vector<ncswitch::Rational> rates;
    for (std::size_t f = 0; f < flows.size(); ++f)
        rates.emplace_back(std::uniform_int_distribution<int>(1, 6)(rng), 1);
    ncswitch::TrafficPattern tp(k, n, flows);
    tp = tp.with_rates(rates);
    ncswitch::Rational busiest(0);
    for (const auto& load : ncswitch::port_loads(tp)) busiest = ncswitch::max(busiest, load);
    return tp.scaled(ncswitch::Rational(1) / busiest);
}

}  // namespace oracle

#include "ncswitch/lp.hpp"

namespace oracle {

// chi_f via the dual LP  max w.y  s.t.  y(S) <= 1 for every stable set S, y >= 0,
// over all stable sets found by brute force (small graphs only).
inline ncswitch::Rational fractional_chromatic_dual(const ConflictGraph& g, const std::vector<ncswitch::Rational>& w) {
    using ncswitch::Rational;
    const int n = g.size();
    std::vector<VertexSet> stable;
    for (VertexSet s = 1; s < (VertexSet{1} << n); ++s) {
        bool ok = true;
        for (int u = 0; u < n && ok; ++u)
            for (int v = u + 1; v < n && ok; ++v)
                if (ncswitch::contains(s, u) && ncswitch::contains(s, v) && g.adjacent(u, v)) ok = false;
        if (ok) stable.push_back(s);
    }
    const std::size_t cols = static_cast<std::size_t>(n) + stable.size();
    ncswitch::RationalMatrix a(stable.size(), std::vector<Rational>(cols));
    std::vector<Rational> b(stable.size(), Rational(1));
    std::vector<Rational> c(cols);
    for (std::size_t r = 0; r < stable.size(); ++r) {
        for (int v = 0; v < n; ++v)
            if (ncswitch::contains(stable[r], v)) a[r][static_cast<std::size_t>(v)] = Rational(1);
        a[r][static_cast<std::size_t>(n) + r] = Rational(1);
    }
    for (int v = 0; v < n; ++v) c[static_cast<std::size_t>(v)] = -w[static_cast<std::size_t>(v)];
    auto sol = ncswitch::simplex_two_phase(a, b, c);
    return -sol->objective;
}

// Vertices of { x >= 0 : A x <= b } by trying every d-subset of constraints as equalities.
inline std::vector<std::vector<ncswitch::Rational>> vertices_by_subsets(const std::vector<std::vector<std::int64_t>>& a,
                                                                        const std::vector<std::int64_t>& b) {
    using ncswitch::Rational;
    const std::size_t d = a[0].size();
    // rows: A then -I (x >= 0 as -x <= 0)
    std::vector<std::vector<Rational>> rows;
    std::vector<Rational> rhs;
    for (std::size_t i = 0; i < a.size(); ++i) {
        std::vector<Rational> row;
        for (auto x : a[i]) row.emplace_back(x);
        rows.push_back(row);
        rhs.emplace_back(b[i]);
    }
    for (std::size_t j = 0; j < d; ++j) {
        std::vector<Rational> row(d);
        row[j] = Rational(-1);
        rows.push_back(row);
        rhs.emplace_back(0);
    }
    std::vector<std::vector<Rational>> out;
    const std::size_t total = rows.size();
    std::vector<bool> pick(total, false);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(d), true);
    do {
        ncswitch::RationalMatrix m;
        std::vector<Rational> r;
        for (std::size_t i = 0; i < total; ++i)
            if (pick[i]) {
                m.push_back(rows[i]);
                r.push_back(rhs[i]);
            }
        auto x = ncswitch::solve_square(m, r);
        if (!x) continue;
        bool feasible = true;
        for (std::size_t i = 0; i < total && feasible; ++i) {
            Rational lhs(0);
            for (std::size_t j = 0; j < d; ++j) lhs += rows[i][j] * (*x)[j];
            if (lhs > rhs[i]) feasible = false;
        }
        if (feasible) out.push_back(*x);
    } while (std::prev_permutation(pick.begin(), pick.end()));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace oracle
