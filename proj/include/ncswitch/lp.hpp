#pragma once

#include "ncswitch/rational.hpp"

#include <optional>
#include <vector>

namespace ncswitch {

using RationalMatrix = std::vector<std::vector<Rational>>;

/// Rank by exact Gaussian elimination.
int matrix_rank(RationalMatrix m);

/// Unique solution of a square system, or nullopt when singular.
std::optional<std::vector<Rational>> solve_square(RationalMatrix a, std::vector<Rational> b);

struct LpSolution {
    Rational objective;
    std::vector<Rational> x;
};

/// min c.x  s.t.  A x = b, x >= 0, starting from a feasible basis (one column index per row
/// whose columns form the identity and b >= 0). Primal simplex with Bland's rule.
/// Returns nullopt if the LP is unbounded.
std::optional<LpSolution> simplex_from_basis(const RationalMatrix& a, const std::vector<Rational>& b,
                                             const std::vector<Rational>& c, std::vector<int> basis);

/// min c.x  s.t.  A x = b, x >= 0 by the two-phase method. nullopt if infeasible or unbounded.
std::optional<LpSolution> simplex_two_phase(const RationalMatrix& a, const std::vector<Rational>& b,
                                            const std::vector<Rational>& c);

/// Vertices of the bounded polyhedron { x >= 0 : A x <= b } by the double-description method,
/// in lexicographic order. A and b must be integral. Throws Error(InvalidArgument) if the
/// region is unbounded.
std::vector<std::vector<Rational>> enumerate_vertices(const std::vector<std::vector<std::int64_t>>& a,
                                                      const std::vector<std::int64_t>& b);

}  // namespace ncswitch
