#include "ncswitch/lp.hpp"

#include "ncswitch/error.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace ncswitch {

int matrix_rank(RationalMatrix m) {
    if (m.empty()) return 0;
    const std::size_t rows = m.size();
    const std::size_t cols = m[0].size();
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t pivot = rank;
        while (pivot < rows && m[pivot][col].is_zero()) ++pivot;
        if (pivot == rows) continue;
        std::swap(m[pivot], m[rank]);
        for (std::size_t r = rank + 1; r < rows; ++r) {
            if (m[r][col].is_zero()) continue;
            const Rational f = m[r][col] / m[rank][col];
            for (std::size_t c = col; c < cols; ++c) m[r][c] -= f * m[rank][c];
        }
        ++rank;
    }
    return static_cast<int>(rank);
}

std::optional<std::vector<Rational>> solve_square(RationalMatrix a, std::vector<Rational> b) {
    const std::size_t n = a.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && a[pivot][col].is_zero()) ++pivot;
        if (pivot == n) return std::nullopt;
        std::swap(a[pivot], a[col]);
        std::swap(b[pivot], b[col]);
        const Rational inv = Rational(1) / a[col][col];
        for (std::size_t c = col; c < n; ++c) a[col][c] *= inv;
        b[col] *= inv;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col].is_zero()) continue;
            const Rational f = a[r][col];
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    return b;
}

namespace {

struct Tableau {
    RationalMatrix rows;  // m x (n + 1); last column is the right-hand side
    std::vector<Rational> reduced;  // n reduced costs
    Rational objective;
    std::vector<int> basis;

    [[nodiscard]] std::size_t width() const { return reduced.size(); }

    void pivot(std::size_t r, std::size_t col) {
        auto& prow = rows[r];
        const Rational inv = Rational(1) / prow[col];
        for (auto& v : prow)
            if (!v.is_zero()) v *= inv;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == r || rows[i][col].is_zero()) continue;
            const Rational f = rows[i][col];
            for (std::size_t c = 0; c < prow.size(); ++c)
                if (!prow[c].is_zero()) rows[i][c] -= f * prow[c];
        }
        if (!reduced[col].is_zero()) {
            const Rational f = reduced[col];
            for (std::size_t c = 0; c < width(); ++c)
                if (!prow[c].is_zero()) reduced[c] -= f * prow[c];
            objective += f * prow.back();
        }
        basis[r] = static_cast<int>(col);
    }

    // Bland's rule. Returns false when unbounded.
    bool optimize(const std::vector<bool>& allowed) {
        for (;;) {
            std::size_t entering = width();
            for (std::size_t j = 0; j < width(); ++j) {
                if (allowed[j] && reduced[j].sign() < 0) {
                    entering = j;
                    break;
                }
            }
            if (entering == width()) return true;
            std::size_t leaving = rows.size();
            Rational best;
            for (std::size_t i = 0; i < rows.size(); ++i) {
                if (rows[i][entering].sign() <= 0) continue;
                const Rational ratio = rows[i].back() / rows[i][entering];
                if (leaving == rows.size() || ratio < best ||
                    (ratio == best && basis[i] < basis[leaving])) {
                    leaving = i;
                    best = ratio;
                }
            }
            if (leaving == rows.size()) return false;
            pivot(leaving, entering);
        }
    }

    void price(const std::vector<Rational>& c) {
        reduced = c;
        objective = Rational(0);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const Rational& cb = c[static_cast<std::size_t>(basis[i])];
            if (cb.is_zero()) continue;
            for (std::size_t j = 0; j < width(); ++j)
                if (!rows[i][j].is_zero()) reduced[j] -= cb * rows[i][j];
            objective += cb * rows[i].back();
        }
    }

    [[nodiscard]] std::vector<Rational> primal() const {
        std::vector<Rational> x(width());
        for (std::size_t i = 0; i < rows.size(); ++i) x[static_cast<std::size_t>(basis[i])] = rows[i].back();
        return x;
    }
};

void check_shape(const RationalMatrix& a, const std::vector<Rational>& b, const std::vector<Rational>& c) {
    if (a.size() != b.size()) throw Error(ErrorCode::LengthMismatch, "LP: row count differs from rhs length");
    for (const auto& row : a)
        if (row.size() != c.size()) throw Error(ErrorCode::LengthMismatch, "LP: row width differs from cost length");
}

}  // namespace

std::optional<LpSolution> simplex_from_basis(const RationalMatrix& a, const std::vector<Rational>& b,
                                             const std::vector<Rational>& c, std::vector<int> basis) {
    check_shape(a, b, c);
    if (basis.size() != a.size()) throw Error(ErrorCode::LengthMismatch, "LP: basis size differs from row count");
    Tableau t;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (b[i].sign() < 0) throw Error(ErrorCode::InvalidArgument, "LP: starting basis is infeasible");
        t.rows.push_back(a[i]);
        t.rows.back().push_back(b[i]);
    }
    t.basis = std::move(basis);
    t.price(c);
    if (!t.optimize(std::vector<bool>(c.size(), true))) return std::nullopt;
    return LpSolution{t.objective, t.primal()};
}

std::optional<LpSolution> simplex_two_phase(const RationalMatrix& a, const std::vector<Rational>& b,
                                            const std::vector<Rational>& c) {
    check_shape(a, b, c);
    const std::size_t m = a.size();
    const std::size_t n = c.size();
    Tableau t;
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<Rational> row = a[i];
        Rational rhs = b[i];
        if (rhs.sign() < 0) {
            for (auto& v : row) v = -v;
            rhs = -rhs;
        }
        row.resize(n + m);
        row[n + i] = Rational(1);
        row.push_back(rhs);
        t.rows.push_back(std::move(row));
        t.basis.push_back(static_cast<int>(n + i));
    }
    std::vector<Rational> phase1(n + m);
    for (std::size_t i = n; i < n + m; ++i) phase1[i] = Rational(1);
    t.price(phase1);
    t.optimize(std::vector<bool>(n + m, true));
    if (!t.objective.is_zero()) return std::nullopt;

    // Drive artificial variables out of the basis; drop redundant rows.
    for (std::size_t i = 0; i < t.rows.size();) {
        if (static_cast<std::size_t>(t.basis[i]) < n) {
            ++i;
            continue;
        }
        std::size_t col = n;
        for (std::size_t j = 0; j < n; ++j)
            if (!t.rows[i][j].is_zero()) {
                col = j;
                break;
            }
        if (col == n) {
            t.rows.erase(t.rows.begin() + static_cast<std::ptrdiff_t>(i));
            t.basis.erase(t.basis.begin() + static_cast<std::ptrdiff_t>(i));
            continue;
        }
        t.pivot(i, col);
        ++i;
    }
    std::vector<Rational> cost = c;
    cost.resize(n + m);
    std::vector<bool> allowed(n + m, false);
    std::fill(allowed.begin(), allowed.begin() + static_cast<std::ptrdiff_t>(n), true);
    t.price(cost);
    if (!t.optimize(allowed)) return std::nullopt;
    auto x = t.primal();
    x.resize(n);
    return LpSolution{t.objective, x};
}

namespace {

using Wide = __int128;

struct Ray {
    std::vector<std::int64_t> y;      // homogeneous coordinates (x, t)
    std::vector<std::uint64_t> zero;  // bitset of tight constraints processed so far
};

bool covers(const std::vector<std::uint64_t>& big, const std::vector<std::uint64_t>& small) {
    for (std::size_t w = 0; w < big.size(); ++w)
        if ((small[w] & ~big[w]) != 0) return false;
    return true;
}

int popcount(const std::vector<std::uint64_t>& s) {
    int total = 0;
    for (auto w : s) total += std::popcount(w);
    return total;
}

std::int64_t narrow(Wide v) {
    if (v > static_cast<Wide>(INT64_MAX) || v < static_cast<Wide>(INT64_MIN)) {
        throw Error(ErrorCode::LimitExceeded, "vertex enumeration: coordinate overflow");
    }
    return static_cast<std::int64_t>(v);
}

}  // namespace

std::vector<std::vector<Rational>> enumerate_vertices(const std::vector<std::vector<std::int64_t>>& a,
                                                      const std::vector<std::int64_t>& b) {
    if (a.size() != b.size()) throw Error(ErrorCode::LengthMismatch, "vertex enumeration: rhs length");
    const std::size_t d = a.empty() ? 0 : a[0].size();
    const std::size_t dim = d + 1;  // homogeneous coordinate t is last
    const std::size_t constraints = dim + a.size();
    const std::size_t words = (constraints + 63) / 64;

    auto set_bit = [](std::vector<std::uint64_t>& s, std::size_t k) { s[k / 64] |= std::uint64_t{1} << (k % 64); };

    std::vector<Ray> rays;
    for (std::size_t k = 0; k < dim; ++k) {
        Ray r{std::vector<std::int64_t>(dim, 0), std::vector<std::uint64_t>(words, 0)};
        r.y[k] = 1;
        for (std::size_t j = 0; j < dim; ++j)
            if (j != k) set_bit(r.zero, j);
        rays.push_back(std::move(r));
    }

    for (std::size_t row = 0; row < a.size(); ++row) {
        if (a[row].size() != d) throw Error(ErrorCode::LengthMismatch, "vertex enumeration: ragged matrix");
        const std::size_t index = dim + row;
        // slack g(y) = b t - a.x >= 0
        std::vector<Wide> slack(rays.size());
        for (std::size_t r = 0; r < rays.size(); ++r) {
            Wide g = static_cast<Wide>(b[row]) * rays[r].y[d];
            for (std::size_t j = 0; j < d; ++j) g -= static_cast<Wide>(a[row][j]) * rays[r].y[j];
            slack[r] = g;
        }
        std::vector<Ray> next;
        std::vector<std::size_t> positive;
        std::vector<std::size_t> negative;
        for (std::size_t r = 0; r < rays.size(); ++r) {
            if (slack[r] > 0) positive.push_back(r);
            if (slack[r] < 0) negative.push_back(r);
        }
        for (std::size_t r = 0; r < rays.size(); ++r) {
            if (slack[r] < 0) continue;
            Ray kept = rays[r];
            if (slack[r] == 0) set_bit(kept.zero, index);
            next.push_back(std::move(kept));
        }
        for (std::size_t p : positive) {
            for (std::size_t q : negative) {
                std::vector<std::uint64_t> common(words);
                for (std::size_t w = 0; w < words; ++w) common[w] = rays[p].zero[w] & rays[q].zero[w];
                if (popcount(common) + 2 < static_cast<int>(dim)) continue;
                bool adjacent = true;
                for (std::size_t r = 0; r < rays.size() && adjacent; ++r) {
                    if (r == p || r == q) continue;
                    if (covers(rays[r].zero, common)) adjacent = false;
                }
                if (!adjacent) continue;
                Ray fresh{std::vector<std::int64_t>(dim), common};
                std::int64_t g = 0;
                for (std::size_t j = 0; j < dim; ++j) {
                    const Wide v = slack[p] * static_cast<Wide>(rays[q].y[j]) - slack[q] * static_cast<Wide>(rays[p].y[j]);
                    fresh.y[j] = narrow(v);
                    g = std::gcd(g, fresh.y[j]);
                }
                if (g > 1)
                    for (auto& v : fresh.y) v /= g;
                set_bit(fresh.zero, index);
                next.push_back(std::move(fresh));
            }
        }
        rays = std::move(next);
    }

    std::vector<std::vector<Rational>> vertices;
    for (const Ray& r : rays) {
        if (r.y[d] == 0) throw Error(ErrorCode::InvalidArgument, "vertex enumeration: region is unbounded");
        std::vector<Rational> x;
        for (std::size_t j = 0; j < d; ++j) x.emplace_back(r.y[j], r.y[d]);
        vertices.push_back(std::move(x));
    }
    std::sort(vertices.begin(), vertices.end());
    vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
    return vertices;
}

}  // namespace ncswitch
