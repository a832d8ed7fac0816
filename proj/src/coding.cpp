#include "ncswitch/coding.hpp"

#include "ncswitch/error.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <set>

namespace ncswitch {

namespace {

constexpr std::array<unsigned, 9> kPolynomials{0, 0x3, 0x7, 0xB, 0x13, 0x25, 0x43, 0x89, 0x11D};

}  // namespace

GaloisField::GaloisField(int m) : m_(m), poly_(kPolynomials[static_cast<std::size_t>(m)]) {
    const int order = (1 << m) - 1;
    unsigned x = 1;
    for (int i = 0; i < order; ++i) {
        exp_[static_cast<std::size_t>(i)] = static_cast<FieldElement>(x);
        log_[x] = i;
        x <<= 1;
        if (x & (1U << m)) x ^= poly_;
    }
    for (std::size_t i = static_cast<std::size_t>(order); i < exp_.size(); ++i)
        exp_[i] = exp_[i - static_cast<std::size_t>(order)];
}

const GaloisField& GaloisField::get(int m) {
    if (m < 1 || m > 8) throw Error(ErrorCode::InvalidArgument, "field degree must be in [1, 8]");
    static std::array<std::unique_ptr<GaloisField>, 9> cache;
    static std::once_flag once;
    std::call_once(once, [] {
        for (int d = 1; d <= 8; ++d) cache[static_cast<std::size_t>(d)].reset(new GaloisField(d));
    });
    return *cache[static_cast<std::size_t>(m)];
}

FieldElement GaloisField::inv(FieldElement a) const {
    if (a == 0) throw Error(ErrorCode::InvalidArgument, "zero has no inverse");
    const int order = size() - 1;
    return exp_[static_cast<std::size_t>((order - log_[a]) % order)];
}

FieldElement GaloisField::pow(FieldElement a, int e) const {
    if (e == 0) return 1;
    if (a == 0) return 0;
    const int order = size() - 1;
    const long long l = (static_cast<long long>(log_[a]) * e) % order;
    return exp_[static_cast<std::size_t>((l + order) % order)];
}

SparseVector to_sparse(const CoefficientVector& v) {
    SparseVector out;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] != 0) out.emplace_back(static_cast<int>(i), v[i]);
    return out;
}

CoefficientVector to_dense(const SparseVector& v, int length) {
    CoefficientVector out(static_cast<std::size_t>(length), 0);
    for (auto [c, x] : v) out.at(static_cast<std::size_t>(c)) = x;
    return out;
}

namespace {

// a + c * b
SparseVector axpy(const SparseVector& a, FieldElement c, const SparseVector& b, const GaloisField& f) {
    if (c == 0) return a;
    SparseVector out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
            out.push_back(a[i++]);
        } else if (i == a.size() || b[j].first < a[i].first) {
            out.emplace_back(b[j].first, f.mul(c, b[j].second));
            ++j;
        } else {
            const FieldElement v = GaloisField::add(a[i].second, f.mul(c, b[j].second));
            if (v != 0) out.emplace_back(a[i].first, v);
            ++i;
            ++j;
        }
    }
    return out;
}

FieldElement value_at(const SparseVector& v, int col) {
    auto it = std::lower_bound(v.begin(), v.end(), col, [](const auto& e, int c) { return e.first < c; });
    return (it != v.end() && it->first == col) ? it->second : 0;
}

}  // namespace

KnowledgeSpace::KnowledgeSpace(int ambient, int field_degree) : field_(&GaloisField::get(field_degree)) {
    if (ambient < 0) throw Error(ErrorCode::InvalidArgument, "negative ambient dimension");
    extend(ambient);
}

void KnowledgeSpace::extend(int ambient) {
    if (ambient < this->ambient()) throw Error(ErrorCode::InvalidArgument, "knowledge space cannot shrink");
    pivot_row_.resize(static_cast<std::size_t>(ambient), -1);
    col_rows_.resize(static_cast<std::size_t>(ambient));
    top_undecoded_ = ambient - 1;
}

void KnowledgeSpace::clear(int ambient) {
    rows_.clear();
    pure_.clear();
    pivot_row_.assign(static_cast<std::size_t>(ambient), -1);
    col_rows_.assign(static_cast<std::size_t>(ambient), {});
    decoded_ = 0;
    top_undecoded_ = ambient - 1;
}

void KnowledgeSpace::check_column(int col) const {
    if (col < 0 || col >= ambient()) {
        throw Error(ErrorCode::LengthMismatch, "coefficient index " + std::to_string(col) +
                                                   " outside ambient length " + std::to_string(ambient()));
    }
}

SparseVector KnowledgeSpace::reduce(SparseVector v) const {
    std::size_t i = 0;
    while (i < v.size()) {
        const int col = v[i].first;
        const int r = col < ambient() ? pivot_row_[static_cast<std::size_t>(col)] : -1;
        if (r < 0) {
            ++i;
            continue;
        }
        // pivots are normalised to 1, so adding v[i] * row cancels column col (characteristic 2)
        v = axpy(v, v[i].second, rows_[static_cast<std::size_t>(r)], *field_);
    }
    return v;
}

bool KnowledgeSpace::insert(const CoefficientVector& v) {
    if (static_cast<int>(v.size()) != ambient()) {
        throw Error(ErrorCode::LengthMismatch, "coefficient vector has length " + std::to_string(v.size()) +
                                                   ", knowledge space has " + std::to_string(ambient()));
    }
    return insert(to_sparse(v));
}

bool KnowledgeSpace::insert(SparseVector v) {
    for (auto [c, x] : v) check_column(c);
    v = reduce(std::move(v));
    if (v.empty()) return false;
    const FieldElement scale = field_->inv(v.front().second);
    for (auto& e : v) e.second = field_->mul(e.second, scale);
    const int p = v.front().first;

    std::vector<int> touched = std::move(col_rows_[static_cast<std::size_t>(p)]);
    col_rows_[static_cast<std::size_t>(p)].clear();
    for (int r : touched) {
        auto& row = rows_[static_cast<std::size_t>(r)];
        const FieldElement coef = value_at(row, p);
        if (coef == 0) continue;
        row = axpy(row, coef, v, *field_);
        for (std::size_t k = 1; k < v.size(); ++k) col_rows_[static_cast<std::size_t>(v[k].first)].push_back(r);
        if (row.size() == 1 && !pure_[static_cast<std::size_t>(r)]) {
            pure_[static_cast<std::size_t>(r)] = true;
            ++decoded_;
        }
    }
    const int id = static_cast<int>(rows_.size());
    pivot_row_[static_cast<std::size_t>(p)] = id;
    for (auto [c, x] : v) col_rows_[static_cast<std::size_t>(c)].push_back(id);
    pure_.push_back(v.size() == 1);
    if (v.size() == 1) ++decoded_;
    rows_.push_back(std::move(v));
    return true;
}

bool KnowledgeSpace::contains(const CoefficientVector& v) const {
    if (static_cast<int>(v.size()) != ambient()) throw Error(ErrorCode::LengthMismatch, "coefficient vector length");
    return reduce(to_sparse(v)).empty();
}

bool KnowledgeSpace::contains(const SparseVector& v) const { return reduce(v).empty(); }

bool KnowledgeSpace::is_decoded(int col) const {
    if (col < 0 || col >= ambient()) return false;
    const int r = pivot_row_[static_cast<std::size_t>(col)];
    return r >= 0 && pure_[static_cast<std::size_t>(r)];
}

int KnowledgeSpace::highest_undecoded() const {
    while (top_undecoded_ >= 0 && is_decoded(top_undecoded_)) --top_undecoded_;
    return top_undecoded_;
}

std::vector<SparseVector> KnowledgeSpace::basis() const {
    std::vector<SparseVector> out;
    out.reserve(rows_.size());
    for (int r : pivot_row_)
        if (r >= 0) out.push_back(rows_[static_cast<std::size_t>(r)]);
    return out;
}

std::vector<CoefficientVector> KnowledgeSpace::dense_basis() const {
    std::vector<CoefficientVector> out;
    for (const auto& row : basis()) out.push_back(to_dense(row, ambient()));
    return out;
}

SparseVector innovative_combination(const KnowledgeSpace& input, const std::vector<const KnowledgeSpace*>& receivers) {
    const GaloisField& f = input.field();
    // an input holding every packet has the unit vectors as its basis; skip copying it
    const bool full = input.decoded_count() == input.ambient();
    const auto basis = full ? std::vector<SparseVector>{} : input.basis();
    const std::size_t basis_size = full ? static_cast<std::size_t>(input.ambient()) : basis.size();
    auto basis_row = [&](std::size_t s) {
        return full ? SparseVector{{static_cast<int>(s), FieldElement{1}}} : basis[s];
    };
    // last[r]: largest basis index whose vector receiver r lacks; later basis vectors are all known to r
    std::vector<std::size_t> last(receivers.size());
    for (std::size_t r = 0; r < receivers.size(); ++r) {
        const KnowledgeSpace& space = *receivers[r];
        if (space.field().degree() != f.degree()) throw Error(ErrorCode::InvalidArgument, "field mismatch");
        bool found = false;
        if (full) {
            if (space.ambient() < input.ambient()) throw Error(ErrorCode::LengthMismatch, "receiver ambient length");
            const int top = std::min(space.highest_undecoded(), input.ambient() - 1);
            // columns beyond the input's ambient are irrelevant; any undecoded column at or below it counts
            for (int c = top; c >= 0 && !found; --c) {
                if (!space.is_decoded(c)) {
                    last[r] = static_cast<std::size_t>(c);
                    found = true;
                }
            }
        } else {
            for (std::size_t s = basis_size; s-- > 0;) {
                const bool known =
                    basis[s].size() == 1 ? space.is_decoded(basis[s][0].first) : space.contains(basis[s]);
                if (!known) {
                    last[r] = s;
                    found = true;
                    break;
                }
            }
        }
        if (!found) {
            throw Error(ErrorCode::ImpossibleReceiver,
                        "receiver " + std::to_string(r) + " already knows everything the input knows");
        }
    }
    std::vector<std::size_t> order(receivers.size());
    for (std::size_t r = 0; r < order.size(); ++r) order[r] = r;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return last[a] < last[b]; });

    SparseVector combination;
    for (std::size_t i = 0; i < order.size();) {
        const std::size_t t = last[order[i]];
        std::set<int> bad;
        for (; i < order.size() && last[order[i]] == t; ++i) {
            const KnowledgeSpace& space = *receivers[order[i]];
            const SparseVector rf = space.reduce(combination);
            const SparseVector rb = space.reduce(basis_row(t));  // nonzero by choice of t
            if (rf.empty()) {
                bad.insert(0);
                continue;
            }
            // rf + c * rb == 0 for at most one c
            const int p = rb.front().first;
            const FieldElement c = f.div(value_at(rf, p), rb.front().second);
            if (c != 0 && axpy(rf, c, rb, f).empty()) bad.insert(c);
        }
        int pick = 0;
        while (pick < f.size() && bad.count(pick) > 0) ++pick;
        if (pick == f.size()) {
            throw Error(ErrorCode::InvalidArgument, "field GF(" + std::to_string(f.size()) +
                                                        ") too small for this many receivers");
        }
        combination = axpy(combination, static_cast<FieldElement>(pick), basis_row(t), f);
    }
    return combination;
}

CoefficientVector innovative_combination(const KnowledgeSpace& input, const std::vector<KnowledgeSpace>& receivers) {
    std::vector<const KnowledgeSpace*> pointers;
    for (const auto& r : receivers) {
        if (r.ambient() != input.ambient()) throw Error(ErrorCode::LengthMismatch, "receiver ambient length differs");
        pointers.push_back(&r);
    }
    return to_dense(innovative_combination(input, pointers), input.ambient());
}

UncoveredResult exists_uncovered_vector(int n, const std::vector<KnowledgeSpace>& subspaces) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "ambient dimension must be positive");
    if (subspaces.empty()) return {true, false};
    const GaloisField& f = subspaces.front().field();
    for (const auto& s : subspaces) {
        if (s.ambient() != n) throw Error(ErrorCode::LengthMismatch, "subspace ambient length differs from n");
        if (s.dimension() >= n) throw Error(ErrorCode::InvalidArgument, "subspaces must be proper");
        if (s.field().degree() != f.degree()) throw Error(ErrorCode::InvalidArgument, "field mismatch");
    }
    const double space_size = std::pow(static_cast<double>(f.size()), n);
    if (space_size <= static_cast<double>(1 << 20)) {
        CoefficientVector v(static_cast<std::size_t>(n), 0);
        for (;;) {
            // next vector in GF(q)^n, little-endian counter
            std::size_t k = 0;
            while (k < v.size()) {
                v[k] = static_cast<FieldElement>((v[k] + 1) % f.size());
                if (v[k] != 0) break;
                ++k;
            }
            if (k == v.size()) break;
            if (std::none_of(subspaces.begin(), subspaces.end(), [&](const auto& s) { return s.contains(v); })) {
                return {true, true};
            }
        }
        return {false, true};
    }
    // counting argument: k proper subspaces hold at most k q^(n-1) < q^n vectors when q > k
    return {static_cast<int>(subspaces.size()) < f.size(), false};
}

namespace {

using FieldMatrix = std::vector<std::vector<FieldElement>>;

FieldMatrix invert(FieldMatrix m, const GaloisField& f) {
    const std::size_t n = m.size();
    FieldMatrix inv(n, std::vector<FieldElement>(n, 0));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && m[pivot][col] == 0) ++pivot;
        if (pivot == n) throw Error(ErrorCode::RankDeficient, "singular matrix over GF(2^m)");
        std::swap(m[pivot], m[col]);
        std::swap(inv[pivot], inv[col]);
        const FieldElement s = f.inv(m[col][col]);
        for (std::size_t c = 0; c < n; ++c) {
            m[col][c] = f.mul(m[col][c], s);
            inv[col][c] = f.mul(inv[col][c], s);
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || m[r][col] == 0) continue;
            const FieldElement g = m[r][col];
            for (std::size_t c = 0; c < n; ++c) {
                m[r][c] ^= f.mul(g, m[col][c]);
                inv[r][c] ^= f.mul(g, inv[col][c]);
            }
        }
    }
    return inv;
}

constexpr int kNarrowLimit = 256;
constexpr int kWideLimit = 65535;

void check_code(int k, int n, int limit) {
    if (k < 1 || n < k || n > limit) {
        throw Error(ErrorCode::InvalidArgument, "MDS code needs 1 <= k <= n <= " + std::to_string(limit));
    }
}

// GF(2^16) for codes longer than GF(2^8) has points for.
class WideField {
public:
    static const WideField& get() {
        static const WideField field;
        return field;
    }
    [[nodiscard]] std::uint16_t mul(std::uint16_t a, std::uint16_t b) const {
        if (a == 0 || b == 0) return 0;
        return exp_[static_cast<std::size_t>(log_[a]) + log_[b]];
    }
    [[nodiscard]] std::uint16_t inv(std::uint16_t a) const {
        if (a == 0) throw Error(ErrorCode::InvalidArgument, "zero has no inverse");
        return exp_[static_cast<std::size_t>(kOrder - log_[a])];
    }

private:
    static constexpr std::uint32_t kPolynomial = 0x1100B;  // x^16 + x^12 + x^3 + x + 1, primitive
    static constexpr int kOrder = 65535;

    WideField() : exp_(2 * kOrder), log_(kOrder + 1, 0) {
        std::uint32_t x = 1;
        for (int i = 0; i < kOrder; ++i) {
            exp_[static_cast<std::size_t>(i)] = static_cast<std::uint16_t>(x);
            log_[x] = i;
            x <<= 1;
            if (x & 0x10000U) x ^= kPolynomial;
        }
        for (int i = kOrder; i < 2 * kOrder; ++i) exp_[static_cast<std::size_t>(i)] = exp_[static_cast<std::size_t>(i - kOrder)];
    }

    std::vector<std::uint16_t> exp_;
    std::vector<int> log_;
};

std::vector<Packet> wide_encode(const std::vector<Packet>& data, int n) {
    const WideField& f = WideField::get();
    const std::size_t len = data.front().size();
    std::vector<Packet> out;
    out.reserve(static_cast<std::size_t>(n));
    std::vector<std::uint16_t> acc(len);
    for (int j = 0; j < n; ++j) {
        // Horner: sum_i d_i x^i at x = j
        std::fill(acc.begin(), acc.end(), 0);
        for (std::size_t i = data.size(); i-- > 0;)
            for (std::size_t b = 0; b < len; ++b) acc[b] = f.mul(acc[b], static_cast<std::uint16_t>(j)) ^ data[i][b];
        Packet sym(2 * len);
        for (std::size_t b = 0; b < len; ++b) {
            sym[2 * b] = static_cast<std::uint8_t>(acc[b] >> 8);
            sym[2 * b + 1] = static_cast<std::uint8_t>(acc[b] & 0xFF);
        }
        out.push_back(std::move(sym));
    }
    return out;
}

std::vector<Packet> wide_decode(const std::vector<std::pair<int, Packet>>& symbols, int k) {
    const WideField& f = WideField::get();
    const std::size_t len = symbols.front().second.size() / 2;
    const auto kk = static_cast<std::size_t>(k);
    // rows: [x^0 .. x^(k-1) | symbol words], eliminated in place
    std::vector<std::vector<std::uint16_t>> m(kk, std::vector<std::uint16_t>(kk + len));
    for (std::size_t r = 0; r < kk; ++r) {
        const auto x = static_cast<std::uint16_t>(symbols[r].first);
        std::uint16_t power = 1;
        for (std::size_t i = 0; i < kk; ++i) {
            m[r][i] = power;
            power = f.mul(power, x);
        }
        const Packet& sym = symbols[r].second;
        for (std::size_t b = 0; b < len; ++b) {
            m[r][kk + b] = static_cast<std::uint16_t>((sym[2 * b] << 8) | sym[2 * b + 1]);
        }
    }
    for (std::size_t col = 0; col < kk; ++col) {
        std::size_t pivot = col;
        while (pivot < kk && m[pivot][col] == 0) ++pivot;
        if (pivot == kk) throw Error(ErrorCode::RankDeficient, "singular Vandermonde system");
        std::swap(m[pivot], m[col]);
        const std::uint16_t s = f.inv(m[col][col]);
        for (auto& e : m[col]) e = f.mul(e, s);
        for (std::size_t r = 0; r < kk; ++r) {
            if (r == col || m[r][col] == 0) continue;
            const std::uint16_t g = m[r][col];
            for (std::size_t c = col; c < kk + len; ++c) m[r][c] ^= f.mul(g, m[col][c]);
        }
    }
    std::vector<Packet> data(kk, Packet(len));
    for (std::size_t i = 0; i < kk; ++i)
        for (std::size_t b = 0; b < len; ++b) {
            const std::uint16_t v = m[i][kk + b];
            if (v > 0xFF) throw Error(ErrorCode::InvalidArgument, "symbols do not come from byte data");
            data[i][b] = static_cast<std::uint8_t>(v);
        }
    return data;
}

}  // namespace

std::vector<std::vector<FieldElement>> mds_generator(int k, int n) {
    check_code(k, n, kNarrowLimit);
    const GaloisField& f = GaloisField::get(8);
    FieldMatrix v(static_cast<std::size_t>(k), std::vector<FieldElement>(static_cast<std::size_t>(n)));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < n; ++j) v[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = f.pow(static_cast<FieldElement>(j), i);
    FieldMatrix head(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) head[static_cast<std::size_t>(i)].assign(v[static_cast<std::size_t>(i)].begin(), v[static_cast<std::size_t>(i)].begin() + k);
    const FieldMatrix hinv = invert(head, f);
    FieldMatrix g(static_cast<std::size_t>(k), std::vector<FieldElement>(static_cast<std::size_t>(n), 0));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < n; ++j) {
            FieldElement acc = 0;
            for (int t = 0; t < k; ++t)
                acc ^= f.mul(hinv[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)], v[static_cast<std::size_t>(t)][static_cast<std::size_t>(j)]);
            g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = acc;
        }
    return g;
}

std::vector<Packet> mds_encode(const std::vector<Packet>& data, int n) {
    const int k = static_cast<int>(data.size());
    check_code(k, n, kWideLimit);
    const std::size_t len = data.front().size();
    for (const auto& p : data)
        if (p.size() != len) throw Error(ErrorCode::LengthMismatch, "packets must have equal length");
    if (n > kNarrowLimit) return wide_encode(data, n);
    const GaloisField& f = GaloisField::get(8);
    const auto g = mds_generator(k, n);
    std::vector<Packet> out(static_cast<std::size_t>(n), Packet(len, 0));
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < k; ++i) {
            const FieldElement c = g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            if (c == 0) continue;
            auto& dst = out[static_cast<std::size_t>(j)];
            const auto& src = data[static_cast<std::size_t>(i)];
            for (std::size_t b = 0; b < len; ++b) dst[b] ^= f.mul(c, src[b]);
        }
    return out;
}

std::vector<Packet> mds_decode(const std::vector<std::pair<int, Packet>>& symbols, int k, int n) {
    check_code(k, n, kWideLimit);
    if (static_cast<int>(symbols.size()) < k) {
        throw Error(ErrorCode::InsufficientSymbols, "need " + std::to_string(k) + " symbols, got " +
                                                        std::to_string(symbols.size()));
    }
    std::set<int> seen;
    for (const auto& [pos, sym] : symbols) {
        if (pos < 0 || pos >= n) throw Error(ErrorCode::InvalidArgument, "symbol position out of range");
        if (!seen.insert(pos).second) throw Error(ErrorCode::RepeatedPosition, "position " + std::to_string(pos) + " repeated");
        if (sym.size() != symbols.front().second.size()) throw Error(ErrorCode::LengthMismatch, "symbol lengths differ");
    }
    if (n > kNarrowLimit) {
        if (symbols.front().second.size() % 2 != 0) throw Error(ErrorCode::LengthMismatch, "wide symbols have even length");
        return wide_decode({symbols.begin(), symbols.begin() + k}, k);
    }
    const GaloisField& f = GaloisField::get(8);
    const auto g = mds_generator(k, n);
    FieldMatrix m(static_cast<std::size_t>(k), std::vector<FieldElement>(static_cast<std::size_t>(k)));
    for (int r = 0; r < k; ++r)
        for (int i = 0; i < k; ++i)
            m[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)] =
                g[static_cast<std::size_t>(i)][static_cast<std::size_t>(symbols[static_cast<std::size_t>(r)].first)];
    const FieldMatrix minv = invert(m, f);
    const std::size_t len = symbols.front().second.size();
    std::vector<Packet> data(static_cast<std::size_t>(k), Packet(len, 0));
    for (int i = 0; i < k; ++i)
        for (int r = 0; r < k; ++r) {
            const FieldElement c = minv[static_cast<std::size_t>(i)][static_cast<std::size_t>(r)];
            if (c == 0) continue;
            const auto& src = symbols[static_cast<std::size_t>(r)].second;
            auto& dst = data[static_cast<std::size_t>(i)];
            for (std::size_t b = 0; b < len; ++b) dst[b] ^= f.mul(c, src[b]);
        }
    return data;
}

std::vector<Packet> frame_encode(const std::vector<Packet>& packets, int k, int n, std::size_t packet_length) {
    check_code(k, n, kWideLimit);
    if (static_cast<int>(packets.size()) > k) throw Error(ErrorCode::InvalidArgument, "more packets than the frame holds");
    std::vector<Packet> data;
    const auto count = static_cast<std::uint16_t>(packets.size());
    for (int i = 0; i < k; ++i) {
        Packet p{static_cast<std::uint8_t>(count >> 8), static_cast<std::uint8_t>(count & 0xFF)};
        if (i < static_cast<int>(packets.size())) {
            if (packets[static_cast<std::size_t>(i)].size() != packet_length) {
                throw Error(ErrorCode::LengthMismatch, "packet length differs from the frame's");
            }
            p.insert(p.end(), packets[static_cast<std::size_t>(i)].begin(), packets[static_cast<std::size_t>(i)].end());
        } else {
            p.resize(packet_length + 2, 0);
        }
        data.push_back(std::move(p));
    }
    return mds_encode(data, n);
}

std::vector<Packet> frame_decode(const std::vector<std::pair<int, Packet>>& symbols, int k, int n) {
    auto data = mds_decode(symbols, k, n);
    const int count = (data.front()[0] << 8) | data.front()[1];
    if (count > k) throw Error(ErrorCode::InvalidArgument, "corrupt frame header");
    std::vector<Packet> out;
    for (int i = 0; i < count; ++i) out.emplace_back(data[static_cast<std::size_t>(i)].begin() + 2, data[static_cast<std::size_t>(i)].end());
    return out;
}

std::vector<XorSlot> xor_broadcast_schedule(int n) {
    if (n < 3) throw Error(ErrorCode::InvalidArgument, "XOR broadcast schedule needs N >= 3");
    std::vector<XorSlot> slots;
    for (int s = 1; s <= n; ++s) {
        XorSlot slot;
        slot.occupied_output = s;
        if (s < n) {
            slot.combination = {s};
        } else {
            for (int p = 1; p < n; ++p) slot.combination.push_back(p);
        }
        for (int j = 1; j <= n; ++j)
            if (j != s) slot.receivers.push_back(j);
        slots.push_back(std::move(slot));
    }
    return slots;
}

}  // namespace ncswitch
