#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace ncswitch {

using FieldElement = std::uint8_t;

/// GF(2^m) for 1 <= m <= 8 via log/exp tables over a fixed primitive polynomial
/// (m = 8 uses x^8 + x^4 + x^3 + x^2 + 1).
class GaloisField {
public:
    /// Shared, immutable instance for degree m.
    static const GaloisField& get(int m = 8);

    [[nodiscard]] int degree() const { return m_; }
    [[nodiscard]] int size() const { return 1 << m_; }
    [[nodiscard]] unsigned polynomial() const { return poly_; }

    static FieldElement add(FieldElement a, FieldElement b) { return a ^ b; }
    [[nodiscard]] FieldElement mul(FieldElement a, FieldElement b) const {
        if (a == 0 || b == 0) return 0;
        return exp_[log_[a] + log_[b]];
    }
    [[nodiscard]] FieldElement inv(FieldElement a) const;
    [[nodiscard]] FieldElement div(FieldElement a, FieldElement b) const { return mul(a, inv(b)); }
    [[nodiscard]] FieldElement pow(FieldElement a, int e) const;

private:
    explicit GaloisField(int m);

    int m_;
    unsigned poly_;
    std::array<FieldElement, 512> exp_{};
    std::array<int, 256> log_{};
};

using CoefficientVector = std::vector<FieldElement>;
/// (column, nonzero value) pairs sorted by column.
using SparseVector = std::vector<std::pair<int, FieldElement>>;

SparseVector to_sparse(const CoefficientVector& v);
CoefficientVector to_dense(const SparseVector& v, int length);

/// Span of received coefficient vectors, kept in reduced row-echelon form with sparse rows.
/// The ambient length may grow as new packets join the flow or batch.
class KnowledgeSpace {
public:
    explicit KnowledgeSpace(int ambient = 0, int field_degree = 8);

    [[nodiscard]] int ambient() const { return static_cast<int>(pivot_row_.size()); }
    [[nodiscard]] int dimension() const { return static_cast<int>(rows_.size()); }
    [[nodiscard]] const GaloisField& field() const { return *field_; }

    /// Grow the ambient length; existing vectors are padded with zeros.
    void extend(int ambient);
    void clear(int ambient = 0);

    /// Returns true iff v was innovative. Throws Error(LengthMismatch) unless |v| == ambient().
    bool insert(const CoefficientVector& v);
    bool insert(SparseVector v);
    [[nodiscard]] bool contains(const CoefficientVector& v) const;
    [[nodiscard]] bool contains(const SparseVector& v) const;

    /// Remainder of v after elimination against the basis (zero iff v is in the span).
    [[nodiscard]] SparseVector reduce(SparseVector v) const;

    /// The unit vector e_col lies in the space, i.e. packet `col` is decodable.
    [[nodiscard]] bool is_decoded(int col) const;
    [[nodiscard]] int decoded_count() const { return decoded_; }
    /// Largest column whose unit vector is not in the space, or -1. Amortised O(1).
    [[nodiscard]] int highest_undecoded() const;

    /// Basis rows ordered by pivot column.
    [[nodiscard]] std::vector<SparseVector> basis() const;
    [[nodiscard]] std::vector<CoefficientVector> dense_basis() const;

private:
    void check_column(int col) const;

    const GaloisField* field_;
    std::vector<SparseVector> rows_;
    std::vector<bool> pure_;
    std::vector<int> pivot_row_;               // column -> row index, or -1
    std::vector<std::vector<int>> col_rows_;   // column -> rows that may be nonzero there (lazy)
    int decoded_ = 0;
    mutable int top_undecoded_ = -1;  // decoding only grows, so this only moves down until extend()
};

/// A vector in span(input) lying outside every receiver space. Deterministic: only coordinates
/// at each receiver's last missing basis index are nonzero, each set to the smallest field
/// element that keeps the vector outside the receivers decided at that index.
/// Throws Error(ImpossibleReceiver) if a receiver already knows all of span(input).
SparseVector innovative_combination(const KnowledgeSpace& input, const std::vector<const KnowledgeSpace*>& receivers);
CoefficientVector innovative_combination(const KnowledgeSpace& input, const std::vector<KnowledgeSpace>& receivers);

struct UncoveredResult {
    bool exists = false;
    bool exhaustive = false;  // decided by search rather than by the q > k counting argument
};

/// Is there a vector of GF(2^m)^n outside every given proper subspace?
UncoveredResult exists_uncovered_vector(int n, const std::vector<KnowledgeSpace>& subspaces);

using Packet = std::vector<std::uint8_t>;

/// Systematic Reed-Solomon (Vandermonde) generator: k x n over GF(2^8), any k columns invertible.
std::vector<std::vector<FieldElement>> mds_generator(int k, int n);

/// n coded symbols from k equal-length packets. Up to n = 256 the code is the systematic one
/// above (the first k symbols are the data). Longer codes, up to 65535 symbols, evaluate the data
/// polynomial over GF(2^16) at 0..n-1 and carry two bytes per payload byte.
std::vector<Packet> mds_encode(const std::vector<Packet>& data, int n);

/// Reconstruct the k packets from any k (position, symbol) pairs.
std::vector<Packet> mds_decode(const std::vector<std::pair<int, Packet>>& symbols, int k, int n);

/// Frame code: fewer than k real packets are padded with zero packets; a 2-byte big-endian
/// header carrying the real count is prepended to every data packet before coding.
std::vector<Packet> frame_encode(const std::vector<Packet>& packets, int k, int n, std::size_t packet_length);
std::vector<Packet> frame_decode(const std::vector<std::pair<int, Packet>>& symbols, int k, int n);

struct XorSlot {
    int occupied_output = 0;        // output taken by input 2's unicast
    std::vector<int> combination;   // broadcast packets (1-based) XORed together
    std::vector<int> receivers;     // outputs receiving the broadcast transmission
};

/// N-slot schedule carrying N - 1 broadcast packets past a unicast sweep.
std::vector<XorSlot> xor_broadcast_schedule(int n);

}  // namespace ncswitch
