#ifndef SCATTERLAB_LINALG_HPP
#define SCATTERLAB_LINALG_HPP

#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "scatterlab/gf.hpp"

namespace scatterlab::linalg {

using gf::FF;
using gf::FieldCtx;
using gf::FieldRef;
using boost::multiprecision::cpp_int;

/// Dense matrix over F_p; rows are bit-packed into 64-bit words when p = 2.
class FpMatrix {
public:
    FpMatrix() = default;
    FpMatrix(std::uint64_t p, unsigned rows, unsigned cols);
    static FpMatrix identity(std::uint64_t p, unsigned k);

    std::uint64_t p() const { return p_; }
    unsigned rows() const { return rows_; }
    unsigned cols() const { return cols_; }

    std::uint32_t get(unsigned r, unsigned c) const;
    void set(unsigned r, unsigned c, std::uint32_t v);

    unsigned rank() const;
    /// Reduced row echelon form with zero rows dropped: the canonical
    /// representative of the row space.
    FpMatrix rref() const;
    static FpMatrix vstack(const FpMatrix& a, const FpMatrix& b);
    /// Basis of the intersection of the two row spaces (Zassenhaus).
    static FpMatrix row_space_intersection(const FpMatrix& a, const FpMatrix& b);

    bool operator==(const FpMatrix& o) const;

    // p = 2 only: packed row access (words() 64-bit words per row)
    unsigned words() const { return words_; }
    const std::uint64_t* row_bits(unsigned r) const { return bits_.data() + r * words_; }
    std::uint64_t* row_bits(unsigned r) { return bits_.data() + r * words_; }

private:
    void rref_in_place(unsigned eliminate_cols);  // eliminate on leading block only
    void drop_zero_rows();

    std::uint64_t p_ = 2;
    unsigned rows_ = 0, cols_ = 0, words_ = 0;
    std::vector<std::uint64_t> bits_;  // p = 2
    std::vector<std::uint32_t> ents_;  // p > 2
};

/// Incremental rank computation over F_2 on fixed-width packed rows.
/// Copyable so a pre-reduced base can be cloned per scan step.
class BitEliminator {
public:
    explicit BitEliminator(unsigned words, unsigned capacity_hint = 0);
    void clear();
    /// Reduces the row against current pivots; returns true (and keeps it)
    /// if it increases the rank.
    bool add_row(const std::uint64_t* row);
    bool add_row1(std::uint64_t row);  // single-word convenience
    unsigned rank() const { return static_cast<unsigned>(pivot_cols_.size()); }
    const std::vector<unsigned>& pivot_cols() const { return pivot_cols_; }
    /// Reduce a row without inserting; returns the residue in place.
    void reduce(std::uint64_t* row) const;

private:
    unsigned words_;
    std::vector<std::uint64_t> rows_;
    std::vector<unsigned> pivot_cols_;
};

/// Incremental rank computation over F_p (generic path).
class GenEliminator {
public:
    GenEliminator(std::uint64_t p, unsigned cols, unsigned capacity_hint = 0);
    void clear();
    bool add_row(const std::uint32_t* row);
    unsigned rank() const { return static_cast<unsigned>(pivot_cols_.size()); }

private:
    std::uint64_t p_;
    unsigned cols_;
    std::vector<std::uint32_t> rows_;
    std::vector<unsigned> pivot_cols_;
};

/// F_p-subspace of the flattened ambient F_p^{k * h * n} attached to
/// F_{q^n}^k. Stores the canonical RREF basis and the cached rank.
class FqSubspace {
public:
    FqSubspace(FieldRef ctx, unsigned ambient_k, const FpMatrix& generators);

    const FieldRef& ctx() const { return ctx_; }
    unsigned ambient_k() const { return k_; }
    unsigned fp_cols() const { return k_ * ctx_->degree(); }
    unsigned fp_dim() const { return basis_.rows(); }
    /// F_q-dimension; asserts h | fp_dim.
    unsigned fq_dim() const;
    const FpMatrix& basis() const { return basis_; }

    /// F_q-dimension of the intersection, via the dimension formula
    /// (dim_p A + dim_p B - dim_p(A+B)) / h; asserts divisibility.
    static unsigned intersect_dim_fq(const FqSubspace& a, const FqSubspace& b);
    /// F_p-basis of the intersection.
    static FpMatrix intersection_basis(const FqSubspace& a, const FqSubspace& b);

    bool operator==(const FqSubspace& o) const { return k_ == o.k_ && basis_ == o.basis_; }

private:
    FieldRef ctx_;
    unsigned k_;
    FpMatrix basis_;
};

/// F_{q^n}-subspace of F_{q^n}^k with canonical RREF basis rows.
class FqnSubspace {
public:
    FqnSubspace(FieldRef ctx, unsigned k, unsigned r, std::vector<FF> rref_rows);
    /// Canonical span of arbitrary generating vectors (row-major, each of
    /// length k).
    static FqnSubspace span(FieldRef ctx, unsigned k, const std::vector<std::vector<FF>>& vecs);

    const FieldRef& ctx() const { return ctx_; }
    unsigned ambient_k() const { return k_; }
    unsigned dim() const { return r_; }
    const std::vector<FF>& rows() const { return rows_; }  // r * k row-major

    /// The same subspace viewed over F_p (flattened); fp_dim = r * h * n.
    FqSubspace to_fq_subspace() const;

    bool operator==(const FqnSubspace& o) const {
        return k_ == o.k_ && r_ == o.r_ && rows_ == o.rows_;
    }

private:
    FieldRef ctx_;
    unsigned k_ = 0, r_ = 0;
    std::vector<FF> rows_;
};

bool span_equal(const FqnSubspace& a, const FqnSubspace& b);

/// In-place RREF of an r x k row-major matrix over F_{q^n}; returns rank
/// (rows are compacted so the first `rank` rows are the canonical basis).
unsigned rref_qn(const FieldCtx& F, std::vector<FF>& rows, unsigned k);

/// Write the flattened F_p digits of coords (length k) into a packed row /
/// digit row of an FpMatrix.
void flatten_into(const FieldCtx& F, const FF* coords, unsigned k, FpMatrix& M, unsigned row);
/// Inverse of flatten_into for one row.
std::vector<FF> unflatten(const FieldCtx& F, const FpMatrix& M, unsigned row, unsigned k);

/// Number of r-dimensional subspaces of a k-dimensional space over a field
/// with Q elements.
cpp_int gaussian_binomial(const cpp_int& Q, unsigned k, unsigned r);

/// Streams every r-dimensional F_{q^n}-subspace of F_{q^n}^k exactly once,
/// in canonical order (RREF pivot patterns lexicographically, then free
/// entries in mixed radix). Seekable, so index ranges can be partitioned
/// across workers deterministically.
class SubspaceStream {
public:
    SubspaceStream(FieldRef ctx, unsigned k, unsigned r);

    cpp_int total() const;
    std::uint64_t total_u64() const;  // throws if total exceeds 2^62
    std::uint64_t position() const { return pos_; }
    void seek(std::uint64_t index);
    /// Fills rows_out (resized to r*k, row-major RREF) and advances; returns
    /// false when exhausted.
    bool next(std::vector<FF>& rows_out);

private:
    struct Pattern {
        std::vector<unsigned> pivots;
        std::vector<std::pair<unsigned, unsigned>> free_cells;  // (row, col)
        std::uint64_t count;                                    // Q^{#free}
    };
    void build_patterns();

    FieldRef ctx_;
    unsigned k_, r_;
    std::vector<Pattern> patterns_;
    std::uint64_t pos_ = 0, total_ = 0;
    std::size_t pat_idx_ = 0;
    std::uint64_t counter_ = 0;  // offset within current pattern
};

}  // namespace scatterlab::linalg

#endif
