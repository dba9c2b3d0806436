#include "scatterlab/linalg.hpp"

#include <algorithm>
#include <stdexcept>

namespace scatterlab::linalg {

// ---------------------------------------------------------------------------
// FpMatrix

FpMatrix::FpMatrix(std::uint64_t p, unsigned rows, unsigned cols)
    : p_(p), rows_(rows), cols_(cols) {
    if (p == 2) {
        words_ = (cols + 63) / 64;
        bits_.assign(static_cast<std::size_t>(rows) * words_, 0);
    } else {
        ents_.assign(static_cast<std::size_t>(rows) * cols, 0);
    }
}

FpMatrix FpMatrix::identity(std::uint64_t p, unsigned k) {
    FpMatrix m(p, k, k);
    for (unsigned i = 0; i < k; ++i) m.set(i, i, 1);
    return m;
}

std::uint32_t FpMatrix::get(unsigned r, unsigned c) const {
    if (p_ == 2) return (bits_[static_cast<std::size_t>(r) * words_ + c / 64] >> (c % 64)) & 1;
    return ents_[static_cast<std::size_t>(r) * cols_ + c];
}

void FpMatrix::set(unsigned r, unsigned c, std::uint32_t v) {
    if (p_ == 2) {
        auto& w = bits_[static_cast<std::size_t>(r) * words_ + c / 64];
        if (v & 1)
            w |= 1ull << (c % 64);
        else
            w &= ~(1ull << (c % 64));
    } else {
        ents_[static_cast<std::size_t>(r) * cols_ + c] = v % static_cast<std::uint32_t>(p_);
    }
}

void FpMatrix::rref_in_place(unsigned eliminate_cols) {
    unsigned pr = 0;  // pivot row
    if (p_ == 2) {
        for (unsigned c = 0; c < eliminate_cols && pr < rows_; ++c) {
            unsigned sel = rows_;
            for (unsigned r = pr; r < rows_; ++r) {
                if (get(r, c)) {
                    sel = r;
                    break;
                }
            }
            if (sel == rows_) continue;
            if (sel != pr)
                for (unsigned w = 0; w < words_; ++w)
                    std::swap(bits_[static_cast<std::size_t>(sel) * words_ + w],
                              bits_[static_cast<std::size_t>(pr) * words_ + w]);
            for (unsigned r = 0; r < rows_; ++r) {
                if (r != pr && get(r, c)) {
                    for (unsigned w = 0; w < words_; ++w)
                        bits_[static_cast<std::size_t>(r) * words_ + w] ^=
                            bits_[static_cast<std::size_t>(pr) * words_ + w];
                }
            }
            ++pr;
        }
        return;
    }
    for (unsigned c = 0; c < eliminate_cols && pr < rows_; ++c) {
        unsigned sel = rows_;
        for (unsigned r = pr; r < rows_; ++r) {
            if (get(r, c)) {
                sel = r;
                break;
            }
        }
        if (sel == rows_) continue;
        if (sel != pr)
            for (unsigned cc = 0; cc < cols_; ++cc) {
                std::uint32_t t = get(sel, cc);
                set(sel, cc, get(pr, cc));
                set(pr, cc, t);
            }
        // normalize pivot to 1
        std::uint64_t piv = get(pr, c);
        std::uint64_t ipiv = gf::powmod_u64(piv, p_ - 2, p_);
        for (unsigned cc = 0; cc < cols_; ++cc)
            set(pr, cc, static_cast<std::uint32_t>((get(pr, cc) * ipiv) % p_));
        for (unsigned r = 0; r < rows_; ++r) {
            if (r == pr) continue;
            std::uint64_t f = get(r, c);
            if (!f) continue;
            for (unsigned cc = 0; cc < cols_; ++cc) {
                std::uint64_t v = get(r, cc) + (p_ - (f * get(pr, cc)) % p_);
                set(r, cc, static_cast<std::uint32_t>(v % p_));
            }
        }
        ++pr;
    }
}

void FpMatrix::drop_zero_rows() {
    unsigned keep = 0;
    for (unsigned r = 0; r < rows_; ++r) {
        bool nz = false;
        for (unsigned c = 0; c < cols_ && !nz; ++c) nz = get(r, c) != 0;
        if (nz) {
            if (keep != r) {
                if (p_ == 2)
                    std::copy_n(bits_.begin() + static_cast<std::size_t>(r) * words_, words_,
                                bits_.begin() + static_cast<std::size_t>(keep) * words_);
                else
                    std::copy_n(ents_.begin() + static_cast<std::size_t>(r) * cols_, cols_,
                                ents_.begin() + static_cast<std::size_t>(keep) * cols_);
            }
            ++keep;
        }
    }
    rows_ = keep;
    if (p_ == 2)
        bits_.resize(static_cast<std::size_t>(keep) * words_);
    else
        ents_.resize(static_cast<std::size_t>(keep) * cols_);
}

FpMatrix FpMatrix::rref() const {
    FpMatrix m = *this;
    m.rref_in_place(m.cols_);
    m.drop_zero_rows();
    return m;
}

unsigned FpMatrix::rank() const { return rref().rows(); }

FpMatrix FpMatrix::vstack(const FpMatrix& a, const FpMatrix& b) {
    if (a.p_ != b.p_ || a.cols_ != b.cols_)
        throw std::invalid_argument("FpMatrix::vstack: shape/field mismatch");
    FpMatrix m(a.p_, a.rows_ + b.rows_, a.cols_);
    if (a.p_ == 2) {
        std::copy(a.bits_.begin(), a.bits_.end(), m.bits_.begin());
        std::copy(b.bits_.begin(), b.bits_.end(),
                  m.bits_.begin() + static_cast<std::size_t>(a.rows_) * a.words_);
    } else {
        std::copy(a.ents_.begin(), a.ents_.end(), m.ents_.begin());
        std::copy(b.ents_.begin(), b.ents_.end(),
                  m.ents_.begin() + static_cast<std::size_t>(a.rows_) * a.cols_);
    }
    return m;
}

FpMatrix FpMatrix::row_space_intersection(const FpMatrix& a, const FpMatrix& b) {
    if (a.p_ != b.p_ || a.cols_ != b.cols_)
        throw std::invalid_argument("row_space_intersection: shape/field mismatch");
    const unsigned c = a.cols_;
    // Zassenhaus: eliminate [A|A; B|0]; rows with zero left block carry an
    // intersection basis in the right block.
    FpMatrix z(a.p_, a.rows_ + b.rows_, 2 * c);
    for (unsigned r = 0; r < a.rows_; ++r)
        for (unsigned cc = 0; cc < c; ++cc) {
            auto v = a.get(r, cc);
            if (v) {
                z.set(r, cc, v);
                z.set(r, c + cc, v);
            }
        }
    for (unsigned r = 0; r < b.rows_; ++r)
        for (unsigned cc = 0; cc < c; ++cc) {
            auto v = b.get(r, cc);
            if (v) z.set(a.rows_ + r, cc, v);
        }
    z.rref_in_place(2 * c);
    // collect rows with zero left half
    std::vector<unsigned> keep;
    for (unsigned r = 0; r < z.rows_; ++r) {
        bool left_zero = true, right_nz = false;
        for (unsigned cc = 0; cc < c && left_zero; ++cc) left_zero = z.get(r, cc) == 0;
        if (!left_zero) continue;
        for (unsigned cc = 0; cc < c && !right_nz; ++cc) right_nz = z.get(r, c + cc) != 0;
        if (right_nz) keep.push_back(r);
    }
    FpMatrix out(a.p_, static_cast<unsigned>(keep.size()), c);
    for (unsigned i = 0; i < keep.size(); ++i)
        for (unsigned cc = 0; cc < c; ++cc) out.set(i, cc, z.get(keep[i], c + cc));
    return out.rref();
}

bool FpMatrix::operator==(const FpMatrix& o) const {
    if (p_ != o.p_ || rows_ != o.rows_ || cols_ != o.cols_) return false;
    return p_ == 2 ? bits_ == o.bits_ : ents_ == o.ents_;
}

// ---------------------------------------------------------------------------
// eliminators

BitEliminator::BitEliminator(unsigned words, unsigned capacity_hint) : words_(words) {
    rows_.reserve(static_cast<std::size_t>(capacity_hint) * words);
    pivot_cols_.reserve(capacity_hint);
}

void BitEliminator::clear() {
    rows_.clear();
    pivot_cols_.clear();
}

void BitEliminator::reduce(std::uint64_t* row) const {
    for (std::size_t i = 0; i < pivot_cols_.size(); ++i) {
        unsigned pc = pivot_cols_[i];
        if ((row[pc / 64] >> (pc % 64)) & 1) {
            const std::uint64_t* pr = rows_.data() + i * words_;
            for (unsigned w = 0; w < words_; ++w) row[w] ^= pr[w];
        }
    }
}

bool BitEliminator::add_row(const std::uint64_t* row) {
    std::uint64_t buf[8];
    std::uint64_t* v = buf;
    std::vector<std::uint64_t> big;
    if (words_ > 8) {
        big.assign(row, row + words_);
        v = big.data();
    } else {
        std::copy_n(row, words_, buf);
    }
    reduce(v);
    unsigned lead = words_ * 64;
    for (unsigned w = 0; w < words_; ++w) {
        if (v[w]) {
            lead = w * 64 + static_cast<unsigned>(__builtin_ctzll(v[w]));
            break;
        }
    }
    if (lead == words_ * 64) return false;
    rows_.insert(rows_.end(), v, v + words_);
    pivot_cols_.push_back(lead);
    return true;
}

bool BitEliminator::add_row1(std::uint64_t row) { return add_row(&row); }

GenEliminator::GenEliminator(std::uint64_t p, unsigned cols, unsigned capacity_hint)
    : p_(p), cols_(cols) {
    rows_.reserve(static_cast<std::size_t>(capacity_hint) * cols);
    pivot_cols_.reserve(capacity_hint);
}

void GenEliminator::clear() {
    rows_.clear();
    pivot_cols_.clear();
}

bool GenEliminator::add_row(const std::uint32_t* row) {
    std::vector<std::uint32_t> v(row, row + cols_);
    for (std::size_t i = 0; i < pivot_cols_.size(); ++i) {
        unsigned pc = pivot_cols_[i];
        std::uint64_t f = v[pc];
        if (!f) continue;
        const std::uint32_t* pr = rows_.data() + i * cols_;
        for (unsigned c = 0; c < cols_; ++c)
            v[c] = static_cast<std::uint32_t>((v[c] + (p_ - (f * pr[c]) % p_)) % p_);
    }
    unsigned lead = cols_;
    for (unsigned c = 0; c < cols_; ++c) {
        if (v[c]) {
            lead = c;
            break;
        }
    }
    if (lead == cols_) return false;
    // normalize leading entry to 1
    std::uint64_t il = gf::powmod_u64(v[lead], p_ - 2, p_);
    for (unsigned c = 0; c < cols_; ++c)
        v[c] = static_cast<std::uint32_t>((v[c] * il) % p_);
    rows_.insert(rows_.end(), v.begin(), v.end());
    pivot_cols_.push_back(lead);
    return true;
}

// ---------------------------------------------------------------------------
// flattening

void flatten_into(const FieldCtx& F, const FF* coords, unsigned k, FpMatrix& M, unsigned row) {
    const unsigned deg = F.degree();
    if (F.p() == 2) {
        std::uint64_t* w = M.row_bits(row);
        for (unsigned j = 0; j < k; ++j) {
            std::uint64_t enc = coords[j];
            unsigned base = j * deg;
            w[base / 64] |= enc << (base % 64);
            if (base % 64 && base % 64 + deg > 64) w[base / 64 + 1] |= enc >> (64 - base % 64);
        }
        return;
    }
    for (unsigned j = 0; j < k; ++j) {
        std::uint64_t enc = coords[j];
        for (unsigned t = 0; t < deg; ++t) {
            M.set(row, j * deg + t, static_cast<std::uint32_t>(enc % F.p()));
            enc /= F.p();
        }
    }
}

std::vector<FF> unflatten(const FieldCtx& F, const FpMatrix& M, unsigned row, unsigned k) {
    const unsigned deg = F.degree();
    std::vector<FF> coords(k, 0);
    for (unsigned j = 0; j < k; ++j) {
        FF enc = 0;
        for (unsigned t = deg; t-- > 0;) enc = enc * F.p() + M.get(row, j * deg + t);
        coords[j] = enc;
    }
    return coords;
}

// ---------------------------------------------------------------------------
// FqSubspace

FqSubspace::FqSubspace(FieldRef ctx, unsigned ambient_k, const FpMatrix& generators)
    : ctx_(std::move(ctx)), k_(ambient_k), basis_(generators.rref()) {
    if (generators.cols() != k_ * ctx_->degree())
        throw std::invalid_argument("FqSubspace: generator width != k * h * n");
    if (generators.p() != ctx_->p())
        throw std::invalid_argument("FqSubspace: characteristic mismatch");
}

unsigned FqSubspace::fq_dim() const {
    unsigned d = fp_dim();
    if (d % ctx_->h() != 0) throw std::logic_error("FqSubspace: F_p-dim not divisible by h");
    return d / ctx_->h();
}

unsigned FqSubspace::intersect_dim_fq(const FqSubspace& a, const FqSubspace& b) {
    if (a.k_ != b.k_ || a.ctx_->size() != b.ctx_->size() || a.ctx_->p() != b.ctx_->p())
        throw std::invalid_argument("intersect_dim_fq: ambient mismatch");
    unsigned sum_rank = FpMatrix::vstack(a.basis_, b.basis_).rank();
    unsigned inter = a.fp_dim() + b.fp_dim() - sum_rank;
    if (inter % a.ctx_->h() != 0)
        throw std::logic_error("intersect_dim_fq: intersection dim not divisible by h");
    return inter / a.ctx_->h();
}

FpMatrix FqSubspace::intersection_basis(const FqSubspace& a, const FqSubspace& b) {
    if (a.k_ != b.k_) throw std::invalid_argument("intersection_basis: ambient mismatch");
    return FpMatrix::row_space_intersection(a.basis_, b.basis_);
}

// ---------------------------------------------------------------------------
// FqnSubspace

unsigned rref_qn(const FieldCtx& F, std::vector<FF>& rows, unsigned k) {
    const unsigned nrows = static_cast<unsigned>(rows.size() / k);
    unsigned pr = 0;
    for (unsigned c = 0; c < k && pr < nrows; ++c) {
        unsigned sel = nrows;
        for (unsigned r = pr; r < nrows; ++r) {
            if (rows[static_cast<std::size_t>(r) * k + c]) {
                sel = r;
                break;
            }
        }
        if (sel == nrows) continue;
        if (sel != pr)
            for (unsigned cc = 0; cc < k; ++cc)
                std::swap(rows[static_cast<std::size_t>(sel) * k + cc],
                          rows[static_cast<std::size_t>(pr) * k + cc]);
        FF ip = F.inv(rows[static_cast<std::size_t>(pr) * k + c]);
        for (unsigned cc = 0; cc < k; ++cc) {
            auto& v = rows[static_cast<std::size_t>(pr) * k + cc];
            v = F.mul(v, ip);
        }
        for (unsigned r = 0; r < nrows; ++r) {
            if (r == pr) continue;
            FF f = rows[static_cast<std::size_t>(r) * k + c];
            if (!f) continue;
            for (unsigned cc = 0; cc < k; ++cc) {
                auto& v = rows[static_cast<std::size_t>(r) * k + cc];
                v = F.sub(v, F.mul(f, rows[static_cast<std::size_t>(pr) * k + cc]));
            }
        }
        ++pr;
    }
    return pr;
}

FqnSubspace::FqnSubspace(FieldRef ctx, unsigned k, unsigned r, std::vector<FF> rref_rows)
    : ctx_(std::move(ctx)), k_(k), r_(r), rows_(std::move(rref_rows)) {
    if (rows_.size() != static_cast<std::size_t>(r_) * k_)
        throw std::invalid_argument("FqnSubspace: row buffer size mismatch");
}

FqnSubspace FqnSubspace::span(FieldRef ctx, unsigned k,
                              const std::vector<std::vector<FF>>& vecs) {
    std::vector<FF> rows;
    rows.reserve(vecs.size() * k);
    for (const auto& v : vecs) {
        if (v.size() != k) throw std::invalid_argument("FqnSubspace::span: vector length != k");
        rows.insert(rows.end(), v.begin(), v.end());
    }
    unsigned r = rref_qn(*ctx, rows, k);
    rows.resize(static_cast<std::size_t>(r) * k);
    return FqnSubspace(std::move(ctx), k, r, std::move(rows));
}

FqSubspace FqnSubspace::to_fq_subspace() const {
    const unsigned deg = ctx_->degree();
    FpMatrix gens(ctx_->p(), r_ * deg, k_ * deg);
    std::vector<FF> scaled(k_);
    unsigned out = 0;
    for (unsigned i = 0; i < r_; ++i) {
        for (unsigned t = 0; t < deg; ++t) {
            FF mult = 1;
            for (unsigned s = 0; s < t; ++s) mult *= ctx_->p();  // x^t encoding
            for (unsigned j = 0; j < k_; ++j)
                scaled[j] = ctx_->mul(mult, rows_[static_cast<std::size_t>(i) * k_ + j]);
            flatten_into(*ctx_, scaled.data(), k_, gens, out++);
        }
    }
    return FqSubspace(ctx_, k_, gens);
}

bool span_equal(const FqnSubspace& a, const FqnSubspace& b) { return a == b; }

// ---------------------------------------------------------------------------
// gaussian binomial and subspace streaming

cpp_int gaussian_binomial(const cpp_int& Q, unsigned k, unsigned r) {
    if (r > k) return 0;
    cpp_int num = 1, den = 1;
    for (unsigned i = 0; i < r; ++i) {
        num *= boost::multiprecision::pow(Q, k - i) - 1;
        den *= boost::multiprecision::pow(Q, i + 1) - 1;
    }
    return num / den;
}

SubspaceStream::SubspaceStream(FieldRef ctx, unsigned k, unsigned r)
    : ctx_(std::move(ctx)), k_(k), r_(r) {
    if (r > k) throw std::invalid_argument("SubspaceStream: r > k");
    build_patterns();
}

void SubspaceStream::build_patterns() {
    const std::uint64_t Q = ctx_->size();
    // lexicographic combinations of pivot columns
    std::vector<unsigned> piv(r_);
    for (unsigned i = 0; i < r_; ++i) piv[i] = i;
    auto emit = [&](const std::vector<unsigned>& pv) {
        Pattern pat;
        pat.pivots = pv;
        std::vector<bool> is_piv(k_, false);
        for (unsigned c : pv) is_piv[c] = true;
        for (unsigned i = 0; i < r_; ++i)
            for (unsigned c = pv[i] + 1; c < k_; ++c)
                if (!is_piv[c]) pat.free_cells.emplace_back(i, c);
        pat.count = 1;
        for (std::size_t t = 0; t < pat.free_cells.size(); ++t) {
            if (pat.count > (1ull << 62) / Q)
                throw std::overflow_error("SubspaceStream: enumeration too large");
            pat.count *= Q;
        }
        if (total_ > (1ull << 62) - pat.count)
            throw std::overflow_error("SubspaceStream: enumeration too large");
        total_ += pat.count;
        patterns_.push_back(std::move(pat));
    };
    if (r_ == 0) {
        Pattern pat;
        pat.count = 1;
        total_ = 1;
        patterns_.push_back(std::move(pat));
    } else {
        while (true) {
            emit(piv);
            // next combination
            int i = static_cast<int>(r_) - 1;
            while (i >= 0 && piv[i] == k_ - r_ + i) --i;
            if (i < 0) break;
            ++piv[i];
            for (unsigned j = i + 1; j < r_; ++j) piv[j] = piv[j - 1] + 1;
        }
    }
    pos_ = 0;
    pat_idx_ = 0;
    counter_ = 0;
}

cpp_int SubspaceStream::total() const {
    return gaussian_binomial(cpp_int(ctx_->size()), k_, r_);
}

std::uint64_t SubspaceStream::total_u64() const { return total_; }

void SubspaceStream::seek(std::uint64_t index) {
    if (index > total_) throw std::out_of_range("SubspaceStream::seek");
    pos_ = index;
    pat_idx_ = 0;
    while (pat_idx_ < patterns_.size() && index >= patterns_[pat_idx_].count) {
        index -= patterns_[pat_idx_].count;
        ++pat_idx_;
    }
    counter_ = index;
}

bool SubspaceStream::next(std::vector<FF>& rows_out) {
    if (pos_ >= total_) return false;
    const Pattern& pat = patterns_[pat_idx_];
    rows_out.assign(static_cast<std::size_t>(r_) * k_, 0);
    for (unsigned i = 0; i < r_; ++i)
        rows_out[static_cast<std::size_t>(i) * k_ + pat.pivots[i]] = 1;
    std::uint64_t c = counter_;
    const std::uint64_t Q = ctx_->size();
    for (const auto& [ri, ci] : pat.free_cells) {
        rows_out[static_cast<std::size_t>(ri) * k_ + ci] = static_cast<FF>(c % Q);
        c /= Q;
    }
    ++pos_;
    ++counter_;
    if (counter_ >= pat.count) {
        counter_ = 0;
        ++pat_idx_;
    }
    return true;
}

}  // namespace scatterlab::linalg
