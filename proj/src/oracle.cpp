#include "scatterlab/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cstring>

#include "parallel.hpp"

namespace scatterlab::oracle {

const char* to_string(Mode m) { return m == Mode::Exhaustive ? "exhaustive" : "sampled"; }

namespace {

// ---------------------------------------------------------------------------
// seeded splittable PRNG (per-index streams, so partitioning cannot change
// the sampled sequence)

struct SplitMix {
    std::uint64_t s;
    std::uint64_t next() {
        s += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = s;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
};

SplitMix stream_for(std::uint64_t seed, std::uint64_t index) {
    SplitMix m{seed ^ (0x9e3779b97f4a7c15ull * (index + 1))};
    m.next();
    return m;
}

FF uniform_element(const FieldCtx& F, SplitMix& rng) {
    const std::uint64_t size = F.size();
    const unsigned bits = std::bit_width(size - 1);
    const std::uint64_t mask = bits >= 64 ? ~0ull : ((1ull << bits) - 1);
    for (;;) {
        std::uint64_t v = rng.next() & mask;
        if (v < size) return v;
    }
}

std::uint64_t hash_u128(unsigned __int128 v) {
    SplitMix m{static_cast<std::uint64_t>(v) ^
               (static_cast<std::uint64_t>(v >> 64) * 0xff51afd7ed558ccdull)};
    return m.next();
}

// ---------------------------------------------------------------------------
// intersection scan machinery

// F_2 echelon eliminator over a fixed word width with external reusable
// buffers; base rows are restored by memcpy per scan step.
struct Elim2 {
    unsigned words = 0;
    unsigned n = 0;
    std::vector<std::uint64_t> rows;
    std::vector<unsigned> lead;

    void init(unsigned w, unsigned max_rows) {
        words = w;
        rows.assign(static_cast<std::size_t>(max_rows) * w, 0);
        lead.assign(max_rows, 0);
        n = 0;
    }
    void load(const Elim2& base) {
        n = base.n;
        std::memcpy(rows.data(), base.rows.data(), sizeof(std::uint64_t) * base.n * words);
        std::memcpy(lead.data(), base.lead.data(), sizeof(unsigned) * base.n);
    }
    // v is scratch (destroyed); returns true if rank grew
    bool add(std::uint64_t* v) {
        for (unsigned i = 0; i < n; ++i) {
            unsigned pc = lead[i];
            if ((v[pc >> 6] >> (pc & 63)) & 1) {
                const std::uint64_t* r = rows.data() + static_cast<std::size_t>(i) * words;
                for (unsigned w = 0; w < words; ++w) v[w] ^= r[w];
            }
        }
        unsigned l = words * 64;
        for (unsigned w = 0; w < words; ++w) {
            if (v[w]) {
                l = w * 64 + static_cast<unsigned>(std::countr_zero(v[w]));
                break;
            }
        }
        if (l == words * 64) return false;
        std::memcpy(rows.data() + static_cast<std::size_t>(n) * words, v,
                    sizeof(std::uint64_t) * words);
        lead[n] = l;
        ++n;
        return true;
    }
};

// generic F_p echelon eliminator (digit rows)
struct ElimP {
    std::uint64_t p = 3;
    unsigned cols = 0;
    unsigned n = 0;
    std::vector<std::uint32_t> rows;
    std::vector<unsigned> lead;

    void init(std::uint64_t p_, unsigned c, unsigned max_rows) {
        p = p_;
        cols = c;
        rows.assign(static_cast<std::size_t>(max_rows) * c, 0);
        lead.assign(max_rows, 0);
        n = 0;
    }
    void load(const ElimP& base) {
        n = base.n;
        std::memcpy(rows.data(), base.rows.data(), sizeof(std::uint32_t) * base.n * cols);
        std::memcpy(lead.data(), base.lead.data(), sizeof(unsigned) * base.n);
    }
    bool add(std::uint32_t* v) {
        for (unsigned i = 0; i < n; ++i) {
            unsigned pc = lead[i];
            std::uint64_t f = v[pc];
            if (!f) continue;
            const std::uint32_t* r = rows.data() + static_cast<std::size_t>(i) * cols;
            for (unsigned c = 0; c < cols; ++c)
                v[c] = static_cast<std::uint32_t>((v[c] + (p - (f * r[c]) % p)) % p);
        }
        unsigned l = cols;
        for (unsigned c = 0; c < cols; ++c) {
            if (v[c]) {
                l = c;
                break;
            }
        }
        if (l == cols) return false;
        std::uint64_t il = gf::powmod_u64(v[l], p - 2, p);
        std::uint32_t* dst = rows.data() + static_cast<std::size_t>(n) * cols;
        for (unsigned c = 0; c < cols; ++c)
            dst[c] = static_cast<std::uint32_t>((v[c] * il) % p);
        lead[n] = l;
        ++n;
        return true;
    }
};

// Per-worker scratch shared by the scans.
struct ScanCtx {
    const FieldCtx* F = nullptr;
    unsigned k = 0;       // ambient F_{q^n} dimension
    unsigned deg = 0;     // h*n
    unsigned cols = 0;    // k*deg (doubled for the cutting scan)
    bool p2 = true;
    Elim2 base2, work2;
    ElimP basep, workp;
    std::vector<std::uint64_t> scratch2;
    std::vector<std::uint32_t> scratchp;

    void init(const FieldCtx& field, unsigned k_, unsigned cols_, unsigned max_rows,
              const linalg::FpMatrix& base_rows, bool doubled) {
        F = &field;
        k = k_;
        deg = field.degree();
        cols = cols_;
        p2 = field.p() == 2;
        if (p2) {
            unsigned w = (cols + 63) / 64;
            base2.init(w, max_rows);
            scratch2.assign(w, 0);
            std::vector<std::uint64_t> row(w, 0);
            for (unsigned r = 0; r < base_rows.rows(); ++r) {
                std::fill(row.begin(), row.end(), 0);
                for (unsigned bw = 0; bw < base_rows.words(); ++bw)
                    row[bw] = base_rows.row_bits(r)[bw];
                if (doubled) {
                    // [u | u]
                    unsigned half = cols / 2;
                    for (unsigned c = 0; c < half; ++c) {
                        if ((row[c >> 6] >> (c & 63)) & 1) {
                            unsigned cc = half + c;
                            row[cc >> 6] |= 1ull << (cc & 63);
                        }
                    }
                }
                base2.add(row.data());
            }
            work2.init(base2.words, max_rows);
        } else {
            basep.init(field.p(), cols, max_rows);
            scratchp.assign(cols, 0);
            std::vector<std::uint32_t> row(cols, 0);
            for (unsigned r = 0; r < base_rows.rows(); ++r) {
                std::fill(row.begin(), row.end(), 0);
                for (unsigned c = 0; c < base_rows.cols(); ++c) row[c] = base_rows.get(r, c);
                if (doubled) {
                    unsigned half = cols / 2;
                    for (unsigned c = 0; c < half; ++c) row[half + c] = row[c];
                }
                basep.add(row.data());
            }
            workp.init(field.p(), cols, max_rows);
        }
    }

    // flatten mult * coords into the scratch row (low columns)
    void flatten_scaled(const FF* coords, FF mult) {
        const FieldCtx& field = *F;
        if (p2) {
            std::fill(scratch2.begin(), scratch2.end(), 0);
            for (unsigned j = 0; j < k; ++j) {
                std::uint64_t enc = field.mul(mult, coords[j]);
                if (!enc) continue;
                unsigned pos = j * deg;
                scratch2[pos >> 6] |= enc << (pos & 63);
                if ((pos & 63) && (pos & 63) + deg > 64)
                    scratch2[(pos >> 6) + 1] |= enc >> (64 - (pos & 63));
            }
        } else {
            std::fill(scratchp.begin(), scratchp.end(), 0);
            const std::uint64_t p = field.p();
            for (unsigned j = 0; j < k; ++j) {
                std::uint64_t enc = field.mul(mult, coords[j]);
                for (unsigned t = 0; t < deg; ++t) {
                    scratchp[j * deg + t] = static_cast<std::uint32_t>(enc % p);
                    enc /= p;
                }
            }
        }
    }

    // rank of (base + the F_p-expansion of the r rows), computed in the work
    // eliminator; returns the total rank
    unsigned stack_rank(const std::vector<FF>& rows, unsigned r) {
        const FieldCtx& field = *F;
        if (p2) {
            work2.load(base2);
            for (unsigned i = 0; i < r; ++i) {
                FF mult = 1;
                for (unsigned t = 0; t < deg; ++t) {
                    flatten_scaled(rows.data() + static_cast<std::size_t>(i) * k, mult);
                    work2.add(scratch2.data());
                    mult *= 2;  // encoding of x^{t+1} for p = 2
                }
            }
            return work2.n;
        }
        workp.load(basep);
        for (unsigned i = 0; i < r; ++i) {
            FF mult = 1;
            for (unsigned t = 0; t < deg; ++t) {
                flatten_scaled(rows.data() + static_cast<std::size_t>(i) * k, mult);
                workp.add(scratchp.data());
                mult *= field.p();
            }
        }
        return workp.n;
    }
};

struct ScanStats {
    unsigned max_dim = 0;
    std::uint64_t argmax_index = ~0ull;
    std::vector<FF> argmax_rows;
    std::uint64_t enumerated = 0;
};

void merge_stats(ScanStats& a, ScanStats&& b) {
    a.enumerated += b.enumerated;
    if (b.argmax_index == ~0ull) return;
    if (a.argmax_index == ~0ull || b.max_dim > a.max_dim ||
        (b.max_dim == a.max_dim && b.argmax_index < a.argmax_index)) {
        a.max_dim = b.max_dim;
        a.argmax_index = b.argmax_index;
        a.argmax_rows = std::move(b.argmax_rows);
    }
}

// draws a uniformly random r-dimensional subspace in canonical RREF form
void random_subspace(const FieldCtx& F, unsigned k, unsigned r, SplitMix& rng,
                     std::vector<FF>& rows) {
    for (;;) {
        rows.assign(static_cast<std::size_t>(r) * k, 0);
        for (auto& v : rows) v = uniform_element(F, rng);
        if (linalg::rref_qn(F, rows, k) == r) {
            rows.resize(static_cast<std::size_t>(r) * k);
            return;
        }
    }
}

// max intersection F_q-dimension over r-dim subspaces (exhaustive or sampled)
ScanStats max_intersection_scan(const FieldRef& ctx, const FqSubspace& U, unsigned r,
                                const OracleOptions& opts, std::uint64_t* total_out) {
    const FieldCtx& F = *ctx;
    const unsigned k = U.ambient_k();
    const unsigned deg = F.degree();
    const unsigned base_rows = U.fp_dim();
    const unsigned max_rows = base_rows + r * deg;

    std::uint64_t total = 0;
    if (opts.mode == Mode::Exhaustive) {
        try {
            linalg::SubspaceStream probe(ctx, k, r);
            total = probe.total_u64();
        } catch (const std::overflow_error&) {
            throw BudgetExceeded("subspace enumeration exceeds 2^62");
        }
        if (total > opts.subspace_budget)
            throw BudgetExceeded("subspace enumeration exceeds budget: " + std::to_string(total));
    } else {
        total = opts.samples;
    }
    if (total_out) *total_out = total;

    auto chunk = [&](std::uint64_t lo, std::uint64_t hi) {
        ScanStats st;
        ScanCtx sc;
        sc.init(F, k, k * deg, max_rows, U.basis(), false);
        std::vector<FF> rows;
        if (opts.mode == Mode::Exhaustive) {
            linalg::SubspaceStream stream(ctx, k, r);
            stream.seek(lo);
            for (std::uint64_t i = lo; i < hi; ++i) {
                stream.next(rows);
                unsigned rank = sc.stack_rank(rows, r);
                unsigned inter_fp = base_rows + r * deg - rank;
                unsigned dim = inter_fp / F.h();
                ++st.enumerated;
                if (st.argmax_index == ~0ull || dim > st.max_dim) {
                    st.max_dim = dim;
                    st.argmax_index = i;
                    st.argmax_rows = rows;
                }
            }
        } else {
            for (std::uint64_t i = lo; i < hi; ++i) {
                SplitMix rng = stream_for(opts.seed, i);
                random_subspace(F, k, r, rng, rows);
                unsigned rank = sc.stack_rank(rows, r);
                unsigned inter_fp = base_rows + r * deg - rank;
                unsigned dim = inter_fp / F.h();
                ++st.enumerated;
                if (st.argmax_index == ~0ull || dim > st.max_dim) {
                    st.max_dim = dim;
                    st.argmax_index = i;
                    st.argmax_rows = rows;
                }
            }
        }
        return st;
    };
    return detail::parallel_chunks<ScanStats>(0, total, opts.workers, chunk, merge_stats);
}

std::vector<std::vector<FF>> rows_to_vectors(const std::vector<FF>& rows, unsigned r, unsigned k) {
    std::vector<std::vector<FF>> out;
    out.reserve(r);
    for (unsigned i = 0; i < r; ++i)
        out.emplace_back(rows.begin() + static_cast<std::size_t>(i) * k,
                         rows.begin() + static_cast<std::size_t>(i + 1) * k);
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// verify_scattered

OracleVerdict verify_scattered(const SequenceSpec& spec, const OracleOptions& opts) {
    const FieldCtx& F = *spec.ctx;
    OracleVerdict v;
    v.property = "scattered";
    v.mode = opts.mode;
    v.seed = opts.seed;
    v.workers = opts.workers;

    if (opts.mode == Mode::Sampled) {
        // sampled scattered = line scan: dim(U cap line) <= 1 on random lines
        auto U = seq::fq_generators(spec);
        FieldRef ctx = spec.ctx;
        std::uint64_t total = 0;
        auto st = max_intersection_scan(ctx, U, 1, opts, &total);
        v.budget = opts.samples;
        v.enumerated = st.enumerated;
        v.max_statistic = st.max_dim;
        v.pass = st.max_dim <= 1;
        v.conclusive = !v.pass;  // a sampled fail is conclusive, a pass is not
        if (!v.pass) {
            v.witness_kind = "subspace";
            v.witness = rows_to_vectors(st.argmax_rows, 1, 2 * spec.m);
        }
        return v;
    }

    // exhaustive projective fiber counting
    const unsigned m = spec.m;
    const std::uint64_t size = F.size();
    std::uint64_t count = 1;
    for (unsigned i = 0; i < m; ++i) {
        if (count > opts.point_budget / size + 1)
            throw BudgetExceeded("q^{nm} exceeds point budget");
        count *= size;
    }
    if (count > opts.point_budget) throw BudgetExceeded("q^{nm} exceeds point budget");
    v.budget = opts.point_budget;

    const unsigned k = 2 * m;
    // number of hash passes keeps resident key records bounded
    const std::uint64_t resident = std::max<std::uint64_t>(1, opts.max_resident_keys);
    unsigned passes = 1;
    while (count / passes > resident && passes < 1024) passes <<= 1;

    struct Rec {
        unsigned __int128 key;
        std::uint64_t idx;
        bool operator<(const Rec& o) const {
            return key != o.key ? key < o.key : idx < o.idx;
        }
    };
    struct PassOut {
        std::vector<Rec> recs;
    };

    std::map<std::uint64_t, std::uint64_t> hist;
    std::uint64_t bad_idx0 = ~0ull, bad_idx1 = ~0ull;
    std::uint64_t enumerated = 0;
    std::uint64_t max_fiber = 0;

    // index order is lexicographic in (x_1, ..., x_m): x_1 varies slowest
    auto decode_x = [&](std::uint64_t idx, std::vector<FF>& x) {
        for (unsigned i = m; i-- > 0;) {
            x[i] = idx % size;
            idx /= size;
        }
    };

    for (unsigned pass = 0; pass < passes; ++pass) {
        auto chunk = [&](std::uint64_t lo, std::uint64_t hi) {
            PassOut out;
            std::vector<FF> x(m), pt;
            for (std::uint64_t idx = lo; idx < hi; ++idx) {
                decode_x(idx, x);
                pt = seq::lift_point(spec, x);
                // canonicalize: scale so the first nonzero coordinate is 1
                unsigned j = 0;
                while (pt[j] == 0) ++j;  // j < m since x != 0
                FF s = F.inv(pt[j]);
                unsigned __int128 key = 0;
                for (unsigned t = k; t-- > 0;) key = key * size + F.mul(s, pt[t]);
                if (passes > 1 && (hash_u128(key) & (passes - 1)) != pass) continue;
                out.recs.push_back({key, idx});
            }
            return out;
        };
        auto merge = [](PassOut& a, PassOut&& b) {
            a.recs.insert(a.recs.end(), b.recs.begin(), b.recs.end());
        };
        PassOut out = detail::parallel_chunks<PassOut>(1, count, opts.workers, chunk, merge);
        std::sort(out.recs.begin(), out.recs.end());
        const std::uint64_t q1 = F.q() - 1;
        std::size_t i = 0;
        while (i < out.recs.size()) {
            std::size_t jj = i;
            while (jj < out.recs.size() && out.recs[jj].key == out.recs[i].key) ++jj;
            std::uint64_t len = jj - i;
            ++hist[len];
            max_fiber = std::max(max_fiber, len);
            if (len != q1 && out.recs[i].idx < bad_idx0) {
                // find two F_q-independent members deterministically
                std::vector<FF> x0(m), x1(m);
                decode_x(out.recs[i].idx, x0);
                for (std::size_t t = i + 1; t < jj; ++t) {
                    decode_x(out.recs[t].idx, x1);
                    bool multiple = false;
                    for (FF c = 1; c < size && !multiple; ++c) {
                        if (!F.in_subfield(c, F.h())) continue;
                        bool all = true;
                        for (unsigned u = 0; u < m && all; ++u)
                            all = x1[u] == F.mul(c, x0[u]);
                        multiple = all;
                    }
                    if (!multiple) {
                        bad_idx0 = out.recs[i].idx;
                        bad_idx1 = out.recs[t].idx;
                        break;
                    }
                }
            }
            i = jj;
        }
        enumerated += out.recs.size();
    }

    v.enumerated = enumerated;
    v.fiber_histogram = hist;
    v.max_statistic = static_cast<unsigned>(max_fiber);
    v.pass = bad_idx0 == ~0ull && max_fiber == F.q() - 1;
    v.conclusive = true;
    if (!v.pass && bad_idx0 != ~0ull) {
        std::vector<FF> x0(m), x1(m);
        decode_x(bad_idx0, x0);
        decode_x(bad_idx1, x1);
        v.witness_kind = "point-pair";
        v.witness = {seq::lift_point(spec, x0), seq::lift_point(spec, x1)};
    }
    return v;
}

// ---------------------------------------------------------------------------
// verify_evasive

OracleVerdict verify_evasive_u(const FieldRef& ctx, const FqSubspace& U, unsigned h, unsigned r,
                               const OracleOptions& opts) {
    const unsigned k = U.ambient_k();
    if (h < 1 || h > k) throw std::invalid_argument("verify_evasive: need 1 <= h <= k");
    OracleVerdict v;
    v.property = "evasive(" + std::to_string(h) + "," + std::to_string(r) + ")";
    v.mode = opts.mode;
    v.seed = opts.seed;
    v.workers = opts.workers;
    v.budget = opts.mode == Mode::Exhaustive ? opts.subspace_budget : opts.samples;
    std::uint64_t total = 0;
    auto st = max_intersection_scan(ctx, U, h, opts, &total);
    v.enumerated = st.enumerated;
    v.max_statistic = st.max_dim;
    v.pass = st.max_dim <= r;
    v.conclusive = opts.mode == Mode::Exhaustive || !v.pass;
    if (!v.pass) {
        v.witness_kind = "subspace";
        v.witness = rows_to_vectors(st.argmax_rows, h, k);
    }
    return v;
}

OracleVerdict verify_evasive(const SequenceSpec& spec, unsigned h, unsigned r,
                             const OracleOptions& opts) {
    return verify_evasive_u(spec.ctx, seq::fq_generators(spec), h, r, opts);
}

// ---------------------------------------------------------------------------
// verify_cutting

OracleVerdict verify_cutting_u(const FieldRef& ctx, const FqSubspace& U,
                               const OracleOptions& opts) {
    const FieldCtx& F = *ctx;
    const unsigned k = U.ambient_k();
    const unsigned deg = F.degree();
    const unsigned r = k - 1;
    const unsigned cols = k * deg;
    const unsigned max_rows = U.fp_dim() + r * deg;

    OracleVerdict v;
    v.property = "cutting";
    v.mode = opts.mode;
    v.seed = opts.seed;
    v.workers = opts.workers;

    std::uint64_t total = 0;
    if (opts.mode == Mode::Exhaustive) {
        try {
            linalg::SubspaceStream probe(ctx, k, r);
            total = probe.total_u64();
        } catch (const std::overflow_error&) {
            throw BudgetExceeded("hyperplane enumeration exceeds 2^62");
        }
        if (total > opts.subspace_budget)
            throw BudgetExceeded("hyperplane enumeration exceeds budget");
        v.budget = opts.subspace_budget;
    } else {
        total = opts.samples;
        v.budget = opts.samples;
    }

    struct CutStats {
        std::uint64_t enumerated = 0;
        std::uint64_t fail_index = ~0ull;
        std::vector<FF> fail_rows;
        unsigned fail_span = 0;
        unsigned min_span = ~0u;
    };

    auto chunk = [&](std::uint64_t lo, std::uint64_t hi) {
        CutStats st;
        ScanCtx sc;
        // doubled width for the Zassenhaus extraction: [U|U] base, [H|0] rows
        sc.init(F, k, 2 * cols, max_rows, U.basis(), true);
        std::vector<FF> rows;
        std::vector<FF> coords(k);
        std::vector<FF> span_rows;
        linalg::SubspaceStream stream(ctx, k, r);
        if (opts.mode == Mode::Exhaustive) stream.seek(lo);
        for (std::uint64_t i = lo; i < hi; ++i) {
            if (opts.mode == Mode::Exhaustive) {
                stream.next(rows);
            } else {
                SplitMix rng = stream_for(opts.seed, i);
                random_subspace(F, k, r, rng, rows);
            }
            // eliminate [H|0] rows into the doubled base; extract rows whose
            // left half is zero: their right halves form a basis of U cap H
            if (F.p() == 2) {
                sc.work2.load(sc.base2);
                for (unsigned ri = 0; ri < r; ++ri) {
                    FF mult = 1;
                    for (unsigned t = 0; t < deg; ++t) {
                        sc.flatten_scaled(rows.data() + static_cast<std::size_t>(ri) * k, mult);
                        sc.work2.add(sc.scratch2.data());
                        mult *= 2;
                    }
                }
                span_rows.clear();
                for (unsigned ri = 0; ri < sc.work2.n; ++ri) {
                    if (sc.work2.lead[ri] < cols) continue;
                    const std::uint64_t* wr = sc.work2.rows.data() +
                                              static_cast<std::size_t>(ri) * sc.work2.words;
                    for (unsigned j = 0; j < k; ++j) {
                        FF enc = 0;
                        for (unsigned t = deg; t-- > 0;) {
                            unsigned pos = cols + j * deg + t;
                            enc = (enc << 1) | ((wr[pos >> 6] >> (pos & 63)) & 1);
                        }
                        coords[j] = enc;
                    }
                    span_rows.insert(span_rows.end(), coords.begin(), coords.end());
                }
            } else {
                sc.workp.load(sc.basep);
                for (unsigned ri = 0; ri < r; ++ri) {
                    FF mult = 1;
                    for (unsigned t = 0; t < deg; ++t) {
                        sc.flatten_scaled(rows.data() + static_cast<std::size_t>(ri) * k, mult);
                        sc.workp.add(sc.scratchp.data());
                        mult *= F.p();
                    }
                }
                span_rows.clear();
                for (unsigned ri = 0; ri < sc.workp.n; ++ri) {
                    if (sc.workp.lead[ri] < cols) continue;
                    const std::uint32_t* wr =
                        sc.workp.rows.data() + static_cast<std::size_t>(ri) * sc.workp.cols;
                    for (unsigned j = 0; j < k; ++j) {
                        FF enc = 0;
                        for (unsigned t = deg; t-- > 0;) enc = enc * F.p() + wr[cols + j * deg + t];
                        coords[j] = enc;
                    }
                    span_rows.insert(span_rows.end(), coords.begin(), coords.end());
                }
            }
            unsigned span = linalg::rref_qn(F, span_rows, k);
            ++st.enumerated;
            st.min_span = std::min(st.min_span, span);
            if (span != r && i < st.fail_index) {
                st.fail_index = i;
                st.fail_rows = rows;
                st.fail_span = span;
            }
        }
        return st;
    };
    auto merge = [](CutStats& a, CutStats&& b) {
        a.enumerated += b.enumerated;
        a.min_span = std::min(a.min_span, b.min_span);
        if (b.fail_index < a.fail_index) {
            a.fail_index = b.fail_index;
            a.fail_rows = std::move(b.fail_rows);
            a.fail_span = b.fail_span;
        }
    };
    auto st = detail::parallel_chunks<CutStats>(0, total, opts.workers, chunk, merge);

    v.enumerated = st.enumerated;
    v.max_statistic = st.min_span == ~0u ? 0 : st.min_span;  // smallest span seen
    v.pass = st.fail_index == ~0ull;
    v.conclusive = opts.mode == Mode::Exhaustive || !v.pass;
    if (!v.pass) {
        v.witness_kind = "subspace";
        v.witness = rows_to_vectors(st.fail_rows, r, k);
    }
    return v;
}

OracleVerdict verify_cutting(const SequenceSpec& spec, const OracleOptions& opts) {
    return verify_cutting_u(spec.ctx, seq::fq_generators(spec), opts);
}

// ---------------------------------------------------------------------------
// second generalized weight

SecondWeightResult second_weight_u(const FieldRef& ctx, const FqSubspace& U,
                                   const OracleOptions& opts) {
    const unsigned k = U.ambient_k();
    if (k < 2) throw std::invalid_argument("second_weight: ambient dimension too small");
    SecondWeightResult out;
    std::uint64_t total = 0;
    auto st = max_intersection_scan(ctx, U, k - 2, opts, &total);
    out.scan.property = "second-weight";
    out.scan.mode = opts.mode;
    out.scan.seed = opts.seed;
    out.scan.workers = opts.workers;
    out.scan.budget = opts.mode == Mode::Exhaustive ? opts.subspace_budget : opts.samples;
    out.scan.enumerated = st.enumerated;
    out.scan.max_statistic = st.max_dim;
    out.scan.pass = true;
    out.scan.conclusive = opts.mode == Mode::Exhaustive;
    if (st.argmax_index != ~0ull) {
        out.scan.witness_kind = "subspace";
        out.scan.witness = rows_to_vectors(st.argmax_rows, k - 2, k);
    }
    out.value = U.fq_dim() - st.max_dim;
    out.exact = opts.mode == Mode::Exhaustive;
    return out;
}

SecondWeightResult second_weight(const SequenceSpec& spec, const OracleOptions& opts) {
    return second_weight_u(spec.ctx, seq::fq_generators(spec), opts);
}

}  // namespace scatterlab::oracle
