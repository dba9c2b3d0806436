#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "scatterlab/linalg.hpp"

using namespace scatterlab;
using namespace scatterlab::linalg;
using gf::FF;
using gf::FieldCtx;

namespace {

FpMatrix random_matrix(std::uint64_t p, unsigned rows, unsigned cols, std::mt19937_64& rng) {
    FpMatrix m(p, rows, cols);
    for (unsigned r = 0; r < rows; ++r)
        for (unsigned c = 0; c < cols; ++c)
            m.set(r, c, static_cast<std::uint32_t>(rng() % p));
    return m;
}

// random invertible row mixing: returns a matrix with the same row space
FpMatrix scramble(const FpMatrix& m, std::mt19937_64& rng) {
    FpMatrix out = m;
    const std::uint64_t p = m.p();
    for (int pass = 0; pass < 3; ++pass) {
        for (unsigned r = 0; r < m.rows(); ++r) {
            unsigned s = static_cast<unsigned>(rng() % m.rows());
            if (s == r) continue;
            std::uint32_t f = static_cast<std::uint32_t>(1 + rng() % (p - 1));
            for (unsigned c = 0; c < m.cols(); ++c)
                out.set(r, c,
                        static_cast<std::uint32_t>((out.get(r, c) + f * out.get(s, c)) % p));
        }
    }
    return out;
}

}  // namespace

TEST_CASE("rank examples") {
    for (std::uint64_t p : {2ull, 3ull}) {
        FpMatrix z(p, 4, 5);
        CHECK(z.rank() == 0);
        CHECK(FpMatrix::identity(p, 4).rank() == 4);
    }
    // over F_2: rows {110, 011, 101} -> rank 2 (third = sum of first two)
    FpMatrix m(2, 3, 3);
    m.set(0, 0, 1);
    m.set(0, 1, 1);
    m.set(1, 1, 1);
    m.set(1, 2, 1);
    m.set(2, 0, 1);
    m.set(2, 2, 1);
    CHECK(m.rank() == 2);
}

TEST_CASE("rref canonicality") {
    std::mt19937_64 rng(99);
    for (std::uint64_t p : {2ull, 3ull, 5ull}) {
        for (int iter = 0; iter < 30; ++iter) {
            FpMatrix a = random_matrix(p, 4, 7, rng);
            FpMatrix b = scramble(a, rng);
            CHECK(a.rref() == b.rref());
            CHECK(a.rref().rref() == a.rref());  // idempotent
        }
    }
}

TEST_CASE("dimension formula on random pairs") {
    std::mt19937_64 rng(1234);
    for (std::uint64_t p : {2ull, 3ull}) {
        for (int iter = 0; iter < 40; ++iter) {
            FpMatrix a = random_matrix(p, 3, 8, rng);
            FpMatrix b = random_matrix(p, 4, 8, rng);
            unsigned da = a.rank(), db = b.rank();
            unsigned dsum = FpMatrix::vstack(a, b).rank();
            unsigned dint = FpMatrix::row_space_intersection(a, b).rows();
            CHECK(dsum + dint == da + db);
        }
    }
}

TEST_CASE("intersection basis really lies in both spaces") {
    std::mt19937_64 rng(55);
    FpMatrix a = random_matrix(2, 4, 10, rng);
    FpMatrix b = random_matrix(2, 5, 10, rng);
    FpMatrix inter = FpMatrix::row_space_intersection(a, b);
    for (unsigned r = 0; r < inter.rows(); ++r) {
        // adding the row to either space must not increase rank
        FpMatrix row(2, 1, 10);
        for (unsigned c = 0; c < 10; ++c) row.set(0, c, inter.get(r, c));
        CHECK(FpMatrix::vstack(a, row).rank() == a.rank());
        CHECK(FpMatrix::vstack(b, row).rank() == b.rank());
    }
}

TEST_CASE("bit eliminator matches FpMatrix rank") {
    std::mt19937_64 rng(7);
    for (int iter = 0; iter < 50; ++iter) {
        unsigned rows = 1 + static_cast<unsigned>(rng() % 12);
        unsigned cols = 1 + static_cast<unsigned>(rng() % 60);
        FpMatrix m = random_matrix(2, rows, cols, rng);
        BitEliminator el((cols + 63) / 64, rows);
        for (unsigned r = 0; r < rows; ++r) el.add_row(m.row_bits(r));
        CHECK(el.rank() == m.rank());
    }
}

TEST_CASE("gen eliminator matches FpMatrix rank") {
    std::mt19937_64 rng(8);
    for (int iter = 0; iter < 50; ++iter) {
        unsigned rows = 1 + static_cast<unsigned>(rng() % 8);
        unsigned cols = 1 + static_cast<unsigned>(rng() % 12);
        FpMatrix m = random_matrix(3, rows, cols, rng);
        GenEliminator el(3, cols, rows);
        std::vector<std::uint32_t> buf(cols);
        for (unsigned r = 0; r < rows; ++r) {
            for (unsigned c = 0; c < cols; ++c) buf[c] = m.get(r, c);
            el.add_row(buf.data());
        }
        CHECK(el.rank() == m.rank());
    }
}

TEST_CASE("flatten round trip") {
    for (auto [p, h, n] : std::vector<std::tuple<std::uint64_t, unsigned, unsigned>>{
             {2, 1, 3}, {3, 1, 2}, {2, 2, 2}}) {
        auto F = FieldCtx::create_builtin(p, h, n);
        std::mt19937_64 rng(p * 100 + n);
        const unsigned k = 4;
        for (int iter = 0; iter < 20; ++iter) {
            std::vector<FF> v(k);
            for (auto& x : v) x = rng() % F->size();
            FpMatrix m(F->p(), 1, k * F->degree());
            flatten_into(*F, v.data(), k, m, 0);
            CHECK(unflatten(*F, m, 0, k) == v);
        }
    }
}

TEST_CASE("FqnSubspace span and equality") {
    auto F = FieldCtx::create_builtin(2, 1, 3);
    FF g = F->gen_x();
    // span{v, lambda v} is 1-dimensional
    std::vector<FF> v{1, g, F->add(g, 1)};
    std::vector<FF> gv{g, F->mul(g, g), F->mul(g, F->add(g, 1))};
    auto s = FqnSubspace::span(F, 3, {v, gv});
    CHECK(s.dim() == 1);
    // span of a basis of H equals H
    auto h1 = FqnSubspace::span(F, 3, {{1, 0, g}, {0, 1, 1}});
    auto h2 = FqnSubspace::span(F, 3, {{1, 1, F->add(g, 1)}, {0, 1, 1}});
    CHECK(span_equal(h1, h2));
    CHECK(h1.dim() == 2);
}

TEST_CASE("FqSubspace intersect_dim") {
    auto F = FieldCtx::create_builtin(2, 1, 3);
    // complementary coordinate blocks in F_8^2
    auto a = FqnSubspace::span(F, 2, {{1, 0}}).to_fq_subspace();
    auto b = FqnSubspace::span(F, 2, {{0, 1}}).to_fq_subspace();
    CHECK(a.fq_dim() == 3);
    CHECK(FqSubspace::intersect_dim_fq(a, b) == 0);
    CHECK(FqSubspace::intersect_dim_fq(a, a) == a.fq_dim());
}

TEST_CASE("expanded F_qn subspace has F_p dim r*h*n") {
    auto F = FieldCtx::create_builtin(2, 2, 2);  // q=4, n=2, deg=4
    std::mt19937_64 rng(3);
    for (int iter = 0; iter < 10; ++iter) {
        std::vector<std::vector<FF>> vecs;
        for (int i = 0; i < 2; ++i) {
            std::vector<FF> v(3);
            for (auto& x : v) x = rng() % F->size();
            vecs.push_back(v);
        }
        auto s = FqnSubspace::span(F, 3, vecs);
        auto fq = s.to_fq_subspace();
        CHECK(fq.fp_dim() == s.dim() * F->degree());
        CHECK(fq.fq_dim() == s.dim() * F->n());
    }
}

TEST_CASE("subspace stream counts match gaussian binomials") {
    // k=2, r=1, q^n=8 -> 9 lines
    auto F8 = FieldCtx::create_builtin(2, 1, 3);
    SubspaceStream s(F8, 2, 1);
    CHECK(s.total_u64() == 9);
    CHECK(s.total() == 9);

    // r=0: exactly the zero space
    SubspaceStream s0(F8, 3, 0);
    CHECK(s0.total_u64() == 1);

    // exhaustive small sweep: every field size <= 9, k <= 4
    for (auto [p, h, n] : std::vector<std::tuple<std::uint64_t, unsigned, unsigned>>{
             {2, 1, 1}, {3, 1, 1}, {2, 2, 1}, {5, 1, 1}, {7, 1, 1}, {2, 1, 3}, {3, 1, 2}}) {
        auto F = FieldCtx::create_builtin(p, h, n);
        for (unsigned k = 1; k <= 4; ++k) {
            for (unsigned r = 0; r <= k; ++r) {
                SubspaceStream st(F, k, r);
                std::uint64_t count = 0;
                std::vector<FF> rows;
                while (st.next(rows)) ++count;
                CHECK(count == st.total_u64());
                CHECK(cpp_int(count) == gaussian_binomial(cpp_int(F->size()), k, r));
            }
        }
    }
}

TEST_CASE("subspace stream yields distinct canonical subspaces") {
    auto F = FieldCtx::create_builtin(2, 1, 2);  // F_4
    SubspaceStream st(F, 3, 2);
    std::vector<std::vector<FF>> seen;
    std::vector<FF> rows;
    while (st.next(rows)) {
        // must already be canonical RREF
        std::vector<FF> copy = rows;
        unsigned r = rref_qn(*F, copy, 3);
        CHECK(r == 2);
        copy.resize(2 * 3);
        CHECK(copy == rows);
        seen.push_back(rows);
    }
    std::sort(seen.begin(), seen.end());
    CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
    CHECK(seen.size() == st.total_u64());
}

TEST_CASE("subspace stream seek partitions agree with full scan") {
    auto F = FieldCtx::create_builtin(2, 1, 2);
    SubspaceStream st(F, 4, 2);
    std::vector<std::vector<FF>> full;
    std::vector<FF> rows;
    while (st.next(rows)) full.push_back(rows);

    std::vector<std::vector<FF>> pieces;
    const std::uint64_t total = st.total_u64();
    for (std::uint64_t lo : {std::uint64_t(0), total / 3, 2 * total / 3}) {
        std::uint64_t hi = lo == 2 * total / 3 ? total : (lo == 0 ? total / 3 : 2 * total / 3);
        SubspaceStream part(F, 4, 2);
        part.seek(lo);
        for (std::uint64_t i = lo; i < hi; ++i) {
            REQUIRE(part.next(rows));
            pieces.push_back(rows);
        }
    }
    CHECK(pieces == full);
}

TEST_CASE("gaussian binomial identity for k=6, r=2 over F_8") {
    cpp_int expect = (cpp_int(262143) * 32767) / (63 * 7);  // (8^6-1)(8^5-1)/((8^2-1)(8-1))
    CHECK(gaussian_binomial(cpp_int(8), 6, 2) == expect);
    CHECK(gaussian_binomial(cpp_int(8), 6, 4) == expect);  // symmetry
}
