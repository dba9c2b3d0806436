#include "scatterlab/equiv.hpp"

#include <numeric>

#include "scatterlab/linalg.hpp"

namespace scatterlab::equiv {

using gf::ExpSpec;

const char* to_string(EquivKind k) {
    switch (k) {
        case EquivKind::Equivalent: return "equivalent";
        case EquivKind::InequivalentByCriterion: return "inequivalent-by-criterion";
        case EquivKind::InequivalentByIndex: return "inequivalent-by-index";
        case EquivKind::Deferred: return "deferred";
    }
    return "?";
}

namespace {

void require_shared_ctx(const SequenceSpec& A, const SequenceSpec& B) {
    const FieldCtx& FA = *A.ctx;
    const FieldCtx& FB = *B.ctx;
    if (FA.p() != FB.p() || FA.h() != FB.h() || FA.n() != FB.n() ||
        FA.modulus() != FB.modulus() || A.m != B.m)
        throw std::invalid_argument("equiv: specs must share context and order m");
}

bool in_theorem_range(const SequenceSpec& A) {
    return 2 * A.J < A.ctx->n() && std::gcd<std::uint64_t>(A.I, A.J) == 1;
}

std::uint64_t modinv_u64(std::uint64_t a, std::uint64_t m) {
    long long t = 0, newt = 1;
    long long r = static_cast<long long>(m), newr = static_cast<long long>(a % m);
    while (newr != 0) {
        long long qq = r / newr;
        t -= qq * newt;
        std::swap(t, newt);
        r -= qq * newr;
        std::swap(r, newr);
    }
    if (r != 1) throw std::logic_error("modinv: not invertible");
    if (t < 0) t += static_cast<long long>(m);
    return static_cast<std::uint64_t>(t);
}

}  // namespace

EquivVerdict index_verdict(const SequenceSpec& A, const SequenceSpec& B) {
    require_shared_ctx(A, B);
    const unsigned n = A.ctx->n();
    // standing hypotheses of the distinct-index theorem
    if (A.J + B.J >= n)
        throw NotApplicableError("index theorem requires J + J0 < n (got " +
                                 std::to_string(A.J + B.J) + " >= " + std::to_string(n) + ")");
    EquivVerdict v;
    if (A.I != B.I || A.J != B.J) {
        v.kind = EquivKind::InequivalentByIndex;
    } else {
        v.kind = EquivKind::Deferred;
    }
    v.theorem_in_range = true;
    return v;
}

std::vector<FF> c_invariants(const SequenceSpec& A, const SequenceSpec& B, unsigned e) {
    require_shared_ctx(A, B);
    const FieldCtx& F = *A.ctx;
    const unsigned m = A.m, K = A.K();
    std::vector<FF> out(m);
    for (unsigned delta = 1; delta <= m; ++delta) {
        FF c = F.one();
        for (unsigned t = 0; t < m; ++t) {
            FF top = B.alpha(static_cast<long long>(delta) + 1 + t);
            FF bot = F.p_power(A.alpha(2 + t), e);  // A_j = alpha_j^sigma
            FF ratio = F.div(top, bot);
            c = F.mul(c, F.frobenius(ratio, static_cast<long long>(t) * K));
        }
        out[delta - 1] = c;
    }
    return out;
}

std::vector<FF> apply_semilinear(const SequenceSpec& A, const std::vector<FF>& M, unsigned e,
                                 const std::vector<FF>& v) {
    const FieldCtx& F = *A.ctx;
    const unsigned k = 2 * A.m;
    if (M.size() != static_cast<std::size_t>(k) * k || v.size() != k)
        throw std::invalid_argument("apply_semilinear: shape mismatch");
    std::vector<FF> sv(k), out(k, 0);
    for (unsigned j = 0; j < k; ++j) sv[j] = F.p_power(v[j], e);
    for (unsigned i = 0; i < k; ++i) {
        FF acc = 0;
        for (unsigned j = 0; j < k; ++j)
            acc = F.add(acc, F.mul(M[static_cast<std::size_t>(i) * k + j], sv[j]));
        out[i] = acc;
    }
    return out;
}

bool verify_witness(const SequenceSpec& A, const SequenceSpec& B, unsigned e,
                    const std::vector<FF>& M) {
    const FieldCtx& F = *A.ctx;
    const unsigned k = 2 * A.m;
    // invertibility
    std::vector<FF> copy = M;
    if (linalg::rref_qn(F, copy, k) != k) return false;
    // all F_p-generators of U_A map into U_B
    auto UA = seq::fq_generators(A);
    for (unsigned r = 0; r < UA.fp_dim(); ++r) {
        auto u = linalg::unflatten(F, UA.basis(), r, k);
        auto w = apply_semilinear(A, M, e, u);
        if (!seq::membership(B, w)) return false;
    }
    return true;
}

std::vector<FF> build_and_verify_witness(const SequenceSpec& A, const SequenceSpec& B,
                                         unsigned e, unsigned delta) {
    require_shared_ctx(A, B);
    if (A.I != B.I || A.J != B.J)
        throw std::invalid_argument("build_and_verify_witness: specs must share (I,J)");
    const FieldCtx& F = *A.ctx;
    if (!F.has_dlog())
        throw std::runtime_error(
            "witness construction unsupported for fields beyond 2^20 elements");
    const unsigned m = A.m, k = 2 * m, K = A.K();
    const std::uint64_t N = F.group_order();

    FF c = c_invariants(A, B, e)[delta - 1];
    // seed: s^{q^{mK}-1} = (c^{-1})^{q^{-I}}
    FF target = F.frobenius(F.inv(c), -static_cast<long long>(A.I));
    std::uint64_t D = ExpSpec::qpow_minus1(static_cast<std::uint64_t>(m) * K).eval_mod(F.q(), N);
    FF s;
    if (D == 0) {
        if (target != F.one())
            throw std::logic_error("witness seed: power test contradicted (internal)");
        s = F.one();
    } else {
        std::uint64_t g = std::gcd(D, N);
        std::uint64_t L = F.dlog(target);
        if (L % g != 0)
            throw std::logic_error("witness seed: power test contradicted (internal)");
        std::uint64_t t = gf::mulmod_u64(L / g, modinv_u64(D / g, N / g), N / g);
        s = F.from_dlog(t);
    }

    // fill the cyclic diagonal of the top-left block P and mirror it into
    // the bottom-right block Q = P^{q^I}; all other entries stay zero
    std::vector<FF> M(static_cast<std::size_t>(k) * k, 0);
    FF cur = s;
    unsigned row = delta, col = 1;  // 1-based in the block
    for (unsigned step = 0; step < m; ++step) {
        M[static_cast<std::size_t>(row - 1) * k + (col - 1)] = cur;
        M[static_cast<std::size_t>(m + row - 1) * k + (m + col - 1)] = F.frobenius(cur, A.I);
        // a_{(row+1, col+1)} = [a_{(row,col)} * (A_{col+1}/b_{row+1})^{q^{-I}}]^{q^{-K}}
        FF ratio = F.div(F.p_power(A.alpha(static_cast<long long>(col) + 1), e),
                         B.alpha(static_cast<long long>(row) + 1));
        FF nxt = F.mul(cur, F.frobenius(ratio, -static_cast<long long>(A.I)));
        nxt = F.frobenius(nxt, -static_cast<long long>(K));
        cur = nxt;
        row = A.wrap(static_cast<long long>(row) + 1);
        col = A.wrap(static_cast<long long>(col) + 1);
    }
    if (cur != s) throw std::logic_error("witness diagonal did not close (internal)");

    if (!verify_witness(A, B, e, M))
        throw std::runtime_error(
            "witness verification failed: constructed matrix does not map U_A into U_B "
            "(falsification candidate)");
    return M;
}

EquivVerdict equivalence_criterion(const SequenceSpec& A, const SequenceSpec& B) {
    require_shared_ctx(A, B);
    if (A.I != B.I || A.J != B.J)
        throw std::invalid_argument("equivalence_criterion: specs must share (I,J)");
    const FieldCtx& F = *A.ctx;
    const unsigned m = A.m;
    const unsigned hn = F.degree();
    auto D = ExpSpec::qpow_minus1(static_cast<std::uint64_t>(m) * A.K());

    EquivVerdict v;
    v.theorem_in_range = in_theorem_range(A);
    v.kind = EquivKind::InequivalentByCriterion;
    for (unsigned e = 0; e < hn; ++e) {
        auto cs = c_invariants(A, B, e);
        for (unsigned delta = 1; delta <= m; ++delta) {
            CEntry entry;
            entry.e = e;
            entry.delta = delta;
            entry.value = cs[delta - 1];
            entry.is_power = F.is_dth_power(entry.value, D);
            v.table.push_back(entry);
            if (entry.is_power && v.kind != EquivKind::Equivalent) {
                try {
                    auto M = build_and_verify_witness(A, B, e, delta);
                    v.kind = EquivKind::Equivalent;
                    v.e = e;
                    v.delta = delta;
                    v.witness_matrix = std::move(M);
                    v.witness_verified = true;
                } catch (const std::logic_error&) {
                    ++v.witness_failures;
                } catch (const std::runtime_error&) {
                    ++v.witness_failures;
                }
            }
        }
    }
    return v;
}

EquivVerdict are_equivalent(const SequenceSpec& A, const SequenceSpec& B) {
    require_shared_ctx(A, B);
    if (A.I != B.I || A.J != B.J)
        throw std::invalid_argument("are_equivalent: specs must share (I,J)");
    if (!in_theorem_range(A))
        throw NotApplicableError(
            "equivalence criterion requires J < n/2 and gcd(I,J) = 1; instance outside the "
            "theorem range");
    return equivalence_criterion(A, B);
}

ClassCount count_inequivalent(const FieldRef& ctx, unsigned m, unsigned I, unsigned J,
                              std::uint64_t sweep_budget) {
    ClassCount out;
    SequenceSpec probe(ctx, m, I, J, std::vector<FF>(m, 1));
    out.theorem_in_range = in_theorem_range(probe);
    out.bound = criteria::inequiv_lower_bound(*ctx, m, I, J).value;
    const std::uint64_t total = std::min(criteria::tuple_count(*ctx, m), sweep_budget);
    std::vector<SequenceSpec> reps;
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        auto alphas = criteria::tuple_at(*ctx, m, idx);
        SequenceSpec spec(ctx, m, I, J, alphas);
        ++out.tuples_swept;
        if (criteria::scattered_criterion(spec).verdict != criteria::Verdict::Guaranteed)
            continue;
        if (!criteria::pi_conditions(spec).all_delta) continue;
        ++out.criterion_passing;
        bool merged = false;
        for (const auto& rep : reps) {
            auto v = equivalence_criterion(rep, spec);
            if (v.kind == EquivKind::Equivalent && v.witness_verified) {
                merged = true;
                break;
            }
        }
        if (!merged) {
            reps.push_back(spec);
            out.representatives.push_back(alphas);
        }
    }
    out.classes_found = reps.size();
    return out;
}

}  // namespace scatterlab::equiv
