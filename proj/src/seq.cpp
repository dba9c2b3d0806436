#include "scatterlab/seq.hpp"

#include <stdexcept>

namespace scatterlab::seq {

SequenceSpec::SequenceSpec(FieldRef c, unsigned m_, unsigned I_, unsigned J_,
                           std::vector<FF> alphas_)
    : ctx(std::move(c)), m(m_), I(I_), J(J_), alphas(std::move(alphas_)) {
    if (!ctx) throw std::invalid_argument("SequenceSpec: null context");
    if (m < 3) throw std::invalid_argument("SequenceSpec: family requires m >= 3");
    if (!(I < J && J < ctx->n()))
        throw std::invalid_argument("SequenceSpec: need 0 <= I < J < n");
    if (alphas.size() != m) throw std::invalid_argument("SequenceSpec: need m alphas");
    for (FF a : alphas) {
        if (a == 0) throw std::invalid_argument("SequenceSpec: alphas must be nonzero");
        if (!ctx->is_element(a)) throw std::invalid_argument("SequenceSpec: alpha out of field");
    }
}

FF eval_f(const SequenceSpec& spec, unsigned i, const std::vector<FF>& x) {
    if (i < 1 || i > spec.m) throw std::invalid_argument("eval_f: index out of range");
    const FieldCtx& F = *spec.ctx;
    FF t1 = F.frobenius(x[spec.wrap(i) - 1], spec.I);
    FF t2 = F.mul(spec.alpha(i + 1), F.frobenius(x[spec.wrap(i + 1) - 1], spec.J));
    return F.add(t1, t2);
}

std::vector<FF> lift_point(const SequenceSpec& spec, const std::vector<FF>& x) {
    if (x.size() != spec.m) throw std::invalid_argument("lift_point: x must have length m");
    std::vector<FF> v(2 * spec.m);
    for (unsigned i = 0; i < spec.m; ++i) v[i] = x[i];
    for (unsigned i = 1; i <= spec.m; ++i) v[spec.m + i - 1] = eval_f(spec, i, x);
    return v;
}

bool membership(const SequenceSpec& spec, const std::vector<FF>& v) {
    if (v.size() != 2 * spec.m) throw std::invalid_argument("membership: vector length != 2m");
    const FieldCtx& F = *spec.ctx;
    for (unsigned i = 1; i <= spec.m; ++i) {
        FF t1 = F.frobenius(v[i - 1], spec.I);
        FF t2 = F.mul(spec.alpha(i + 1), F.frobenius(v[spec.wrap(i + 1) - 1], spec.J));
        if (v[spec.m + i - 1] != F.add(t1, t2)) return false;
    }
    return true;
}

linalg::FqSubspace fq_generators(const SequenceSpec& spec) {
    const FieldCtx& F = *spec.ctx;
    const unsigned deg = F.degree();
    const unsigned k = 2 * spec.m;
    linalg::FpMatrix gens(F.p(), spec.m * deg, k * deg);
    std::vector<FF> x(spec.m, 0);
    unsigned row = 0;
    for (unsigned i = 0; i < spec.m; ++i) {
        for (unsigned t = 0; t < deg; ++t) {
            FF b = 1;
            for (unsigned s = 0; s < t; ++s) b *= F.p();  // basis element x^t
            x.assign(spec.m, 0);
            x[i] = b;
            auto v = lift_point(spec, x);
            linalg::flatten_into(F, v.data(), k, gens, row++);
        }
    }
    linalg::FqSubspace U(spec.ctx, k, gens);
    if (U.fp_dim() != spec.m * deg)
        throw std::logic_error("fq_generators: rank defect (broken context)");
    return U;
}

FF invariant_K(const SequenceSpec& spec) {
    const FieldCtx& F = *spec.ctx;
    const unsigned K = spec.K();
    FF num = F.one();
    // a_3 * a_4^{q^K} * ... * a_m^{q^{(m-3)K}}
    for (unsigned t = 0; t + 3 <= spec.m; ++t)
        num = F.mul(num, F.frobenius(spec.alpha(3 + t), static_cast<long long>(t) * K));
    // * a_1^{q^{(m-2)K}}
    num = F.mul(num, F.frobenius(spec.alpha(1), static_cast<long long>(spec.m - 2) * K));
    FF den = F.pow(spec.alphas[1], gf::ExpSpec::cyc(K, spec.m - 1));
    return F.div(num, den);
}

FF invariant_Pi(const SequenceSpec& spec, unsigned i) {
    if (i < 1 || i > spec.m) throw std::invalid_argument("invariant_Pi: index out of range");
    const FieldCtx& F = *spec.ctx;
    const unsigned K = spec.K();
    FF prod = F.one();
    for (unsigned t = 0; t < spec.m; ++t) {
        long long e = static_cast<long long>(spec.m - 1 - t) * K;
        prod = F.mul(prod, F.frobenius(spec.alpha(static_cast<long long>(i) - t), e));
    }
    return prod;
}

FF delta_value(const SequenceSpec& spec) { return invariant_Pi(spec, 2); }

SequenceSpec lift_spec(const SequenceSpec& spec, unsigned ell) {
    if (ell == 0) throw std::invalid_argument("lift_spec: ell must be >= 1");
    const FieldCtx& F = *spec.ctx;
    auto ext = FieldCtx::create_builtin(F.p(), F.h(), F.n() * ell);
    FF root = gf::find_embedding_root(F, *ext);
    std::vector<FF> alphas;
    alphas.reserve(spec.m);
    for (FF a : spec.alphas) alphas.push_back(gf::embed(F, a, *ext, root));
    return SequenceSpec(std::move(ext), spec.m, spec.I, spec.J, std::move(alphas));
}

}  // namespace scatterlab::seq
