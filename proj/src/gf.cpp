#include "scatterlab/gf.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace scatterlab::gf {

// ---------------------------------------------------------------------------
// integer helpers

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    if (m == 1) return 0;
    std::uint64_t r = 1;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}

bool is_prime_u64(std::uint64_t v) {
    if (v < 2) return false;
    for (std::uint64_t d : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull}) {
        if (v % d == 0) return v == d;
    }
    for (std::uint64_t d = 29; d * d <= v; d += 2) {
        if (v % d == 0) return false;
    }
    return true;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t v) {
    std::vector<std::uint64_t> fs;
    for (std::uint64_t d = 2; d * d <= v; d += (d == 2 ? 1 : 2)) {
        if (v % d == 0) {
            fs.push_back(d);
            while (v % d == 0) v /= d;
        }
    }
    if (v > 1) fs.push_back(v);
    return fs;
}

// ---------------------------------------------------------------------------
// ExpSpec

ExpSpec ExpSpec::integer(std::uint64_t v) {
    ExpSpec e;
    e.kind = Kind::Int;
    e.a = v;
    return e;
}

ExpSpec ExpSpec::cyc(std::uint64_t a, std::uint64_t b) {
    if (a == 0) throw std::invalid_argument("ExpSpec::cyc: zero subscript");
    ExpSpec e;
    e.kind = Kind::Cyc;
    e.a = a;
    e.b = b;
    return e;
}

ExpSpec ExpSpec::qpow_minus1(std::uint64_t a) {
    ExpSpec e;
    e.kind = Kind::QPowMinus1;
    e.a = a;
    return e;
}

ExpSpec ExpSpec::prod(std::vector<ExpSpec> terms) {
    ExpSpec e;
    e.kind = Kind::Prod;
    e.terms = std::move(terms);
    return e;
}

ExpSpec ExpSpec::sum(std::vector<ExpSpec> terms) {
    ExpSpec e;
    e.kind = Kind::Sum;
    e.terms = std::move(terms);
    return e;
}

namespace {

// (1 + t + t^2 + ... + t^{l-1} mod M, t^l mod M)
std::pair<std::uint64_t, std::uint64_t> geom_sum_mod(std::uint64_t t, std::uint64_t l,
                                                     std::uint64_t M) {
    if (l == 0) return {0, 1 % M};
    if (l == 1) return {1 % M, t % M};
    auto [s, tp] = geom_sum_mod(t, l / 2, M);
    // S(2k) = S(k) * (1 + t^k); t^{2k} = (t^k)^2
    std::uint64_t s2 = mulmod_u64(s, (1 + tp) % M, M);
    std::uint64_t tp2 = mulmod_u64(tp, tp, M);
    if (l & 1) {
        s2 = (s2 + tp2) % M;
        tp2 = mulmod_u64(tp2, t % M, M);
    }
    return {s2, tp2};
}

}  // namespace

std::uint64_t ExpSpec::eval_mod(std::uint64_t q, std::uint64_t M) const {
    if (M == 0) throw std::invalid_argument("ExpSpec::eval_mod: modulus must be >= 1");
    switch (kind) {
        case Kind::Int:
            return a % M;
        case Kind::Cyc:
            // (q^{ab}-1)/(q^a-1) = 1 + q^a + ... + q^{a(b-1)}, evaluated as the
            // geometric sum so no modular division is needed.
            return geom_sum_mod(powmod_u64(q % M, a, M), b, M).first;
        case Kind::QPowMinus1: {
            std::uint64_t v = powmod_u64(q % M, a, M);
            return (v + M - 1 % M) % M;
        }
        case Kind::Prod: {
            std::uint64_t r = 1 % M;
            for (const auto& t : terms) r = mulmod_u64(r, t.eval_mod(q, M), M);
            return r;
        }
        case Kind::Sum: {
            std::uint64_t r = 0;
            for (const auto& t : terms) r = (r + t.eval_mod(q, M)) % M;
            return r;
        }
    }
    throw std::logic_error("ExpSpec: bad kind");
}

// ---------------------------------------------------------------------------
// dense polynomial arithmetic over F_p (bootstrap path, used for modulus
// validation and table construction)

namespace {

using Poly = std::vector<std::uint32_t>;  // lowest degree first

void trim(Poly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

Poly poly_mul(const Poly& f, const Poly& g, std::uint64_t p) {
    if (f.empty() || g.empty()) return {};
    Poly r(f.size() + g.size() - 1, 0);
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (!f[i]) continue;
        for (std::size_t j = 0; j < g.size(); ++j) {
            r[i + j] = static_cast<std::uint32_t>(
                (r[i + j] + static_cast<std::uint64_t>(f[i]) * g[j]) % p);
        }
    }
    return r;
}

// f mod m, m monic
Poly poly_mod(Poly f, const Poly& m, std::uint64_t p) {
    const std::size_t dm = m.size() - 1;
    trim(f);
    while (f.size() > dm) {
        std::uint64_t c = f.back();
        std::size_t shift = f.size() - 1 - dm;
        for (std::size_t i = 0; i <= dm; ++i) {
            std::uint64_t sub = (c * m[i]) % p;
            std::uint64_t cur = f[shift + i];
            f[shift + i] = static_cast<std::uint32_t>((cur + p - sub) % p);
        }
        trim(f);
    }
    return f;
}

Poly poly_powmod(Poly base, std::uint64_t e, const Poly& m, std::uint64_t p) {
    Poly r{1};
    base = poly_mod(std::move(base), m, p);
    while (e) {
        if (e & 1) r = poly_mod(poly_mul(r, base, p), m, p);
        base = poly_mod(poly_mul(base, base, p), m, p);
        e >>= 1;
    }
    return r;
}

Poly poly_sub(Poly f, const Poly& g, std::uint64_t p) {
    if (f.size() < g.size()) f.resize(g.size(), 0);
    for (std::size_t i = 0; i < g.size(); ++i)
        f[i] = static_cast<std::uint32_t>((f[i] + p - g[i]) % p);
    trim(f);
    return f;
}

Poly poly_gcd(Poly f, Poly g, std::uint64_t p) {
    trim(f);
    trim(g);
    while (!g.empty()) {
        // make g monic
        std::uint64_t lead = g.back();
        if (lead != 1) {
            std::uint64_t il = powmod_u64(lead, p - 2, p);
            for (auto& c : g) c = static_cast<std::uint32_t>((c * il) % p);
        }
        Poly r = poly_mod(f, g, p);
        f = std::move(g);
        g = std::move(r);
    }
    return f;
}

// x^{p^k} mod m by repeated p-th powering
Poly x_pk_mod(unsigned k, const Poly& m, std::uint64_t p) {
    Poly t{0, 1};  // x
    for (unsigned i = 0; i < k; ++i) t = poly_powmod(t, p, m, p);
    return t;
}

}  // namespace

bool is_irreducible_mod_p(std::uint64_t p, const std::vector<std::uint32_t>& poly) {
    Poly m = poly;
    trim(m);
    if (m.size() < 2) return false;
    if (m.back() != 1) return false;  // monic only
    const unsigned d = static_cast<unsigned>(m.size() - 1);
    if (d == 1) return true;
    // x^{p^d} == x (mod m), and gcd(x^{p^{d/r}} - x, m) = 1 for prime r | d
    Poly xq = x_pk_mod(d, m, p);
    Poly x{0, 1};
    if (poly_sub(xq, x, p) != Poly{}) return false;
    for (std::uint64_t r : prime_factors(d)) {
        Poly t = x_pk_mod(static_cast<unsigned>(d / r), m, p);
        Poly g = poly_gcd(poly_sub(std::move(t), x, p), m, p);
        if (g.size() != 1) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// FieldCtx

namespace {

constexpr std::uint64_t kMaxFieldBits = 62;
constexpr std::uint64_t kDlogLimit = 1ull << 20;

std::uint64_t checked_pow(std::uint64_t b, unsigned e, const char* what) {
    std::uint64_t r = 1;
    for (unsigned i = 0; i < e; ++i) {
        if (r > (1ull << kMaxFieldBits) / b)
            throw std::invalid_argument(std::string(what) + ": field too large");
        r *= b;
    }
    return r;
}

}  // namespace

FieldRef FieldCtx::create(std::uint64_t p, unsigned h, unsigned n,
                          std::vector<std::uint32_t> modulus) {
    if (!is_prime_u64(p)) throw std::invalid_argument("FieldCtx: p is not prime");
    if (p > 0xffff) throw std::invalid_argument("FieldCtx: p > 2^16 unsupported");
    if (h < 1 || n < 1) throw std::invalid_argument("FieldCtx: h and n must be >= 1");
    const unsigned deg = h * n;
    if (modulus.size() != deg + 1)
        throw std::invalid_argument("FieldCtx: modulus degree must equal h*n");
    for (auto c : modulus)
        if (c >= p) throw std::invalid_argument("FieldCtx: modulus coefficient out of range");
    if (modulus.back() != 1) throw std::invalid_argument("FieldCtx: modulus must be monic");
    if (!is_irreducible_mod_p(p, modulus))
        throw std::invalid_argument("FieldCtx: modulus is reducible over F_p");

    auto ctx = std::shared_ptr<FieldCtx>(new FieldCtx());
    ctx->p_ = p;
    ctx->h_ = h;
    ctx->n_ = n;
    ctx->deg_ = deg;
    ctx->q_ = checked_pow(p, h, "FieldCtx");
    ctx->size_ = checked_pow(p, deg, "FieldCtx");
    ctx->mod_ = std::move(modulus);
    ctx->p2_ = (p == 2);
    if (ctx->p2_) {
        std::uint64_t bits = 0;
        for (unsigned i = 0; i < deg; ++i)
            if (ctx->mod_[i]) bits |= 1ull << i;
        ctx->modbits_ = bits;
    }
    ctx->build_tables();
    return ctx;
}

FieldRef FieldCtx::create_builtin(std::uint64_t p, unsigned h, unsigned n) {
    return create(p, h, n, builtin_modulus(p, h * n));
}

FF FieldCtx::gen_x() const { return p_; /* encoding of x = 0 + 1*x */ }

FF FieldCtx::from_coeffs(const std::vector<std::uint32_t>& c) const {
    if (c.size() > deg_) {
        for (std::size_t i = deg_; i < c.size(); ++i)
            if (c[i]) throw std::invalid_argument("from_coeffs: degree too high");
    }
    FF enc = 0;
    for (std::size_t i = std::min<std::size_t>(c.size(), deg_); i-- > 0;) {
        if (c[i] >= p_) throw std::invalid_argument("from_coeffs: coefficient out of range");
        enc = enc * p_ + c[i];
    }
    return enc;
}

std::vector<std::uint32_t> FieldCtx::coeffs(FF a) const {
    std::vector<std::uint32_t> c(deg_);
    for (unsigned i = 0; i < deg_; ++i) {
        c[i] = static_cast<std::uint32_t>(a % p_);
        a /= p_;
    }
    return c;
}

std::uint32_t FieldCtx::coeff(FF a, unsigned i) const {
    for (unsigned t = 0; t < i; ++t) a /= p_;
    return static_cast<std::uint32_t>(a % p_);
}

FF FieldCtx::add(FF a, FF b) const {
    if (p2_) return a ^ b;
    FF r = 0, mult = 1;
    for (unsigned i = 0; i < deg_; ++i) {
        std::uint64_t s = a % p_ + b % p_;
        if (s >= p_) s -= p_;
        r += s * mult;
        mult *= p_;
        a /= p_;
        b /= p_;
    }
    return r;
}

FF FieldCtx::neg(FF a) const {
    if (p2_) return a;
    FF r = 0, mult = 1;
    for (unsigned i = 0; i < deg_; ++i) {
        std::uint64_t c = a % p_;
        r += (c ? p_ - c : 0) * mult;
        mult *= p_;
        a /= p_;
    }
    return r;
}

FF FieldCtx::sub(FF a, FF b) const { return p2_ ? (a ^ b) : add(a, neg(b)); }

FF FieldCtx::mul_generic(FF a, FF b) const {
    if (a == 0 || b == 0) return 0;
    if (p2_) {
        unsigned __int128 acc = 0;
        std::uint64_t bb = b;
        unsigned i = 0;
        while (bb) {
            if (bb & 1) acc ^= static_cast<unsigned __int128>(a) << i;
            bb >>= 1;
            ++i;
        }
        // reduce mod modulus (degree deg_); full modulus = modbits_ + x^deg_
        const unsigned __int128 full_mod =
            static_cast<unsigned __int128>(modbits_) | (static_cast<unsigned __int128>(1) << deg_);
        for (int bit = 2 * static_cast<int>(deg_) - 2; bit >= static_cast<int>(deg_); --bit) {
            if ((acc >> bit) & 1) acc ^= full_mod << (bit - deg_);
        }
        return static_cast<FF>(acc);
    }
    // generic digit convolution
    std::uint32_t da[128], db[128];
    std::uint64_t t[256] = {0};
    for (unsigned i = 0; i < deg_; ++i) {
        da[i] = static_cast<std::uint32_t>(a % p_);
        a /= p_;
        db[i] = static_cast<std::uint32_t>(b % p_);
        b /= p_;
    }
    for (unsigned i = 0; i < deg_; ++i) {
        if (!da[i]) continue;
        for (unsigned j = 0; j < deg_; ++j) t[i + j] += static_cast<std::uint64_t>(da[i]) * db[j];
    }
    for (unsigned k = 0; k < 2 * deg_ - 1; ++k) t[k] %= p_;
    // reduce: subtract c * mod shifted, top down
    for (int k = 2 * static_cast<int>(deg_) - 2; k >= static_cast<int>(deg_); --k) {
        std::uint64_t c = t[k];
        if (!c) continue;
        t[k] = 0;
        for (unsigned i = 0; i < deg_; ++i) {
            std::uint64_t sub = (c * mod_[i]) % p_;
            t[k - deg_ + i] = (t[k - deg_ + i] + p_ - sub) % p_;
        }
    }
    FF r = 0;
    for (unsigned i = deg_; i-- > 0;) r = r * p_ + t[i];
    return r;
}

FF FieldCtx::mul(FF a, FF b) const {
    if (a == 0 || b == 0) return 0;
    if (!expt_.empty()) {
        std::uint64_t k = logt_[a] + logt_[b];
        const std::uint64_t N = size_ - 1;
        if (k >= N) k -= N;
        return expt_[k];
    }
    return mul_generic(a, b);
}

FF FieldCtx::inv(FF a) const {
    if (a == 0) throw std::domain_error("FieldCtx::inv: zero has no inverse");
    if (!expt_.empty()) {
        const std::uint64_t N = size_ - 1;
        std::uint64_t l = logt_[a];
        return expt_[l == 0 ? 0 : N - l];
    }
    return pow_u64(a, size_ - 2);
}

FF FieldCtx::div(FF a, FF b) const { return mul(a, inv(b)); }

FF FieldCtx::pow_u64(FF a, std::uint64_t e) const {
    if (a == 0) return e == 0 ? 1 : 0;
    const std::uint64_t N = size_ - 1;
    e %= N;
    if (!expt_.empty()) return expt_[mulmod_u64(logt_[a], e, N)];
    FF r = 1;
    while (e) {
        if (e & 1) r = mul_generic(r, a);
        a = mul_generic(a, a);
        e >>= 1;
    }
    return r;
}

FF FieldCtx::pow(FF a, const ExpSpec& e) const {
    if (a == 0) {
        if (!e.is_plain_int())
            throw std::invalid_argument("FieldCtx::pow: 0 base requires plain integer exponent");
        return e.a == 0 ? 1 : 0;
    }
    return pow_u64(a, e.eval_mod(q_, size_ - 1));
}

FF FieldCtx::apply_lintable(const FF* tbl, FF a) const {
    if (p2_) {
        FF r = 0;
        while (a) {
            unsigned i = static_cast<unsigned>(__builtin_ctzll(a));
            r ^= tbl[i];
            a &= a - 1;
        }
        return r;
    }
    FF r = 0;
    for (unsigned i = 0; i < deg_ && a; ++i) {
        std::uint64_t c = a % p_;
        a /= p_;
        if (!c) continue;
        // scalar multiple c * tbl[i]: coefficient-wise
        FF t = tbl[i], s = 0, mult = 1;
        for (unsigned j = 0; j < deg_; ++j) {
            s += ((t % p_) * c % p_) * mult;
            mult *= p_;
            t /= p_;
        }
        r = add(r, s);
    }
    return r;
}

FF FieldCtx::frobenius(FF a, long long i) const {
    long long im = i % static_cast<long long>(n_);
    if (im < 0) im += n_;
    return p_power(a, static_cast<long long>(h_) * im);
}

FF FieldCtx::p_power(FF a, long long e) const {
    long long em = e % static_cast<long long>(deg_);
    if (em < 0) em += deg_;
    if (em == 0) return a;
    return apply_lintable(phi_.data() + static_cast<std::size_t>(em) * deg_, a);
}

bool FieldCtx::in_subfield(FF a, unsigned d) const {
    if (d == 0 || deg_ % d != 0)
        throw std::invalid_argument("in_subfield: d must divide h*n");
    return p_power(a, d) == a;
}

bool FieldCtx::is_dth_power(FF a, const ExpSpec& d) const {
    if (a == 0) throw std::invalid_argument("is_dth_power: a must be nonzero");
    const std::uint64_t N = size_ - 1;
    std::uint64_t dm = d.eval_mod(q_, N);
    std::uint64_t g = dm == 0 ? N : std::gcd(dm, N);
    return pow_u64(a, N / g) == 1;
}

std::uint64_t FieldCtx::reduce_exponent(const ExpSpec& e, std::uint64_t M) const {
    return e.eval_mod(q_, M);
}

FF FieldCtx::generator() const {
    if (expt_.empty()) throw std::logic_error("generator: no dlog tables for this field size");
    return gen_;
}

std::uint64_t FieldCtx::dlog(FF a) const {
    if (expt_.empty()) throw std::logic_error("dlog: no dlog tables for this field size");
    if (a == 0) throw std::domain_error("dlog of zero");
    return logt_[a];
}

FF FieldCtx::from_dlog(std::uint64_t k) const {
    if (expt_.empty()) throw std::logic_error("from_dlog: no dlog tables for this field size");
    return expt_[k % (size_ - 1)];
}

void FieldCtx::build_tables() {
    // p-power Frobenius tables: phi_[e*deg_ + i] = (x^i)^{p^e}
    phi_.assign(static_cast<std::size_t>(deg_) * deg_, 0);
    // e = 0: identity
    for (unsigned i = 0; i < deg_; ++i) {
        FF xi = 1;
        // x^i as encoding: p_^i, but compute via repeated shift to stay generic
        for (unsigned t = 0; t < i; ++t) xi *= p_;
        phi_[i] = xi;
    }
    if (deg_ > 1) {
        // x^p mod mu via bootstrap poly arithmetic
        Poly xp = x_pk_mod(1, mod_, p_);
        FF t = 1;  // (x^p)^0
        std::vector<FF> xp_pows(deg_);
        FF xp_enc = 0;
        for (std::size_t i = xp.size(); i-- > 0;) xp_enc = xp_enc * p_ + xp[i];
        for (unsigned i = 0; i < deg_; ++i) {
            xp_pows[i] = t;
            t = mul_generic(t, xp_enc);
        }
        for (unsigned i = 0; i < deg_; ++i) phi_[deg_ + i] = xp_pows[i];  // (x^i)^p = (x^p)^i
        for (unsigned e = 2; e < deg_; ++e) {
            const FF* prev = phi_.data() + static_cast<std::size_t>(e - 1) * deg_;
            const FF* one = phi_.data() + deg_;
            for (unsigned i = 0; i < deg_; ++i)
                phi_[static_cast<std::size_t>(e) * deg_ + i] = apply_lintable(one, prev[i]);
        }
    }

    if (size_ <= kDlogLimit) {
        const std::uint64_t N = size_ - 1;
        auto fs = prime_factors(N);
        // smallest-encoding multiplicative generator
        FF g = 0;
        for (FF cand = 2; cand < size_; ++cand) {
            bool ok = true;
            for (std::uint64_t r : fs) {
                // order check with generic arithmetic (tables not ready yet)
                std::uint64_t e = N / r;
                FF acc = 1, base = cand;
                std::uint64_t ee = e;
                while (ee) {
                    if (ee & 1) acc = mul_generic(acc, base);
                    base = mul_generic(base, base);
                    ee >>= 1;
                }
                if (acc == 1) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                g = cand;
                break;
            }
        }
        if (g == 0 && size_ == 2) g = 1;  // F_2: trivial group
        gen_ = g;
        expt_.assign(N, 0);
        logt_.assign(size_, 0);
        // multiplication by the fixed generator as a linear map
        std::vector<FF> gtbl(deg_);
        for (unsigned i = 0; i < deg_; ++i) gtbl[i] = mul_generic(g, phi_[i]);
        FF cur = 1;
        for (std::uint64_t k = 0; k < N; ++k) {
            expt_[k] = static_cast<std::uint32_t>(cur);
            logt_[cur] = static_cast<std::uint32_t>(k);
            cur = apply_lintable(gtbl.data(), cur);
        }
    }
}

// ---------------------------------------------------------------------------
// embeddings

FF find_embedding_root(const FieldCtx& src, const FieldCtx& dst) {
    if (src.p() != dst.p())
        throw std::invalid_argument("find_embedding_root: characteristic mismatch");
    if (dst.degree() % src.degree() != 0)
        throw std::invalid_argument("find_embedding_root: source field does not embed");
    if (dst.size() > (1ull << 22))
        throw std::invalid_argument("find_embedding_root: destination field too large to scan");
    const auto& mu = src.modulus();
    for (FF cand = 0; cand < dst.size(); ++cand) {
        // evaluate mu at cand by Horner
        FF acc = 0;
        for (std::size_t i = mu.size(); i-- > 0;) {
            acc = dst.mul(acc, cand);
            acc = dst.add(acc, mu[i] % dst.p());
        }
        if (acc == 0) return cand;
    }
    throw std::logic_error("find_embedding_root: no root found (should be impossible)");
}

FF embed(const FieldCtx& src, FF a, const FieldCtx& dst, FF root) {
    auto c = src.coeffs(a);
    FF acc = 0;
    for (std::size_t i = c.size(); i-- > 0;) {
        acc = dst.mul(acc, root);
        acc = dst.add(acc, c[i] % dst.p());
    }
    return acc;
}

}  // namespace scatterlab::gf
