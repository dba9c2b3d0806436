#ifndef SCATTERLAB_GF_HPP
#define SCATTERLAB_GF_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace scatterlab::gf {

/// Field element, encoded as the base-p value of its coefficient vector:
/// a = sum c_i x^i  <->  enc = sum c_i p^i, with 0 <= c_i < p and deg < h*n.
/// For p = 2 the encoding is literally the coefficient bit pattern.
using FF = std::uint64_t;

/// Symbolic exponent that can be evaluated modulo any modulus without ever
/// materializing the full integer. Covers the cyclotomic quotients
/// C_{a,b} = (q^{ab}-1)/(q^a-1), powers q^a - 1, and products/sums of such.
struct ExpSpec {
    enum class Kind { Int, Cyc, QPowMinus1, Prod, Sum };

    Kind kind = Kind::Int;
    std::uint64_t a = 0;  // Int: value; Cyc: subscript a; QPowMinus1: exponent
    std::uint64_t b = 0;  // Cyc: subscript b (number of geometric terms)
    std::vector<ExpSpec> terms;

    static ExpSpec integer(std::uint64_t v);
    static ExpSpec cyc(std::uint64_t a, std::uint64_t b);  // (q^{ab}-1)/(q^a-1)
    static ExpSpec qpow_minus1(std::uint64_t a);           // q^a - 1
    static ExpSpec prod(std::vector<ExpSpec> terms);
    static ExpSpec sum(std::vector<ExpSpec> terms);

    /// Value of the exponent mod M (M >= 1), for the given base q.
    std::uint64_t eval_mod(std::uint64_t q, std::uint64_t M) const;

    bool is_plain_int() const { return kind == Kind::Int; }
};

class FieldCtx;
using FieldRef = std::shared_ptr<const FieldCtx>;

/// Immutable description of F_{q^n}, q = p^h, realized as F_p[x]/(mu) with
/// deg(mu) = h*n. Construction verifies irreducibility of mu; all derived
/// tables (Frobenius maps, discrete logs for fields up to 2^20 elements) are
/// built eagerly, so a FieldCtx is safe to share across threads.
class FieldCtx {
public:
    static FieldRef create(std::uint64_t p, unsigned h, unsigned n,
                           std::vector<std::uint32_t> modulus);
    /// Selects the shipped deterministic irreducible of degree h*n over F_p.
    static FieldRef create_builtin(std::uint64_t p, unsigned h, unsigned n);

    std::uint64_t p() const { return p_; }
    unsigned h() const { return h_; }
    unsigned n() const { return n_; }
    unsigned degree() const { return deg_; }            // h*n
    std::uint64_t q() const { return q_; }               // p^h
    std::uint64_t size() const { return size_; }         // q^n
    std::uint64_t group_order() const { return size_ - 1; }
    const std::vector<std::uint32_t>& modulus() const { return mod_; }

    FF zero() const { return 0; }
    FF one() const { return 1; }
    FF gen_x() const;  // the class of x

    bool is_element(FF a) const { return a < size_; }
    FF from_coeffs(const std::vector<std::uint32_t>& c) const;
    std::vector<std::uint32_t> coeffs(FF a) const;
    std::uint32_t coeff(FF a, unsigned i) const;

    FF add(FF a, FF b) const;
    FF sub(FF a, FF b) const;
    FF neg(FF a) const;
    FF mul(FF a, FF b) const;
    FF inv(FF a) const;        // throws on a = 0
    FF div(FF a, FF b) const;
    /// a^e. For a != 0 the exponent is reduced mod q^n - 1 first.
    FF pow_u64(FF a, std::uint64_t e) const;
    /// a^e for symbolic e; for a = 0 only plain integer exponents are defined.
    FF pow(FF a, const ExpSpec& e) const;

    /// a^{q^i}; i is interpreted mod n (negative allowed).
    FF frobenius(FF a, long long i) const;
    /// a^{p^e}; e is interpreted mod h*n (the automorphism x -> x^{p^e}).
    FF p_power(FF a, long long e) const;

    /// a in F_{p^d}? Requires d | h*n.
    bool in_subfield(FF a, unsigned d) const;

    /// True iff a = xi^d for some xi in the multiplicative group. a != 0.
    /// Computed as a^{(q^n-1)/g} = 1 with g = gcd(q^n-1, d mod (q^n-1)),
    /// where d = 0 mod (q^n-1) means g = q^n-1.
    bool is_dth_power(FF a, const ExpSpec& d) const;

    /// e mod M using this context's q.
    std::uint64_t reduce_exponent(const ExpSpec& e, std::uint64_t M) const;

    bool has_dlog() const { return !expt_.empty(); }
    FF generator() const;                 // throws without dlog tables
    std::uint64_t dlog(FF a) const;       // a != 0, throws without tables
    FF from_dlog(std::uint64_t k) const;

    /// Enumeration order of elements is simply the encoding order 0..size-1.

    FieldCtx(const FieldCtx&) = delete;
    FieldCtx& operator=(const FieldCtx&) = delete;

private:
    FieldCtx() = default;
    void build_tables();
    FF mul_generic(FF a, FF b) const;
    FF apply_lintable(const FF* tbl, FF a) const;

    std::uint64_t p_ = 2;
    unsigned h_ = 1, n_ = 1, deg_ = 1;
    std::uint64_t q_ = 2, size_ = 2;
    std::vector<std::uint32_t> mod_;
    bool p2_ = true;
    std::uint64_t modbits_ = 0;           // p = 2 modulus bit pattern (low deg_ bits)
    std::vector<FF> phi_;                 // deg_ tables of deg_ entries: (x^i)^{p^e}
    std::vector<std::uint32_t> logt_;     // dlog tables when size_ <= 2^20
    std::vector<std::uint32_t> expt_;
    FF gen_ = 0;
};

/// Deterministic shipped irreducible of degree d over F_p, lowest degree
/// first, monic. Throws if (p, d) is outside the shipped table and no
/// override file (SCATTERLAB_BUILTIN_MODULI) supplies it.
std::vector<std::uint32_t> builtin_modulus(std::uint64_t p, unsigned d);

/// Is the monic polynomial (lowest-first coefficients) irreducible over F_p?
bool is_irreducible_mod_p(std::uint64_t p, const std::vector<std::uint32_t>& poly);

bool is_prime_u64(std::uint64_t v);

/// Distinct prime factors of v (trial division; v is desk-scale).
std::vector<std::uint64_t> prime_factors(std::uint64_t v);

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m);

/// Smallest-encoding root of src's modulus in dst; defines the canonical
/// embedding F_{src} -> F_{dst}. Requires same p and src.degree() | dst.degree().
FF find_embedding_root(const FieldCtx& src, const FieldCtx& dst);

/// Image of a under the embedding defined by root (a's coefficient
/// polynomial evaluated at root inside dst).
FF embed(const FieldCtx& src, FF a, const FieldCtx& dst, FF root);

}  // namespace scatterlab::gf

#endif
