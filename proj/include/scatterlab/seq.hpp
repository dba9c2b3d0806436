#ifndef SCATTERLAB_SEQ_HPP
#define SCATTERLAB_SEQ_HPP

#include <vector>

#include "scatterlab/gf.hpp"
#include "scatterlab/linalg.hpp"

namespace scatterlab::seq {

using gf::FF;
using gf::FieldCtx;
using gf::FieldRef;

/// Configuration of the family: the F_q-subspace of F_{q^n}^{2m} spanned by
/// points (x_1..x_m, f_1(x)..f_m(x)) with f_i(x) = x_i^{q^I} + a_{i+1} x_{i+1}^{q^J}
/// and cyclic indices (index m+1 means 1).
///
/// Hypothesis-violating parameters (gcd(I,J) != 1, special alphas) are
/// deliberately allowed so the oracles can probe instances outside the
/// guarantees; the criteria report hypothesis failures instead.
struct SequenceSpec {
    FieldRef ctx;
    unsigned m = 3;
    unsigned I = 0, J = 1;
    std::vector<FF> alphas;  // size m, all nonzero

    SequenceSpec(FieldRef ctx, unsigned m, unsigned I, unsigned J, std::vector<FF> alphas);

    unsigned K() const { return J - I; }
    /// cyclic index into [1..m]
    unsigned wrap(long long i) const {
        long long r = (i - 1) % static_cast<long long>(m);
        if (r < 0) r += m;
        return static_cast<unsigned>(r + 1);
    }
    FF alpha(long long i) const { return alphas[wrap(i) - 1]; }
};

/// f_i(x), 1 <= i <= m, x of length m.
FF eval_f(const SequenceSpec& spec, unsigned i, const std::vector<FF>& x);

/// (x_1..x_m, f_1(x)..f_m(x)); injective in x.
std::vector<FF> lift_point(const SequenceSpec& spec, const std::vector<FF>& x);

/// O(m) membership test for a length-2m vector.
bool membership(const SequenceSpec& spec, const std::vector<FF>& v);

/// The m*n*h F_p-generators of U as a flattened subspace of F_p^{2m*n*h};
/// throws if the rank is not exactly m*n*h.
linalg::FqSubspace fq_generators(const SequenceSpec& spec);

/// K_A^{I,J} = (a_3 a_4^{q^K} ... a_m^{q^{(m-3)K}} a_1^{q^{(m-2)K}}) / a_2^{C_{K,m-1}}.
FF invariant_K(const SequenceSpec& spec);

/// Pi_i = a_i^{q^{(m-1)K}} a_{i-1}^{q^{(m-2)K}} ... a_{i+2}^{q^K} a_{i+1},
/// indices cyclic in [1..m].
FF invariant_Pi(const SequenceSpec& spec, unsigned i);

/// Delta = Pi_2.
FF delta_value(const SequenceSpec& spec);

/// The same spec rebuilt over the extension F_{q^{n*ell}} (builtin modulus),
/// with the alphas carried along the canonical subfield embedding.
SequenceSpec lift_spec(const SequenceSpec& spec, unsigned ell);

}  // namespace scatterlab::seq

#endif
