#ifndef SCATTERLAB_EQUIV_HPP
#define SCATTERLAB_EQUIV_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "scatterlab/criteria.hpp"
#include "scatterlab/seq.hpp"

namespace scatterlab::equiv {

using gf::FF;
using gf::FieldCtx;
using gf::FieldRef;
using seq::SequenceSpec;

/// sigma: x -> x^{p^e}; there are h*n automorphisms of F_{q^n}.
struct AutIndex {
    unsigned e = 0;
};

/// Raised when a result's standing hypotheses exclude the queried instance
/// (the theorems are applied only inside their stated ranges).
struct NotApplicableError : std::runtime_error {
    explicit NotApplicableError(const std::string& what) : std::runtime_error(what) {}
};

enum class EquivKind {
    Equivalent,
    InequivalentByCriterion,
    InequivalentByIndex,
    Deferred,  // same (I,J): index theorem says nothing, run are_equivalent
};
const char* to_string(EquivKind k);

struct CEntry {
    unsigned e = 0;      // automorphism index
    unsigned delta = 0;  // 1..m
    FF value = 0;        // C_delta at sigma = x^{p^e}
    bool is_power = false;  // (q^{mK}-1)-power?
};

struct EquivVerdict {
    EquivKind kind = EquivKind::Deferred;
    unsigned e = 0, delta = 0;       // witness parameters when Equivalent
    std::vector<FF> witness_matrix;  // 2m x 2m row-major, empty unless Equivalent
    bool witness_verified = false;
    /// candidates whose power test succeeded but whose constructed matrix
    /// failed verification (a falsification candidate, never suppressed)
    unsigned witness_failures = 0;
    std::vector<CEntry> table;  // full (e, delta) sweep
    /// true when the criterion theorem's hypotheses (J < n/2, gcd(I,J) = 1)
    /// hold; outside that range the criterion is heuristic only.
    bool theorem_in_range = true;
};

/// Distinct-index theorem: not equivalent when (I,J) != (I0,J0), under
/// J + J0 < n, I < J, I0 < J0. Throws NotApplicableError outside the gates.
EquivVerdict index_verdict(const SequenceSpec& A, const SequenceSpec& B);

/// The m values C_1..C_m for the automorphism x -> x^{p^e} (pure formula
/// evaluation; no hypothesis gate).
std::vector<FF> c_invariants(const SequenceSpec& A, const SequenceSpec& B, unsigned e);

/// Full decision for same-(I,J) pairs, gated on J < n/2 and gcd(I,J) = 1
/// (throws NotApplicableError otherwise). Equivalent verdicts always carry a
/// verified witness matrix.
EquivVerdict are_equivalent(const SequenceSpec& A, const SequenceSpec& B);

/// Ungated criterion sweep + witness construction (used by class counting,
/// where instances outside the theorem range are probed with a warning).
EquivVerdict equivalence_criterion(const SequenceSpec& A, const SequenceSpec& B);

/// Monomial witness matrix for a candidate (e, delta) whose C_delta is a
/// (q^{mK}-1)-power; the matrix is verified (invertible, maps all generators
/// of U_A into U_B) before being returned. Throws std::runtime_error when
/// verification fails or the field has no dlog tables (> 2^20 elements).
std::vector<FF> build_and_verify_witness(const SequenceSpec& A, const SequenceSpec& B,
                                         unsigned e, unsigned delta);

/// Applies M . sigma to a length-2m vector.
std::vector<FF> apply_semilinear(const SequenceSpec& A, const std::vector<FF>& M, unsigned e,
                                 const std::vector<FF>& v);

/// Verifies an explicit witness: M invertible and M.sigma(U_A) = U_B.
bool verify_witness(const SequenceSpec& A, const SequenceSpec& B, unsigned e,
                    const std::vector<FF>& M);

struct ClassCount {
    std::uint64_t tuples_swept = 0;
    std::uint64_t criterion_passing = 0;  // scattered_criterion && all-delta
    std::uint64_t classes_found = 0;
    double bound = 0.0;  // the inequivalence-count lower bound (criteria module)
    bool theorem_in_range = true;
    std::vector<std::vector<FF>> representatives;
};

/// Greedy partition of criterion-passing alpha tuples into equivalence
/// classes; merges only on witness-verified equivalences, so the class count
/// is sound even outside the criterion theorem's range (flagged).
ClassCount count_inequivalent(const FieldRef& ctx, unsigned m, unsigned I, unsigned J,
                              std::uint64_t sweep_budget);

}  // namespace scatterlab::equiv

#endif
