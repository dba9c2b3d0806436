#ifndef SCATTERLAB_CRITERIA_HPP
#define SCATTERLAB_CRITERIA_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "scatterlab/seq.hpp"

namespace scatterlab::criteria {

using gf::FF;
using gf::FieldCtx;
using gf::FieldRef;
using seq::SequenceSpec;
using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

/// The guarantees are one-directional: HypothesisFails never asserts the
/// property is absent, only that the sufficient condition did not fire.
/// NotApplicable means a result's standing assumptions exclude the instance.
enum class Verdict { Guaranteed, HypothesisFails, NotApplicable };
const char* to_string(Verdict v);

struct ScatteredCriterion {
    Verdict verdict = Verdict::HypothesisFails;
    std::uint64_t gcd_IJ = 0;
    bool gcd_ok = false;
    FF K_A = 0;
    bool K_A_is_power = true;  // C_{K,m}-power test result
};

struct PiRatioEntry {
    unsigned delta = 0;  // 1..m-1
    FF ratio = 0;        // Pi_{delta+2} / Pi_2, indices cyclic
    bool is_power = true;  // (q^{mK}-1)-power?
};

struct PiConditions {
    std::vector<PiRatioEntry> entries;
    bool all_delta = false;     // every ratio is a non-power
    bool exists_delta = false;  // some ratio is a non-power
};

struct EvasiveEntry {
    unsigned h = 0, r = 0;
    std::string source;  // "odd-r" | "even-r" | "codim2"
};

struct CuttingGuarantee {
    Verdict verdict = Verdict::HypothesisFails;
    bool code_minimal = false;  // rides along with the cutting guarantee
};

struct IndecomposabilityReport {
    Verdict direct = Verdict::HypothesisFails;  // n >= 2(mJ+J+1) and all-delta
    bool eventually = false;  // gcd(I,J)=1, K_A non-power, all-delta (lifts via extensions)
};

struct DivisibilityCheck {
    bool applicable = false;  // the all-delta hypothesis held
    bool consistent = true;   // m | n whenever applicable; false would falsify the result
};

struct QLowerBound {
    Verdict verdict = Verdict::NotApplicable;  // requires n = m*n' and m does not divide K
    cpp_int Q = 0;      // floor of the counting formula
    bool exact = true;  // whether the formula value was an integer
    double c_qm = 0.0;
    cpp_int floor_bound = 0;  // (q^n-1)^{m-1} * ceil((q^n-1)(1 - c_qm))
};

struct InequivLowerBound {
    Verdict verdict = Verdict::NotApplicable;  // gates: J > I, J > n/2, n = m*n', m does not divide K
    double value = 0.0;
    /// The stated hypotheses (J > n/2) conflict with the same-index
    /// equivalence theorem's range (J < n/2); flagged, not resolved.
    bool range_conflict = false;
};

struct CriterionReport {
    ScatteredCriterion scattered;
    PiConditions pi;
    std::vector<EvasiveEntry> evasive;
    CuttingGuarantee cutting;
    IndecomposabilityReport indecomposable;
    DivisibilityCheck divisibility;
    QLowerBound q_bound;
    InequivLowerBound inequiv_bound;
    unsigned h_max = 4;
    std::vector<std::uint64_t> exceptional_h;
};

ScatteredCriterion scattered_criterion(const SequenceSpec& spec);

/// All h <= h_max with gcd(q^{mK}-1, C_{n,h}) = 1; the guarantees lift to
/// F_{q^{nh}} for these h.
std::vector<std::uint64_t> exceptionality_search(const SequenceSpec& spec, unsigned h_max);
/// Low-level form over explicit (q, n, A).
std::vector<std::uint64_t> exceptional_degrees(std::uint64_t q, unsigned n, std::uint64_t A,
                                               unsigned h_max);

PiConditions pi_conditions(const SequenceSpec& spec);
std::vector<EvasiveEntry> evasive_guarantees(const SequenceSpec& spec);
CuttingGuarantee cutting_guarantee(const SequenceSpec& spec);
IndecomposabilityReport indecomposability_report(const SequenceSpec& spec);
DivisibilityCheck divisibility_check(const SequenceSpec& spec);
QLowerBound q_lower_bound(const FieldCtx& F, unsigned m, unsigned I, unsigned J);
InequivLowerBound inequiv_lower_bound(const FieldCtx& F, unsigned m, unsigned I, unsigned J);

CriterionReport full_report(const SequenceSpec& spec, unsigned h_max = 4);

/// q^{mK} - 1 as a plain integer (throws if it would not fit in 62 bits).
std::uint64_t qmk_minus_one(const FieldCtx& F, unsigned m, unsigned K);

// ---------------------------------------------------------------------------
// alpha-tuple sweeps

struct TupleFlags {
    bool scattered_ok = false;  // scattered_criterion == Guaranteed
    bool all_delta = false;
    bool exists_delta = false;
};

std::uint64_t tuple_count(const FieldCtx& F, unsigned m);
std::vector<FF> tuple_at(const FieldCtx& F, unsigned m, std::uint64_t idx);

/// Evaluates the per-tuple criteria over an index range [lo, hi).
void sweep_alpha_range(const FieldRef& ctx, unsigned m, unsigned I, unsigned J,
                       std::uint64_t lo, std::uint64_t hi,
                       const std::function<void(std::uint64_t, const std::vector<FF>&,
                                                const TupleFlags&)>& cb);

struct SweepCounts {
    std::uint64_t total = 0;
    std::uint64_t scattered_ok = 0;
    std::uint64_t all_delta = 0;
    std::uint64_t exists_delta = 0;
    std::uint64_t scattered_and_all_delta = 0;
};

/// Exhaustive sweep counts, computed in deterministic chunks that can be
/// merged associatively (the workers parameter only partitions work).
SweepCounts sweep_counts(const FieldRef& ctx, unsigned m, unsigned I, unsigned J, int workers);

}  // namespace scatterlab::criteria

#endif
