#ifndef SCATTERLAB_ORACLE_HPP
#define SCATTERLAB_ORACLE_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "scatterlab/linalg.hpp"
#include "scatterlab/seq.hpp"

namespace scatterlab::oracle {

using gf::FF;
using gf::FieldCtx;
using gf::FieldRef;
using linalg::FqSubspace;
using seq::SequenceSpec;

enum class Mode { Exhaustive, Sampled };
const char* to_string(Mode m);

/// Exceeding a budget is an error, never silent truncation.
struct BudgetExceeded : std::runtime_error {
    explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

struct OracleOptions {
    Mode mode = Mode::Exhaustive;
    std::uint64_t point_budget = 1ull << 24;     // exhaustive point enumerations
    std::uint64_t subspace_budget = 1ull << 25;  // exhaustive subspace enumerations
    std::uint64_t samples = 10000;               // sampled mode
    std::uint64_t seed = 0;
    int workers = 1;
    /// fiber-table records kept in memory at once; larger scans run in
    /// several hash-partitioned passes (identical results, more recompute)
    std::uint64_t max_resident_keys = 1ull << 22;
};

struct OracleVerdict {
    std::string property;
    Mode mode = Mode::Exhaustive;
    bool pass = false;
    /// Sampled-mode passes are explicitly non-conclusive.
    bool conclusive = false;
    std::uint64_t enumerated = 0;
    std::uint64_t budget = 0;
    std::uint64_t seed = 0;
    int workers = 1;
    /// Extremal statistic: the largest F_q-intersection dimension seen
    /// (subspace scans), or the largest fiber size (scattered scan).
    unsigned max_statistic = 0;
    /// fiber size -> number of fibers (scattered scan only)
    std::map<std::uint64_t, std::uint64_t> fiber_histogram;
    /// witness on failure: "point-pair" (two F_q-independent vectors on one
    /// line) or "subspace" (basis rows of the offending subspace)
    std::string witness_kind;
    std::vector<std::vector<FF>> witness;
};

/// Scattered check by projective fiber counting over all q^{nm} points.
/// Sampled mode delegates to a line scan (h = 1, r = 1) over random lines.
OracleVerdict verify_scattered(const SequenceSpec& spec, const OracleOptions& opts);

/// (h, r)-evasiveness by streaming h-dimensional F_{q^n}-subspaces.
OracleVerdict verify_evasive(const SequenceSpec& spec, unsigned h, unsigned r,
                             const OracleOptions& opts);
OracleVerdict verify_evasive_u(const FieldRef& ctx, const FqSubspace& U, unsigned h, unsigned r,
                               const OracleOptions& opts);

/// Cutting check: every hyperplane H satisfies span_{F_{q^n}}(U cap H) = H.
OracleVerdict verify_cutting(const SequenceSpec& spec, const OracleOptions& opts);
OracleVerdict verify_cutting_u(const FieldRef& ctx, const FqSubspace& U,
                               const OracleOptions& opts);

struct SecondWeightResult {
    OracleVerdict scan;  // the codim-2 max-intersection scan
    /// dim_Fq(U) - max over codim-2 subspaces W of dim_Fq(U cap W).
    /// Exact in exhaustive mode; an upper bound in sampled mode.
    unsigned value = 0;
    bool exact = false;
};

SecondWeightResult second_weight(const SequenceSpec& spec, const OracleOptions& opts);
SecondWeightResult second_weight_u(const FieldRef& ctx, const FqSubspace& U,
                                   const OracleOptions& opts);

}  // namespace scatterlab::oracle

#endif
