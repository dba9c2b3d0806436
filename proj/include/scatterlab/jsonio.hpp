#ifndef SCATTERLAB_JSONIO_HPP
#define SCATTERLAB_JSONIO_HPP

#include <json.hpp>

#include "scatterlab/criteria.hpp"
#include "scatterlab/equiv.hpp"
#include "scatterlab/oracle.hpp"

// JSON wire formats. ordered_json keeps insertion order, so every report
// serializes with a stable key order.

namespace scatterlab::jsonio {

using json = nlohmann::ordered_json;

json expspec_to_json(const gf::ExpSpec& e);
gf::ExpSpec expspec_from_json(const json& j);

/// element <-> coefficient vector (lowest degree first)
json element_to_json(const gf::FieldCtx& F, gf::FF a);
gf::FF element_from_json(const gf::FieldCtx& F, const json& j);

json ctx_to_json(const gf::FieldCtx& F);
/// {"p", "h", "n", "modulus": [...] | "builtin"}
gf::FieldRef ctx_from_json(const json& j);

json spec_to_json(const seq::SequenceSpec& spec);
/// {"p","h","n","modulus","m","I","J","alphas":[[coeffs],...]}
seq::SequenceSpec spec_from_json(const json& j);

json subspace_to_json(const gf::FieldCtx& F, const std::vector<gf::FF>& rows, unsigned k);

json report_to_json(const seq::SequenceSpec& spec, const criteria::CriterionReport& rep);
json verdict_to_json(const gf::FieldCtx& F, const oracle::OracleVerdict& v);
json equiv_to_json(const gf::FieldCtx& F, const equiv::EquivVerdict& v);
json class_count_to_json(const gf::FieldCtx& F, const equiv::ClassCount& cc);

/// FNV-1a of a canonical dump, used to key resumable sweep outputs.
std::uint64_t config_hash(const json& j);

extern const char* kVersion;

}  // namespace scatterlab::jsonio

#endif
