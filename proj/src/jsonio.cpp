#include "scatterlab/jsonio.hpp"

#include <cmath>
namespace scatterlab::jsonio {

const char* kVersion = "scatterlab 0.1.0";

json expspec_to_json(const gf::ExpSpec& e) {
    using Kind = gf::ExpSpec::Kind;
    json j;
    switch (e.kind) {
        case Kind::Int:
            j["kind"] = "int";
            j["value"] = e.a;
            break;
        case Kind::Cyc:
            j["kind"] = "cyc";
            j["h"] = e.a;
            j["l"] = e.b;
            break;
        case Kind::QPowMinus1:
            j["kind"] = "qpow_minus1";
            j["a"] = e.a;
            break;
        case Kind::Prod:
        case Kind::Sum: {
            j["kind"] = e.kind == Kind::Prod ? "prod" : "sum";
            json terms = json::array();
            for (const auto& t : e.terms) terms.push_back(expspec_to_json(t));
            j["terms"] = std::move(terms);
            break;
        }
    }
    return j;
}

gf::ExpSpec expspec_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "int") return gf::ExpSpec::integer(j.at("value").get<std::uint64_t>());
    if (kind == "cyc")
        return gf::ExpSpec::cyc(j.at("h").get<std::uint64_t>(), j.at("l").get<std::uint64_t>());
    if (kind == "qpow_minus1") return gf::ExpSpec::qpow_minus1(j.at("a").get<std::uint64_t>());
    if (kind == "prod" || kind == "sum") {
        std::vector<gf::ExpSpec> terms;
        for (const auto& t : j.at("terms")) terms.push_back(expspec_from_json(t));
        return kind == "prod" ? gf::ExpSpec::prod(std::move(terms))
                              : gf::ExpSpec::sum(std::move(terms));
    }
    throw std::invalid_argument("ExpSpec JSON: unknown kind '" + kind + "'");
}

json element_to_json(const gf::FieldCtx& F, gf::FF a) { return json(F.coeffs(a)); }

gf::FF element_from_json(const gf::FieldCtx& F, const json& j) {
    return F.from_coeffs(j.get<std::vector<std::uint32_t>>());
}

json ctx_to_json(const gf::FieldCtx& F) {
    json j;
    j["p"] = F.p();
    j["h"] = F.h();
    j["n"] = F.n();
    j["modulus"] = F.modulus();
    return j;
}

gf::FieldRef ctx_from_json(const json& j) {
    auto p = j.at("p").get<std::uint64_t>();
    auto h = j.at("h").get<unsigned>();
    auto n = j.at("n").get<unsigned>();
    if (!j.contains("modulus") || j.at("modulus") == "builtin")
        return gf::FieldCtx::create_builtin(p, h, n);
    return gf::FieldCtx::create(p, h, n, j.at("modulus").get<std::vector<std::uint32_t>>());
}

json spec_to_json(const seq::SequenceSpec& spec) {
    json j = ctx_to_json(*spec.ctx);
    j["m"] = spec.m;
    j["I"] = spec.I;
    j["J"] = spec.J;
    json alphas = json::array();
    for (gf::FF a : spec.alphas) alphas.push_back(element_to_json(*spec.ctx, a));
    j["alphas"] = std::move(alphas);
    return j;
}

seq::SequenceSpec spec_from_json(const json& j) {
    auto ctx = ctx_from_json(j);
    auto m = j.at("m").get<unsigned>();
    auto I = j.at("I").get<unsigned>();
    auto J = j.at("J").get<unsigned>();
    std::vector<gf::FF> alphas;
    for (const auto& a : j.at("alphas")) alphas.push_back(element_from_json(*ctx, a));
    return seq::SequenceSpec(std::move(ctx), m, I, J, std::move(alphas));
}

json subspace_to_json(const gf::FieldCtx& F, const std::vector<gf::FF>& rows, unsigned k) {
    json out = json::array();
    const unsigned r = rows.empty() ? 0 : static_cast<unsigned>(rows.size() / k);
    for (unsigned i = 0; i < r; ++i) {
        json row = json::array();
        for (unsigned j = 0; j < k; ++j)
            row.push_back(element_to_json(F, rows[static_cast<std::size_t>(i) * k + j]));
        out.push_back(std::move(row));
    }
    return out;
}

namespace {

json pi_to_json(const gf::FieldCtx& F, const criteria::PiConditions& pi) {
    json j;
    json entries = json::array();
    for (const auto& e : pi.entries) {
        json row;
        row["delta"] = e.delta;
        row["ratio"] = element_to_json(F, e.ratio);
        row["is_power"] = e.is_power;
        entries.push_back(std::move(row));
    }
    j["entries"] = std::move(entries);
    j["all_delta"] = pi.all_delta;
    j["exists_delta"] = pi.exists_delta;
    return j;
}

}  // namespace

json report_to_json(const seq::SequenceSpec& spec, const criteria::CriterionReport& rep) {
    const gf::FieldCtx& F = *spec.ctx;
    json j;
    j["spec"] = spec_to_json(spec);
    {
        json s;
        s["verdict"] = criteria::to_string(rep.scattered.verdict);
        s["gcd_IJ"] = rep.scattered.gcd_IJ;
        s["K_A"] = element_to_json(F, rep.scattered.K_A);
        s["K_A_is_power"] = rep.scattered.K_A_is_power;
        j["scattered"] = std::move(s);
    }
    j["pi"] = pi_to_json(F, rep.pi);
    {
        json ev = json::array();
        for (const auto& e : rep.evasive) {
            json row;
            row["h"] = e.h;
            row["r"] = e.r;
            row["source"] = e.source;
            ev.push_back(std::move(row));
        }
        j["evasive"] = std::move(ev);
    }
    {
        json c;
        c["verdict"] = criteria::to_string(rep.cutting.verdict);
        c["code_minimal"] = rep.cutting.code_minimal;
        j["cutting"] = std::move(c);
    }
    {
        json ind;
        ind["direct"] = criteria::to_string(rep.indecomposable.direct);
        ind["eventually"] = rep.indecomposable.eventually;
        j["indecomposable"] = std::move(ind);
    }
    {
        json d;
        d["applicable"] = rep.divisibility.applicable;
        d["consistent"] = rep.divisibility.consistent;
        j["divisibility"] = std::move(d);
    }
    {
        json q;
        q["verdict"] = criteria::to_string(rep.q_bound.verdict);
        q["Q"] = rep.q_bound.Q.str();
        q["exact"] = rep.q_bound.exact;
        q["c_qm"] = rep.q_bound.c_qm;
        q["floor_bound"] = rep.q_bound.floor_bound.str();
        j["q_bound"] = std::move(q);
    }
    {
        json ib;
        ib["verdict"] = criteria::to_string(rep.inequiv_bound.verdict);
        ib["value"] = rep.inequiv_bound.value;
        ib["range_conflict"] = rep.inequiv_bound.range_conflict;
        j["inequiv_bound"] = std::move(ib);
    }
    j["h_max"] = rep.h_max;
    j["exceptional_h"] = rep.exceptional_h;
    return j;
}

json verdict_to_json(const gf::FieldCtx& F, const oracle::OracleVerdict& v) {
    json j;
    j["property"] = v.property;
    j["mode"] = oracle::to_string(v.mode);
    j["pass"] = v.pass;
    j["conclusive"] = v.conclusive;
    j["enumerated"] = v.enumerated;
    j["budget"] = v.budget;
    j["seed"] = v.seed;
    j["max_statistic"] = v.max_statistic;
    if (!v.fiber_histogram.empty()) {
        json h = json::array();
        for (auto [len, cnt] : v.fiber_histogram) h.push_back(json::array({len, cnt}));
        j["fiber_histogram"] = std::move(h);
    }
    if (!v.witness.empty()) {
        j["witness_kind"] = v.witness_kind;
        json w = json::array();
        for (const auto& vec : v.witness) {
            json row = json::array();
            for (gf::FF a : vec) row.push_back(element_to_json(F, a));
            w.push_back(std::move(row));
        }
        j["witness"] = std::move(w);
    }
    return j;
}

json equiv_to_json(const gf::FieldCtx& F, const equiv::EquivVerdict& v) {
    json j;
    j["kind"] = equiv::to_string(v.kind);
    j["theorem_in_range"] = v.theorem_in_range;
    if (v.kind == equiv::EquivKind::Equivalent) {
        j["e"] = v.e;
        j["delta"] = v.delta;
        j["witness_verified"] = v.witness_verified;
        const unsigned k = static_cast<unsigned>(
            v.witness_matrix.empty() ? 0 : std::sqrt(static_cast<double>(v.witness_matrix.size())));
        j["witness_matrix"] = subspace_to_json(F, v.witness_matrix, k);
    }
    j["witness_failures"] = v.witness_failures;
    json table = json::array();
    for (const auto& e : v.table) {
        json row;
        row["e"] = e.e;
        row["delta"] = e.delta;
        row["value"] = element_to_json(F, e.value);
        row["is_power"] = e.is_power;
        table.push_back(std::move(row));
    }
    j["table"] = std::move(table);
    return j;
}

json class_count_to_json(const gf::FieldCtx& F, const equiv::ClassCount& cc) {
    json j;
    j["tuples_swept"] = cc.tuples_swept;
    j["criterion_passing"] = cc.criterion_passing;
    j["classes_found"] = cc.classes_found;
    j["bound"] = cc.bound;
    j["theorem_in_range"] = cc.theorem_in_range;
    json reps = json::array();
    for (const auto& alphas : cc.representatives) {
        json row = json::array();
        for (gf::FF a : alphas) row.push_back(element_to_json(F, a));
        reps.push_back(std::move(row));
    }
    j["representatives"] = std::move(reps);
    return j;
}

std::uint64_t config_hash(const json& j) {
    const std::string s = j.dump();
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace scatterlab::jsonio
