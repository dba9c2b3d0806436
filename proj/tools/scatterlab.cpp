// scatterlab: construct the cyclic Frobenius-binomial subspace families over
// explicit finite fields, evaluate the sufficient-condition criteria, verify
// properties with brute-force oracles, and decide semilinear equivalence.
//
// Exit codes: 0 ok, 1 conclusive property failure, 2 config error,
//             3 budget exceeded, 4 not-applicable (hypothesis gate).

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

#include "scatterlab/jsonio.hpp"
#include "scatterlab/oracle.hpp"

using namespace scatterlab;
using jsonio::json;

namespace {

struct CliError {
    int code;
    std::string message;
};

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CliError{2, "cannot open config file: " + path};
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw CliError{2, std::string("config parse error: ") + e.what()};
    }
    return j;
}

seq::SequenceSpec spec_from_config(const json& cfg, const char* key) {
    if (!cfg.contains(key)) throw CliError{2, std::string("config missing '") + key + "'"};
    try {
        return jsonio::spec_from_json(cfg.at(key));
    } catch (const std::exception& e) {
        throw CliError{2, std::string("bad spec: ") + e.what()};
    }
}

void emit(const json& j, const std::string& out_path) {
    const std::string text = j.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        if (!out) throw CliError{2, "cannot open output file: " + out_path};
        out << text;
    }
}

json envelope(const json& config, std::uint64_t seed, const oracle::OracleOptions* opts,
              const gf::FieldCtx& F) {
    json env;
    env["version"] = jsonio::kVersion;
    env["config"] = config;
    env["seed"] = seed;
    if (opts) {
        json b;
        b["point_budget"] = opts->point_budget;
        b["subspace_budget"] = opts->subspace_budget;
        b["samples"] = opts->samples;
        env["budgets"] = std::move(b);
    }
    env["modulus"] = F.modulus();
    return env;
}

struct CommonArgs {
    std::string config_path;
    std::string out_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::uint64_t budget = 0;
    bool budget_set = false;
    int workers = 1;
};

oracle::OracleOptions oracle_options(const json& cfg, const CommonArgs& args) {
    oracle::OracleOptions opts;
    const std::string mode = cfg.value("mode", std::string("exhaustive"));
    if (mode == "exhaustive")
        opts.mode = oracle::Mode::Exhaustive;
    else if (mode == "sampled")
        opts.mode = oracle::Mode::Sampled;
    else
        throw CliError{2, "mode must be 'exhaustive' or 'sampled'"};
    opts.point_budget = cfg.value("point_budget", opts.point_budget);
    opts.subspace_budget = cfg.value("subspace_budget", opts.subspace_budget);
    opts.samples = cfg.value("samples", opts.samples);
    opts.seed = cfg.value("seed", std::uint64_t{0});
    if (args.seed_set) opts.seed = args.seed;
    if (args.budget_set) {
        opts.point_budget = args.budget;
        opts.subspace_budget = args.budget;
        opts.samples = args.budget;
    }
    opts.workers = args.workers;
    return opts;
}

int cmd_check(const CommonArgs& args) {
    json cfg = load_config(args.config_path);
    auto spec = spec_from_config(cfg, "spec");
    unsigned h_max = cfg.value("h_max", 4u);
    auto rep = criteria::full_report(spec, h_max);
    json out = envelope(cfg, 0, nullptr, *spec.ctx);
    out["report"] = jsonio::report_to_json(spec, rep);
    emit(out, args.out_path);
    return 0;
}

int cmd_verify(const CommonArgs& args) {
    json cfg = load_config(args.config_path);
    auto spec = spec_from_config(cfg, "spec");
    auto opts = oracle_options(cfg, args);
    if (!cfg.contains("properties") || !cfg.at("properties").is_array())
        throw CliError{2, "config missing 'properties' array"};

    json out = envelope(cfg, opts.seed, &opts, *spec.ctx);
    json verdicts = json::array();
    bool any_fail = false;
    for (const auto& prop : cfg.at("properties")) {
        oracle::OracleVerdict v;
        if (prop.is_string() && prop == "scattered") {
            v = oracle::verify_scattered(spec, opts);
        } else if (prop.is_string() && prop == "cutting") {
            v = oracle::verify_cutting(spec, opts);
        } else if (prop.is_string() && prop == "second_weight") {
            auto r = oracle::second_weight(spec, opts);
            v = r.scan;
            json vj = jsonio::verdict_to_json(*spec.ctx, v);
            vj["second_weight"] = r.value;
            vj["exact"] = r.exact;
            verdicts.push_back(std::move(vj));
            continue;
        } else if (prop.is_object() && prop.contains("evasive")) {
            auto hr = prop.at("evasive");
            v = oracle::verify_evasive(spec, hr.at(0).get<unsigned>(),
                                       hr.at(1).get<unsigned>(), opts);
        } else {
            throw CliError{2, "unknown property entry: " + prop.dump()};
        }
        if (!v.pass && v.conclusive) any_fail = true;
        verdicts.push_back(jsonio::verdict_to_json(*spec.ctx, v));
    }
    out["verdicts"] = std::move(verdicts);
    emit(out, args.out_path);
    return any_fail ? 1 : 0;
}

int cmd_equiv(const CommonArgs& args) {
    json cfg = load_config(args.config_path);
    auto A = spec_from_config(cfg, "specA");
    auto B = spec_from_config(cfg, "specB");
    json out = envelope(cfg, 0, nullptr, *A.ctx);
    auto iv = equiv::index_verdict(A, B);
    if (iv.kind == equiv::EquivKind::Deferred) {
        auto v = equiv::are_equivalent(A, B);
        out["verdict"] = jsonio::equiv_to_json(*A.ctx, v);
    } else {
        out["verdict"] = jsonio::equiv_to_json(*A.ctx, iv);
    }
    emit(out, args.out_path);
    return 0;
}

// one JSONL record per alpha tuple
std::string sweep_line(const seq::SequenceSpec& spec, std::uint64_t idx,
                       const criteria::TupleFlags& flags, const json* oracle_part) {
    json j;
    j["idx"] = idx;
    json alphas = json::array();
    for (gf::FF a : spec.alphas) alphas.push_back(jsonio::element_to_json(*spec.ctx, a));
    j["alphas"] = std::move(alphas);
    j["scattered_criterion"] = flags.scattered_ok ? "guaranteed" : "hypothesis-fails";
    j["all_delta"] = flags.all_delta;
    j["exists_delta"] = flags.exists_delta;
    if (oracle_part) j["oracle"] = *oracle_part;
    return j.dump();
}

int cmd_sweep(const CommonArgs& args) {
    json cfg = load_config(args.config_path);
    if (!cfg.contains("ctx")) throw CliError{2, "config missing 'ctx'"};
    gf::FieldRef ctx;
    try {
        ctx = jsonio::ctx_from_json(cfg.at("ctx"));
    } catch (const std::exception& e) {
        throw CliError{2, std::string("bad ctx: ") + e.what()};
    }
    const unsigned m = cfg.value("m", 3u);
    const unsigned I = cfg.value("I", 1u);
    const unsigned J = cfg.value("J", 2u);
    const std::string mode = cfg.value("mode", std::string("exhaustive"));
    std::uint64_t budget = cfg.value("budget", std::uint64_t{1} << 20);
    if (args.budget_set) budget = args.budget;
    std::uint64_t seed = cfg.value("seed", std::uint64_t{0});
    if (args.seed_set) seed = args.seed;
    const double oracle_rate = cfg.value("oracle_rate", 0.0);
    if (args.out_path.empty()) throw CliError{2, "sweep requires --out"};

    json effective;
    effective["ctx"] = jsonio::ctx_to_json(*ctx);
    effective["m"] = m;
    effective["I"] = I;
    effective["J"] = J;
    effective["mode"] = mode;
    effective["budget"] = budget;
    effective["seed"] = seed;
    effective["oracle_rate"] = oracle_rate;
    const std::uint64_t hash = jsonio::config_hash(effective);

    // tuple index list (exhaustive prefix or seeded distinct random draws)
    const std::uint64_t total = criteria::tuple_count(*ctx, m);
    std::vector<std::uint64_t> indices;
    if (mode == "exhaustive") {
        std::uint64_t count = std::min(total, budget);
        indices.reserve(count);
        for (std::uint64_t i = 0; i < count; ++i) indices.push_back(i);
    } else if (mode == "random") {
        std::uint64_t count = std::min(total, budget);
        std::set<std::uint64_t> seen;
        std::uint64_t draw = 0;
        while (seen.size() < count) {
            // splittable per-draw stream
            std::uint64_t s = seed ^ (0x9e3779b97f4a7c15ull * (draw + 1));
            s += 0x9e3779b97f4a7c15ull;
            std::uint64_t z = s;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
            z ^= z >> 31;
            seen.insert(z % total);
            ++draw;
        }
        indices.assign(seen.begin(), seen.end());
    } else {
        throw CliError{2, "sweep mode must be 'exhaustive' or 'random'"};
    }

    // resume support: collect already-present idx values when the file exists
    std::set<std::uint64_t> done;
    bool existing = std::filesystem::exists(args.out_path);
    if (existing) {
        std::ifstream in(args.out_path);
        std::string line;
        bool first = true;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            json j = json::parse(line, nullptr, false);
            if (j.is_discarded()) throw CliError{2, "existing output file is not JSONL"};
            if (first) {
                first = false;
                if (!j.contains("config_hash") || j.at("config_hash") != hash)
                    throw CliError{2, "existing output file was produced by a different config"};
                continue;
            }
            if (j.contains("idx")) done.insert(j.at("idx").get<std::uint64_t>());
        }
    }

    std::ofstream out(args.out_path, std::ios::app);
    if (!out) throw CliError{2, "cannot open output file: " + args.out_path};
    if (!existing) {
        json header;
        header["config_hash"] = hash;
        header["version"] = jsonio::kVersion;
        header["config"] = effective;
        out << header.dump() << "\n";
    }

    criteria::SweepCounts counts;
    oracle::OracleOptions oopts;
    oopts.workers = args.workers;
    for (std::uint64_t idx : indices) {
        if (done.count(idx)) continue;
        auto alphas = criteria::tuple_at(*ctx, m, idx);
        seq::SequenceSpec spec(ctx, m, I, J, alphas);
        criteria::TupleFlags flags;
        flags.scattered_ok =
            criteria::scattered_criterion(spec).verdict == criteria::Verdict::Guaranteed;
        auto pi = criteria::pi_conditions(spec);
        flags.all_delta = pi.all_delta;
        flags.exists_delta = pi.exists_delta;
        ++counts.total;
        if (flags.scattered_ok) ++counts.scattered_ok;
        if (flags.all_delta) ++counts.all_delta;
        if (flags.exists_delta) ++counts.exists_delta;
        if (flags.scattered_ok && flags.all_delta) ++counts.scattered_and_all_delta;

        json oracle_part;
        bool spot = false;
        if (oracle_rate > 0.0) {
            std::uint64_t s = (seed + 0x51ab) ^ (0x9e3779b97f4a7c15ull * (idx + 1));
            s += 0x9e3779b97f4a7c15ull;
            std::uint64_t z = s;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
            z ^= z >> 31;
            spot = (z % 1000000) < static_cast<std::uint64_t>(oracle_rate * 1000000.0);
        }
        if (spot) {
            auto v = oracle::verify_scattered(spec, oopts);
            oracle_part = jsonio::verdict_to_json(*ctx, v);
        }
        out << sweep_line(spec, idx, flags, spot ? &oracle_part : nullptr) << "\n";
    }
    out.flush();

    // summary CSV next to the JSONL file
    auto qb = criteria::q_lower_bound(*ctx, m, I, J);
    auto ib = criteria::inequiv_lower_bound(*ctx, m, I, J);
    std::ofstream csv(args.out_path + ".summary.csv");
    csv << "key,value\n";
    csv << "tuples_processed," << counts.total << "\n";
    csv << "scattered_guaranteed," << counts.scattered_ok << "\n";
    csv << "all_delta," << counts.all_delta << "\n";
    csv << "exists_delta," << counts.exists_delta << "\n";
    csv << "scattered_and_all_delta," << counts.scattered_and_all_delta << "\n";
    csv << "q_bound_verdict," << criteria::to_string(qb.verdict) << "\n";
    csv << "q_bound," << qb.Q.str() << "\n";
    csv << "inequiv_bound_verdict," << criteria::to_string(ib.verdict) << "\n";
    csv << "inequiv_bound," << ib.value << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"scattered subspace family laboratory"};
    app.require_subcommand(1);

    CommonArgs args;
    for (auto* name : {"check", "verify", "sweep", "equiv"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", args.config_path, "JSON config file")->required();
        sub->add_option("--out", args.out_path, "output path (default: stdout)");
        sub->add_option("--seed", args.seed, "PRNG seed override")
            ->each([&](const std::string&) { args.seed_set = true; });
        sub->add_option("--budget", args.budget, "budget override")
            ->each([&](const std::string&) { args.budget_set = true; });
        sub->add_option("--workers", args.workers, "worker thread count");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("check")) return cmd_check(args);
        if (app.got_subcommand("verify")) return cmd_verify(args);
        if (app.got_subcommand("sweep")) return cmd_sweep(args);
        if (app.got_subcommand("equiv")) return cmd_equiv(args);
    } catch (const CliError& e) {
        std::cerr << "error: " << e.message << "\n";
        return e.code;
    } catch (const oracle::BudgetExceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return 3;
    } catch (const equiv::NotApplicableError& e) {
        std::cerr << "not applicable: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
