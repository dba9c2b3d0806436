#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "scatterlab/jsonio.hpp"

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

std::string bin() {
    const char* b = std::getenv("SCATTERLAB_BIN");
    REQUIRE(b != nullptr);
    return b;
}

struct RunResult {
    int code;
    std::string out;
};

RunResult run(const std::string& cmdline) {
    std::string full = cmdline + " 2>/dev/null";
    FILE* p = popen(full.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string out;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
    int status = pclose(p);
    return {WEXITSTATUS(status), out};
}

fs::path tmpdir() {
    auto d = fs::temp_directory_path() / "scatterlab_cli_test";
    fs::create_directories(d);
    return d;
}

std::string write_config(const std::string& name, const json& j) {
    auto p = tmpdir() / name;
    std::ofstream f(p);
    f << j.dump(2);
    return p.string();
}

json reference_spec_json(std::vector<std::vector<int>> alphas = {{1, 0, 0}, {1, 0, 0}, {0, 1, 0}}) {
    json spec;
    spec["p"] = 2;
    spec["h"] = 1;
    spec["n"] = 3;
    spec["modulus"] = "builtin";
    spec["m"] = 3;
    spec["I"] = 1;
    spec["J"] = 2;
    spec["alphas"] = alphas;
    return spec;
}

}  // namespace

TEST_CASE("check: reference instance") {
    json cfg;
    cfg["spec"] = reference_spec_json();
    auto path = write_config("check_ref.json", cfg);
    auto r = run(bin() + " check --config " + path);
    CHECK(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j["report"]["scattered"]["verdict"] == "guaranteed");
    CHECK(j["report"]["cutting"]["verdict"] == "hypothesis-fails");
    CHECK(j["report"]["q_bound"]["Q"] == "245");
    // byte-identical across repeat runs
    auto r2 = run(bin() + " check --config " + path);
    CHECK(r.out == r2.out);
}

TEST_CASE("check: all-ones alphas have no guarantees") {
    json cfg;
    cfg["spec"] = reference_spec_json({{1, 0, 0}, {1, 0, 0}, {1, 0, 0}});
    auto path = write_config("check_ones.json", cfg);
    auto r = run(bin() + " check --config " + path);
    CHECK(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j["report"]["scattered"]["verdict"] == "hypothesis-fails");
    CHECK(j["report"]["cutting"]["verdict"] == "hypothesis-fails");
    CHECK(j["report"]["evasive"].empty());
    CHECK(j["report"]["indecomposable"]["eventually"] == false);
}

TEST_CASE("check: malformed config exits 2") {
    json cfg;
    cfg["spec"] = reference_spec_json();
    cfg["spec"].erase("alphas");
    auto path = write_config("check_bad.json", cfg);
    auto r = run(bin() + " check --config " + path);
    CHECK(r.code == 2);
    auto r2 = run(bin() + " check --config /nonexistent.json");
    CHECK(r2.code == 2);
}

TEST_CASE("verify: passing properties exit 0") {
    json cfg;
    cfg["spec"] = reference_spec_json();
    cfg["properties"] = json::array({"scattered", json{{"evasive", {1, 1}}}});
    auto path = write_config("verify_ok.json", cfg);
    auto r = run(bin() + " verify --config " + path);
    CHECK(r.code == 0);
    json j = json::parse(r.out);
    REQUIRE(j["verdicts"].size() == 2);
    CHECK(j["verdicts"][0]["pass"] == true);
    CHECK(j["verdicts"][0]["enumerated"] == 511);
    CHECK(j["verdicts"][1]["pass"] == true);
    // workers do not change the bytes
    auto r4 = run(bin() + " verify --config " + path + " --workers 4");
    CHECK(r4.out == r.out);
}

TEST_CASE("verify: conclusive failure exits 1 with witness") {
    json cfg;
    cfg["spec"] = reference_spec_json({{1, 0, 0}, {1, 0, 0}, {1, 0, 0}});  // not scattered
    cfg["properties"] = json::array({"scattered"});
    auto path = write_config("verify_fail.json", cfg);
    auto r = run(bin() + " verify --config " + path);
    CHECK(r.code == 1);
    json j = json::parse(r.out);
    CHECK(j["verdicts"][0]["pass"] == false);
    CHECK(j["verdicts"][0]["witness_kind"] == "point-pair");
    CHECK(j["verdicts"][0]["witness"].size() == 2);
}

TEST_CASE("verify: budget exceeded exits 3") {
    json cfg;
    cfg["spec"] = reference_spec_json();
    cfg["properties"] = json::array({"scattered"});
    auto path = write_config("verify_budget.json", cfg);
    auto r = run(bin() + " verify --config " + path + " --budget 100");
    CHECK(r.code == 3);
}

TEST_CASE("verify: second_weight record") {
    json cfg;
    cfg["spec"] = reference_spec_json();
    cfg["properties"] = json::array({"second_weight"});
    cfg["mode"] = "sampled";
    cfg["samples"] = 200;
    cfg["seed"] = 11;
    auto path = write_config("verify_sw.json", cfg);
    auto r = run(bin() + " verify --config " + path);
    CHECK(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j["verdicts"][0].contains("second_weight"));
    CHECK(j["verdicts"][0]["exact"] == false);
}

TEST_CASE("sweep: exhaustive reference sweep with resume") {
    json cfg;
    cfg["ctx"] = {{"p", 2}, {"h", 1}, {"n", 3}, {"modulus", "builtin"}};
    cfg["m"] = 3;
    cfg["I"] = 1;
    cfg["J"] = 2;
    cfg["mode"] = "exhaustive";
    cfg["budget"] = 1u << 20;
    auto path = write_config("sweep_ref.json", cfg);
    auto out = (tmpdir() / "sweep_ref.jsonl").string();
    fs::remove(out);
    fs::remove(out + ".summary.csv");

    auto r = run(bin() + " sweep --config " + path + " --out " + out);
    CHECK(r.code == 0);
    std::ifstream in(out);
    std::string line;
    std::uint64_t lines = 0, passing = 0;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j = json::parse(line);
        if (first) {
            first = false;
            CHECK(j.contains("config_hash"));
            continue;
        }
        ++lines;
        if (j["scattered_criterion"] == "guaranteed" && j["all_delta"] == true) ++passing;
    }
    CHECK(lines == 343);
    CHECK(passing >= 245);

    // summary CSV
    std::ifstream csv(out + ".summary.csv");
    std::stringstream ss;
    ss << csv.rdbuf();
    CHECK(ss.str().find("q_bound,245") != std::string::npos);
    CHECK(ss.str().find("tuples_processed,343") != std::string::npos);

    // resume: no duplicate records
    auto r2 = run(bin() + " sweep --config " + path + " --out " + out);
    CHECK(r2.code == 0);
    std::ifstream in2(out);
    std::uint64_t total2 = 0;
    while (std::getline(in2, line))
        if (!line.empty()) ++total2;
    CHECK(total2 == 344);  // header + 343, unchanged
}

TEST_CASE("sweep: oracle spot checks and config-hash mismatch") {
    json cfg;
    cfg["ctx"] = {{"p", 2}, {"h", 1}, {"n", 3}, {"modulus", "builtin"}};
    cfg["m"] = 3;
    cfg["I"] = 1;
    cfg["J"] = 2;
    cfg["mode"] = "exhaustive";
    cfg["budget"] = 20;
    cfg["oracle_rate"] = 1.0;
    auto path = write_config("sweep_oracle.json", cfg);
    auto out = (tmpdir() / "sweep_oracle.jsonl").string();
    fs::remove(out);
    fs::remove(out + ".summary.csv");
    CHECK(run(bin() + " sweep --config " + path + " --out " + out).code == 0);
    std::ifstream in(out);
    std::string line;
    bool first = true;
    std::uint64_t records = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j = json::parse(line);
        if (first) {
            first = false;
            continue;
        }
        ++records;
        REQUIRE(j.contains("oracle"));  // rate 1.0: every tuple spot-checked
        // criterion => oracle soundness on the spot checks
        if (j["scattered_criterion"] == "guaranteed") CHECK(j["oracle"]["pass"] == true);
    }
    CHECK(records == 20);

    // resuming with a different config is refused
    json cfg2 = cfg;
    cfg2["budget"] = 30;
    auto path2 = write_config("sweep_oracle2.json", cfg2);
    CHECK(run(bin() + " sweep --config " + path2 + " --out " + out).code == 2);
}

TEST_CASE("sweep: random mode is reproducible") {
    json cfg;
    cfg["ctx"] = {{"p", 2}, {"h", 1}, {"n", 6}, {"modulus", "builtin"}};
    cfg["m"] = 3;
    cfg["I"] = 1;
    cfg["J"] = 2;
    cfg["mode"] = "random";
    cfg["budget"] = 100;
    cfg["seed"] = 7;
    auto path = write_config("sweep_rand.json", cfg);
    auto out1 = (tmpdir() / "sweep_r1.jsonl").string();
    auto out2 = (tmpdir() / "sweep_r2.jsonl").string();
    fs::remove(out1);
    fs::remove(out2);
    CHECK(run(bin() + " sweep --config " + path + " --out " + out1).code == 0);
    CHECK(run(bin() + " sweep --config " + path + " --out " + out2).code == 0);
    std::ifstream f1(out1), f2(out2);
    std::stringstream s1, s2;
    s1 << f1.rdbuf();
    s2 << f2.rdbuf();
    CHECK(s1.str() == s2.str());
    std::uint64_t records = 0;
    std::string line;
    std::ifstream f3(out1);
    bool first = true;
    while (std::getline(f3, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            continue;
        }
        ++records;
    }
    CHECK(records == 100);
}

TEST_CASE("equiv: self pair is equivalent with witness") {
    json spec;
    spec["p"] = 2;
    spec["h"] = 1;
    spec["n"] = 5;
    spec["modulus"] = "builtin";
    spec["m"] = 3;
    spec["I"] = 1;
    spec["J"] = 2;
    spec["alphas"] = {{1, 0, 0, 0, 0}, {0, 1, 0, 0, 0}, {1, 1, 0, 0, 0}};
    json cfg;
    cfg["specA"] = spec;
    cfg["specB"] = spec;
    auto path = write_config("equiv_self.json", cfg);
    auto r = run(bin() + " equiv --config " + path);
    CHECK(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j["verdict"]["kind"] == "equivalent");
    CHECK(j["verdict"]["witness_verified"] == true);
    CHECK(j["verdict"]["witness_matrix"].size() == 6);
}

TEST_CASE("builtin modulus override via environment") {
    // alternate irreducible x^3 + x^2 + 1 for (p=2, degree 3)
    json tbl;
    tbl["2"]["3"] = {1, 0, 1, 1};
    auto tbl_path = write_config("moduli_override.json", tbl);
    json cfg;
    cfg["spec"] = reference_spec_json();
    auto path = write_config("check_override.json", cfg);
    auto r = run("SCATTERLAB_BUILTIN_MODULI=" + tbl_path + " " + bin() + " check --config " + path);
    CHECK(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j["modulus"] == json::array({1, 0, 1, 1}));
    // a reducible override entry is rejected
    json bad;
    bad["2"]["3"] = {1, 1, 1, 1};
    auto bad_path = write_config("moduli_bad.json", bad);
    auto r2 =
        run("SCATTERLAB_BUILTIN_MODULI=" + bad_path + " " + bin() + " check --config " + path);
    CHECK(r2.code != 0);
}

TEST_CASE("wire formats round trip") {
    using namespace scatterlab;
    // SequenceSpec
    auto F = gf::FieldCtx::create_builtin(2, 2, 3);
    seq::SequenceSpec spec(F, 3, 1, 2, {1, F->gen_x(), F->add(F->gen_x(), 1)});
    auto j = jsonio::spec_to_json(spec);
    auto back = jsonio::spec_from_json(j);
    CHECK(back.m == spec.m);
    CHECK(back.I == spec.I);
    CHECK(back.J == spec.J);
    CHECK(back.alphas == spec.alphas);
    CHECK(back.ctx->modulus() == spec.ctx->modulus());

    // ExpSpec tagged objects
    for (const auto& e :
         {gf::ExpSpec::integer(42), gf::ExpSpec::cyc(3, 7), gf::ExpSpec::qpow_minus1(9),
          gf::ExpSpec::prod({gf::ExpSpec::cyc(1, 3), gf::ExpSpec::integer(2)}),
          gf::ExpSpec::sum({gf::ExpSpec::qpow_minus1(2), gf::ExpSpec::integer(1)})}) {
        auto ej = jsonio::expspec_to_json(e);
        auto eb = jsonio::expspec_from_json(ej);
        // equality via evaluation at several moduli
        for (std::uint64_t M : {7ull, 97ull, 1000003ull})
            CHECK(e.eval_mod(2, M) == eb.eval_mod(2, M));
        CHECK(ej.at("kind").is_string());
    }
    CHECK_THROWS(jsonio::expspec_from_json(json{{"kind", "nope"}}));
}

TEST_CASE("equiv: distinct indices and out-of-range gates") {
    json a = reference_spec_json();
    a["n"] = 6;
    a["alphas"] = {{1, 0, 0, 0, 0, 0}, {1, 0, 0, 0, 0, 0}, {0, 1, 0, 0, 0, 0}};
    json b = a;
    b["J"] = 3;
    json cfg;
    cfg["specA"] = a;
    cfg["specB"] = b;
    auto path = write_config("equiv_idx.json", cfg);
    auto r = run(bin() + " equiv --config " + path);
    CHECK(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j["verdict"]["kind"] == "inequivalent-by-index");

    // same-index pair with J >= n/2: hypothesis gate, exit 4
    json c;
    c["specA"] = reference_spec_json();
    c["specB"] = reference_spec_json({{1, 0, 0}, {1, 0, 0}, {1, 1, 0}});
    auto path2 = write_config("equiv_gate.json", c);
    auto r2 = run(bin() + " equiv --config " + path2);
    CHECK(r2.code == 4);
}
