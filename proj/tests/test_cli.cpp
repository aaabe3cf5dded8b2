#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"

// SYNALG_CLI_PATH and SYNALG_DATA_DIR are injected by the build as string
// literals pointing at the built executable and the checked-in data files.

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CmdResult {
    int exit_code = -1;
    std::string output;
};

CmdResult run_command(const std::string& cmd) {
    CmdResult res;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    std::size_t got = 0;
    while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) res.output.append(buf, got);
    const int status = ::pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

std::string cli() { return std::string(SYNALG_CLI_PATH); }
std::string data(const std::string& name) { return std::string(SYNALG_DATA_DIR) + "/" + name; }

// stdout only; stderr is dropped so JSON output stays parseable
CmdResult run_json(const std::string& args) {
    return run_command(cli() + " " + args + " 2>/dev/null");
}

// stdout and stderr interleaved, for message checks
CmdResult run_all(const std::string& args) { return run_command(cli() + " " + args + " 2>&1"); }

std::string write_temp(const std::string& name, const std::string& content) {
    const fs::path path = fs::temp_directory_path() / name;
    std::ofstream out(path, std::ios::binary);
    REQUIRE(out.good());
    out << content;
    out.close();
    return path.string();
}

// recursive numeric comparison with absolute-plus-relative slack
bool json_near(const json& a, const json& b, double tol) {
    if (a.is_number() && b.is_number()) {
        const double x = a.get<double>();
        const double y = b.get<double>();
        return std::abs(x - y) <= tol * (1.0 + std::max(std::abs(x), std::abs(y)));
    }
    if (a.type() != b.type()) return false;
    if (a.is_array()) {
        if (a.size() != b.size()) return false;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (!json_near(a[i], b[i], tol)) return false;
        return true;
    }
    if (a.is_object()) {
        if (a.size() != b.size()) return false;
        for (const auto& [key, value] : a.items())
            if (!b.contains(key) || !json_near(value, b.at(key), tol)) return false;
        return true;
    }
    return a == b;
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("example document carries the worked three-dimensional facts") {
    const CmdResult r = run_json("example-r3 --output json");
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.output);

    CHECK(doc.at("command") == "example-r3");
    CHECK(doc.at("dim") == 3);

    const json& inf = doc.at("infimum");
    CHECK(inf.at("mode") == "atom-complement");
    CHECK(inf.at("branch") == "general");
    CHECK(inf.at("alpha").get<double>() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(inf.at("below_e") == true);
    CHECK(inf.at("below_target") == true);
    const json& m = inf.at("infimum");
    CHECK(m[0][0].get<double>() == doctest::Approx(5.0 / 24.0).epsilon(1e-12));
    CHECK(m[1][1].get<double>() == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(m[2][2].get<double>() == doctest::Approx(3.0 / 8.0).epsilon(1e-12));
    CHECK(m[0][1].get<double>() == doctest::Approx(-1.0 / 12.0).epsilon(1e-12));
    CHECK(m[0][2].get<double>() == doctest::Approx(-1.0 / 8.0).epsilon(1e-12));
    CHECK(m[1][2].get<double>() == doctest::Approx(-1.0 / 4.0).epsilon(1e-12));

    const json& com = doc.at("commutator");
    CHECK(com.at("rank_r") == 3);
    CHECK(com.at("rank_b_carrier") == 2);
    CHECK(com.at("rank_cs_meet") == 3);
    CHECK(com.at("closure_agrees") == true);
    CHECK(com.at("chain_ok") == true);
    CHECK(com.at("totally_noncompatible") == true);
    CHECK(com.at("generic_position") == false);
    CHECK(com.at("b_carrier_equals_r") == false);
    CHECK(com.at("e_commutes_b_carrier") == false);

    const json& spectral_doc = doc.at("spectral");
    REQUIRE(spectral_doc.at("thresholds").size() == 3);
    CHECK(spectral_doc.at("thresholds")[0].get<double>() == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(spectral_doc.at("thresholds")[1].get<double>() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(spectral_doc.at("thresholds")[2].get<double>() == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(spectral_doc.at("cut_ranks") == json::parse("[1,2,3]"));
    CHECK(spectral_doc.at("projection_free") == true);

    const json& dec = doc.at("decomposition");
    CHECK(dec.at("ranks").at("p") == 1);
    CHECK(dec.at("ranks").at("z") == 0);
    CHECK(dec.at("ranks").at("t") == 0);
    CHECK(dec.at("ranks").at("carrier_b") == 2);
    CHECK(dec.at("reconstruction_residual").get<double>() < 1e-10);
    CHECK(dec.at("projection_free") == true);
}

TEST_CASE("json output is byte-identical across runs") {
    const CmdResult a = run_json("example-r3 --output json");
    const CmdResult b = run_json("example-r3 --output json");
    REQUIRE(a.exit_code == 0);
    REQUIRE(b.exit_code == 0);
    CHECK(a.output == b.output);

    const CmdResult v1 = run_json("verify --trials 1 --dims 2..3 --check eig --output json");
    const CmdResult v2 = run_json("verify --trials 1 --dims 2..3 --check eig --output json");
    REQUIRE(v1.exit_code == 0);
    CHECK(v1.output == v2.output);
}

TEST_CASE("golden comparison accepts the frozen document and rejects a perturbed one") {
    const CmdResult ok = run_all("example-r3 --output json --golden " + data("r3_golden.json"));
    CHECK(ok.exit_code == 0);
    CHECK(ok.output.find("golden comparison: match") != std::string::npos);

    std::ifstream in(data("r3_golden.json"));
    REQUIRE(in.good());
    json golden = json::parse(in);
    golden["infimum"]["alpha"] = 0.25;
    const std::string bad = write_temp("synalg_bad_golden.json", golden.dump());
    const CmdResult mis = run_all("example-r3 --output json --golden " + bad);
    CHECK(mis.exit_code == 1);
    CHECK(mis.output.find("golden mismatch at") != std::string::npos);
    fs::remove(bad);
}

TEST_CASE("decompose on the checked-in pair matches the built-in example") {
    const CmdResult r = run_json("decompose --input " + data("r3_input.json") + " --output json");
    REQUIRE(r.exit_code == 0);
    const json dec = json::parse(r.output);
    CHECK(dec.at("command") == "decompose");

    const CmdResult ex = run_json("example-r3 --output json");
    REQUIRE(ex.exit_code == 0);
    const json nested = json::parse(ex.output).at("decomposition");

    for (const char* key : {"p", "e", "c", "s", "j", "b", "k", "z", "t", "offdiag",
                            "carrier_b", "carrier_c", "carrier_s", "carrier_j"})
        CHECK(json_near(dec.at(key), nested.at(key), 1e-12));
    CHECK(dec.at("ranks") == nested.at("ranks"));
}

TEST_CASE("a pair document can arrive on standard input") {
    const CmdResult r = run_command("cat " + data("r3_input.json") + " | " + cli() +
                                    " decompose --input - --output json 2>/dev/null");
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.output);
    CHECK(doc.at("dim") == 3);
    CHECK(doc.at("ranks").at("carrier_b") == 2);
}

TEST_CASE("infimum against an explicit projection target") {
    const CmdResult r = run_json("infimum --input " + data("r3_input.json") + " --q " +
                                 data("r3_q.json") + " --output json");
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.output);
    CHECK(doc.at("mode") == "projection");
    CHECK(doc.at("below_e") == true);
    CHECK(doc.at("below_q") == true);
    const json expected = json::parse(
        "[[0.25,0,0],[0,0.5,0],[0,0,0]]");
    CHECK(json_near(doc.at("infimum"), expected, 1e-9));
}

TEST_CASE("verify runs a filtered battery and reports") {
    const CmdResult text = run_all("verify --trials 1 --dims 2..3 --check eig --output text");
    CHECK(text.exit_code == 0);
    CHECK(text.output.find("RESULT: PASS") != std::string::npos);

    const fs::path report = fs::temp_directory_path() / "synalg_report.json";
    const CmdResult js = run_json("verify --trials 2 --dims 2..4 --check eig --output json "
                                  "--report " + report.string());
    REQUIRE(js.exit_code == 0);
    const json doc = json::parse(js.output);
    CHECK(doc.at("command") == "verify");
    CHECK(doc.at("checks").size() == 3);
    CHECK(doc.at("total_trials") == 6); // 3 checks x 2 trials
    CHECK(doc.at("total_failures") == 0);
    CHECK(doc.at("all_passed") == true);

    std::ifstream in(report);
    REQUIRE(in.good());
    const json written = json::parse(in);
    CHECK(written == doc);
    fs::remove(report);
}

TEST_CASE("bad input and bad usage exit with code 2") {
    const std::string bad_json = write_temp("synalg_bad.json", "{\"dim\": 3, \"p\": [[");
    CHECK(run_all("decompose --input " + bad_json).exit_code == 2);
    fs::remove(bad_json);

    const std::string asym = write_temp(
        "synalg_asym.json",
        R"({"dim": 2, "p": [[1,0],[0,0]], "e": [[0.5,0.4],[0.1,0.5]]})");
    CHECK(run_all("decompose --input " + asym).exit_code == 2);
    fs::remove(asym);

    const std::string not_projection = write_temp(
        "synalg_notproj.json",
        R"({"dim": 2, "p": [[0.5,0],[0,0.5]], "e": [[0.5,0],[0,0.5]]})");
    CHECK(run_all("decompose --input " + not_projection).exit_code == 2);
    fs::remove(not_projection);

    CHECK(run_all("decompose").exit_code == 2);               // missing --input
    CHECK(run_all("decompose --nope").exit_code == 2);        // unknown flag
    CHECK(run_all("verify --check zzz").exit_code == 2);      // filter matches nothing
    CHECK(run_all("verify --dims 2..x").exit_code == 2);      // malformed range
    CHECK(run_all("").exit_code == 2);                        // subcommand required

    // infimum without --q needs an atom; the checked-in q is rank two
    const std::string rank2 = write_temp(
        "synalg_rank2.json",
        R"({"dim": 3, "p": [[1,0,0],[0,1,0],[0,0,0]],
            "e": [[0.25,0,0],[0,0.5,0],[0,0,0.75]]})");
    CHECK(run_all("infimum --input " + rank2).exit_code == 2);
    fs::remove(rank2);
}

TEST_CASE("text mode renders human-readable summaries") {
    const std::string input = data("r3_input.json");
    const CmdResult dec = run_all("decompose --input " + input + " --output text");
    CHECK(dec.exit_code == 0);
    CHECK(dec.output.find("decomposition in dimension 3") != std::string::npos);

    const CmdResult com = run_all("commutator --input " + input + " --output text");
    CHECK(com.exit_code == 0);
    CHECK(com.output.find("rank") != std::string::npos);

    const CmdResult inf = run_all("infimum --input " + input + " --output text");
    CHECK(inf.exit_code == 0);
    CHECK(inf.output.find("alpha") != std::string::npos);

    const CmdResult infq = run_all("infimum --input " + input + " --q " + data("r3_q.json") +
                                   " --output text");
    CHECK(infq.exit_code == 0);
    CHECK(infq.output.find("rank 2") != std::string::npos);

    const CmdResult spc = run_all("spectral --input " + input + " --output text");
    CHECK(spc.exit_code == 0);
    CHECK(spc.output.find("threshold") != std::string::npos);

    const CmdResult ex = run_all("example-r3 --output text");
    CHECK(ex.exit_code == 0);
    CHECK(ex.output.find("built-in example") != std::string::npos);
}

TEST_CASE("help is available and succeeds") {
    const CmdResult r = run_all("--help");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("decompose") != std::string::npos);
    CHECK(r.output.find("verify") != std::string::npos);
}

} // TEST_SUITE
