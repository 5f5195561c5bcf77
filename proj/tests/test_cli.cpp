#include "doctest.h"

#include <sstream>

#include "classforge/cli.hpp"

using namespace classforge;
using namespace classforge::cli;
using nlohmann::json;

namespace {

struct Run {
    int code = -1;
    std::string out;
    std::string err;
    json j;
};

Run run(std::vector<std::string> args) {
    Run r;
    std::ostringstream out, err;
    r.code = dispatch(args, out, err);
    r.out = out.str();
    r.err = err.str();
    if (!r.out.empty() && r.out[0] == '{') r.j = json::parse(r.out);
    return r;
}

int count_status(const json& j, const std::string& status) {
    int n = 0;
    for (const auto& v : j["verdicts"])
        if (v["status"] == status) ++n;
    return n;
}

} // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("verify subcommand") {
    auto r = run({"verify", "--a", "5", "--b", "7", "--n", "3"});
    CHECK(r.code == 0);
    CHECK(r.j["command"] == "verify");
    CHECK(r.j["results"]["certificate"]["d"] == "-1347");
    CHECK(r.j["results"]["certificate"]["valid"] == true);
    CHECK(count_status(r.j, "FAIL") == 0);
    CHECK(r.j["results"]["conclusion"].get<std::string>().find("order 3") !=
          std::string::npos);
}

TEST_CASE("generate subcommand") {
    auto r = run({"generate", "--n", "3", "--case", "5mod8"});
    CHECK(r.code == 0);
    CHECK(r.j["results"]["certificate"]["a"] == "5");
    CHECK(r.j["results"]["certificate"]["b"] == "31");
    CHECK(r.j["results"]["certificate"]["d"] == "-119139");
    CHECK(count_status(r.j, "FAIL") == 0);
}

TEST_CASE("search subcommand") {
    auto r = run({"search", "--n", "3", "--case", "5mod8", "--a-max", "20",
                  "--b-max", "50"});
    CHECK(r.code == 0);
    bool found = false;
    for (const auto& cert : r.j["results"]["certificates"])
        if (cert["a"] == "5" && cert["b"] == "7") found = true;
    CHECK(found);
}

TEST_CASE("classgroup subcommand") {
    auto r = run({"classgroup", "--disc", "-23"});
    CHECK(r.code == 0);
    CHECK(r.j["results"]["h"] == "3");
    CHECK(r.j["results"]["elementary_divisors"] == json::array({"3"}));
    CHECK(r.j["results"]["kind"] == "imaginary");

    auto n = run({"classgroup", "--disc", "229"});
    CHECK(n.code == 0);
    CHECK(n.j["results"]["h"] == "3");
    CHECK(n.j["results"]["kind"] == "narrow");
}

TEST_CASE("r3 and hurwitz subcommands") {
    auto r = run({"r3", "--n-value", "1347"});
    CHECK(r.code == 0);
    CHECK(r.j["results"]["gauss"] == "144");
    CHECK(r.j["results"]["brute"] == "144");
    CHECK(count_status(r.j, "PASS") == 1);

    auto h = run({"hurwitz", "--n-value", "12"});
    CHECK(h.code == 0);
    CHECK(h.j["results"]["numerator12"] == "16");
    CHECK(h.j["results"]["value"] == "4/3");
}

TEST_CASE("divisibility subcommand") {
    auto r = run({"divisibility", "--n-value", "1347", "--n", "3"});
    CHECK(r.code == 0);
    CHECK(r.j["results"]["r"] == "144");
    CHECK(count_status(r.j, "FAIL") == 0);
    CHECK(count_status(r.j, "SKIPPED") == 1); // the 12n case does not apply
}

TEST_CASE("scholz subcommand reports the refuted bound") {
    auto r = run({"scholz", "--dprime", "-1347"});
    CHECK(r.code == 1); // the claimed bound fails: computed rank is 0
    CHECK(r.j["results"]["verdict"] == "REFUTED");
    CHECK(r.j["results"]["rank3_real"] == 0);
    CHECK(r.j["results"]["h_imaginary"] == "6");

    auto s = run({"scholz", "--dprime", "-15"});
    CHECK(s.code == 0); // hypothesis not met: nothing to test
    CHECK(s.j["results"]["verdict"] == "HYPOTHESIS_NOT_MET");
}

TEST_CASE("usage and input errors exit 2") {
    CHECK(run({"bogus"}).code == 2);
    CHECK(run({"verify", "--a", "5"}).code == 2);
    CHECK(run({"verify", "--a", "5", "--b", "1", "--n", "3"}).code == 2);
    CHECK(run({"verify", "--a", "x", "--b", "7", "--n", "3"}).code == 2);
    CHECK(run({"generate", "--n", "9", "--case", "5mod8"}).code == 2);
    CHECK(run({"generate", "--n", "3", "--case", "7mod8"}).code == 2);
    CHECK(run({}).code == 2);
    auto r = run({"verify", "--a", "5", "--b", "1", "--n", "3"});
    CHECK(!r.err.empty());
    CHECK(r.out.empty());
}

TEST_CASE("output is deterministic and timing is opt-in") {
    auto a = run({"generate", "--n", "3", "--case", "3mod4"});
    auto b = run({"generate", "--n", "3", "--case", "3mod4"});
    CHECK(a.out == b.out);
    CHECK(a.out.find("elapsed_ms") == std::string::npos);
    auto t = run({"--timing", "generate", "--n", "3", "--case", "3mod4"});
    CHECK(t.out.find("elapsed_ms") != std::string::npos);
}

TEST_CASE("tsv output") {
    auto r = run({"--format", "tsv", "hurwitz", "--n-value", "12"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("command\thurwitz", 0) == 0);
    CHECK(r.out.find("result.numerator12\t16") != std::string::npos);
}

TEST_CASE("examples --skip-slow runs the table and reports the known failures") {
    auto r = run({"examples", "--skip-slow"});
    CHECK(r.code == 1);
    // exactly four claims in the bundled table are arithmetically false:
    // the n7 mod-8 congruence and the three desk-scale 3-rank bounds
    CHECK(count_status(r.j, "FAIL") == 4);
    for (const auto& v : r.j["verdicts"]) {
        if (v["status"] != "FAIL") continue;
        std::string claim = v["claim"].get<std::string>();
        bool expected = claim.find("-8388527 ≡ 5 (mod 8)") != std::string::npos ||
                        claim.find("3-rank") != std::string::npos;
        CHECK(expected);
    }
    CHECK(count_status(r.j, "SKIPPED") > 0);
    // slow brute-force count was skipped
    bool skipped_slow = false;
    for (const auto& v : r.j["verdicts"])
        if (v["status"] == "SKIPPED" &&
            v["claim"].get<std::string>().find("brute-force count") !=
                std::string::npos)
            skipped_slow = true;
    CHECK(skipped_slow);
}

TEST_SUITE_END();
