// Command line: exit codes, reports and replay.

#include "rht/cli.hpp"
#include "rht/report.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace rht;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run_command(args, out, err);
    return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& text) {
    auto p = std::filesystem::temp_directory_path() / ("rht_cli_test_" + name);
    std::ofstream(p) << text;
    return p.string();
}

// run with --json, write the report, replay it
void round_trip(const std::vector<std::string>& args, int expected) {
    std::vector<std::string> a = {"--json"};
    a.insert(a.end(), args.begin(), args.end());
    auto r = run(a);
    CHECK(r.code == expected);
    auto j = json::parse(r.out);
    CHECK(j.at("schema") == kReportSchema);
    CHECK(j.at("exit_code") == expected);
    auto path = temp_file("report.json", r.out);
    auto rep = run({"replay", path});
    CHECK(rep.code == 0);
    if (rep.code != 0) MESSAGE(rep.out << rep.err);
}

}  // namespace

TEST_CASE("dim A(0) = 231") {
    auto r = run({"dim", "A(0)"});
    CHECK(r.code == 0);
    CHECK(r.out.find("dim = 231") != std::string::npos);
}

TEST_CASE("usage and parse errors exit with 3") {
    CHECK(run({}).code == 3);
    CHECK(run({"frobnicate", "A(0)"}).code == 3);
    CHECK(run({"dim"}).code == 3);
    CHECK(run({"dim", "nosuch(1)"}).code == 3);
    CHECK(run({"dim", "prop3(2)"}).code == 3);
    auto bad = temp_file("bad.alg", "gen x : 2\ngen y : 3\nd y = x +\n");
    auto r = run({"check", bad});
    CHECK(r.code == 3);
    CHECK(r.err.find("line 3") != std::string::npos);
    CHECK(run({"--param", "i", "dim", "A"}).code == 3);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("checks that fail exit with 1, inconclusive ones with 2") {
    CHECK(run({"check", "CL-fibered"}).code == 1);  // not minimal
    CHECK(run({"exact", "ex02", "b*n"}).code == 1);
    CHECK(run({"exact", "ex02", "a*n"}).code == 0);
    CHECK(run({"exact", "ex02", "n"}).code == 1);  // not closed
    CHECK(run({"--max-degree", "40", "check", "A(0)"}).code == 2);
    CHECK(run({"--case-depth", "0", "spectrum", "A(0)"}).code == 2);
    CHECK(run({"flex", "A(0)"}).code == 1);
}

TEST_CASE("parameters through --param") {
    auto r = run({"--param", "i=2", "dim", "A"});
    CHECK(r.code == 0);
    CHECK(r.out.find("239") != std::string::npos);
    auto f = temp_file("fam.alg", "name fam\nparam n = 1 range 1..\ngen x : 2\ngen y : 2*n+1\nd y = x^(n+1)\nvolume x^n\n");
    auto g = run({"--param", "n=3", "dim", f});
    CHECK(g.code == 0);
    CHECK(g.out.find("dim = 6") != std::string::npos);
}

TEST_CASE("verify a morphism file") {
    auto good = temp_file("good.morphism", "f x = 3*x\nf y = 9*y\n");
    auto r = run({"verify", "sphere(2)", good});
    CHECK(r.code == 0);
    CHECK(r.out.find("degree 3") != std::string::npos);
    auto bad = temp_file("bad.morphism", "f x = 3*x\nf y = 3*y\n");
    CHECK(run({"verify", "sphere(2)", bad}).code == 1);
}

TEST_CASE("reports replay") {
    round_trip({"check", "A(1)"}, 0);
    round_trip({"check", "CL-fibered"}, 1);
    round_trip({"dim", "ex01"}, 0);
    round_trip({"betti", "ex02"}, 0);
    round_trip({"exact", "ex02", "a*n"}, 0);
    round_trip({"exact", "ex02", "b*n"}, 1);
    round_trip({"volume", "A(0)"}, 0);
    round_trip({"spectrum", "A(0)"}, 0);
    round_trip({"spectrum", "CP(4)"}, 0);
    round_trip({"flex", "ex02"}, 0);
    round_trip({"flex", "A(0)"}, 1);
    round_trip({"--param", "l=6", "spectrum", "prop3"}, 0);
    auto good = temp_file("id.morphism", "f x = x\nf y = y\n");
    round_trip({"verify", "sphere(2)", good}, 0);
}

TEST_CASE("a tampered report does not replay") {
    auto r = run({"--json", "spectrum", "CP(2)"});
    auto j = json::parse(r.out);
    auto& inst = j["certificates"]["spectrum"]["family"]["instances"][0];
    inst["degree"] = "17/1";
    auto path = temp_file("tampered.json", j.dump());
    CHECK(run({"replay", path}).code == 1);

    auto e = json::parse(run({"--json", "exact", "ex02", "a*n"}).out);
    e["certificates"]["preimage"] = "2*m";
    CHECK(run({"replay", temp_file("tampered2.json", e.dump())}).code == 1);
}

TEST_CASE("rationals in reports are p/q strings") {
    auto j = json::parse(run({"--json", "spectrum", "A(0)"}).out);
    for (auto& v : j["certificates"]["spectrum"]["values"]) {
        REQUIRE(v.is_string());
        CHECK(v.get<std::string>().find('/') != std::string::npos);
    }
}
