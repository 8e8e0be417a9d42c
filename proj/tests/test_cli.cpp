#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fibclose/cli.hpp>

#include <json.hpp>

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

using Json = nlohmann::ordered_json;

namespace
{

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args)
{
    args.insert(args.begin(), "fibclose");
    std::vector<const char *> argv;
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out, err;
    const int code = fibclose::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

} // namespace

TEST_CASE("search formats")
{
    const Run j = run({"search", "--n-max", "50"});
    REQUIRE(j.code == fibclose::exit_pass);
    const Json doc = Json::parse(j.out);
    CHECK(doc["count"] == 225);
    CHECK(doc["max_n"] == 42);
    CHECK(doc["solutions"].size() == 225);

    const Run c = run({"search", "--n-max", "50", "--format", "csv"});
    REQUIRE(c.code == fibclose::exit_pass);
    CHECK(c.out.rfind("n,m,l,a\n", 0) == 0);
    CHECK(std::count(c.out.begin(), c.out.end(), '\n') == 226);

    const Run t = run({"search", "--n-max", "10", "--format", "text"});
    CHECK(t.code == fibclose::exit_pass);
    CHECK(t.out.find("solutions") != std::string::npos);
}

TEST_CASE("usage errors exit with 2")
{
    CHECK(run({}).code == fibclose::exit_usage);
    CHECK(run({"frobnicate"}).code == fibclose::exit_usage);
    CHECK(run({"search", "--no-such-flag"}).code == fibclose::exit_usage);
    CHECK(run({"search", "--n-max", "1"}).code == fibclose::exit_usage);
    CHECK(run({"search", "--format", "xml"}).code == fibclose::exit_usage);
    CHECK(run({"verify-table"}).code == fibclose::exit_usage);
    CHECK(run({"verify-table", "--table", "/nonexistent.csv"}).code == fibclose::exit_usage);
    CHECK(run({"contfrac", "--bits", "512", "--bits-max", "256"}).code == fibclose::exit_usage);
}

TEST_CASE("verify-table")
{
    const Run fixed = run({"verify-table", "--table", FIBCLOSE_DATA_DIR "/table1_corrected.csv", "--expected-count",
                           "225", "--n-max", "60"});
    CHECK(fixed.code == fibclose::exit_pass);
    const Run lit = run({"verify-table", "--table", FIBCLOSE_DATA_DIR "/table1.csv", "--n-max", "60"});
    CHECK(lit.code == fibclose::exit_fail);
    const Json d = Json::parse(lit.out);
    CHECK(d["missing"].size() == 4);
    CHECK(d["extra"].size() == 5);
}

TEST_CASE("contfrac")
{
    const Run r = run({"contfrac", "--count", "20", "--bound", "3.93e15", "--M", "3.93e15"});
    REQUIRE(r.code == fibclose::exit_pass);
    const Json j = Json::parse(r.out);
    CHECK(j["quotients"][17] == "134");
    CHECK(j["first_q_exceeding"]["ordinal"] == 35);
    CHECK(j["legendre"]["a_max"] == "134");
}

TEST_CASE("first-bound")
{
    const Run r = run({"first-bound", "--tighten"});
    CHECK(r.code == fibclose::exit_pass);
    const Json j = Json::parse(r.out);
    CHECK(j["audit_ok"] == true);
    CHECK(j["tight"]["case3"]["n_max"] == "531879945814065");
}

TEST_CASE("reduce")
{
    const Run ok = run({"reduce", "--form", "first"});
    CHECK(ok.code == fibclose::exit_pass);
    CHECK(Json::parse(ok.out)["w_bound"] == "157");

    const Run zero = run({"reduce", "--gamma", "log2/logAlpha", "--mu", "0"});
    CHECK(zero.code == fibclose::exit_fail);
    CHECK(Json::parse(zero.out)["failure"] == "epsilon_nonpositive");

    const Run pair = run({"reduce", "--form", "second", "--t", "2", "--s", "2", "--M", "23861744267921138"});
    CHECK(pair.code == fibclose::exit_pass);
    CHECK(Json::parse(pair.out)["w_bound"] == "125");

    const Run starved = run({"reduce", "--bits", "64", "--bits-max", "96"});
    CHECK(starved.code == fibclose::exit_usage);
}

TEST_CASE("sweep on a small grid")
{
    const Run r = run({"sweep", "--gap-max", "9", "--M", "23861744267921138"});
    CHECK(r.code == fibclose::exit_pass);
    const Json j = Json::parse(r.out);
    CHECK(j["special"].size() == 9);
    CHECK(j["failed"].empty());
}

TEST_CASE("prove is deterministic and reports resource failures")
{
    const Run a = run({"prove", "--n-max", "60", "--threads", "1"});
    const Run b = run({"prove", "--n-max", "60", "--threads", "1"});
    CHECK(a.out == b.out);
    const Json cert = Json::parse(a.out);
    CHECK(cert["format"] == "fibclose-certificate/1");
    CHECK(cert["stages"].size() == 7); // no table stage without --table

    const Run starved = run({"prove", "--n-max", "60", "--bits", "64", "--bits-max", "96"});
    CHECK(starved.code == fibclose::exit_usage);
    CHECK(Json::parse(starved.out)["verdict"] == "FAIL");
}
