#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fibclose/proof.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

using namespace fibclose;

namespace
{

const Json &certificate()
{
    static const Json cert = [] {
        ProofConfig cfg;
        cfg.n_max = 60;
        cfg.threads = 1;
        return run_full_proof(cfg);
    }();
    return cert;
}

int check(const Json &cert, const std::string &tag)
{
    const auto path = std::filesystem::temp_directory_path() / ("fibclose-checker-" + tag + ".json");
    {
        std::ofstream out(path);
        out << cert.dump() << '\n';
    }
    const std::string cmd = std::string(CHECKER_PATH) + " " + path.string() + " > " + path.string() + ".log 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Json &stage(Json &cert, const std::string &name)
{
    for (auto &s : cert["stages"]) {
        if (s["name"] == name) {
            return s;
        }
    }
    throw std::runtime_error("no stage " + name);
}

} // namespace

TEST_CASE("an untouched certificate is consistent")
{
    // FAIL verdict: the search count differs and n_max = 60 is below the branch bounds
    CHECK(certificate()["verdict"] == "FAIL");
    CHECK(check(certificate(), "clean") == 1);
}

TEST_CASE("a tampered stage-2 bound is caught")
{
    Json cert = certificate();
    Json &row = stage(cert, "stage2-sweep")["results"]["pairs"][40];
    REQUIRE_FALSE(row[3].is_null());
    row[3] = std::to_string(std::stol(row[3].get<std::string>()) - 1);
    CHECK(check(cert, "bound") == 2);
}

TEST_CASE("a forged verdict is caught")
{
    Json cert = certificate();
    stage(cert, "search")["verdict"] = "PASS";
    CHECK(check(cert, "verdict") == 2);
}

TEST_CASE("a dropped solution is caught")
{
    Json cert = certificate();
    Json &sols = stage(cert, "search")["results"]["solutions"];
    sols.erase(sols.begin() + 7);
    CHECK(check(cert, "solution") == 2);
}
