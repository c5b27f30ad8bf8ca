#include "helpers.hpp"

#include "quivermorse/cli.hpp"

#include <json.hpp>

#include <sstream>

using nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = qm::cli::run_command(args, out, err);
    return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(QM_DATA_DIR) + "/" + name; }

} // namespace

TEST_CASE("cli check reports a complete relation set") {
    auto r = run({"check", "--quiver", data("jordan.json")});
    REQUIRE(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["complete"] == true);
    CHECK(j["quadratic"] == true);

    auto by_name = run({"check", "--quiver", "handsaw3"});
    CHECK(by_name.code == 0);
}

TEST_CASE("cli dims on the edgeless quiver") {
    auto r = run({"dims", "--quiver", data("edgeless.json"), "--v1", "2,3", "--v2", "4,5"});
    REQUIRE(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["ringel"] == 23);
    CHECK(j["hom1"] == 0);
}

TEST_CASE("cli flow converges from the sample start") {
    auto r = run({"flow", "--quiver", data("jordan.json"), "--rep", data("start.json"), "--alpha", "canonical", "--v",
                  "1,1"});
    REQUIRE(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["flow"]["status"] == "Converged");
    CHECK(j["flow"]["f_limit"].get<double>() <= 1e-10);
    CHECK(j.contains("classification"));

    auto mismatch = run({"flow", "--quiver", data("jordan.json"), "--rep", data("start.json"), "--v", "2,1"});
    CHECK(mismatch.code == qm::cli::kExitPrecondition);
}

TEST_CASE("cli hn reports stability of the minimum") {
    auto r = run({"hn", "--quiver", data("jordan.json"), "--rep", data("xmin.json")});
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out)["stable"] == true);
}

TEST_CASE("cli usage errors") {
    CHECK(run({}).code == qm::cli::kExitUsage);
    CHECK(run({"frobnicate"}).code == qm::cli::kExitUsage);
    CHECK(run({"verify", "--suite", "nope"}).code == qm::cli::kExitUsage);
    CHECK(run({"verify", "--suite", "adjointness", "--tol.nope=1"}).code == qm::cli::kExitUsage);
    CHECK(run({"check"}).code == qm::cli::kExitUsage);
    CHECK(run({"check", "--quiver", "/nonexistent.json"}).code == qm::cli::kExitPrecondition);
}

TEST_CASE("cli verify output is deterministic") {
    auto a = run({"verify", "--suite", "ledger-jordan", "--trials", "1", "--seed", "3"});
    auto b = run({"verify", "--suite", "ledger-jordan", "--trials", "1", "--seed", "3"});
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    auto j = json::parse(a.out);
    CHECK(j["passed"] == true);
    CHECK(j["suite"] == "ledger-jordan");
}

TEST_CASE("cli verify all with one trial per suite") {
    auto r = run({"verify", "--suite", "all", "--trials", "1"});
    CHECK(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["passed"] == true);
    CHECK(j["suites"].size() == 11);
}

TEST_CASE("cli ledger on a sampled pair") {
    auto r = run({"ledger", "--quiver", "jordan", "--v", "1,1", "--vu", "0,1", "--k", "1", "--trials", "3"});
    REQUIRE(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["lambda_u"] == 2);
    CHECK(j["shift"] == -2);
}
