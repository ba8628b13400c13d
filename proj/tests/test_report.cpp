#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "leakwise/errors.hpp"
#include "leakwise/report.hpp"

using namespace leakwise;
using namespace leakwise::cli;
using doctest::Approx;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "leakwise");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("leakwise_test_" + name);
}

}  // namespace

TEST_CASE("spec term parsing") {
    const SpecTerm t = parse_spec_term("normal:mu=1.5,sigma2=4");
    CHECK(t.family == "normal");
    REQUIRE(t.params.size() == 2);
    CHECK(t.params[0].key == "mu");
    CHECK(t.params[0].value == "1.5");
    CHECK(t.params[0].position == 10);
    CHECK(t.params[1].position == 21);
    CHECK(t.find("sigma2")->value == "4");
    CHECK(t.find("lambda") == nullptr);
}

TEST_CASE("parse errors carry positions") {
    const auto pos = [](std::string_view text) -> std::optional<std::size_t> {
        try {
            parse_distribution(text);
        } catch (const ParseError& e) {
            return e.position();
        }
        FAIL("expected a parse error for " << text);
        return std::nullopt;
    };
    CHECK(pos("poisson") == 7u);
    CHECK(pos(":lambda=4") == 0u);
    CHECK(pos("poisson:lambda=x") == 15u);
    CHECK(pos("poisson:lambda=") == 15u);
    CHECK(pos("uniform:N=2.5") == 11u);
    CHECK(pos("poisson:lambda=4,lambda=5") == 17u);
    CHECK(pos("poisson:lambda=4,k=5") == 17u);
    CHECK(pos("gamma:k=1").value_or(99) == 0u);
}

TEST_CASE("distribution parsing") {
    CHECK(parse_distribution("poisson:lambda=4") == DistributionSpec(Poisson{4}));
    CHECK(parse_distribution("uniform:N=8") == DistributionSpec(DiscreteUniform{8}));
    CHECK(parse_distribution("normal:sigma2=4") == DistributionSpec(Normal{0, 4}));
    CHECK(parse_distribution("lognormal:mu=1.6702,sigma2=0.145542") ==
          DistributionSpec(LogNormal{1.6702, 0.145542}));
    // to_string output parses back to the same spec.
    for (const auto* text : {"poisson:lambda=0.25", "uniform:N=256", "normal:mu=-3,sigma2=128",
                             "lognormal:mu=1.6702,sigma2=0.145542"}) {
        const DistributionSpec d = parse_distribution(text);
        CHECK(parse_distribution(d.to_string()) == d);
    }
    CHECK_THROWS_AS(parse_distribution("poisson:lambda=-4"), DomainError);
    CHECK_THROWS_AS(parse_distribution("lognormal:sigma2=1"), ParseError);
}

TEST_CASE("range parsing") {
    CHECK(parse_range("3").first == 3);
    CHECK(parse_range("3").last == 3);
    CHECK(parse_range("1..32").first == 1);
    CHECK(parse_range("1..32").last == 32);
    CHECK_THROWS_AS(parse_range("5..2"), ParseError);
    CHECK_THROWS_AS(parse_range("a..b"), ParseError);
}

TEST_CASE("csv round trip") {
    Table t;
    t.columns = {"name", "n", "value"};
    t.rows.push_back({std::string("normal:mu=0,sigma2=4"), std::int64_t{3}, 0.1});
    t.rows.push_back({std::string("say \"hi\""), std::int64_t{-1}, 3.0470955851806411});
    std::stringstream ss;
    write_csv(t, ss);
    const auto parsed = read_csv(ss);
    REQUIRE(parsed.size() == 3);
    CHECK(parsed[0] == std::vector<std::string>{"name", "n", "value"});
    CHECK(parsed[1][0] == "normal:mu=0,sigma2=4");
    CHECK(parsed[1][1] == "3");
    CHECK(std::stod(parsed[1][2]) == 0.1);
    CHECK(parsed[2][0] == "say \"hi\"");
    // Shortest round-trip formatting loses nothing.
    CHECK(std::stod(parsed[2][2]) == 3.0470955851806411);
}

TEST_CASE("json mirrors csv rows") {
    RunConfig cfg;
    cfg.dists = {DistributionSpec(Poisson{4})};
    cfg.spectators = {1, 4};
    const Table table = single_table(cfg);
    std::stringstream ss;
    write_json(table, ss);
    const auto doc = nlohmann::json::parse(ss.str());
    REQUIRE(doc.is_array());
    REQUIRE(doc.size() == table.rows.size());
    CHECK(doc[0]["dist"] == "poisson:lambda=4");
    CHECK(doc[2]["n"] == 3);
    CHECK(doc[2]["h_after"].get<double>() == std::get<double>(table.rows[2][4]));
    std::vector<std::string> keys;
    for (const auto& [k, v] : doc[0].items()) keys.push_back(k);
    CHECK(keys.size() == table.columns.size());
}

TEST_CASE("single command output") {
    const Result r = invoke({"single", "--dist", "uniform:N=8", "--dist", "normal:sigma2=4", "-t", "1", "-n", "1..3"});
    REQUIRE(r.code == kOk);
    std::istringstream is(r.out);
    const auto rows = read_csv(is);
    REQUIRE(rows.size() == 7);
    CHECK(rows[0] == std::vector<std::string>{"dist", "t", "n", "h_before", "h_after", "abs_loss", "rel_loss"});
    CHECK(rows[1][0] == "uniform:N=8");
    CHECK(std::stod(rows[1][3]) == Approx(3.0));
    CHECK(rows[4][0] == "normal:mu=0,sigma2=4");
    CHECK(std::stod(rows[6][5]) == Approx(0.5 * std::log2(4.0 / 3.0)));
}

TEST_CASE("output is deterministic") {
    const std::vector<std::string> args{"single", "--dist", "poisson:lambda=16", "-t", "2", "-n", "1..20"};
    CHECK(invoke(args).out == invoke(args).out);
    const std::vector<std::string> mc{"validate", "--scenario", "normal:sigma2=4,s0=2,s1=3,s2=1", "--samples",
                                      "200000", "--seed", "5"};
    CHECK(invoke(mc).out == invoke(mc).out);
}

TEST_CASE("solve command") {
    Result r = invoke({"solve", "--dist", "poisson:lambda=4", "--budget", "0.05"});
    CHECK(r.code == kOk);
    CHECK(r.out == "5\n");
    r = invoke({"solve", "--dist", "uniform:N=8", "--budget", "0.01", "--format", "json"});
    REQUIRE(r.code == kOk);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["spectators"] == 24);
    CHECK(doc["non_adversarial_participants"] == 25);
}

TEST_CASE("two-exec command") {
    Result r = invoke({"two-exec", "--per-exec", "10", "--participation", "twice"});
    REQUIRE(r.code == kOk);
    std::istringstream is(r.out);
    const auto rows = read_csv(is);
    REQUIRE(rows.size() == 12);
    CHECK(rows[0][0] == "sigma2");
    CHECK(rows[0].back() == "loss_multiplier");

    r = invoke({"two-exec", "--s0", "2", "--s1", "3", "--s2", "4", "--participation", "once"});
    REQUIRE(r.code == kOk);
    std::istringstream one(r.out);
    CHECK(read_csv(one).size() == 2);
}

TEST_CASE("validate command") {
    CHECK(invoke({"validate", "--scenario", "uniform:N=8,a=1,t=1,s=2"}).code == kOk);
    CHECK(invoke({"validate", "--scenario", "poisson:lambda=3,t=1,s=1"}).code == kOk);
    CHECK(invoke({"validate", "--scenario", "normal:mu=50,sigma2=2,t=1,s0=1,s1=2,s2=2,mode=once", "--samples",
               "200000"}).code == kOk);
}

TEST_CASE("exit codes and error records") {
    Result r = invoke({"single", "--dist", "poisson:lambda=oops"});
    CHECK(r.code == kParseFailure);
    const auto rec = nlohmann::json::parse(r.err);
    CHECK(rec["error"] == "parse");
    CHECK(rec["position"] == 15);

    CHECK(invoke({"single", "--dist", "poisson:lambda=0"}).code == kDomainFailure);
    CHECK(invoke({"single", "--dist", "normal:sigma2=4", "-n", "0"}).code == kDomainFailure);
    CHECK(invoke({"two-exec", "--s0", "0", "--s1", "0", "--s2", "2"}).code == kDomainFailure);
    CHECK(invoke({"solve", "--dist", "normal:sigma2=4", "--budget", "1e-9"}).code == kDomainFailure);
    CHECK(invoke({"validate", "--scenario", "uniform:N=64,a=2,t=2,s=3"}).code == kDomainFailure);
    CHECK(invoke({"single", "--dist", "uniform:N=8", "--format", "xml"}).code == kParseFailure);
    CHECK(invoke({"frobnicate"}).code == kParseFailure);
    CHECK(invoke({}).code == kParseFailure);
    CHECK(invoke({"--help"}).code == kOk);
}

TEST_CASE("config file") {
    const auto cfg_path = temp_path("config.json");
    const auto out_path = temp_path("out.csv");
    {
        std::ofstream f(cfg_path);
        f << R"({"command": "single", "dist": ["uniform:N=4"], "targets": [1, 2], "spectators": "1..2"})";
    }
    const Result r = invoke({"--config", cfg_path.string(), "single", "--dist", "uniform:N=2", "-o", out_path.string()});
    // A config file takes the whole run; flags only redirect output.
    CHECK(r.code == kOk);
    std::ifstream in(out_path);
    const auto rows = read_csv(in);
    CHECK(rows.size() == 5);
    CHECK(rows[1][0] == "uniform:N=4");

    const RunConfig parsed = config_from_json(R"({"command":"two-exec","per_exec":6,"participation":"once"})");
    CHECK(parsed.command == Command::two_exec);
    CHECK(parsed.per_exec == 6);
    REQUIRE(parsed.participations.size() == 1);
    CHECK(parsed.participations[0] == Participation::once);

    CHECK_THROWS_AS(config_from_json("{"), ParseError);
    CHECK_THROWS_AS(config_from_json(R"({"command":"single","bogus":1})"), ParseError);
    CHECK_THROWS_AS(config_from_json(R"({"dist":"uniform:N=4"})"), ParseError);
    CHECK_THROWS_AS(config_from_json(R"({"command":"single","sigma2":"four"})"), ParseError);

    std::filesystem::remove(cfg_path);
    std::filesystem::remove(out_path);
}
