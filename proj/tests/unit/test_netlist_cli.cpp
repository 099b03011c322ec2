#include "catch_amalgamated.hpp"

#include "circuits.hpp"
#include "tractionpf/cli.hpp"
#include "tractionpf/errors.hpp"
#include "tractionpf/netlist.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace tpf;
using Catch::Approx;
using Catch::Matchers::ContainsSubstring;

namespace {

const char* kTwoNode = R"({
  "nodes": ["n1", "n2"],
  "resistors": [{"a": "n1", "b": "n2", "ohms": 0.1}],
  "sources": [{"node": "n1", "volts": 600}],
  "loads": [{"node": "n2", "watts": 500000}]
})";

std::string parse_error(std::string_view text) {
    try {
        (void)parse_netlist(text);
    } catch (const ValidationError& e) {
        return e.what();
    }
    return "no error";
}

struct Run {
    int status = -1;
    std::string out;
    std::string err;
};

Run run_cli(cli::CliInvocation inv) {
    std::ostringstream out;
    std::ostringstream err;
    Run r;
    r.status = cli::run(inv, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

cli::CliInvocation invocation(cli::Command c, std::string input, OutputFormat f = OutputFormat::json) {
    cli::CliInvocation inv;
    inv.command = c;
    inv.input = std::move(input);
    inv.format = f;
    return inv;
}

std::filesystem::path temp_file(const std::string& name, const std::string& text) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path, std::ios::binary) << text;
    return path;
}

}  // namespace

TEST_CASE("netlist parses", "[netlist]") {
    const auto spec = parse_netlist(kTwoNode);
    CHECK(spec.nodes == std::vector<std::string>{"n1", "n2"});
    CHECK(spec.resistors.at(0).ohms == 0.1);
    CHECK(spec.sources.at(0).volts == 600.0);
    CHECK(spec.loads.at(0).watts == 5e5);

    const auto no_loads =
        parse_netlist(R"({"nodes":["a","b"],"resistors":[{"a":"a","b":"b","ohms":1}],"sources":[{"node":"a","volts":1}]})");
    CHECK(no_loads.loads.empty());
}

TEST_CASE("netlist errors name the location", "[netlist][errors]") {
    CHECK_THAT(parse_error("{\n  \"nodes\": [\"a\",\n  }"), ContainsSubstring("line 3"));
    CHECK_THAT(parse_error("{\"nodes\": []}"), ContainsSubstring("missing key 'resistors'"));
    CHECK_THAT(parse_error(R"({"nodes":["a"],"resistors":[],"sources":[],"extra":1})"),
               ContainsSubstring("unexpected key 'extra'"));
    CHECK_THAT(parse_error(R"({"nodes":["a","b"],"resistors":[{"a":"a","b":"b","ohms":"x"}],"sources":[]})"),
               ContainsSubstring("resistors[0].ohms: expected a number"));
    CHECK_THAT(parse_error(R"({"nodes":["a","b"],"resistors":[{"a":"a","b":"c","ohms":1}],"sources":[{"node":"a","volts":1}]})"),
               ContainsSubstring("unknown node 'c'"));
    CHECK_THAT(parse_error(R"({"nodes":["a",3],"resistors":[],"sources":[]})"), ContainsSubstring("nodes[1]"));
    CHECK_THAT(parse_error(R"([1,2])"), ContainsSubstring("expected an object"));

    try {
        (void)parse_netlist(R"({"nodes":["a","b"],"resistors":[{"a":"a","b":"b","ohms":0}],"sources":[{"node":"a","volts":1}]})");
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(e.code() == ValidationCode::nonpositive_resistance);
    }
    CHECK_THROWS_AS(load_netlist("/nonexistent/netlist.json"), ValidationError);
}

TEST_CASE("netlist round trip", "[netlist][property]") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 50; ++trial) {
        const auto spec = testing::random_circuit(rng);
        const auto text = dump_netlist(spec);
        const auto again = parse_netlist(text);
        CHECK(again == spec);
        CHECK(dump_netlist(again) == text);
    }
    const auto toy = toy_case_2().to_circuit();
    CHECK(parse_netlist(dump_netlist(toy)) == toy);
}

TEST_CASE("cli search on a solvable single load", "[cli]") {
    const auto r = run_cli(invocation(cli::Command::search, "single:600,0.1,5e5"));
    REQUIRE(r.status == cli::kExitOk);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["alpha_hat"] == 1.0);
    CHECK(doc["fully_supplied"] == true);
    CHECK(doc["nr_calls"] == 1);
    CHECK(doc["potentials"][0]["node"] == "load");
    CHECK(doc["potentials"][0]["volts"].get<double>() == Approx(500.0).margin(0.01));

    const auto table = run_cli(invocation(cli::Command::search, "single:600,0.1,5e5", OutputFormat::table));
    CHECK_THAT(table.out, ContainsSubstring("alpha_hat:         1.0000"));
}

TEST_CASE("cli search beyond the critical demand", "[cli]") {
    const auto r = run_cli(invocation(cli::Command::search, "single:600,0.1,1e6"));
    REQUIRE(r.status == cli::kExitOk);
    const double a = nlohmann::json::parse(r.out)["alpha_hat"].get<double>();
    CHECK(a >= 0.8999);
    CHECK(a <= 0.9);

    auto basic = invocation(cli::Command::search, "single:600,0.1,1e6");
    basic.basic = true;
    const auto b = run_cli(basic);
    REQUIRE(b.status == cli::kExitOk);
    CHECK(nlohmann::json::parse(b.out)["algorithm"] == "incremental");
}

TEST_CASE("cli solve", "[cli]") {
    auto inv = invocation(cli::Command::solve, "toy2");
    inv.alpha = 0.0;
    const auto r = run_cli(inv);
    REQUIRE(r.status == cli::kExitOk);
    for (const auto& p : nlohmann::json::parse(r.out)["potentials"]) CHECK(p["volts"] == 600.0);

    inv = invocation(cli::Command::solve, "single:600,0.1,1e6");
    inv.alpha = 1.0;
    const auto fail = run_cli(inv);
    CHECK(fail.status == cli::kExitNoSolution);
    CHECK(fail.out.empty());
    CHECK_THAT(fail.err, ContainsSubstring("no solution"));

    inv.alpha = 1.5;
    CHECK(run_cli(inv).status == cli::kExitInvalid);
}

TEST_CASE("cli rejects invalid configuration before computing", "[cli][errors]") {
    auto inv = invocation(cli::Command::search, "toy1");
    inv.config.c_bi = 1.5;
    auto r = run_cli(inv);
    CHECK(r.status == cli::kExitInvalid);
    CHECK(r.out.empty());
    CHECK_THAT(r.err, ContainsSubstring("c_bi"));

    inv = invocation(cli::Command::search, "no_such_thing");
    CHECK(run_cli(inv).status == cli::kExitInvalid);

    inv = invocation(cli::Command::search, "single:600,0.1");
    CHECK(run_cli(inv).status == cli::kExitInvalid);

    const auto bad = temp_file("tpf_bad_netlist.json", "{\"nodes\": [\"a\"],\n \"resistors\": 3, \"sources\": []}");
    inv = invocation(cli::Command::search, bad.string());
    r = run_cli(inv);
    CHECK(r.status == cli::kExitInvalid);
    CHECK_THAT(r.err, ContainsSubstring("resistors: expected an array"));
    std::filesystem::remove(bad);

    inv = invocation(cli::Command::sweep, "toy1");
    inv.grid = 0;
    CHECK(run_cli(inv).status == cli::kExitInvalid);
}

TEST_CASE("cli reads netlist files", "[cli]") {
    const auto path = temp_file("tpf_two_node.json", kTwoNode);
    const auto r = run_cli(invocation(cli::Command::search, path.string()));
    std::filesystem::remove(path);
    REQUIRE(r.status == cli::kExitOk);
    CHECK(nlohmann::json::parse(r.out)["alpha_hat"] == 1.0);
}

TEST_CASE("cli scenario emits a parseable netlist", "[cli]") {
    const auto r = run_cli(invocation(cli::Command::scenario, "toy1"));
    REQUIRE(r.status == cli::kExitOk);
    CHECK(parse_netlist(r.out) == toy_case_1().to_circuit());
    CHECK(run_cli(invocation(cli::Command::scenario, "toy9")).status == cli::kExitInvalid);
}

TEST_CASE("cli sweep formats", "[cli]") {
    auto inv = invocation(cli::Command::sweep, "single:600,0.1,1e6", OutputFormat::csv);
    inv.grid = 11;
    const auto r = run_cli(inv);
    REQUIRE(r.status == cli::kExitOk);
    std::istringstream lines(r.out);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "alpha,converged,residual,iterations,condition");
    int rows = 0;
    while (std::getline(lines, line)) ++rows;
    CHECK(rows == 11);
    CHECK_THAT(r.out, ContainsSubstring("\n1.0000,0,"));
    CHECK_THAT(r.out, ContainsSubstring("\n0.0000,1,"));
}

TEST_CASE("cli verify", "[cli]") {
    auto inv = invocation(cli::Command::verify, "single:600,0.1,1e6");
    inv.grid = 50;
    inv.verify_alpha = 0.95;
    const auto r = run_cli(inv);
    REQUIRE(r.status == cli::kExitOk);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["holds"] == false);
    CHECK(doc["offending_alpha"].get<double>() > 0.9);

    inv.verify_alpha.reset();
    CHECK(nlohmann::json::parse(run_cli(inv).out)["holds"] == true);
}

TEST_CASE("cli timeline", "[cli]") {
    auto inv = invocation(cli::Command::timeline, "", OutputFormat::csv);
    inv.route.route_length = 1000.0;
    inv.constant_power = 4e5;
    inv.constant_speed = 25.0;
    const auto r = run_cli(inv);
    REQUIRE(r.status == cli::kExitOk);
    CHECK(r.out.starts_with("time,position,speed,demanded,alpha,received,deficit_energy\n"));
}

TEST_CASE("cli output is byte-identical across runs", "[cli][property]") {
    for (auto format : {OutputFormat::json, OutputFormat::csv, OutputFormat::table}) {
        for (auto command : {cli::Command::search, cli::Command::sweep, cli::Command::solve}) {
            auto inv = invocation(command, "toy1", format);
            inv.alpha = 0.3;
            inv.grid = 21;
            const auto a = run_cli(inv);
            const auto b = run_cli(inv);
            REQUIRE(a.status == cli::kExitOk);
            CHECK(a.out == b.out);
        }
    }
}

TEST_CASE("cli writes to --out", "[cli]") {
    const auto path = std::filesystem::temp_directory_path() / "tpf_out.json";
    auto inv = invocation(cli::Command::search, "toy2");
    inv.out_path = path.string();
    const auto r = run_cli(inv);
    REQUIRE(r.status == cli::kExitOk);
    CHECK(r.out.empty());
    std::ifstream in(path);
    const auto doc = nlohmann::json::parse(in);
    CHECK(doc["command"] == "search");
    std::filesystem::remove(path);
}
