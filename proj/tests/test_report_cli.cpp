#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "rnla/error.hpp"
#include "rnla/instances.hpp"
#include "rnla/matrix_market.hpp"
#include "rnla/report.hpp"

using namespace rnla;

namespace {

struct CliRun {
    int exit_code = -1;
    std::string output;  // stdout + stderr
};

CliRun run_cli(const std::string& args) {
    CliRun res;
    const std::string cmd = std::string(RNLA_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    while (fgets(buf.data(), buf.size(), pipe)) res.output += buf.data();
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("report json round trip") {
    RunReport rep;
    rep.task = "embed";
    rep.seed = 42;
    rep.params["alpha"] = 0.25;
    rep.rows_in = 100;
    rep.cols_in = 10;
    rep.rows_out = 50;
    rep.metrics["distortion"] = 2.5;
    rep.pass = true;
    rep.flags.push_back("fallback");

    const std::string js = rep.to_json();
    const RunReport back = RunReport::from_json(js);
    CHECK(back.task == rep.task);
    CHECK(back.seed == rep.seed);
    CHECK(back.params.at("alpha") == 0.25);
    CHECK(back.metrics.at("distortion") == 2.5);
    CHECK(back.pass);
    CHECK(back.flags == rep.flags);
    CHECK(back.to_json() == js);  // stable serialization
}

TEST_CASE("infinite metrics serialize explicitly") {
    RunReport rep;
    rep.task = "embed";
    rep.metrics["distortion"] = std::numeric_limits<double>::infinity();
    const std::string js = rep.to_json();
    CHECK(js.find("\"inf\"") != std::string::npos);
    const RunReport back = RunReport::from_json(js);
    CHECK(std::isinf(back.metrics.at("distortion")));
}

TEST_CASE("unknown fields are rejected") {
    RunReport rep;
    rep.task = "embed";
    std::string js = rep.to_json();
    js.insert(js.size() - 1, ",\"mystery\":1");
    CHECK_THROWS_AS(RunReport::from_json(js), Error);

    // Wrong schema version is also rejected.
    RunReport r2;
    r2.task = "embed";
    std::string js2 = r2.to_json();
    const std::size_t pos = js2.find("\"schema\": 1");
    REQUIRE(pos != std::string::npos);
    js2.replace(pos, 11, "\"schema\": 2");
    CHECK_THROWS_AS(RunReport::from_json(js2), Error);
}

TEST_CASE("cli produces byte-identical reports per seed") {
    const std::string args =
        "embed --instance gaussian --n 256 --d 8 --seed 5 --no-timing";
    const CliRun a = run_cli(args);
    const CliRun b = run_cli(args);
    CHECK(a.exit_code == 0);
    CHECK(a.output == b.output);
    const RunReport rep = RunReport::from_json(a.output);
    CHECK(rep.task == "embed");
    CHECK(rep.seed == 5);
    CHECK(rep.pass);

    const CliRun c = run_cli(
        "embed --instance gaussian --n 256 --d 8 --seed 6 --no-timing");
    CHECK(c.output != a.output);
}

TEST_CASE("runtime appears only without --no-timing") {
    const CliRun timed =
        run_cli("embed --instance gaussian --n 256 --d 8 --seed 1");
    CHECK(timed.output.find("runtime_ms") != std::string::npos);
    const CliRun untimed = run_cli(
        "embed --instance gaussian --n 256 --d 8 --seed 1 --no-timing");
    CHECK(untimed.output.find("runtime_ms") == std::string::npos);
}

TEST_CASE("cli exit codes") {
    // 0 on pass.
    CHECK(run_cli("basis --instance gaussian --n 100 --d 8 --seed 1 --no-timing")
              .exit_code == 0);
    // 2 on usage/errors.
    const CliRun unknown = run_cli("frobnicate --seed 1");
    CHECK(unknown.exit_code == 2);
    const CliRun badinst =
        run_cli("embed --instance nonsense --n 64 --d 4 --seed 1");
    CHECK(badinst.exit_code == 2);
}

TEST_CASE("cli --out and --csv write files") {
    const std::string out = "rnla_test_cli_out.json";
    const std::string csv = "rnla_test_cli_trace.csv";
    const CliRun r = run_cli(
        "levscore --instance gaussian --n 512 --d 8 --seed 3 --no-timing "
        "--out " + out + " --csv " + csv);
    CHECK(r.exit_code == 0);
    const RunReport rep = RunReport::from_json(slurp(out));
    CHECK(rep.task == "levscore");

    const std::string trace = slurp(csv);
    CHECK(trace.rfind("index,f", 0) == 0);  // header row first
    CHECK(std::count(trace.begin(), trace.end(), '\n') >= 2);
    std::remove(out.c_str());
    std::remove(csv.c_str());
}

TEST_CASE("cli reads matrix market input") {
    const std::string path = "rnla_test_cli_input.mtx";
    write_matrix_market(path, gaussian_instance(128, 6, 9));
    const CliRun r = run_cli("embed --mtx " + path + " --seed 2 --no-timing");
    std::remove(path.c_str());
    CHECK(r.exit_code == 0);
    const RunReport rep = RunReport::from_json(r.output);
    CHECK(rep.rows_in == 128);
    CHECK(rep.cols_in == 6);
}

TEST_CASE("cli regress with oracle on generated instance") {
    const CliRun r = run_cli(
        "regress --instance gaussian --n 1024 --d 12 --epsilon 0.1 --seed 4 "
        "--oracle --no-timing");
    CHECK(r.exit_code == 0);
    const RunReport rep = RunReport::from_json(r.output);
    CHECK(rep.metrics.count("oracle_ratio") == 1);
    CHECK(rep.metrics.at("oracle_ratio") <= 1.1);
}

TEST_CASE("cli selftest passes") {
    const CliRun r = run_cli("selftest --n 256 --d 8 --seed 1 --no-timing");
    CHECK(r.exit_code == 0);
    const RunReport rep = RunReport::from_json(r.output);
    CHECK(rep.task == "selftest");
    CHECK(rep.pass);
}

TEST_CASE("cli constants overrides are honored") {
    const CliRun r = run_cli(
        "embed --instance gaussian --n 256 --d 8 --seed 1 --no-timing "
        "--constants sample_const=20");
    CHECK(r.exit_code == 0);
    const RunReport rep = RunReport::from_json(r.output);
    CHECK(rep.params.at("sample_const") == 20.0);
    CHECK(rep.rows_out <= 160);
    CHECK(rep.rows_out > 80);
}
