#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "opsched/cli.hpp"
#include "opsched/io.hpp"

using namespace opsched;
using namespace opsched::cli;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() / "opsched_test_cli";
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::filesystem::path write(const std::string& name, const std::string& body) const {
        const auto p = path / name;
        std::ofstream(p) << body;
        return p;
    }
};

ProblemInstance example(const std::string& name) {
    for (const auto& ex : builtin_examples()) {
        if (ex.name == name) return ex.instance;
    }
    throw std::runtime_error("no such example");
}

std::filesystem::path write_instance(const TempDir& dir, const std::string& name,
                                     const ProblemInstance& inst) {
    return dir.write(name + ".json", io::dump(io::instance_to_json(inst)));
}

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(const RunConfig& cfg) {
    std::ostringstream out, err;
    const int code = run(cfg, out, err);
    return {code, out.str(), err.str()};
}

RunConfig make(Command command, std::optional<std::filesystem::path> instance = std::nullopt) {
    RunConfig cfg;
    cfg.command = command;
    cfg.instance = std::move(instance);
    return cfg;
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

}  // namespace

TEST_CASE("missing or malformed input is a user error") {
    TempDir dir;
    CHECK(invoke(make(Command::Solve, dir.path / "absent.json")).code == kExitUserError);
    CHECK(invoke(make(Command::Solve)).code == kExitUserError);
    CHECK(invoke(make(Command::Solve, dir.write("bad.json", "{ nope"))).code == kExitUserError);
    CHECK(invoke(make(Command::Verify, write_instance(dir, "e1", example("example1")))).code ==
          kExitUserError);

    auto cfg = make(Command::Trace, write_instance(dir, "e1", example("example1")));
    cfg.from_solve = true;
    cfg.dt = -1.0;
    const auto r = invoke(cfg);
    CHECK(r.code == kExitUserError);
    CHECK(r.err.find("--dt") != std::string::npos);
}

TEST_CASE("solve summary for the equal split example") {
    TempDir dir;
    const auto r = invoke(make(Command::Solve, write_instance(dir, "e1", example("example1"))));
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("NO_REST_EQUAL_SPLIT") != std::string::npos);
    CHECK(r.out.find("2.333333") != std::string::npos);
}

TEST_CASE("solve summary reports unused budget for a slack instance") {
    TempDir dir;
    ProblemInstance inst = example("example1");
    inst.horizon = 60.0;
    const auto r = invoke(make(Command::Solve, write_instance(dir, "slack", inst)));
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("SLACK") != std::string::npos);
    const auto used = solve(inst).schedule.total_time();
    CHECK(r.out.find(fmt::format("unused budget:  {:.6f}", 60.0 - used)) != std::string::npos);
    CHECK(60.0 - used > 1.0);
}

TEST_CASE("solve writes a JSON document and is byte stable") {
    TempDir dir;
    auto cfg = make(Command::Solve, write_instance(dir, "e3", example("example3")));
    cfg.format = OutputFormat::Json;
    cfg.out = dir.path / "sol.json";
    const auto a = invoke(cfg);
    const auto b = invoke(cfg);
    CHECK(a.code == kExitOk);
    CHECK(a.out == b.out);
    const auto doc = io::read_json_file(*cfg.out);
    CHECK(io::dump(doc) == a.out);
    CHECK(doc.at("case") == "STRUCTURED");
    CHECK(doc.at("m") == 2);
}

TEST_CASE("solve then verify round trip") {
    TempDir dir;
    for (const auto& ex : builtin_examples()) {
        const auto inst_path = write_instance(dir, ex.name, ex.instance);
        auto solve_cfg = make(Command::Solve, inst_path);
        solve_cfg.out = dir.path / (ex.name + "_sol.json");
        REQUIRE(invoke(solve_cfg).code == kExitOk);

        auto verify_cfg = make(Command::Verify, inst_path);
        verify_cfg.schedule = solve_cfg.out;
        const auto r = invoke(verify_cfg);
        CAPTURE(ex.name);
        CHECK(r.code == kExitOk);
        CHECK(r.out.find("PASS") != std::string::npos);
    }
}

TEST_CASE("verify flags an infeasible schedule") {
    TempDir dir;
    auto cfg = make(Command::Verify, write_instance(dir, "e1", example("example1")));
    cfg.schedule = dir.write("sched.json", R"([{"rest":0,"work":5},{"rest":0,"work":5},{"rest":0,"work":5}])");
    cfg.format = OutputFormat::Json;
    const auto r = invoke(cfg);
    CHECK(r.code == kExitCheckFailed);
    const auto doc = io::Json::parse(r.out);
    CHECK(doc.at("pass") == false);
    CHECK(doc.at("feasibility").at("feasible") == false);
}

TEST_CASE("trace from solve ends at x_max for the boundary example") {
    TempDir dir;
    auto cfg = make(Command::Trace, write_instance(dir, "e2", example("example2")));
    cfg.from_solve = true;
    cfg.dt = 0.1;
    const auto r = invoke(cfg);
    REQUIRE(r.code == kExitOk);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() > 80);
    CHECK(rows.front() == "time,x,working");
    const auto last = rows.back();
    const auto c1 = last.find(',');
    const auto c2 = last.find(',', c1 + 1);
    CHECK(std::stod(last.substr(0, c1)) == doctest::Approx(8.8).epsilon(1e-12));
    CHECK(std::abs(std::stod(last.substr(c1 + 1, c2 - c1 - 1)) - 0.85) <= 1e-9);
}

TEST_CASE("trace with dt beyond the horizon emits only breakpoints") {
    TempDir dir;
    auto cfg = make(Command::Trace, write_instance(dir, "e1", example("example1")));
    cfg.from_solve = true;
    cfg.dt = 100.0;
    const auto r = invoke(cfg);
    REQUIRE(r.code == kExitOk);
    // Header plus t = 0 and the end of each of the three work segments.
    CHECK(lines(r.out).size() == 5);
}

TEST_CASE("trace of the equal split example rises monotonically") {
    TempDir dir;
    auto cfg = make(Command::Trace, write_instance(dir, "e1", example("example1")));
    cfg.from_solve = true;
    const auto rows = lines(invoke(cfg).out);
    double prev = -1.0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto c1 = rows[i].find(',');
        const double x = std::stod(rows[i].substr(c1 + 1));
        CHECK(x > prev);
        prev = x;
    }
}

TEST_CASE("trace rejects an infeasible schedule") {
    TempDir dir;
    auto cfg = make(Command::Trace, write_instance(dir, "e1", example("example1")));
    cfg.schedule = dir.write("sched.json", R"([{"rest":0,"work":9},{"rest":0,"work":0},{"rest":0,"work":0}])");
    const auto r = invoke(cfg);
    CHECK(r.code == kExitCheckFailed);
    CHECK(r.err.find("feasible:       no") != std::string::npos);
}

TEST_CASE("oracle and compare commands") {
    TempDir dir;
    ProblemInstance small = example("example3");
    small.n = 2;
    small.horizon = 5.0;
    auto cfg = make(Command::Oracle, write_instance(dir, "small", small));
    cfg.format = OutputFormat::Json;
    auto r = invoke(cfg);
    CHECK(r.code == kExitOk);
    CHECK(io::Json::parse(r.out).at("method") == "grid");

    cfg = make(Command::Oracle, write_instance(dir, "e3", example("example3")));
    cfg.oracle.starts = 4;
    r = invoke(cfg);
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("coordinate ascent") != std::string::npos);

    auto cmp = make(Command::Compare, write_instance(dir, "e1", example("example1")));
    cmp.schedule = dir.write("cand.json", R"([{"rest":0,"work":1},{"rest":0,"work":1},{"rest":0,"work":1}])");
    cmp.format = OutputFormat::Json;
    r = invoke(cmp);
    CHECK(r.code == kExitOk);
    CHECK(io::Json::parse(r.out).at("verdict") == "a-dominates");
}

TEST_CASE("examples command passes") {
    const auto r = invoke(make(Command::Examples));
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("FAIL") == std::string::npos);
    CHECK(r.out.find("all examples match") != std::string::npos);

    for (const auto& ex : builtin_examples()) {
        for (const auto& row : expected_values(ex, solve(ex.instance))) {
            CAPTURE(row.name);
            CHECK(row.pass());
        }
    }
}
