#include "opsched/cli.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

#include <fmt/core.h>
#include <fmt/ostream.h>

#include "opsched/dynamics.hpp"
#include "opsched/errors.hpp"
#include "opsched/io.hpp"
#include "opsched/trace.hpp"

namespace opsched::cli {
namespace {

constexpr double kVerifyStationarityTol = 1e-6;

ProblemInstance load_instance(const RunConfig& config) {
    return io::instance_from_json(io::read_json_file(*config.instance));
}

// A schedule file is either a bare rest/work array or a full solution document.
struct LoadedSchedule {
    Schedule schedule;
    std::optional<Solution> solution;
};

LoadedSchedule load_schedule(const std::filesystem::path& path) {
    const io::Json j = io::read_json_file(path);
    LoadedSchedule out;
    if (j.is_object()) {
        out.solution = io::solution_from_json(j);
        out.schedule = out.solution->schedule;
    } else {
        out.schedule = io::schedule_from_json(j);
    }
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream file(path);
    if (!file) throw FormatError(fmt::format("cannot write '{}'", path.string()));
    file << text;
}

void print_summary(std::ostream& out, const ProblemInstance& inst, const Solution& sol) {
    fmt::print(out, "case:           {}", to_string(sol.label.tag));
    if (sol.label.tag == CaseTag::Structured) {
        fmt::print(out, " (m={}, {})", sol.label.m,
                   sol.label.boundary ? "boundary, no r1" : "rest r1 before x_max");
    }
    fmt::print(out, "\n");
    if (sol.label.tag == CaseTag::NoRestEqualSplit) {
        fmt::print(out, "equal split:    {:.6f}\n", sol.t1_tilde);
    }
    fmt::print(out, "m:              {}\n", sol.label.m);
    fmt::print(out, "t1_tilde:       {:.6f}\n", sol.t1_tilde);
    fmt::print(out, "t2_tilde:       {:.6f}\n", sol.t2_tilde);
    fmt::print(out, "r1_tilde:       {:.6f}\n", sol.r1_tilde);
    fmt::print(out, "r2_tilde:       {:.6f}\n", sol.r2_tilde);
    fmt::print(out, "objective:      {:.6f}\n", sol.objective);
    fmt::print(out, "unused budget:  {:.6f}\n", inst.horizon - sol.schedule.total_time());
    const FeasibilityReport walk = check_feasibility(inst, sol.schedule);
    fmt::print(out, "task      rest        work        x_bar       x\n");
    for (std::size_t i = 0; i < sol.schedule.size(); ++i) {
        const auto& seg = sol.schedule.tasks[i];
        fmt::print(out, "{:<4}  {:>10.6f}  {:>10.6f}  {:>10.6f}  {:>10.6f}\n", i + 1, seg.rest,
                   seg.work, walk.tasks[i].x_bar, walk.tasks[i].x);
    }
}

void print_feasibility(std::ostream& out, const FeasibilityReport& report) {
    fmt::print(out, "feasible:       {}\n", report.feasible ? "yes" : "no");
    fmt::print(out, "budget used:    {:.6f}\n", report.budget_used);
    for (const auto& v : report.all_violations()) {
        if (v.task < 0) {
            fmt::print(out, "violation:      {} by {:.3e}\n", to_string(v.kind), v.magnitude);
        } else {
            fmt::print(out, "violation:      task {} {} by {:.3e}\n", v.task + 1, to_string(v.kind),
                       v.magnitude);
        }
    }
}

}  // namespace

void RunConfig::validate() const {
    const bool needs_instance = command != Command::Examples;
    if (needs_instance && !instance) throw InvalidArgument("--instance is required");
    if ((command == Command::Verify || command == Command::Compare) && !schedule) {
        throw InvalidArgument("--schedule is required");
    }
    if (command == Command::Trace) {
        if (!schedule && !from_solve) throw InvalidArgument("trace needs --schedule or --from-solve");
        if (dt && !(*dt > 0.0)) throw InvalidArgument("--dt must be > 0");
    }
    oracle.validate();
}

bool ExpectedValue::pass() const { return std::abs(expected - actual) <= kExampleTolerance; }

std::vector<BuiltinExample> builtin_examples() {
    auto make = [](double horizon, double x0) {
        ProblemInstance inst;
        inst.n = 3;
        inst.horizon = horizon;
        inst.alpha = 0.125;
        inst.x_min = 0.4;
        inst.x_max = 0.85;
        inst.x0 = x0;
        inst.utility = UtilityFunction::log_one_plus();
        return inst;
    };
    return {
        {"example1", make(7.0, 0.6), {CaseTag::NoRestEqualSplit, 3, false}},
        {"example2", make(8.8, 0.7), {CaseTag::Structured, 2, true}},
        {"example3", make(7.4, 0.7), {CaseTag::Structured, 2, false}},
    };
}

std::vector<ExpectedValue> expected_values(const BuiltinExample& example, const Solution& sol) {
    const FeasibilityReport walk = check_feasibility(example.instance, sol.schedule);
    const auto& tasks = sol.schedule.tasks;
    std::vector<ExpectedValue> rows;
    if (example.name == "example1") {
        for (std::size_t i = 0; i < tasks.size(); ++i) {
            rows.push_back({fmt::format("t_{}", i + 1), 7.0 / 3.0, tasks[i].work});
            rows.push_back({fmt::format("r_{}", i + 1), 0.0, tasks[i].rest});
        }
        rows.push_back({"x_N", 0.8332, walk.terminal_ratio(example.instance.x0)});
    } else if (example.name == "example2") {
        rows.push_back({"m", 2.0, static_cast<double>(sol.label.m)});
        rows.push_back({"t1_tilde", 2.7726, sol.t1_tilde});
        rows.push_back({"t2_tilde", 2.6740, sol.t2_tilde});
        rows.push_back({"r2_tilde", 0.5808, sol.r2_tilde});
        rows.push_back({"r_3", 0.5808, tasks.at(2).rest});
    } else if (example.name == "example3") {
        rows.push_back({"m", 2.0, static_cast<double>(sol.label.m)});
        rows.push_back({"t1_tilde", 2.4013, sol.t1_tilde});
        rows.push_back({"t2_tilde", 2.2610, sol.t2_tilde});
        rows.push_back({"r1_tilde", 0.3364, sol.r1_tilde});
        rows.push_back({"r_3", 0.3364, tasks.at(2).rest});
    }
    return rows;
}

int run_solve(const RunConfig& config, std::ostream& out, std::ostream&) {
    const ProblemInstance inst = load_instance(config);
    const Solution sol = solve(inst);
    const std::string doc = io::dump(io::solution_to_json(sol));
    if (config.out) write_text(*config.out, doc);
    if (config.format == OutputFormat::Json) {
        out << doc;
    } else {
        print_summary(out, inst, sol);
    }
    return kExitOk;
}

int run_verify(const RunConfig& config, std::ostream& out, std::ostream&) {
    const ProblemInstance inst = load_instance(config);
    const LoadedSchedule loaded = load_schedule(*config.schedule);
    const FeasibilityReport report = check_feasibility(inst, loaded.schedule);

    std::optional<StationarityReport> stationarity;
    if (loaded.solution && report.feasible) {
        stationarity = verify_stationarity(inst, *loaded.solution, kVerifyStationarityTol);
    }
    const bool ok = report.feasible && (!stationarity || stationarity->verdict != Verdict::Fail);

    if (config.format == OutputFormat::Json) {
        io::Json doc{{"feasibility", io::feasibility_to_json(report)}};
        doc["stationarity"] = stationarity ? io::stationarity_to_json(*stationarity) : io::Json(nullptr);
        doc["objective"] = total_utility(loaded.schedule, inst.utility);
        doc["pass"] = ok;
        out << io::dump(doc);
    } else {
        print_feasibility(out, report);
        fmt::print(out, "objective:      {:.6f}\n", total_utility(loaded.schedule, inst.utility));
        if (stationarity) {
            fmt::print(out, "stationarity:   {}", to_string(stationarity->verdict));
            if (stationarity->verdict == Verdict::NotApplicable) {
                fmt::print(out, " ({})\n", stationarity->reason);
            } else {
                fmt::print(out, " (residual {:.3e})\n", stationarity->residual);
            }
        }
        fmt::print(out, "result:         {}\n", ok ? "PASS" : "FAIL");
    }
    return ok ? kExitOk : kExitCheckFailed;
}

int run_oracle(const RunConfig& config, std::ostream& out, std::ostream&) {
    const ProblemInstance inst = load_instance(config);
    const OracleRun run = inst.n <= 2 ? grid_oracle(inst, config.oracle)
                                      : coordinate_ascent(inst, config.oracle);
    const Solution solver = solve(inst);
    const ComparisonReport cmp = compare(inst, solver, run.solution, kExampleTolerance);
    const bool ok = cmp.verdict != CompareVerdict::BDominates;

    io::Json doc{{"method", inst.n <= 2 ? "grid" : "coordinate_ascent"},
                 {"evaluations", run.evaluations},
                 {"budget_exhausted", run.budget_exhausted},
                 {"oracle", io::solution_to_json(run.solution)},
                 {"comparison_vs_solver", io::comparison_to_json(cmp)}};
    const std::string text = io::dump(doc);
    if (config.out) write_text(*config.out, text);
    if (config.format == OutputFormat::Json) {
        out << text;
    } else {
        fmt::print(out, "method:         {}\n", inst.n <= 2 ? "grid" : "coordinate ascent");
        fmt::print(out, "oracle case:    {}\n", to_string(run.solution.label.tag));
        fmt::print(out, "oracle value:   {:.6f}\n", run.solution.objective);
        fmt::print(out, "solver value:   {:.6f}\n", solver.objective);
        fmt::print(out, "gap:            {:.3e}\n", cmp.objective_gap_abs);
        fmt::print(out, "verdict:        {}\n", ok ? "solver not dominated" : "ORACLE DOMINATES");
    }
    return ok ? kExitOk : kExitCheckFailed;
}

int run_trace(const RunConfig& config, std::ostream& out, std::ostream& err) {
    const ProblemInstance inst = load_instance(config);
    const Schedule schedule =
        config.from_solve ? solve(inst).schedule : load_schedule(*config.schedule).schedule;
    const FeasibilityReport report = check_feasibility(inst, schedule);
    if (!report.feasible) {
        print_feasibility(err, report);
        return kExitCheckFailed;
    }
    const UtilizationTrace tr = trace(inst, schedule, config.dt.value_or(0.1));
    if (config.out) {
        std::ofstream file(*config.out);
        if (!file) throw FormatError(fmt::format("cannot write '{}'", config.out->string()));
        write_trace_csv(file, tr);
    } else {
        write_trace_csv(out, tr);
    }
    return kExitOk;
}

int run_compare(const RunConfig& config, std::ostream& out, std::ostream&) {
    const ProblemInstance inst = load_instance(config);
    const LoadedSchedule loaded = load_schedule(*config.schedule);
    const FeasibilityReport feas = check_feasibility(inst, loaded.schedule);

    Solution candidate;
    candidate.schedule = loaded.schedule;
    candidate.objective = total_utility(loaded.schedule, inst.utility);
    const Solution solver = solve(inst);
    const ComparisonReport cmp = compare(inst, solver, candidate, kExampleTolerance);

    io::Json doc = io::comparison_to_json(cmp);
    doc["candidate_feasible"] = feas.feasible;
    const std::string text = io::dump(doc);
    if (config.out) write_text(*config.out, text);
    if (config.format == OutputFormat::Json) {
        out << text;
    } else {
        fmt::print(out, "candidate feasible: {}\n", feas.feasible ? "yes" : "no");
        fmt::print(out, "solver objective:   {:.6f}\n", solver.objective);
        fmt::print(out, "candidate objective:{:.6f}\n", candidate.objective);
        fmt::print(out, "gap (solver-cand):  {:.6f}\n", cmp.objective_gap_abs);
        fmt::print(out, "schedule linf:      {:.6f}\n", cmp.schedule_linf);
        fmt::print(out, "verdict:            {}\n",
                   cmp.verdict == CompareVerdict::Match        ? "match"
                   : cmp.verdict == CompareVerdict::ADominates ? "solver-dominates"
                                                               : "candidate-dominates");
    }
    const bool ok = feas.feasible && cmp.verdict != CompareVerdict::BDominates;
    return ok ? kExitOk : kExitCheckFailed;
}

int run_examples(const RunConfig& config, std::ostream& out, std::ostream&) {
    bool all_pass = true;
    io::Json docs = io::Json::array();
    if (config.format == OutputFormat::Text) {
        fmt::print(out, "{:<10} {:<10} {:>10} {:>10}  {}\n", "example", "value", "computed",
                   "reported", "result");
    }
    for (const auto& ex : builtin_examples()) {
        const Solution sol = solve(ex.instance);
        const bool label_ok = sol.label == ex.expected_label;
        all_pass = all_pass && label_ok;
        io::Json checks = io::Json::array();
        if (config.format == OutputFormat::Text) {
            fmt::print(out, "{:<10} {:<10} {:>10} {:>10}  {}\n", ex.name, "case",
                       to_string(sol.label.tag).substr(0, 10),
                       to_string(ex.expected_label.tag).substr(0, 10), label_ok ? "pass" : "FAIL");
        }
        for (const auto& row : expected_values(ex, sol)) {
            all_pass = all_pass && row.pass();
            checks.push_back(io::Json{{"name", row.name},
                                      {"computed", row.actual},
                                      {"reported", row.expected},
                                      {"pass", row.pass()}});
            if (config.format == OutputFormat::Text) {
                fmt::print(out, "{:<10} {:<10} {:>10.4f} {:>10.4f}  {}\n", ex.name, row.name,
                           row.actual, row.expected, row.pass() ? "pass" : "FAIL");
            }
        }
        docs.push_back(io::Json{{"name", ex.name},
                                {"instance", io::instance_to_json(ex.instance)},
                                {"solution", io::solution_to_json(sol)},
                                {"checks", std::move(checks)}});
    }
    if (config.out) write_text(*config.out, io::dump(docs));
    if (config.format == OutputFormat::Json) {
        out << io::dump(docs);
    } else {
        fmt::print(out, "{}\n", all_pass ? "all examples match at 1e-3" : "MISMATCH");
    }
    return all_pass ? kExitOk : kExitCheckFailed;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        config.validate();
        switch (config.command) {
            case Command::Solve: return run_solve(config, out, err);
            case Command::Verify: return run_verify(config, out, err);
            case Command::Oracle: return run_oracle(config, out, err);
            case Command::Trace: return run_trace(config, out, err);
            case Command::Compare: return run_compare(config, out, err);
            case Command::Examples: return run_examples(config, out, err);
        }
    } catch (const InternalError& e) {
        fmt::print(err, "internal error: {}\n", e.what());
        return kExitInternalError;
    } catch (const Error& e) {
        fmt::print(err, "error ({}): {}\n", e.kind(), e.what());
        return kExitUserError;
    } catch (const std::exception& e) {
        fmt::print(err, "internal error: {}\n", e.what());
        return kExitInternalError;
    }
    return kExitInternalError;
}

}  // namespace opsched::cli
