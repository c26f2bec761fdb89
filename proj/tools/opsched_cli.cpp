#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "opsched/cli.hpp"

namespace {

using opsched::cli::Command;
using opsched::cli::OutputFormat;
using opsched::cli::RunConfig;

void add_common(CLI::App* sub, RunConfig& cfg, std::string& format, bool needs_instance) {
    auto* opt = sub->add_option("--instance", cfg.instance, "instance JSON file");
    if (needs_instance) opt->required();
    sub->add_option("--out", cfg.out, "write the output document here");
    sub->add_option("--format", format, "json or text")
        ->check(CLI::IsMember({"json", "text"}))
        ->default_val("text");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optimal rest/work schedules for an operator with bounded utilization ratio"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string format = "text";

    auto* solve = app.add_subcommand("solve", "compute the optimal schedule");
    add_common(solve, cfg, format, true);

    auto* verify = app.add_subcommand("verify", "check a schedule or solution document");
    add_common(verify, cfg, format, true);
    verify->add_option("--schedule", cfg.schedule, "schedule or solution JSON")->required();

    auto* oracle = app.add_subcommand("oracle", "structure-free baseline vs the solver");
    add_common(oracle, cfg, format, true);
    double grid_step = 0.0;
    oracle->add_option("--grid-step", grid_step, "grid step for N <= 2 (default T/60)");
    oracle->add_option("--starts", cfg.oracle.starts, "multi-start count for N > 2");
    oracle->add_option("--seed", cfg.oracle.seed, "seed for start points and directions");

    auto* trace = app.add_subcommand("trace", "emit x(t) as CSV");
    add_common(trace, cfg, format, true);
    trace->add_option("--schedule", cfg.schedule, "schedule or solution JSON");
    trace->add_flag("--from-solve", cfg.from_solve, "trace the solver's own schedule");
    trace->add_option("--dt", cfg.dt, "sampling step (default 0.1)");

    auto* compare = app.add_subcommand("compare", "compare a schedule against the solver");
    add_common(compare, cfg, format, true);
    compare->add_option("--schedule", cfg.schedule, "candidate schedule JSON")->required();

    auto* examples = app.add_subcommand("examples", "reproduce the three reference examples");
    add_common(examples, cfg, format, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return opsched::cli::kExitUserError;
    }

    if (solve->parsed()) cfg.command = Command::Solve;
    if (verify->parsed()) cfg.command = Command::Verify;
    if (oracle->parsed()) cfg.command = Command::Oracle;
    if (trace->parsed()) cfg.command = Command::Trace;
    if (compare->parsed()) cfg.command = Command::Compare;
    if (examples->parsed()) cfg.command = Command::Examples;
    cfg.format = format == "json" ? OutputFormat::Json : OutputFormat::Text;
    if (grid_step > 0.0) cfg.oracle.grid_resolution = grid_step;

    return opsched::cli::run(cfg, std::cout, std::cerr);
}
