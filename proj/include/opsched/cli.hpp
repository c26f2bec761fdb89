#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "opsched/model.hpp"
#include "opsched/oracle.hpp"
#include "opsched/solver.hpp"

namespace opsched::cli {

enum class Command { Solve, Verify, Oracle, Trace, Compare, Examples };
enum class OutputFormat { Text, Json };

/// Exit-code contract of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitCheckFailed = 1,
    kExitUserError = 2,
    kExitInternalError = 3,
};

struct RunConfig {
    Command command = Command::Solve;
    std::optional<std::filesystem::path> instance;
    std::optional<std::filesystem::path> schedule;
    std::optional<std::filesystem::path> out;
    std::optional<double> dt;
    OracleConfig oracle;
    OutputFormat format = OutputFormat::Text;
    bool from_solve = false;

    /// Throws InvalidArgument when a command's required inputs are missing.
    void validate() const;
};

/// One reference value checked by `examples`.
struct ExpectedValue {
    std::string name;
    double expected;
    double actual;
    bool pass() const;
};

struct BuiltinExample {
    std::string name;
    ProblemInstance instance;
    CaseLabel expected_label;
};

/// The three reference instances (T = 7, 8.8, 7.4 with N = 3, x_min = 0.4,
/// x_max = 0.85, alpha = 0.125, u = log(1 + t)).
std::vector<BuiltinExample> builtin_examples();

/// Values reported for a built-in example, paired with what `solution` gives.
std::vector<ExpectedValue> expected_values(const BuiltinExample& example, const Solution& solution);

inline constexpr double kExampleTolerance = 1e-3;

int run_solve(const RunConfig& config, std::ostream& out, std::ostream& err);
int run_verify(const RunConfig& config, std::ostream& out, std::ostream& err);
int run_oracle(const RunConfig& config, std::ostream& out, std::ostream& err);
int run_trace(const RunConfig& config, std::ostream& out, std::ostream& err);
int run_compare(const RunConfig& config, std::ostream& out, std::ostream& err);
int run_examples(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Dispatches on config.command and maps exceptions onto exit codes.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace opsched::cli
