#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "opsched/model.hpp"
#include "opsched/oracle.hpp"
#include "opsched/solver.hpp"

namespace opsched::io {

using Json = nlohmann::ordered_json;

/// `{ "family": ..., "a": ..., "b": ... }`, unused parameters omitted.
Json utility_to_json(const UtilityFunction& u);
UtilityFunction utility_from_json(const Json& j);

/// Keys: n, t_horizon, alpha, x_min, x_max, x0, utility.
Json instance_to_json(const ProblemInstance& instance);
ProblemInstance instance_from_json(const Json& j);

/// Array of `{ "rest": r, "work": t }`.
Json schedule_to_json(const Schedule& schedule);
Schedule schedule_from_json(const Json& j);

Json solution_to_json(const Solution& solution);
/// Reads back a document written by solution_to_json.
Solution solution_from_json(const Json& j);

Json feasibility_to_json(const FeasibilityReport& report);
Json stationarity_to_json(const StationarityReport& report);
Json comparison_to_json(const ComparisonReport& report);

/// Parses a file; FormatError on I/O or syntax problems.
Json read_json_file(const std::filesystem::path& path);
/// Pretty-printed with a trailing newline.
std::string dump(const Json& j);

}  // namespace opsched::io
