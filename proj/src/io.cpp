#include "opsched/io.hpp"

#include <fstream>
#include <sstream>

#include <fmt/core.h>

#include "opsched/errors.hpp"

namespace opsched::io {
namespace {

double number(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) {
        throw FormatError(fmt::format("missing required key '{}'", key));
    }
    const Json& v = j.at(key);
    if (!v.is_number()) throw FormatError(fmt::format("key '{}' must be a number", key));
    return v.get<double>();
}

Json candidate_to_json(const Candidate& c) {
    return Json{{"m", c.m},
                {"feasible", c.feasible},
                {"t1", c.t1},
                {"t2", c.t2},
                {"objective", c.feasible ? Json(c.objective) : Json(nullptr)},
                {"boundary", c.boundary},
                {"residual_slack", c.residual_slack}};
}

CaseTag case_from_string(const std::string& s) {
    if (s == "SLACK") return CaseTag::Slack;
    if (s == "NO_REST_EQUAL_SPLIT") return CaseTag::NoRestEqualSplit;
    if (s == "STRUCTURED") return CaseTag::Structured;
    throw FormatError(fmt::format("unknown case '{}'", s));
}

}  // namespace

Json utility_to_json(const UtilityFunction& u) {
    Json j;
    j["family"] = std::string(to_string(u.family()));
    switch (u.family()) {
        case UtilityFamily::LogOnePlus: break;
        case UtilityFamily::ExpSaturation: j["a"] = u.a(); break;
        case UtilityFamily::RateDistortion:
            j["a"] = u.a();
            j["b"] = u.b();
            break;
        case UtilityFamily::Custom: throw FormatError("custom utilities cannot be serialized");
    }
    return j;
}

UtilityFunction utility_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("family") || !j.at("family").is_string()) {
        throw FormatError("utility must be an object with a string 'family'");
    }
    const auto name = j.at("family").get<std::string>();
    try {
        switch (utility_family_from_string(name)) {
            case UtilityFamily::LogOnePlus: return UtilityFunction::log_one_plus();
            case UtilityFamily::ExpSaturation:
                return UtilityFunction::exp_saturation(number(j, "a"));
            case UtilityFamily::RateDistortion:
                return UtilityFunction::rate_distortion(number(j, "a"), number(j, "b"));
            case UtilityFamily::Custom: break;
        }
    } catch (const InvalidArgument& e) {
        throw FormatError(e.what());
    }
    throw FormatError(fmt::format("unsupported utility family '{}'", name));
}

Json instance_to_json(const ProblemInstance& instance) {
    return Json{{"n", instance.n},
                {"t_horizon", instance.horizon},
                {"alpha", instance.alpha},
                {"x_min", instance.x_min},
                {"x_max", instance.x_max},
                {"x0", instance.x0},
                {"utility", utility_to_json(instance.utility)}};
}

ProblemInstance instance_from_json(const Json& j) {
    if (!j.is_object()) throw FormatError("instance must be a JSON object");
    ProblemInstance inst;
    if (!j.contains("n") || !j.at("n").is_number_integer()) {
        throw FormatError("key 'n' must be an integer");
    }
    inst.n = j.at("n").get<int>();
    inst.horizon = number(j, "t_horizon");
    inst.alpha = number(j, "alpha");
    inst.x_min = number(j, "x_min");
    inst.x_max = number(j, "x_max");
    inst.x0 = number(j, "x0");
    if (!j.contains("utility")) throw FormatError("missing required key 'utility'");
    inst.utility = utility_from_json(j.at("utility"));
    inst.validate();
    return inst;
}

Json schedule_to_json(const Schedule& schedule) {
    Json arr = Json::array();
    for (const auto& seg : schedule.tasks) arr.push_back(Json{{"rest", seg.rest}, {"work", seg.work}});
    return arr;
}

Schedule schedule_from_json(const Json& j) {
    if (!j.is_array()) throw FormatError("schedule must be a JSON array");
    Schedule s;
    for (const auto& item : j) {
        const double rest = number(item, "rest");
        const double work = number(item, "work");
        if (!(rest >= 0.0) || !(work >= 0.0)) {
            throw FormatError(fmt::format("negative rest/work entry ({}, {})", rest, work));
        }
        s.tasks.push_back({rest, work});
    }
    return s;
}

Json solution_to_json(const Solution& solution) {
    Json candidates = Json::array();
    for (const auto& c : solution.diagnostics.candidates) candidates.push_back(candidate_to_json(c));
    Json diag;
    diag["candidates"] = std::move(candidates);
    diag["stationarity_residual"] = solution.diagnostics.stationarity_residual
                                        ? Json(*solution.diagnostics.stationarity_residual)
                                        : Json(nullptr);
    diag["budget_residual"] = solution.diagnostics.budget_residual;

    Json j;
    j["case"] = std::string(to_string(solution.label.tag));
    j["m"] = solution.label.m;
    j["boundary"] = solution.label.boundary;
    j["t1_tilde"] = solution.t1_tilde;
    j["t2_tilde"] = solution.t2_tilde;
    j["r1_tilde"] = solution.r1_tilde;
    j["r2_tilde"] = solution.r2_tilde;
    j["schedule"] = schedule_to_json(solution.schedule);
    j["objective"] = solution.objective;
    j["diagnostics"] = std::move(diag);
    return j;
}

Solution solution_from_json(const Json& j) {
    if (!j.is_object()) throw FormatError("solution must be a JSON object");
    Solution s;
    if (!j.contains("case") || !j.at("case").is_string()) throw FormatError("missing 'case'");
    s.label.tag = case_from_string(j.at("case").get<std::string>());
    s.label.m = static_cast<int>(number(j, "m"));
    s.label.boundary = j.value("boundary", false);
    s.t1_tilde = number(j, "t1_tilde");
    s.t2_tilde = number(j, "t2_tilde");
    s.r1_tilde = number(j, "r1_tilde");
    s.r2_tilde = number(j, "r2_tilde");
    if (!j.contains("schedule")) throw FormatError("missing 'schedule'");
    s.schedule = schedule_from_json(j.at("schedule"));
    s.objective = number(j, "objective");
    if (j.contains("diagnostics") && j.at("diagnostics").is_object()) {
        const Json& d = j.at("diagnostics");
        if (d.contains("budget_residual") && d.at("budget_residual").is_number()) {
            s.diagnostics.budget_residual = d.at("budget_residual").get<double>();
        }
        if (d.contains("stationarity_residual") && d.at("stationarity_residual").is_number()) {
            s.diagnostics.stationarity_residual = d.at("stationarity_residual").get<double>();
        }
    }
    return s;
}

Json feasibility_to_json(const FeasibilityReport& report) {
    auto violation = [](const Violation& v) {
        return Json{{"kind", std::string(to_string(v.kind))},
                    {"task", v.task},
                    {"magnitude", v.magnitude}};
    };
    Json tasks = Json::array();
    for (const auto& rec : report.tasks) {
        Json vs = Json::array();
        for (const auto& v : rec.violations) vs.push_back(violation(v));
        tasks.push_back(Json{{"x_bar", rec.x_bar}, {"x", rec.x}, {"violations", std::move(vs)}});
    }
    Json budget = Json::array();
    for (const auto& v : report.budget_violations) budget.push_back(violation(v));
    return Json{{"feasible", report.feasible},
                {"budget_used", report.budget_used},
                {"budget_violations", std::move(budget)},
                {"worst_violation", report.worst_violation},
                {"tasks", std::move(tasks)}};
}

Json stationarity_to_json(const StationarityReport& report) {
    Json j{{"verdict", std::string(to_string(report.verdict))}};
    if (report.verdict == Verdict::NotApplicable) {
        j["reason"] = report.reason;
    } else {
        j["residual"] = report.residual;
        j["policy1_side"] = report.policy1_side;
        j["policy2_side"] = report.policy2_side;
    }
    return j;
}

Json comparison_to_json(const ComparisonReport& report) {
    Json checks = Json::object();
    for (const auto& c : report.lemma_checks) {
        checks[c.name] = Json{{"a", c.a}, {"b", c.b}, {"agree", c.agree()}};
    }
    return Json{{"objective_gap_abs", report.objective_gap_abs},
                {"objective_gap_rel", report.objective_gap_rel},
                {"schedule_linf", report.schedule_linf},
                {"lemma_checks", std::move(checks)},
                {"verdict", std::string(to_string(report.verdict))}};
}

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError(fmt::format("cannot open '{}'", path.string()));
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(fmt::format("'{}' is not valid JSON: {}", path.string(), e.what()));
    }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace opsched::io
