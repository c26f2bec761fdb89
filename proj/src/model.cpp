#include "opsched/model.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

#include "opsched/dynamics.hpp"
#include "opsched/errors.hpp"

namespace opsched {

void ProblemInstance::validate() const {
    auto fail = [](const std::string& msg) { throw InvalidInstance(msg); };
    if (n < 1) fail(fmt::format("n must be >= 1, got {}", n));
    if (!(horizon >= 0.0) || !std::isfinite(horizon)) {
        fail(fmt::format("t_horizon must be finite and >= 0, got {}", horizon));
    }
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        fail(fmt::format("alpha must be positive, got {}", alpha));
    }
    if (!(x_min > 0.0 && x_min < x_max && x_max < 1.0)) {
        fail(fmt::format("need 0 < x_min < x_max < 1, got x_min={} x_max={}", x_min, x_max));
    }
    if (!(x0 >= x_min && x0 <= x_max)) {
        fail(fmt::format("x0={} lies outside [x_min, x_max] = [{}, {}]", x0, x_min, x_max));
    }
}

double Schedule::total_time() const noexcept {
    double sum = 0.0;
    for (const auto& task : tasks) sum += task.rest + task.work;
    return sum;
}

double Schedule::total_work() const noexcept {
    double sum = 0.0;
    for (const auto& task : tasks) sum += task.work;
    return sum;
}

std::string_view to_string(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::Budget: return "budget";
        case ViolationKind::BelowMin: return "below_x_min";
        case ViolationKind::AboveMax: return "above_x_max";
    }
    return "unknown";
}

std::vector<Violation> FeasibilityReport::all_violations() const {
    std::vector<Violation> out = budget_violations;
    for (const auto& task : tasks) {
        out.insert(out.end(), task.violations.begin(), task.violations.end());
    }
    return out;
}

FeasibilityReport check_feasibility(const ProblemInstance& instance, const Schedule& schedule,
                                    double tol) {
    instance.validate();
    if (!(tol >= 0.0)) {
        throw InvalidArgument(fmt::format("feasibility tolerance must be >= 0, got {}", tol));
    }
    if (schedule.size() != static_cast<std::size_t>(instance.n)) {
        throw InvalidArgument(fmt::format("schedule has {} tasks, instance expects {}",
                                          schedule.size(), instance.n));
    }

    FeasibilityReport report;
    report.tasks.reserve(schedule.size());
    auto note = [&report](std::vector<Violation>& sink, ViolationKind kind, int task,
                          double magnitude) {
        sink.push_back({kind, task, magnitude});
        report.feasible = false;
        report.worst_violation = std::max(report.worst_violation, magnitude);
    };

    double x = instance.x0;
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        const auto& seg = schedule.tasks[i];
        TaskRecord rec;
        rec.x_bar = rest_transition(x, seg.rest, instance.alpha);
        rec.x = work_transition(rec.x_bar, seg.work, instance.alpha);
        const int idx = static_cast<int>(i);
        if (rec.x_bar < instance.x_min - tol) {
            note(rec.violations, ViolationKind::BelowMin, idx, instance.x_min - rec.x_bar);
        }
        if (rec.x > instance.x_max + tol) {
            note(rec.violations, ViolationKind::AboveMax, idx, rec.x - instance.x_max);
        }
        x = rec.x;
        report.tasks.push_back(std::move(rec));
    }

    report.budget_used = schedule.total_time();
    if (report.budget_used > instance.horizon + tol) {
        note(report.budget_violations, ViolationKind::Budget, -1,
             report.budget_used - instance.horizon);
    }
    return report;
}

double total_utility(const Schedule& schedule, const UtilityFunction& u) {
    double sum = 0.0;
    for (const auto& task : schedule.tasks) sum += u.eval(task.work);
    return sum;
}

}  // namespace opsched
