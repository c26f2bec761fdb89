#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "opsched/utility.hpp"

namespace opsched {

/// N identical tasks over a horizon T for an operator whose utilization
/// ratio must stay inside [x_min, x_max].
struct ProblemInstance {
    int n = 1;
    double horizon = 0.0;  ///< T
    double alpha = 0.0;
    double x_min = 0.0;
    double x_max = 0.0;
    double x0 = 0.0;
    UtilityFunction utility = UtilityFunction::log_one_plus();

    /// Throws InvalidInstance unless n >= 1, T >= 0, alpha > 0,
    /// 0 < x_min < x_max < 1 and x_min <= x0 <= x_max.
    void validate() const;
};

/// One task: rest first, then work.
struct TaskSegment {
    double rest = 0.0;
    double work = 0.0;

    bool operator==(const TaskSegment&) const = default;
};

struct Schedule {
    std::vector<TaskSegment> tasks;

    std::size_t size() const noexcept { return tasks.size(); }
    double total_time() const noexcept;
    double total_work() const noexcept;

    bool operator==(const Schedule&) const = default;
};

enum class ViolationKind { Budget, BelowMin, AboveMax };

std::string_view to_string(ViolationKind kind);

struct Violation {
    ViolationKind kind;
    int task = -1;           ///< 0-based task index; -1 for the budget
    double magnitude = 0.0;  ///< how far past the bound, always > tol
};

struct TaskRecord {
    double x_bar = 0.0;  ///< ratio right before work starts
    double x = 0.0;      ///< ratio right after work ends
    std::vector<Violation> violations;
};

struct FeasibilityReport {
    bool feasible = true;
    double budget_used = 0.0;
    std::vector<TaskRecord> tasks;
    std::vector<Violation> budget_violations;
    double worst_violation = 0.0;

    std::vector<Violation> all_violations() const;
    double terminal_ratio(double x0) const { return tasks.empty() ? x0 : tasks.back().x; }
};

inline constexpr double kDefaultFeasibilityTolerance = 1e-9;

/// Walks the schedule through the dynamics from x0 and flags every budget,
/// x_min and x_max violation larger than `tol`. Checking segment endpoints is
/// enough because x(t) is monotone inside each segment.
FeasibilityReport check_feasibility(const ProblemInstance& instance, const Schedule& schedule,
                                    double tol = kDefaultFeasibilityTolerance);

/// Sum of u(t_i). Rests earn nothing.
double total_utility(const Schedule& schedule, const UtilityFunction& u);

}  // namespace opsched
