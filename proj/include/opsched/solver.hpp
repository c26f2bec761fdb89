#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "opsched/model.hpp"

namespace opsched {

enum class CaseTag {
    Slack,             ///< every task rests to x_min and works to x_max, T not binding
    NoRestEqualSplit,  ///< x never reaches x_max: no rest, t_i = T / N
    Structured,        ///< m no-rest tasks, then rest/work alternation hitting x_max
};

std::string_view to_string(CaseTag tag);

struct CaseLabel {
    CaseTag tag = CaseTag::Slack;
    int m = 0;              ///< tasks in the no-rest phase (Structured only)
    bool boundary = false;  ///< no-rest phase ends exactly at x_max (no separate r1)

    bool operator==(const CaseLabel&) const = default;
};

/// One row of the sweep over m.
struct Candidate {
    int m = 0;
    bool feasible = false;
    double t1 = 0.0;
    double t2 = 0.0;
    double objective = 0.0;
    bool boundary = false;
    bool residual_slack = false;  ///< t2 pinned at x_bar = x_min with time left over
};

struct SolveDiagnostics {
    std::optional<double> stationarity_residual;  ///< interior Structured optima only
    double budget_residual = 0.0;                 ///< T - total schedule time
    std::vector<Candidate> candidates;
};

/// Optimal schedule plus the two-policy parameters that generate it.
///
/// Structured: t_i = t1_tilde, r_i = 0 for the first m tasks; task m+1 rests
/// r1_tilde (or r2_tilde when `boundary`), every later task rests r2_tilde,
/// and tasks m+1..N all work t2_tilde.
/// Slack: r1_tilde is the first rest (x0 -> x_min), t2_tilde/r2_tilde the
/// saturating work and rest, m = 0. NoRestEqualSplit: t1_tilde = T/N, m = N.
struct Solution {
    CaseLabel label;
    Schedule schedule;
    double t1_tilde = 0.0;
    double t2_tilde = 0.0;
    double r1_tilde = 0.0;
    double r2_tilde = 0.0;
    double objective = 0.0;
    SolveDiagnostics diagnostics;
};

struct GreedySchedule {
    Schedule schedule;
    double total_duration = 0.0;
};

/// Rest to x_min then work to x_max for every task, whether or not it fits T.
GreedySchedule greedy_saturating_schedule(const ProblemInstance& instance);

/// Ratio x_bar such that working t2 from x_bar ends exactly at x_max.
/// Throws InvalidArgument when t2 is so long that x_bar would be negative.
double policy2_pre_work_ratio(double t2, double x_max, double alpha);

/// Total time of the two-policy schedule with parameters (m, t1, t2):
/// m*t1 + rest(x_m -> x_bar) + (N-m)*t2 + (N-m-1)*rest(x_max -> x_bar).
/// Throws InfeasibleCombination naming the violated domain bound.
double budget(const ProblemInstance& instance, int m, double t1, double t2);

struct BudgetRoot {
    double t2 = 0.0;
    bool residual_slack = false;
};

/// Unique t2 with budget(m, t1, t2) = T (bisection). When even x_bar = x_min
/// leaves time over, returns that end of the domain with `residual_slack` set.
/// Throws InfeasibleCombination("budget_exceeded") when the shortest valid t2
/// already overruns T.
BudgetRoot solve_t2_for_budget(const ProblemInstance& instance, int m, double t1);

/// Slack / equal-split / Structured, with m and boundary from the optimum.
CaseLabel classify_case(const ProblemInstance& instance);

Solution solve(const ProblemInstance& instance);

enum class Verdict { Pass, Fail, NotApplicable };

std::string_view to_string(Verdict verdict);

struct StationarityReport {
    Verdict verdict = Verdict::NotApplicable;
    double residual = 0.0;
    double policy1_side = 0.0;  ///< u'(t1) * x_m
    double policy2_side = 0.0;  ///< u'(t2) * x_bar
    std::string reason;
};

/// Relative residual |u'(t1) x_m - u'(t2) x_bar| / max(...) from raw values.
StationarityReport stationarity_from_values(const UtilityFunction& u, double t1, double t2,
                                            double x_m, double x_bar, double tol);

/// First-order optimality audit of an interior Structured optimum
/// (boundary = false, m >= 1). Other cases come back NotApplicable.
StationarityReport verify_stationarity(const ProblemInstance& instance, const Solution& solution,
                                       double tol);

enum class Ordering { T1Greater, T1Less, Equal };

std::string_view to_string(Ordering ordering);

struct OrderingPrediction {
    Ordering predicted = Ordering::T1Greater;
    bool ratio_branch = false;  ///< the N < 2m comparison was used
    double lhs = 0.0;           ///< m (1 - x_m) / x_m
    double rhs = 0.0;           ///< (N - m) (1 - x_bar) / x_bar
    /// Raised when the ratio branch disagrees with the ordering forced by
    /// stationarity (x_bar < x_m implies t1 > t2 for strictly concave u).
    bool discrepancy = false;
};

/// Literal t1-vs-t2 ordering rule for Structured optima.
OrderingPrediction lemma5_classify(const CaseLabel& label, int n, int m, double x_m, double x_bar);

}  // namespace opsched
