#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "opsched/model.hpp"
#include "opsched/solver.hpp"

namespace opsched {

/// Settings for the structure-free baselines.
struct OracleConfig {
    /// Grid step for exhaustive search; unset means T / 60.
    std::optional<double> grid_resolution;
    int refinement_rounds = 3;
    int starts = 32;
    std::uint64_t seed = 1;
    std::int64_t max_evals = 50'000'000;
    double feasibility_tol = kDefaultFeasibilityTolerance;

    void validate() const;
    double step_for(const ProblemInstance& instance) const;
};

struct OracleRun {
    Solution solution;
    std::int64_t evaluations = 0;
    bool budget_exhausted = false;
};

/// Exhaustive grid over (r_1, t_1, ..., r_N) for N <= 2, then
/// `refinement_rounds` rounds of 5x finer local grids around the incumbent.
/// The last work time is always the longest feasible one (u is
/// nondecreasing), and each axis also visits the value where a constraint
/// turns active. Throws UnsupportedSize for N > 2.
OracleRun grid_oracle(const ProblemInstance& instance, const OracleConfig& config);

/// Multi-start ascent for N <= 8 over the same 2N - 1 free variables. Each
/// move is a line search along a coordinate, a pairwise transfer e_i - e_j,
/// or a seeded random direction, restricted to the feasible part of the line.
/// Deterministic for a fixed seed and start count.
OracleRun coordinate_ascent(const ProblemInstance& instance, const OracleConfig& config);

/// Case label read back from a schedule's shape (used for oracle outputs).
CaseLabel infer_case_label(const ProblemInstance& instance, const Schedule& schedule, double tol);

/// The structural properties every optimal schedule has, checked on an
/// arbitrary schedule at tolerance `tol`.
struct LemmaChecks {
    bool slack_saturates = true;        ///< budget slack => x_bar_i = x_min and x_i = x_max
    bool unsaturated_no_rest = true;    ///< binding budget and x(T) < x_max => no rest, equal t
    bool rest_implies_x_max = true;     ///< r_i > tol => x_i = x_max
    bool equal_after_x_max = true;      ///< equal work after the first x_max hit

    bool all() const noexcept {
        return slack_saturates && unsaturated_no_rest && rest_implies_x_max && equal_after_x_max;
    }
};

LemmaChecks check_lemma_properties(const ProblemInstance& instance, const Schedule& schedule,
                                   double tol);

enum class CompareVerdict { Match, ADominates, BDominates };

std::string_view to_string(CompareVerdict verdict);

struct LemmaAgreement {
    std::string name;
    bool a = false;
    bool b = false;
    bool agree() const noexcept { return a == b; }
};

struct ComparisonReport {
    double objective_gap_abs = 0.0;  ///< a.objective - b.objective
    double objective_gap_rel = 0.0;
    double schedule_linf = 0.0;      ///< max |a - b| over all rest/work entries
    std::vector<LemmaAgreement> lemma_checks;
    CompareVerdict verdict = CompareVerdict::Match;
};

ComparisonReport compare(const ProblemInstance& instance, const Solution& a, const Solution& b,
                         double tol);

}  // namespace opsched
