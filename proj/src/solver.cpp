#include "opsched/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/core.h>

#include "opsched/dynamics.hpp"
#include "opsched/errors.hpp"

namespace opsched {
namespace {

constexpr double kDomainEps = 1e-12;
constexpr double kObjectiveTie = 1e-12;
constexpr int kCoarseScanPoints = 64;
constexpr double kGoldenWidth = 1e-9;
constexpr double kInvPhi = 0.6180339887498948482;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Shared per-instance constants of the two-policy family.
struct Family {
    const ProblemInstance& inst;
    double w1;      // no-rest work from x0 to x_max
    double t_star;  // work from x_min to x_max, longest policy-2 task

    explicit Family(const ProblemInstance& instance)
        : inst(instance),
          w1(work_time_to_reach(instance.x0, instance.x_max, instance.alpha)),
          t_star(work_time_to_reach(instance.x_min, instance.x_max, instance.alpha)) {}

    double x_m(int m, double t1) const {
        if (m == 0) return inst.x0;
        return std::min(inst.x_max, work_transition(inst.x0, std::min(m * t1, w1), inst.alpha));
    }

    double x_bar(double t2, double x_m_value) const {
        const double raw = 1.0 - (1.0 - inst.x_max) * std::exp(inst.alpha * t2);
        return std::clamp(raw, inst.x_min, x_m_value);
    }

    // Budget with x_bar already clamped into [x_min, x_m].
    double budget_clamped(int m, double t1, double x_m_value, double t2) const {
        const double xb = x_bar(t2, x_m_value);
        const int tail = inst.n - m;
        return m * t1 + rest_time_to_reach(x_m_value, xb, inst.alpha) + tail * t2 +
               (tail - 1) * rest_time_to_reach(inst.x_max, xb, inst.alpha);
    }

    // Shortest t2 in the domain: x_bar = x_m, no separate first rest.
    double t2_lower(double x_m_value) const {
        return work_time_to_reach(x_m_value, inst.x_max, inst.alpha);
    }
};

void check_m(const ProblemInstance& instance, int m) {
    if (m < 0 || m > instance.n - 1) {
        throw InfeasibleCombination(
            "m_range", fmt::format("m={} outside [0, {}]", m, instance.n - 1));
    }
}

BudgetRoot solve_t2(const Family& fam, int m, double t1) {
    const double xm = fam.x_m(m, t1);
    double lo = fam.t2_lower(xm);
    double hi = fam.t_star;
    const double horizon = fam.inst.horizon;

    if (fam.budget_clamped(m, t1, xm, lo) > horizon) {
        throw InfeasibleCombination(
            "budget_exceeded",
            fmt::format("m={} t1={}: shortest policy-2 task already overruns T={}", m, t1,
                        horizon));
    }
    if (fam.budget_clamped(m, t1, xm, hi) <= horizon) {
        return {hi, fam.budget_clamped(m, t1, xm, hi) < horizon};
    }
    // budget is strictly increasing in t2; bisect until the bracket stops shrinking.
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (fam.budget_clamped(m, t1, xm, mid) > horizon) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    const double b_lo = std::abs(fam.budget_clamped(m, t1, xm, lo) - horizon);
    const double b_hi = std::abs(fam.budget_clamped(m, t1, xm, hi) - horizon);
    return {b_lo <= b_hi ? lo : hi, false};
}

struct Evaluated {
    bool feasible = false;
    double t2 = 0.0;
    double objective = kNegInf;
    bool residual_slack = false;
};

Evaluated evaluate(const Family& fam, int m, double t1) {
    Evaluated out;
    BudgetRoot root;
    try {
        root = solve_t2(fam, m, t1);
    } catch (const InfeasibleCombination&) {
        return out;
    }
    const auto& u = fam.inst.utility;
    out.feasible = true;
    out.t2 = root.t2;
    out.residual_slack = root.residual_slack;
    out.objective = (m > 0 ? m * u.eval(t1) : 0.0) + (fam.inst.n - m) * u.eval(root.t2);
    return out;
}

// Sign of dF/dt1 along the budget surface: u'(t1) x_m - u'(t2) x_bar.
double stationarity_gap(const Family& fam, int m, double t1, double t2) {
    const double xm = fam.x_m(m, t1);
    const double xb = fam.x_bar(t2, xm);
    return fam.inst.utility.derivative(t1) * xm - fam.inst.utility.derivative(t2) * xb;
}

Candidate best_for_m(const Family& fam, int m) {
    Candidate cand;
    cand.m = m;
    if (m == 0) {
        const Evaluated e = evaluate(fam, 0, 0.0);
        cand.feasible = e.feasible;
        cand.t2 = e.t2;
        cand.objective = e.objective;
        cand.residual_slack = e.residual_slack;
        return cand;
    }
    if (!(fam.w1 > 0.0)) return cand;  // x0 = x_max: no room for a no-rest phase

    const double t1_hi = fam.w1 / m;
    auto f = [&](double t1) { return evaluate(fam, m, t1).objective; };

    // Coarse scan guards the unimodality assumption behind golden-section.
    int best_k = -1;
    double best_f = kNegInf;
    for (int k = 1; k <= kCoarseScanPoints; ++k) {
        const double val = f(t1_hi * k / kCoarseScanPoints);
        if (val > best_f) {
            best_f = val;
            best_k = k;
        }
    }

    double t1_best = t1_hi;
    double f_best = kNegInf;
    if (best_k > 0) {
        double a = t1_hi * (best_k - 1) / kCoarseScanPoints;
        double b = t1_hi * std::min(best_k + 1, kCoarseScanPoints) / kCoarseScanPoints;
        double c = b - kInvPhi * (b - a);
        double d = a + kInvPhi * (b - a);
        double fc = f(c);
        double fd = f(d);
        while (b - a > kGoldenWidth) {
            if (fc >= fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - kInvPhi * (b - a);
                fc = f(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + kInvPhi * (b - a);
                fd = f(d);
            }
        }
        t1_best = 0.5 * (a + b);
        f_best = f(t1_best);

        // Golden-section on F stalls near sqrt(eps); finish on the sign of dF/dt1.
        const double h = std::max(1e-6 * t1_hi, 1e-9);
        double lo = std::max(t1_best - h, 1e-300);
        double hi = std::min(t1_best + h, t1_hi);
        const Evaluated e_lo = evaluate(fam, m, lo);
        const Evaluated e_hi = evaluate(fam, m, hi);
        if (e_lo.feasible && e_hi.feasible && !e_lo.residual_slack && !e_hi.residual_slack &&
            stationarity_gap(fam, m, lo, e_lo.t2) > 0.0 &&
            stationarity_gap(fam, m, hi, e_hi.t2) < 0.0) {
            for (int iter = 0; iter < 200; ++iter) {
                const double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi) break;
                const Evaluated e = evaluate(fam, m, mid);
                if (!e.feasible) break;
                if (stationarity_gap(fam, m, mid, e.t2) > 0.0) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            const double polished = 0.5 * (lo + hi);
            const double f_polished = f(polished);
            if (f_polished >= f_best - kObjectiveTie) {
                t1_best = polished;
                f_best = f_polished;
            }
        }
    }

    // The x_m = x_max boundary rarely coincides with a golden-section point.
    const double f_boundary = f(t1_hi);
    const bool take_boundary = f_boundary > kNegInf && f_boundary >= f_best - kObjectiveTie;
    if (take_boundary) t1_best = t1_hi;

    const Evaluated e = evaluate(fam, m, t1_best);
    cand.feasible = e.feasible;
    cand.t1 = t1_best;
    cand.t2 = e.t2;
    cand.objective = e.objective;
    cand.residual_slack = e.residual_slack;
    cand.boundary = take_boundary;
    return cand;
}

Solution assemble_structured(const Family& fam, const Candidate& cand) {
    const auto& inst = fam.inst;
    Solution sol;
    sol.label = {CaseTag::Structured, cand.m, cand.boundary};
    sol.t1_tilde = cand.m > 0 ? cand.t1 : 0.0;
    sol.t2_tilde = cand.t2;

    const double xm = fam.x_m(cand.m, cand.t1);
    const double xb = fam.x_bar(cand.t2, xm);
    sol.r2_tilde = rest_time_to_reach(inst.x_max, xb, inst.alpha);
    sol.r1_tilde = cand.boundary ? 0.0 : rest_time_to_reach(xm, xb, inst.alpha);

    sol.schedule.tasks.reserve(inst.n);
    for (int i = 0; i < cand.m; ++i) sol.schedule.tasks.push_back({0.0, sol.t1_tilde});
    for (int i = cand.m; i < inst.n; ++i) {
        const double rest = (i == cand.m && !cand.boundary) ? sol.r1_tilde : sol.r2_tilde;
        sol.schedule.tasks.push_back({rest, sol.t2_tilde});
    }
    return sol;
}

Solution equal_split(const ProblemInstance& inst) {
    Solution sol;
    sol.label = {CaseTag::NoRestEqualSplit, inst.n, false};
    sol.t1_tilde = inst.horizon / inst.n;
    sol.schedule.tasks.assign(inst.n, TaskSegment{0.0, sol.t1_tilde});
    return sol;
}

void finish(const ProblemInstance& inst, Solution& sol) {
    sol.objective = total_utility(sol.schedule, inst.utility);
    sol.diagnostics.budget_residual = inst.horizon - sol.schedule.total_time();
    if (sol.label.tag == CaseTag::Structured && !sol.label.boundary && sol.label.m >= 1) {
        sol.diagnostics.stationarity_residual =
            verify_stationarity(inst, sol, std::numeric_limits<double>::infinity()).residual;
    }
}

}  // namespace

std::string_view to_string(CaseTag tag) {
    switch (tag) {
        case CaseTag::Slack: return "SLACK";
        case CaseTag::NoRestEqualSplit: return "NO_REST_EQUAL_SPLIT";
        case CaseTag::Structured: return "STRUCTURED";
    }
    return "UNKNOWN";
}

std::string_view to_string(Verdict verdict) {
    switch (verdict) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::NotApplicable: return "not-applicable";
    }
    return "unknown";
}

std::string_view to_string(Ordering ordering) {
    switch (ordering) {
        case Ordering::T1Greater: return "t1 > t2";
        case Ordering::T1Less: return "t1 < t2";
        case Ordering::Equal: return "equal";
    }
    return "unknown";
}

GreedySchedule greedy_saturating_schedule(const ProblemInstance& instance) {
    instance.validate();
    const double a = instance.alpha;
    const double first_rest = rest_time_to_reach(instance.x0, instance.x_min, a);
    const double t_star = work_time_to_reach(instance.x_min, instance.x_max, a);
    const double r_star = rest_time_to_reach(instance.x_max, instance.x_min, a);

    GreedySchedule out;
    out.schedule.tasks.reserve(instance.n);
    out.schedule.tasks.push_back({first_rest, t_star});
    for (int i = 1; i < instance.n; ++i) out.schedule.tasks.push_back({r_star, t_star});
    out.total_duration = out.schedule.total_time();
    return out;
}

double policy2_pre_work_ratio(double t2, double x_max, double alpha) {
    if (!(t2 >= 0.0) || !std::isfinite(t2)) {
        throw InvalidArgument(fmt::format("t2 must be a finite non-negative duration, got {}", t2));
    }
    if (!(alpha > 0.0)) throw InvalidArgument(fmt::format("alpha must be positive, got {}", alpha));
    const double x_bar = 1.0 - (1.0 - x_max) * std::exp(alpha * t2);
    if (x_bar < 0.0) {
        throw InvalidArgument(
            fmt::format("t2={} too long: x_max={} is unreachable from any x_bar >= 0", t2, x_max));
    }
    return x_bar;
}

double budget(const ProblemInstance& instance, int m, double t1, double t2) {
    instance.validate();
    check_m(instance, m);
    if (!(t1 >= 0.0) || !(t2 >= 0.0)) {
        throw InfeasibleCombination("negative_time",
                                    fmt::format("t1={} t2={} must be >= 0", t1, t2));
    }
    const Family fam(instance);
    if (m > 0 && m * t1 > fam.w1 * (1.0 + kDomainEps) + kDomainEps) {
        throw InfeasibleCombination(
            "t1_exceeds_w1",
            fmt::format("m*t1={} exceeds the no-rest limit W1={}", m * t1, fam.w1));
    }
    const double xm = fam.x_m(m, t1);
    const double raw = 1.0 - (1.0 - instance.x_max) * std::exp(instance.alpha * t2);
    if (raw < instance.x_min - kDomainEps) {
        throw InfeasibleCombination(
            "x_bar_below_x_min", fmt::format("t2={} needs x_bar={} < x_min", t2, raw));
    }
    if (raw > xm + kDomainEps) {
        throw InfeasibleCombination(
            "x_bar_above_x_m", fmt::format("t2={} needs x_bar={} > x_m={}", t2, raw, xm));
    }
    return fam.budget_clamped(m, t1, xm, t2);
}

BudgetRoot solve_t2_for_budget(const ProblemInstance& instance, int m, double t1) {
    instance.validate();
    check_m(instance, m);
    const Family fam(instance);
    if (m > 0 && (!(t1 >= 0.0) || m * t1 > fam.w1 * (1.0 + kDomainEps) + kDomainEps)) {
        throw InfeasibleCombination(
            "t1_exceeds_w1", fmt::format("m*t1={} outside [0, W1={}]", m * t1, fam.w1));
    }
    return solve_t2(fam, m, t1);
}

Solution solve(const ProblemInstance& instance) {
    instance.validate();

    const GreedySchedule greedy = greedy_saturating_schedule(instance);
    if (greedy.total_duration <= instance.horizon) {
        Solution sol;
        sol.label = {CaseTag::Slack, 0, false};
        sol.schedule = greedy.schedule;
        sol.r1_tilde = greedy.schedule.tasks.front().rest;
        sol.t2_tilde = greedy.schedule.tasks.front().work;
        sol.r2_tilde = instance.n > 1 ? greedy.schedule.tasks[1].rest
                                      : rest_time_to_reach(instance.x_max, instance.x_min,
                                                           instance.alpha);
        finish(instance, sol);
        return sol;
    }

    const double x_end = work_transition(instance.x0, instance.horizon, instance.alpha);
    if (x_end < instance.x_max - kDomainEps) {
        Solution sol = equal_split(instance);
        finish(instance, sol);
        return sol;
    }

    const Family fam(instance);
    std::vector<Candidate> table;
    table.reserve(instance.n);
    int best = -1;
    for (int m = 0; m < instance.n; ++m) {
        table.push_back(best_for_m(fam, m));
        const Candidate& c = table.back();
        if (c.feasible && (best < 0 || c.objective > table[best].objective + kObjectiveTie)) {
            best = m;
        }
    }
    if (best < 0) {
        throw InternalError(fmt::format(
            "no feasible two-policy candidate for any m in [0, {}] (T={}, x0={})",
            instance.n - 1, instance.horizon, instance.x0));
    }

    Solution sol = assemble_structured(fam, table[best]);
    finish(instance, sol);

    // x(T) = x_max exactly is on the edge of the no-rest case; keep the better one.
    if (x_end <= instance.x_max + kDomainEps) {
        Solution split = equal_split(instance);
        finish(instance, split);
        if (split.objective > sol.objective + kObjectiveTie) {
            split.diagnostics.candidates = table;
            return split;
        }
    }
    sol.diagnostics.candidates = std::move(table);
    return sol;
}

CaseLabel classify_case(const ProblemInstance& instance) {
    instance.validate();
    if (greedy_saturating_schedule(instance).total_duration <= instance.horizon) {
        return {CaseTag::Slack, 0, false};
    }
    if (work_transition(instance.x0, instance.horizon, instance.alpha) <
        instance.x_max - kDomainEps) {
        return {CaseTag::NoRestEqualSplit, instance.n, false};
    }
    return solve(instance).label;
}

StationarityReport stationarity_from_values(const UtilityFunction& u, double t1, double t2,
                                            double x_m, double x_bar, double tol) {
    StationarityReport report;
    report.policy1_side = u.derivative(t1) * x_m;
    report.policy2_side = u.derivative(t2) * x_bar;
    const double scale = std::max(report.policy1_side, report.policy2_side);
    report.residual = scale > 0.0 ? std::abs(report.policy1_side - report.policy2_side) / scale
                                  : 0.0;
    report.verdict = report.residual <= tol ? Verdict::Pass : Verdict::Fail;
    return report;
}

StationarityReport verify_stationarity(const ProblemInstance& instance, const Solution& solution,
                                       double tol) {
    StationarityReport report;
    const auto& label = solution.label;
    if (label.tag != CaseTag::Structured) {
        report.reason = fmt::format("case {} has no interior two-policy optimum", to_string(label.tag));
        return report;
    }
    if (label.boundary) {
        report.reason = "boundary optimum: no-rest phase ends exactly at x_max";
        return report;
    }
    if (label.m < 1) {
        report.reason = "m = 0: no no-rest phase to trade time against";
        return report;
    }
    const FeasibilityReport walk = check_feasibility(instance, solution.schedule);
    const auto m = static_cast<std::size_t>(label.m);
    report = stationarity_from_values(instance.utility, solution.schedule.tasks[m - 1].work,
                                      solution.schedule.tasks[m].work, walk.tasks[m - 1].x,
                                      walk.tasks[m].x_bar, tol);
    return report;
}

OrderingPrediction lemma5_classify(const CaseLabel& label, int n, int m, double x_m,
                                   double x_bar) {
    if (label.tag != CaseTag::Structured) {
        throw InvalidArgument("t1/t2 ordering is only defined for Structured solutions");
    }
    OrderingPrediction out;
    if (label.boundary || n >= 2 * m) {
        out.predicted = Ordering::T1Greater;
        return out;
    }
    out.ratio_branch = true;
    out.lhs = m * (1.0 - x_m) / x_m;
    out.rhs = (n - m) * (1.0 - x_bar) / x_bar;
    if (std::abs(out.lhs - out.rhs) <= 1e-12) {
        out.predicted = Ordering::Equal;
    } else {
        out.predicted = out.lhs < out.rhs ? Ordering::T1Greater : Ordering::T1Less;
    }
    out.discrepancy = x_bar < x_m && out.predicted != Ordering::T1Greater;
    return out;
}

}  // namespace opsched
