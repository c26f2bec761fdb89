#include "opsched/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <fmt/core.h>

#include "opsched/dynamics.hpp"
#include "opsched/errors.hpp"

namespace opsched {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Variables are laid out as v[2i] = r_i, v[2i+1] = t_i.
Schedule to_schedule(const std::vector<double>& v) {
    Schedule s;
    s.tasks.reserve(v.size() / 2);
    for (std::size_t i = 0; i + 1 < v.size(); i += 2) s.tasks.push_back({v[i], v[i + 1]});
    return s;
}

// Longest final work from x_bar that respects both x_max and the horizon;
// negative when the time is already overspent. With u nondecreasing this is
// always the best choice for the last work coordinate.
double longest_final_work(const ProblemInstance& inst, double x_bar, double used) {
    const double to_cap = x_bar >= inst.x_max
                              ? 0.0
                              : (std::log1p(-x_bar) - std::log1p(-inst.x_max)) / inst.alpha;
    return std::min(inst.horizon - used, to_cap);
}

// Allocation-free feasibility walk; the instance is validated once up front.
// The free variables are every coordinate except the last work time, which
// `complete` fills with longest_final_work.
class Evaluator {
public:
    Evaluator(const ProblemInstance& inst, double tol) : inst_(inst), tol_(tol) {}

    bool complete(std::vector<double>& v) {
        ++evals_;
        double x = inst_.x0;
        double used = 0.0;
        const std::size_t last = v.size() - 1;
        for (std::size_t i = 0; i < last; i += 2) {
            if (v[i] < 0.0) return false;
            used += v[i];
            x *= std::exp(-inst_.alpha * v[i]);
            if (x < inst_.x_min - tol_) return false;
            if (i + 1 == last) break;
            if (v[i + 1] < 0.0) return false;
            used += v[i + 1];
            const double decay = std::exp(-inst_.alpha * v[i + 1]);
            x = x * decay + (1.0 - decay);
            if (x > inst_.x_max + tol_) return false;
        }
        const double t_last = longest_final_work(inst_, x, used);
        if (t_last < -tol_) return false;
        v[last] = std::max(0.0, t_last);
        return true;
    }

    double objective(const std::vector<double>& v) const {
        double sum = 0.0;
        for (std::size_t i = 1; i < v.size(); i += 2) sum += inst_.utility.eval(v[i]);
        return sum;
    }

    std::int64_t evals() const { return evals_; }

private:
    const ProblemInstance& inst_;
    double tol_;
    std::int64_t evals_ = 0;
};

// Depth-first enumeration of a tensor grid over every coordinate but the last
// work time, with monotone pruning: along any rest (work) coordinate x_bar (x)
// moves one way and time only grows, so the first violation ends that loop.
struct GridSearch {
    const ProblemInstance& inst;
    double tol;
    std::vector<std::vector<double>> axes;
    std::vector<double> current;
    std::vector<double> best;
    double best_objective = kNegInf;
    std::int64_t visited = 0;

    void run() {
        current.assign(axes.size() + 1, 0.0);
        descend(0, inst.x0, 0.0, 0.0);
    }

    void descend(std::size_t depth, double x, double used, double objective) {
        if (depth == axes.size()) {
            ++visited;
            const double t_last = longest_final_work(inst, x, used);
            if (t_last < -tol) return;
            current[depth] = std::max(0.0, t_last);
            objective += inst.utility.eval(current[depth]);
            if (objective > best_objective) {
                best_objective = objective;
                best = current;
            }
            return;
        }
        const bool is_rest = depth % 2 == 0;
        // Largest admissible value at this depth: the point where the ratio
        // or the horizon constraint becomes active. It is visited in addition
        // to the grid so that optima on a constraint face are reachable.
        double edge = inst.horizon - used;
        if (is_rest) {
            if (x > inst.x_min) edge = std::min(edge, std::log(x / inst.x_min) / inst.alpha);
            else edge = std::min(edge, 0.0);
        } else {
            edge = std::min(edge, longest_final_work(inst, x, used));
        }
        edge = std::max(edge, 0.0);
        std::vector<double> extras{edge};
        if (depth + 1 == axes.size() && is_rest) {
            // Last rest: where the horizon and the x_max cap bound the final
            // work equally. The gap below is decreasing in the rest time.
            auto gap = [&](double r) {
                return inst.horizon - used - r -
                       longest_final_work(inst, x * std::exp(-inst.alpha * r), 0.0);
            };
            if (gap(0.0) > 0.0 && gap(edge) < 0.0) {
                double lo = 0.0;
                double hi = edge;
                for (int it = 0; it < 100 && hi - lo > 1e-15 * edge; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    (gap(mid) > 0.0 ? lo : hi) = mid;
                }
                extras.insert(extras.begin(), lo);
            }
        }
        std::size_t next_extra = 0;
        for (double value : axes[depth]) {
            while (next_extra < extras.size() && value >= extras[next_extra]) {
                if (value > extras[next_extra]) {
                    visit(depth, is_rest, extras[next_extra], x, used, objective);
                }
                ++next_extra;
            }
            if (!visit(depth, is_rest, value, x, used, objective)) return;
        }
        for (; next_extra < extras.size(); ++next_extra) {
            visit(depth, is_rest, extras[next_extra], x, used, objective);
        }
    }

    bool visit(std::size_t depth, bool is_rest, double value, double x, double used,
               double objective) {
        const double next_used = used + value;
        if (next_used > inst.horizon + tol) return false;
        double next_x;
        if (is_rest) {
            next_x = x * std::exp(-inst.alpha * value);
            if (next_x < inst.x_min - tol) return false;
        } else {
            const double decay = std::exp(-inst.alpha * value);
            next_x = x * decay + (1.0 - decay);
            if (next_x > inst.x_max + tol) return false;
            objective += inst.utility.eval(value);
        }
        current[depth] = value;
        descend(depth + 1, next_x, next_used, objective);
        return true;
    }
};

std::vector<double> uniform_axis(double step, double limit) {
    std::vector<double> axis;
    for (long k = 0;; ++k) {
        const double value = static_cast<double>(k) * step;
        if (value > limit * (1.0 + 1e-12)) break;
        axis.push_back(std::min(value, limit));
    }
    return axis;
}

std::vector<double> local_axis(double center, double step, int half_width) {
    std::vector<double> axis;
    for (int k = -half_width; k <= half_width; ++k) {
        const double value = center + k * step;
        if (value >= 0.0) axis.push_back(value);
    }
    return axis;
}

Solution finalize(const ProblemInstance& inst, std::vector<double> v, double tol) {
    Solution sol;
    sol.schedule = to_schedule(v);
    sol.objective = total_utility(sol.schedule, inst.utility);
    sol.label = infer_case_label(inst, sol.schedule, tol);
    sol.diagnostics.budget_residual = inst.horizon - sol.schedule.total_time();
    return sol;
}

}  // namespace

void OracleConfig::validate() const {
    if (grid_resolution && !(*grid_resolution > 0.0)) {
        throw InvalidArgument(fmt::format("grid resolution must be > 0, got {}", *grid_resolution));
    }
    if (refinement_rounds < 0) throw InvalidArgument("refinement rounds must be >= 0");
    if (starts < 1) throw InvalidArgument("oracle needs at least one start");
    if (max_evals < 1) throw InvalidArgument("oracle needs max_evals >= 1");
    if (!(feasibility_tol >= 0.0)) throw InvalidArgument("feasibility tolerance must be >= 0");
}

double OracleConfig::step_for(const ProblemInstance& instance) const {
    if (grid_resolution) return *grid_resolution;
    return instance.horizon > 0.0 ? instance.horizon / 60.0 : 1.0;
}

OracleRun grid_oracle(const ProblemInstance& instance, const OracleConfig& config) {
    instance.validate();
    config.validate();
    if (instance.n > 2) {
        throw UnsupportedSize(fmt::format(
            "grid oracle handles N <= 2 (got N={}); use coordinate_ascent for larger N",
            instance.n));
    }

    double step = config.step_for(instance);
    GridSearch search{instance, config.feasibility_tol, {}, {}, {}, kNegInf, 0};
    const std::vector<double> axis = uniform_axis(step, instance.horizon);
    search.axes.assign(2 * instance.n - 1, axis);
    search.run();

    // Each round shrinks the step 5x. Within a round the local grid is
    // re-centred until the incumbent stops moving: near a corner of the
    // feasible set the optimum can sit several coarse steps away along the
    // thin feasible wedge.
    for (int round = 0; round < config.refinement_rounds; ++round) {
        const double fine = step / 5.0;
        for (int recentre = 0; recentre < 1000; ++recentre) {
            const std::vector<double> incumbent = search.best;
            for (std::size_t k = 0; k < search.axes.size(); ++k) {
                search.axes[k] = local_axis(incumbent[k], fine, 5);
            }
            search.run();
            if (search.best == incumbent) break;
        }
        step = fine;
    }

    OracleRun run;
    run.evaluations = search.visited;
    if (search.best.empty()) {
        throw InternalError("grid oracle found no feasible point (the all-zero schedule is always feasible)");
    }
    run.solution = finalize(instance, search.best, std::max(config.feasibility_tol, 1e-6));
    return run;
}

OracleRun coordinate_ascent(const ProblemInstance& instance, const OracleConfig& config) {
    instance.validate();
    config.validate();
    if (instance.n > 8) {
        throw UnsupportedSize(
            fmt::format("coordinate ascent handles N <= 8 (got N={})", instance.n));
    }

    // Search over every coordinate except the last work time.
    const std::size_t full = 2 * static_cast<std::size_t>(instance.n);
    const std::size_t dim = full - 1;
    const double horizon = instance.horizon;
    Evaluator eval(instance, config.feasibility_tol);
    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    // Fixed direction set: +-e_k and every pairwise transfer e_i - e_j.
    std::vector<std::vector<double>> fixed_dirs;
    for (std::size_t k = 0; k < dim; ++k) {
        for (double sign : {1.0, -1.0}) {
            std::vector<double> d(dim, 0.0);
            d[k] = sign;
            fixed_dirs.push_back(std::move(d));
        }
    }
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            if (i == j) continue;
            std::vector<double> d(dim, 0.0);
            d[i] = 1.0;
            d[j] = -1.0;
            fixed_dirs.push_back(std::move(d));
        }
    }

    bool exhausted = false;
    auto out_of_budget = [&] {
        if (eval.evals() >= config.max_evals) exhausted = true;
        return exhausted;
    };

    // Line search along d from v; returns the gain (0 if no move). The
    // completed objective need not be concave along a line, so a coarse
    // scan picks the bracket before golden-section refinement.
    std::vector<double> trial(full);
    auto at = [&](const std::vector<double>& v, const std::vector<double>& d, double s) {
        for (std::size_t k = 0; k < dim; ++k) trial[k] = std::max(0.0, v[k] + s * d[k]);
        return eval.complete(trial);
    };
    auto value = [&](const std::vector<double>& v, const std::vector<double>& d, double s) {
        return at(v, d, s) ? eval.objective(trial) : kNegInf;
    };
    auto line_search = [&](std::vector<double>& v, double& f, const std::vector<double>& d) {
        double s_cap = 2.0 * std::max(horizon, 1e-12);
        for (std::size_t k = 0; k < dim; ++k) {
            if (d[k] < 0.0) s_cap = std::min(s_cap, v[k] / -d[k]);
        }
        if (!(s_cap > 0.0)) return 0.0;
        double s_max = s_cap;
        if (!at(v, d, s_cap)) {
            double lo = 0.0;
            double hi = s_cap;
            for (int it = 0; it < 60 && hi - lo > 1e-15 * s_cap; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (at(v, d, mid)) lo = mid; else hi = mid;
            }
            s_max = lo;
        }
        if (!(s_max > 0.0)) return 0.0;

        constexpr int kScan = 16;
        int k_best = 0;
        double f_scan = f;
        for (int k = 1; k <= kScan; ++k) {
            const double fk = value(v, d, s_max * k / kScan);
            if (fk > f_scan) {
                f_scan = fk;
                k_best = k;
            }
        }
        constexpr double inv_phi = 0.6180339887498948482;
        double a = s_max * std::max(0, k_best - 1) / kScan;
        double b = s_max * std::min(kScan, k_best + 1) / kScan;
        double c = b - inv_phi * (b - a);
        double e = a + inv_phi * (b - a);
        double fc = value(v, d, c);
        double fe = value(v, d, e);
        while (b - a > 1e-13 * std::max(1.0, s_max)) {
            if (fc >= fe) {
                b = e; e = c; fe = fc;
                c = b - inv_phi * (b - a);
                fc = value(v, d, c);
            } else {
                a = c; c = e; fc = fe;
                e = a + inv_phi * (b - a);
                fe = value(v, d, e);
            }
        }
        double s_best = 0.5 * (a + b);
        double f_best = value(v, d, s_best);
        if (f_scan > f_best) {
            s_best = s_max * k_best / kScan;
            f_best = f_scan;
        }
        if (f_best <= f + 1e-15 || !at(v, d, s_best)) return 0.0;
        const double gain = f_best - f;
        std::copy(trial.begin(), trial.begin() + static_cast<std::ptrdiff_t>(dim), v.begin());
        f = f_best;
        return gain;
    };

    auto completed = [&](const std::vector<double>& v) {
        std::vector<double> w(v);
        w.push_back(0.0);
        if (!eval.complete(w)) throw InternalError("coordinate ascent left the feasible set");
        return w;
    };

    std::vector<double> best_v = completed(std::vector<double>(dim, 0.0));
    double best_f = eval.objective(best_v);

    for (int start = 0; start < config.starts && !out_of_budget(); ++start) {
        std::vector<double> v(dim, 0.0);
        std::vector<double> probe(full);
        auto feasible = [&](const std::vector<double>& u) {
            std::copy(u.begin(), u.end(), probe.begin());
            return eval.complete(probe);
        };
        if (start > 0) {
            const double share = horizon / instance.n;
            for (std::size_t k = 0; k < dim; ++k) {
                v[k] = unit(rng) * share * (k % 2 == 0 ? 1.0 : 2.0);
            }
            for (int halving = 0; halving < 64 && !feasible(v); ++halving) {
                for (double& x : v) x *= 0.5;
            }
            if (!feasible(v)) std::fill(v.begin(), v.end(), 0.0);
        }
        double f = eval.objective(completed(v));

        std::vector<double> rand_dir(dim);
        for (int sweep = 0; sweep < 100000 && !out_of_budget(); ++sweep) {
            double gain = 0.0;
            for (const auto& d : fixed_dirs) {
                gain += line_search(v, f, d);
                if (out_of_budget()) break;
            }
            for (std::size_t r = 0; r < dim && !exhausted; ++r) {
                double norm = 0.0;
                for (double& x : rand_dir) {
                    x = gauss(rng);
                    norm += x * x;
                }
                norm = std::sqrt(norm);
                for (double& x : rand_dir) x /= norm;
                gain += line_search(v, f, rand_dir);
                out_of_budget();
            }
            if (gain < 1e-13) break;
        }
        if (f > best_f) {
            best_f = f;
            best_v = completed(v);
        }
    }

    OracleRun run;
    run.evaluations = eval.evals();
    run.budget_exhausted = exhausted;
    run.solution = finalize(instance, best_v, std::max(config.feasibility_tol, 1e-6));
    return run;
}

CaseLabel infer_case_label(const ProblemInstance& instance, const Schedule& schedule, double tol) {
    const FeasibilityReport walk = check_feasibility(instance, schedule, tol);
    const double used = walk.budget_used;
    bool saturated = true;
    for (const auto& rec : walk.tasks) {
        saturated = saturated && std::abs(rec.x_bar - instance.x_min) <= tol &&
                    std::abs(rec.x - instance.x_max) <= tol;
    }
    if (used < instance.horizon - tol && saturated) return {CaseTag::Slack, 0, false};

    const bool no_rest = std::all_of(schedule.tasks.begin(), schedule.tasks.end(),
                                     [tol](const TaskSegment& s) { return s.rest <= tol; });
    if (no_rest && walk.terminal_ratio(instance.x0) < instance.x_max - tol) {
        return {CaseTag::NoRestEqualSplit, instance.n, false};
    }

    int m = 0;
    while (m < instance.n && schedule.tasks[m].rest <= tol &&
           walk.tasks[m].x < instance.x_max - tol) {
        ++m;
    }
    // A further no-rest task that lands on x_max closes the no-rest phase exactly.
    bool boundary = false;
    if (m < instance.n && schedule.tasks[m].rest <= tol) {
        ++m;
        boundary = true;
    }
    m = std::min(m, instance.n - 1);
    return {CaseTag::Structured, m, boundary};
}

LemmaChecks check_lemma_properties(const ProblemInstance& instance, const Schedule& schedule,
                                   double tol) {
    const FeasibilityReport walk = check_feasibility(instance, schedule, tol);
    const auto& tasks = schedule.tasks;
    LemmaChecks out;

    if (walk.budget_used < instance.horizon - tol) {
        for (const auto& rec : walk.tasks) {
            if (std::abs(rec.x_bar - instance.x_min) > tol ||
                std::abs(rec.x - instance.x_max) > tol) {
                out.slack_saturates = false;
            }
        }
    }

    if (std::abs(walk.budget_used - instance.horizon) <= tol &&
        walk.terminal_ratio(instance.x0) < instance.x_max - tol) {
        for (const auto& seg : tasks) {
            if (seg.rest > tol || std::abs(seg.work - tasks.front().work) > tol) {
                out.unsaturated_no_rest = false;
            }
        }
    }

    for (std::size_t i = 0; i < tasks.size(); ++i) {
        if (tasks[i].rest > tol && std::abs(walk.tasks[i].x - instance.x_max) > tol) {
            out.rest_implies_x_max = false;
        }
    }

    std::size_t first_hit = tasks.size();
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        if (walk.tasks[i].x >= instance.x_max - tol) {
            first_hit = i;
            break;
        }
    }
    for (std::size_t i = first_hit + 1; i < tasks.size(); ++i) {
        if (std::abs(tasks[i].work - tasks[first_hit + 1].work) > tol) {
            out.equal_after_x_max = false;
        }
    }
    return out;
}

std::string_view to_string(CompareVerdict verdict) {
    switch (verdict) {
        case CompareVerdict::Match: return "match";
        case CompareVerdict::ADominates: return "a-dominates";
        case CompareVerdict::BDominates: return "b-dominates";
    }
    return "unknown";
}

ComparisonReport compare(const ProblemInstance& instance, const Solution& a, const Solution& b,
                         double tol) {
    if (!(tol >= 0.0)) throw InvalidArgument("comparison tolerance must be >= 0");
    ComparisonReport report;
    report.objective_gap_abs = a.objective - b.objective;
    const double scale = std::max({std::abs(a.objective), std::abs(b.objective), 1e-300});
    report.objective_gap_rel = std::abs(report.objective_gap_abs) / scale;
    if (a.objective == b.objective) report.objective_gap_rel = 0.0;

    const std::size_t n = std::max(a.schedule.size(), b.schedule.size());
    for (std::size_t i = 0; i < n; ++i) {
        const TaskSegment sa = i < a.schedule.size() ? a.schedule.tasks[i] : TaskSegment{};
        const TaskSegment sb = i < b.schedule.size() ? b.schedule.tasks[i] : TaskSegment{};
        report.schedule_linf = std::max(
            {report.schedule_linf, std::abs(sa.rest - sb.rest), std::abs(sa.work - sb.work)});
    }

    const LemmaChecks la = check_lemma_properties(instance, a.schedule, tol);
    const LemmaChecks lb = check_lemma_properties(instance, b.schedule, tol);
    report.lemma_checks = {
        {"slack_saturates", la.slack_saturates, lb.slack_saturates},
        {"unsaturated_no_rest", la.unsaturated_no_rest, lb.unsaturated_no_rest},
        {"rest_implies_x_max", la.rest_implies_x_max, lb.rest_implies_x_max},
        {"equal_after_x_max", la.equal_after_x_max, lb.equal_after_x_max},
    };

    if (std::abs(report.objective_gap_abs) <= tol) {
        report.verdict = CompareVerdict::Match;
    } else {
        report.verdict =
            report.objective_gap_abs > 0.0 ? CompareVerdict::ADominates : CompareVerdict::BDominates;
    }
    return report;
}

}  // namespace opsched
