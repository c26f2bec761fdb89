#include "opsched/trace.hpp"

#include <cmath>
#include <ostream>

#include <fmt/core.h>
#include <fmt/ostream.h>

#include "opsched/dynamics.hpp"
#include "opsched/errors.hpp"

namespace opsched {
namespace {

struct Piece {
    double start;
    double end;
    double x_start;
    bool working;
};

double piece_ratio(const Piece& p, double time, double alpha) {
    const double elapsed = std::min(time, p.end) - p.start;
    return p.working ? work_transition(p.x_start, elapsed, alpha)
                     : rest_transition(p.x_start, elapsed, alpha);
}

}  // namespace

UtilizationTrace trace(double x0, double alpha, const Schedule& schedule, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw InvalidArgument(fmt::format("trace step must be positive, got {}", dt));
    }

    std::vector<Piece> pieces;
    double clock = 0.0;
    double x = x0;
    for (const auto& seg : schedule.tasks) {
        if (seg.rest > 0.0) {
            pieces.push_back({clock, clock + seg.rest, x, false});
            x = rest_transition(x, seg.rest, alpha);
            clock += seg.rest;
        }
        if (seg.work > 0.0) {
            pieces.push_back({clock, clock + seg.work, x, true});
            x = work_transition(x, seg.work, alpha);
            clock += seg.work;
        }
    }

    UtilizationTrace out;
    out.breakpoints.push_back(0.0);
    for (const auto& p : pieces) out.breakpoints.push_back(p.end);

    const bool first_working = !pieces.empty() && pieces.front().working;
    out.samples.push_back({0.0, x0, first_working});

    // Merge the dt grid with the breakpoints; grid points closer than this to a
    // breakpoint are dropped so times stay strictly increasing.
    const double merge_eps = 1e-12 * std::max(1.0, clock);
    std::size_t grid_k = 1;
    for (const auto& p : pieces) {
        for (;; ++grid_k) {
            const double t = static_cast<double>(grid_k) * dt;
            if (t >= p.end - merge_eps) break;
            if (t <= out.samples.back().time + merge_eps) continue;
            out.samples.push_back({t, piece_ratio(p, t, alpha), p.working});
        }
        out.samples.push_back({p.end, piece_ratio(p, p.end, alpha), p.working});
    }
    if (!pieces.empty()) {
        // Exact terminal state from the iterated transitions, not the last piece.
        out.samples.back().x = x;
    }
    return out;
}

UtilizationTrace trace(const ProblemInstance& instance, const Schedule& schedule, double dt) {
    instance.validate();
    if (schedule.size() != static_cast<std::size_t>(instance.n)) {
        throw InvalidArgument(fmt::format("schedule has {} tasks, instance expects {}",
                                          schedule.size(), instance.n));
    }
    return trace(instance.x0, instance.alpha, schedule, dt);
}

void write_trace_csv(std::ostream& out, const UtilizationTrace& trace) {
    fmt::print(out, "time,x,working\n");
    for (const auto& s : trace.samples) {
        fmt::print(out, "{},{},{}\n", s.time, s.x, s.working ? 1 : 0);
    }
}

}  // namespace opsched
