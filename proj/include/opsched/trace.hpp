#pragma once

#include <iosfwd>
#include <vector>

#include "opsched/model.hpp"

namespace opsched {

struct TraceSample {
    double time = 0.0;
    double x = 0.0;
    bool working = false;
};

/// Sampled x(t) path of a schedule. `breakpoints` holds t = 0 plus the end
/// time of every nonzero rest/work segment; all of them also appear in
/// `samples`.
struct UtilizationTrace {
    std::vector<TraceSample> samples;
    std::vector<double> breakpoints;
};

/// Samples x(t) every `dt` and at every segment boundary. A sample's working
/// flag describes the segment (start, end] that contains it; the sample at
/// t = 0 takes the flag of the first nonzero segment.
UtilizationTrace trace(double x0, double alpha, const Schedule& schedule, double dt);

/// Same, after checking the schedule length against the instance.
UtilizationTrace trace(const ProblemInstance& instance, const Schedule& schedule, double dt);

/// CSV with header `time,x,working`, full double precision.
void write_trace_csv(std::ostream& out, const UtilizationTrace& trace);

}  // namespace opsched
