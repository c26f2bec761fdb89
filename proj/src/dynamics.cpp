#include "opsched/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

#include "opsched/errors.hpp"

namespace opsched {
namespace {

void check_alpha(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw InvalidArgument(fmt::format("alpha must be positive and finite, got {}", alpha));
    }
}

void check_ratio(const char* name, double x) {
    if (!(x >= 0.0 && x <= 1.0)) {
        throw InvalidArgument(fmt::format("{} must lie in [0, 1], got {}", name, x));
    }
}

void check_duration(const char* name, double d) {
    if (!(d >= 0.0) || !std::isfinite(d)) {
        throw InvalidArgument(fmt::format("{} must be a finite non-negative duration, got {}", name, d));
    }
}

}  // namespace

double rest_transition(double x, double r, double alpha) {
    check_ratio("x", x);
    check_duration("rest", r);
    check_alpha(alpha);
    return x * std::exp(-alpha * r);
}

double work_transition(double x_bar, double t, double alpha) {
    check_ratio("x_bar", x_bar);
    check_duration("work", t);
    check_alpha(alpha);
    // 1 - e^{-at}(1 - x) written via expm1 keeps precision for short segments.
    const double decay = std::exp(-alpha * t);
    return std::min(1.0, x_bar * decay - std::expm1(-alpha * t));
}

double rest_work_transition(double x0, double r, double t, double alpha) {
    return work_transition(rest_transition(x0, r, alpha), t, alpha);
}

double work_time_to_reach(double x_from, double x_to, double alpha) {
    check_ratio("x_from", x_from);
    check_ratio("x_to", x_to);
    check_alpha(alpha);
    if (x_to >= 1.0) {
        throw UnreachableTarget(fmt::format("working never reaches x = {}", x_to));
    }
    if (x_to < x_from) {
        throw InvalidArgument(
            fmt::format("work cannot lower the ratio from {} to {}", x_from, x_to));
    }
    return std::log1p(-x_from) / alpha - std::log1p(-x_to) / alpha;
}

double rest_time_to_reach(double x_from, double x_to, double alpha) {
    check_ratio("x_from", x_from);
    check_ratio("x_to", x_to);
    check_alpha(alpha);
    if (x_to <= 0.0) {
        throw UnreachableTarget("resting never reaches x = 0");
    }
    if (x_to > x_from) {
        throw InvalidArgument(
            fmt::format("rest cannot raise the ratio from {} to {}", x_from, x_to));
    }
    return std::log(x_from / x_to) / alpha;
}

}  // namespace opsched
