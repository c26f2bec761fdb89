#include "opsched/utility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/core.h>

#include "opsched/errors.hpp"

namespace opsched {

std::string_view to_string(UtilityFamily family) {
    switch (family) {
        case UtilityFamily::LogOnePlus: return "log_one_plus";
        case UtilityFamily::ExpSaturation: return "exp_saturation";
        case UtilityFamily::RateDistortion: return "rate_distortion";
        case UtilityFamily::Custom: return "custom";
    }
    return "unknown";
}

UtilityFamily utility_family_from_string(std::string_view name) {
    if (name == "log_one_plus") return UtilityFamily::LogOnePlus;
    if (name == "exp_saturation") return UtilityFamily::ExpSaturation;
    if (name == "rate_distortion") return UtilityFamily::RateDistortion;
    throw InvalidArgument(fmt::format("unknown utility family '{}'", name));
}

UtilityFunction UtilityFunction::log_one_plus() {
    return UtilityFunction(UtilityFamily::LogOnePlus, 0.0, 0.0);
}

UtilityFunction UtilityFunction::exp_saturation(double a) {
    if (!(a > 0.0) || !std::isfinite(a)) {
        throw InvalidArgument(fmt::format("exp_saturation needs a > 0, got {}", a));
    }
    return UtilityFunction(UtilityFamily::ExpSaturation, a, 0.0);
}

UtilityFunction UtilityFunction::rate_distortion(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
        throw InvalidArgument(fmt::format("rate_distortion needs a, b > 0, got a={} b={}", a, b));
    }
    return UtilityFunction(UtilityFamily::RateDistortion, a, b);
}

UtilityFunction UtilityFunction::custom(std::string name, Fn value, Fn derivative) {
    if (!value || !derivative) {
        throw InvalidArgument("custom utility needs both a value and a derivative");
    }
    UtilityFunction u(UtilityFamily::Custom, 0.0, 0.0);
    u.custom_ = std::make_shared<const CustomImpl>(
        CustomImpl{std::move(name), std::move(value), std::move(derivative)});
    return u;
}

const std::string& UtilityFunction::name() const {
    static const std::string names[] = {"log_one_plus", "exp_saturation", "rate_distortion"};
    if (family_ == UtilityFamily::Custom) return custom_->name;
    return names[static_cast<int>(family_)];
}

double UtilityFunction::eval(double t) const {
    if (!(t >= 0.0)) {
        throw InvalidArgument(fmt::format("utility evaluated at negative time {}", t));
    }
    switch (family_) {
        case UtilityFamily::LogOnePlus: return std::log1p(t);
        case UtilityFamily::ExpSaturation: return -std::expm1(-a_ * t);
        case UtilityFamily::RateDistortion:
            // a t / (t + b) is the same curve and is continuous at 0.
            return a_ * t / (t + b_);
        case UtilityFamily::Custom: return custom_->value(t);
    }
    return 0.0;
}

double UtilityFunction::derivative(double t) const {
    if (!(t >= 0.0)) {
        throw InvalidArgument(fmt::format("utility derivative at negative time {}", t));
    }
    switch (family_) {
        case UtilityFamily::LogOnePlus: return 1.0 / (1.0 + t);
        case UtilityFamily::ExpSaturation: return a_ * std::exp(-a_ * t);
        case UtilityFamily::RateDistortion: {
            if (t == 0.0) {
                throw SingularDerivative("rate_distortion derivative is singular at t = 0");
            }
            const double denom = t + b_;
            return a_ * b_ / (denom * denom);
        }
        case UtilityFamily::Custom: return custom_->derivative(t);
    }
    return 0.0;
}

bool UtilityFunction::operator==(const UtilityFunction& other) const {
    if (family_ != other.family_) return false;
    if (family_ == UtilityFamily::Custom) return custom_ == other.custom_;
    return a_ == other.a_ && b_ == other.b_;
}

UtilityValidationReport validate(const UtilityFunction& u, double t_max, int grid_points) {
    if (!(t_max > 0.0) || grid_points < 3) {
        throw InvalidArgument(
            fmt::format("validation grid needs t_max > 0 and >= 3 points, got {} / {}", t_max,
                        grid_points));
    }
    UtilityValidationReport report;
    report.min_derivative = std::numeric_limits<double>::infinity();
    report.max_second_difference = -std::numeric_limits<double>::infinity();

    const double h = t_max / (grid_points - 1);
    for (int k = 0; k < grid_points; ++k) {
        const double t = k * h;
        double slope = 0.0;
        try {
            slope = u.derivative(t);
        } catch (const SingularDerivative&) {
            // u' -> +inf at the origin; monotone there by continuity.
            continue;
        }
        if (slope < report.min_derivative) {
            report.min_derivative = slope;
            report.worst_monotone_at = t;
        }
    }
    for (int k = 1; k + 1 < grid_points; ++k) {
        const double t = k * h;
        const double second = u.eval(t - h) - 2.0 * u.eval(t) + u.eval(t + h);
        if (second > report.max_second_difference) {
            report.max_second_difference = second;
            report.worst_concave_at = t;
        }
    }
    report.monotone = report.min_derivative >= 0.0;
    report.concave = report.max_second_difference <= kConcavityTolerance;
    return report;
}

}  // namespace opsched
