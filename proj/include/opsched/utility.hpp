#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>

namespace opsched {

enum class UtilityFamily {
    LogOnePlus,      ///< u(t) = ln(1 + t)
    ExpSaturation,   ///< u(t) = 1 - exp(-a t)
    RateDistortion,  ///< u(t) = a / (1 + b / t), u(0) = 0
    Custom,          ///< user-supplied callables; not serializable
};

std::string_view to_string(UtilityFamily family);
UtilityFamily utility_family_from_string(std::string_view name);

/// A concave, nondecreasing per-task utility u(t) together with its derivative.
///
/// Value type. The three built-in families are closed-form; `custom` is the
/// extension point for other concave families and is what the validation
/// tests use for negative controls.
class UtilityFunction {
public:
    using Fn = std::function<double(double)>;

    static UtilityFunction log_one_plus();
    static UtilityFunction exp_saturation(double a);
    static UtilityFunction rate_distortion(double a, double b);
    static UtilityFunction custom(std::string name, Fn value, Fn derivative);

    UtilityFamily family() const noexcept { return family_; }
    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }
    const std::string& name() const;

    /// u(t). Throws InvalidArgument for t < 0.
    double eval(double t) const;

    /// u'(t). Throws SingularDerivative for rate_distortion at t = 0.
    double derivative(double t) const;

    bool operator==(const UtilityFunction& other) const;

private:
    struct CustomImpl {
        std::string name;
        Fn value;
        Fn derivative;
    };

    UtilityFunction(UtilityFamily family, double a, double b)
        : family_(family), a_(a), b_(b) {}

    UtilityFamily family_ = UtilityFamily::LogOnePlus;
    double a_ = 0.0;
    double b_ = 0.0;
    std::shared_ptr<const CustomImpl> custom_;
};

struct UtilityValidationReport {
    bool monotone = true;
    bool concave = true;
    double min_derivative = 0.0;         ///< smallest u'(t) seen on the grid
    double max_second_difference = 0.0;  ///< largest u(t-h) - 2u(t) + u(t+h)
    double worst_monotone_at = 0.0;
    double worst_concave_at = 0.0;

    bool passed() const noexcept { return monotone && concave; }
};

inline constexpr double kConcavityTolerance = 1e-9;

/// Checks u' >= 0 and second differences <= 1e-9 on a uniform grid over
/// [0, t_max] with `grid_points` nodes. Failures are reported, not thrown.
UtilityValidationReport validate(const UtilityFunction& u, double t_max, int grid_points);

}  // namespace opsched
