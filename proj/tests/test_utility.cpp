#include "doctest.h"

#include <cmath>
#include <vector>

#include "opsched/errors.hpp"
#include "opsched/utility.hpp"

using namespace opsched;

namespace {

double central_difference(const UtilityFunction& u, double t, double h = 1e-6) {
    return (u.eval(t + h) - u.eval(t - h)) / (2.0 * h);
}

std::vector<UtilityFunction> families() {
    return {UtilityFunction::log_one_plus(), UtilityFunction::exp_saturation(0.5),
            UtilityFunction::exp_saturation(2.0), UtilityFunction::rate_distortion(1.0, 1.0),
            UtilityFunction::rate_distortion(3.0, 0.25)};
}

}  // namespace

TEST_CASE("eval") {
    CHECK(UtilityFunction::log_one_plus().eval(0.0) == 0.0);
    CHECK(UtilityFunction::exp_saturation(1.0).eval(std::log(2.0)) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(UtilityFunction::rate_distortion(1.0, 1.0).eval(1.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(UtilityFunction::rate_distortion(1.0, 1.0).eval(0.0) == 0.0);
    CHECK(UtilityFunction::exp_saturation(1.0).eval(0.0) == 0.0);

    CHECK_THROWS_AS(UtilityFunction::log_one_plus().eval(-0.1), InvalidArgument);
}

TEST_CASE("derivative") {
    CHECK(UtilityFunction::log_one_plus().derivative(0.0) == 1.0);
    CHECK(UtilityFunction::log_one_plus().derivative(2.4013) == doctest::Approx(0.294005).epsilon(1e-6));
    CHECK(UtilityFunction::exp_saturation(2.0).derivative(0.0) == 2.0);
    CHECK_THROWS_AS(UtilityFunction::rate_distortion(1.0, 1.0).derivative(0.0), SingularDerivative);
}

TEST_CASE("derivative agrees with central differences on the validation grid") {
    for (const auto& u : families()) {
        CAPTURE(u.name());
        for (int k = 1; k <= 100; ++k) {
            const double t = 0.1 * k;
            const double fd = central_difference(u, t);
            // Relative 1e-6, floored by the ~1e-10 roundoff of an h = 1e-6 difference.
            CHECK(std::abs(u.derivative(t) - fd) <= 1e-6 * std::abs(u.derivative(t)) + 1e-9);
        }
    }
}

TEST_CASE("eval is nondecreasing") {
    for (const auto& u : families()) {
        for (int k = 0; k < 200; ++k) CHECK(u.eval(0.05 * (k + 1)) >= u.eval(0.05 * k));
    }
}

TEST_CASE("bad parameters are rejected") {
    CHECK_THROWS_AS(UtilityFunction::exp_saturation(0.0), InvalidArgument);
    CHECK_THROWS_AS(UtilityFunction::rate_distortion(1.0, -1.0), InvalidArgument);
    CHECK_THROWS_AS(utility_family_from_string("sigmoid"), InvalidArgument);
}

TEST_CASE("validate") {
    CHECK(validate(UtilityFunction::log_one_plus(), 10.0, 101).passed());
    CHECK(validate(UtilityFunction::exp_saturation(0.5), 20.0, 101).passed());
    CHECK(validate(UtilityFunction::rate_distortion(1.0, 2.0), 10.0, 101).passed());

    SUBCASE("convex negative control") {
        const auto convex = UtilityFunction::custom(
            "square", [](double t) { return t * t; }, [](double t) { return 2.0 * t; });
        const auto report = validate(convex, 10.0, 101);
        CHECK(report.monotone);
        CHECK_FALSE(report.concave);
        CHECK_FALSE(report.passed());
    }
    SUBCASE("decreasing negative control") {
        const auto falling = UtilityFunction::custom(
            "falling", [](double t) { return -t; }, [](double) { return -1.0; });
        CHECK_FALSE(validate(falling, 5.0, 11).monotone);
    }

    CHECK_THROWS_AS(validate(UtilityFunction::log_one_plus(), 0.0, 10), InvalidArgument);
    CHECK_THROWS_AS(validate(UtilityFunction::log_one_plus(), 1.0, 2), InvalidArgument);
}
