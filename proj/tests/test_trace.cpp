#include "doctest.h"

#include <cmath>
#include <sstream>
#include <string>

#include "opsched/dynamics.hpp"
#include "opsched/errors.hpp"
#include "opsched/trace.hpp"

using namespace opsched;

namespace {
constexpr double kAlpha = 0.125;
}

TEST_CASE("empty schedule is one sample") {
    const auto tr = trace(0.6, kAlpha, Schedule{}, 0.1);
    REQUIRE(tr.samples.size() == 1);
    CHECK(tr.samples[0].time == 0.0);
    CHECK(tr.samples[0].x == 0.6);
    CHECK_FALSE(tr.samples[0].working);
    CHECK(tr.breakpoints.size() == 1);
}

TEST_CASE("no-rest equal split ends at 0.8332 and rises strictly") {
    Schedule s;
    s.tasks.assign(3, {0.0, 7.0 / 3.0});
    const auto tr = trace(0.6, kAlpha, s, 0.1);
    CHECK(std::abs(tr.samples.back().x - 0.8332) <= 1e-3);
    CHECK(tr.samples.back().time == doctest::Approx(7.0));
    for (std::size_t i = 1; i < tr.samples.size(); ++i) {
        CHECK(tr.samples[i].x > tr.samples[i - 1].x);
        CHECK(tr.samples[i].working);
    }
}

TEST_CASE("samples match the closed form and breakpoints are exact") {
    Schedule s{{{0.0, 2.0}, {0.75, 1.5}, {0.0, 0.0}, {2.0, 0.25}}};
    const auto tr = trace(0.55, kAlpha, s, 0.3);

    // t = 0 plus one per nonzero segment.
    CHECK(tr.breakpoints.size() == 1 + 5);

    // Independent piecewise evaluation.
    auto exact = [&](double time, bool& working) {
        double x = 0.55, clock = 0.0;
        for (const auto& seg : s.tasks) {
            if (time <= clock + seg.rest) {
                working = false;
                return x * std::exp(-kAlpha * (time - clock));
            }
            x *= std::exp(-kAlpha * seg.rest);
            clock += seg.rest;
            if (time <= clock + seg.work) {
                working = true;
                return 1.0 - (1.0 - x) * std::exp(-kAlpha * (time - clock));
            }
            x = 1.0 - (1.0 - x) * std::exp(-kAlpha * seg.work);
            clock += seg.work;
        }
        return x;
    };

    for (std::size_t i = 0; i < tr.samples.size(); ++i) {
        const auto& smp = tr.samples[i];
        if (i > 0) CHECK(smp.time > tr.samples[i - 1].time);
        if (smp.time == 0.0) continue;
        bool working = false;
        CHECK(std::abs(smp.x - exact(smp.time, working)) <= 1e-12);
        CHECK(smp.working == working);
    }
    for (double b : tr.breakpoints) {
        bool found = false;
        for (const auto& smp : tr.samples) found = found || smp.time == b;
        CHECK(found);
    }
    double x = 0.55;
    for (const auto& seg : s.tasks) x = rest_work_transition(x, seg.rest, seg.work, kAlpha);
    CHECK(std::abs(tr.samples.back().x - x) <= 1e-12);
}

TEST_CASE("dt larger than the horizon leaves only breakpoints") {
    Schedule s{{{1.0, 2.0}, {0.5, 0.5}}};
    const auto tr = trace(0.6, kAlpha, s, 100.0);
    CHECK(tr.samples.size() == tr.breakpoints.size());
}

TEST_CASE("instance overload checks the schedule length") {
    ProblemInstance inst;
    inst.n = 2;
    inst.horizon = 5.0;
    inst.alpha = kAlpha;
    inst.x_min = 0.4;
    inst.x_max = 0.85;
    inst.x0 = 0.6;
    CHECK_THROWS_AS(trace(inst, Schedule{{{0.0, 1.0}}}, 0.1), InvalidArgument);
    CHECK_THROWS_AS(trace(0.6, kAlpha, Schedule{}, 0.0), InvalidArgument);
    CHECK_THROWS_AS(trace(0.6, kAlpha, Schedule{}, -1.0), InvalidArgument);
}

TEST_CASE("csv export") {
    Schedule s{{{0.0, 1.0}}};
    std::ostringstream out;
    write_trace_csv(out, trace(0.5, kAlpha, s, 0.5));
    const std::string text = out.str();
    CHECK(text.rfind("time,x,working\n", 0) == 0);
    CHECK(text.find("\n0,0.5,1\n") != std::string::npos);
    CHECK(text.find("\n1,") != std::string::npos);
}
