#pragma once

// Closed-form utilization-ratio dynamics.
//
// The ratio x(t) in [0, 1] follows dx/dt = alpha * (b(t) - x), with b = 1
// while working and b = 0 while resting, so every segment has an exact
// exponential solution. Nothing here integrates an ODE.

namespace opsched {

/// x after resting r from x: x * exp(-alpha r).
double rest_transition(double x, double r, double alpha);

/// x after working t from x_bar: 1 - exp(-alpha t) * (1 - x_bar).
double work_transition(double x_bar, double t, double alpha);

/// Rest r then work t, starting at x0.
double rest_work_transition(double x0, double r, double t, double alpha);

/// Work time that takes the ratio from x_from up to x_to.
/// Throws UnreachableTarget when x_to >= 1 and InvalidArgument when x_to < x_from.
double work_time_to_reach(double x_from, double x_to, double alpha);

/// Rest time that takes the ratio from x_from down to x_to.
/// Throws UnreachableTarget when x_to == 0 and InvalidArgument when x_to > x_from.
double rest_time_to_reach(double x_from, double x_to, double alpha);

}  // namespace opsched
