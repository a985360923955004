#pragma once

// Adaptive embedded Runge-Kutta (Dormand-Prince 5(4)) with per-step error
// control on the max norm. Works on any state supporting Eigen-style
// linear combinations; plain doubles are handled for scalar problems.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <utility>

#include "mtcav/errors.hpp"

namespace mtcav::ode {

inline double max_abs(double s) { return std::abs(s); }
inline double max_abs(const std::complex<double>& s) { return std::abs(s); }
template <class State>
double max_abs(const State& s) {
    return s.cwiseAbs().maxCoeff();
}

struct Options {
    double rtol = 1e-8;
    double atol = 1e-14;
    double max_step = std::numeric_limits<double>::infinity();
    long max_steps = 5'000'000;
};

struct StepUnderflow : SolverError {
    double t_reached;
    explicit StepUnderflow(double t)
        : SolverError("step size underflow at t = " + std::to_string(t)), t_reached(t) {}
};

namespace detail {
// Dormand-Prince coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// 5th-order minus embedded 4th-order weights.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
} // namespace detail

// Integrates y' = f(t, y) from t0 to t1. on_accept is called after every
// accepted step with (t, y, f(t, y)) so callers can monitor invariants or
// record the trajectory.
template <class State, class Rhs, class Observer>
State integrate(Rhs&& f, State y, double t0, double t1, const Options& opt,
                Observer&& on_accept) {
    using namespace detail;
    if (t1 < t0) throw ConfigError("ode::integrate: t1 < t0");
    if (t1 == t0) return y;

    double t = t0;
    State k1 = f(t, y);
    const double span = t1 - t0;
    double h = std::min({span / 100.0, opt.max_step, span});
    {
        const double fy = max_abs(k1);
        if (fy > 0.0) h = std::min(h, 0.1 * std::max(max_abs(y), opt.atol) / fy + 1e-12 * span);
        h = std::max(h, 1e-12 * span);
    }

    long steps = 0;
    while (t < t1) {
        const double remaining = t1 - t;
        if (remaining <= 4.0 * std::abs(t1) * std::numeric_limits<double>::epsilon())
            break; // end point reached to roundoff
        if (++steps > opt.max_steps)
            throw SolverError("ode::integrate: step budget exhausted at t = " + std::to_string(t));
        h = std::min(h, remaining);
        if (!(h > std::abs(t) * 1e-15 + 1e-300)) throw StepUnderflow(t);

        State k2 = f(t + c2 * h, y + h * (a21 * k1));
        State k3 = f(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
        State k4 = f(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        State k5 = f(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        State k6 = f(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        State y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        State k7 = f(t + h, y5);
        State err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        const double scale = opt.atol + opt.rtol * std::max(max_abs(y), max_abs(y5));
        const double ratio = max_abs(err) / scale;

        if (ratio <= 1.0) {
            t += h;
            y = std::move(y5);
            k1 = std::move(k7); // FSAL
            on_accept(t, y, k1);
            const double grow = (ratio > 0.0) ? 0.9 * std::pow(ratio, -0.2) : 5.0;
            h = std::min(h * std::clamp(grow, 0.2, 5.0), opt.max_step);
        } else {
            h *= std::clamp(0.9 * std::pow(ratio, -0.2), 0.1, 0.9);
        }
    }
    return y;
}

template <class State, class Rhs>
State integrate(Rhs&& f, State y, double t0, double t1, const Options& opt = {}) {
    return integrate(std::forward<Rhs>(f), std::move(y), t0, t1, opt,
                     [](double, const State&, const State&) {});
}

} // namespace mtcav::ode
