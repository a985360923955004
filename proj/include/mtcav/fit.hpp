#pragma once

// Small regression helpers shared by the fitting paths.

#include <cmath>
#include <cstddef>
#include <vector>

#include "mtcav/errors.hpp"

namespace mtcav {

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    std::size_t n = 0;
};

inline LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw ConfigError("linear_fit: need at least two matching samples");
    const auto n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw ConfigError("linear_fit: degenerate abscissae");
    LinearFit f;
    f.n = x.size();
    f.slope = (n * sxy - sx * sy) / denom;
    f.intercept = (sy - f.slope * sx) / n;
    if (x.size() > 2) {
        double ss = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double r = y[i] - (f.intercept + f.slope * x[i]);
            ss += r * r;
        }
        f.slope_stderr = std::sqrt(ss / (n - 2.0) * n / denom);
    }
    return f;
}

// Fits y = A exp(rate * t) on the samples with |y| above the floor.
inline LinearFit log_linear_fit(const std::vector<double>& t, const std::vector<double>& y,
                                double floor = 1e-8) {
    std::vector<double> ts, logs;
    for (std::size_t i = 0; i < t.size(); ++i)
        if (y[i] > floor) {
            ts.push_back(t[i]);
            logs.push_back(std::log(y[i]));
        }
    if (ts.size() < 2) throw SolverError("log_linear_fit: fewer than two samples above floor");
    return linear_fit(ts, logs);
}

// Vertex abscissa of the parabola through three (not necessarily uniform)
// points; falls back to the middle point when the data are flat.
inline double parabolic_vertex(double x0, double y0, double x1, double y1, double x2, double y2) {
    const double d0 = (y1 - y0) / (x1 - x0);
    const double d1 = (y2 - y1) / (x2 - x1);
    const double curv = (d1 - d0) / (x2 - x0);
    if (!(curv < 0.0)) return x1;
    return 0.5 * (x0 + x1) - d0 / (2.0 * curv);
}

} // namespace mtcav
