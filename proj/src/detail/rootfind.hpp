#pragma once

#include <cmath>
#include <utility>

namespace magbill::detail {

// Hybrid secant/bisection refinement of a bracketed sign change.  Keeps the
// bracket valid at every step and falls back to bisection whenever the secant
// step leaves it or stalls.
template <typename F>
double refine_root(F&& f, double a, double b, double fa, double fb, double tol) {
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    for (int it = 0; it < 200 && (b - a) > tol; ++it) {
        double m = 0.5 * (a + b);
        double x = m;
        double denom = fb - fa;
        if (denom != 0.0) {
            double s = a - fa * (b - a) / denom;
            if (s > a + 0.01 * (b - a) && s < b - 0.01 * (b - a)) x = s;
        }
        double fx = f(x);
        if (fx == 0.0) return x;
        if ((fa < 0.0) != (fx < 0.0)) {
            b = x;
            fb = fx;
        } else {
            a = x;
            fa = fx;
        }
    }
    return 0.5 * (a + b);
}

// Golden-section minimization on [a,b]; returns (argmin, min value).
template <typename F>
std::pair<double, double> golden_min(F&& f, double a, double b, double tol) {
    constexpr double inv_phi = 0.6180339887498949;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    double xm = 0.5 * (a + b);
    return {xm, f(xm)};
}

}  // namespace magbill::detail
