#pragma once

// Bracketed one-dimensional minimization: golden-section steps with
// parabolic interpolation (Brent). Derivative free.

#include <cmath>
#include <limits>
#include <utility>

namespace rabi {

struct ScalarMinimum {
    double x = 0.0;
    double fx = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Minimizes f on [lo, hi] to an absolute tolerance `tol` in x.
/// A minimum on the boundary is returned as such (within tol of the end).
template <class F>
ScalarMinimum brent_minimize(F&& f, double lo, double hi, double tol, int max_iter = 500) {
    constexpr double kGolden = 0.3819660112501051;  // (3 - sqrt(5)) / 2
    const double eps = std::sqrt(std::numeric_limits<double>::epsilon());

    double a = lo;
    double b = hi;
    double x = a + kGolden * (b - a);
    double w = x;
    double v = x;
    double fx = f(x);
    double fw = fx;
    double fv = fx;
    double d = 0.0;
    double e = 0.0;

    ScalarMinimum out;
    for (int iter = 1; iter <= max_iter; ++iter) {
        const double mid = 0.5 * (a + b);
        const double tol1 = eps * std::abs(x) + tol / 3.0;
        const double tol2 = 2.0 * tol1;
        out.iterations = iter;
        if (std::abs(x - mid) <= tol2 - 0.5 * (b - a)) {
            out.converged = true;
            break;
        }

        bool golden = true;
        if (std::abs(e) > tol1) {
            // Parabola through (v, fv), (w, fw), (x, fx).
            double r = (x - w) * (fx - fv);
            double q = (x - v) * (fx - fw);
            double p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) p = -p;
            q = std::abs(q);
            const double e_prev = e;
            e = d;
            if (std::abs(p) < std::abs(0.5 * q * e_prev) && p > q * (a - x) && p < q * (b - x)) {
                d = p / q;
                const double u = x + d;
                if (u - a < tol2 || b - u < tol2) {
                    d = (x < mid) ? tol1 : -tol1;
                }
                golden = false;
            }
        }
        if (golden) {
            e = (x < mid) ? b - x : a - x;
            d = kGolden * e;
        }

        const double u = (std::abs(d) >= tol1) ? x + d : x + (d > 0.0 ? tol1 : -tol1);
        const double fu = f(u);

        if (fu <= fx) {
            if (u < x) b = x; else a = x;
            v = w; fv = fw;
            w = x; fw = fx;
            x = u; fx = fu;
        } else {
            if (u < x) a = u; else b = u;
            if (fu <= fw || w == x) {
                v = w; fv = fw;
                w = u; fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u; fv = fu;
            }
        }
    }
    out.x = x;
    out.fx = fx;
    return out;
}

}  // namespace rabi
