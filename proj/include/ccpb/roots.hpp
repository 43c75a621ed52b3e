#pragma once

// Scalar root-finding: bracketed Brent iteration plus a bracket-expansion
// helper.  The solvers search in log-transformed variables, so everything
// here works on plain doubles with caller-chosen meaning.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>

namespace ccpb::roots {

struct BracketError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Brent's method on [a,b] with f(a), f(b) of opposite sign.
// Returns the abscissa; |x - x*| <= xtol + a few ulps.
template <class F>
double brent(F&& f, double a, double b, double fa, double fb,
             double xtol = 1e-14, int max_iter = 200) {
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0))
        throw BracketError("brent: endpoints do not bracket a root");

    double c = a, fc = fa;
    double d = b - a, e = d;
    for (int it = 0; it < max_iter; ++it) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a; fc = fa; d = b - a; e = d;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = 2.0 * 1e-16 * std::abs(b) + 0.5 * xtol;
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) return b;

        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            // Inverse quadratic / secant step.
            const double s = fb / fa;
            double p, q;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qq = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q),
                                   std::abs(e * q))) {
                e = d; d = p / q;
            } else {
                d = xm; e = d;
            }
        } else {
            d = xm; e = d;
        }
        a = b; fa = fb;
        b += (std::abs(d) > tol1) ? d : std::copysign(tol1, xm);
        fb = f(b);
    }
    return b;
}

template <class F>
double brent(F&& f, double a, double b, double xtol = 1e-14,
             int max_iter = 200) {
    return brent(f, a, b, f(a), f(b), xtol, max_iter);
}

// Expand [lo,hi] around x0 until f changes sign, growing by `step` per
// side and clamping to [lo_min, hi_max].  Suited to monotone f.  Returns
// the bracket endpoints and their f values.
template <class F>
std::pair<std::pair<double, double>, std::pair<double, double>>
expand_bracket(F&& f, double x0, double step, double lo_min, double hi_max) {
    double lo = std::max(lo_min, x0 - step);
    double hi = std::min(hi_max, x0 + step);
    double flo = f(lo), fhi = f(hi);
    while ((flo > 0.0) == (fhi > 0.0)) {
        bool moved = false;
        if (lo > lo_min) {
            lo = std::max(lo_min, lo - step);
            flo = f(lo);
            moved = true;
            if ((flo > 0.0) != (fhi > 0.0)) break;
        }
        if (hi < hi_max) {
            hi = std::min(hi_max, hi + step);
            fhi = f(hi);
            moved = true;
        }
        if (!moved)
            throw BracketError("expand_bracket: no sign change in range");
    }
    return {{lo, hi}, {flo, fhi}};
}

}  // namespace ccpb::roots
