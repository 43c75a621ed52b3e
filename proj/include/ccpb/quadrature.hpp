#pragma once

// Adaptive Gauss-Kronrod (G7/K15) quadrature.
//
// The integrator keeps a worst-first queue of segments and bisects the one
// with the largest error estimate until the summed estimate meets the
// requested absolute tolerance or the evaluation budget runs out.  Callers
// integrating functions with a known interior scale can seed the initial
// segment list so the subdivision does not have to discover it by itself.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <vector>

namespace ccpb::quad {

struct Result {
    double value = 0.0;
    double estimated_error = 0.0;
    std::int64_t evaluations = 0;
    bool converged = false;
};

namespace detail {

// 15-point Kronrod nodes on [0,1] (positive half; node 7 is the center)
// and the matching weights.  The embedded 7-point Gauss rule uses the
// odd-indexed nodes.
inline constexpr double xk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0};
inline constexpr double wk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
inline constexpr double wg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

struct Segment {
    double a, b;
    double value;
    double error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

// One K15/G7 evaluation over [a,b].  Error estimate follows the usual
// QUADPACK rescaling of |K15-G7| against the deviation integral, which
// avoids both over- and under-confidence on rough integrands.
template <class F>
Segment eval_segment(F&& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);

    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * xk[i]);
        fv[14 - i] = f(c + h * xk[i]);
    }
    fv[7] = f(c);

    double resk = wk[7] * fv[7];
    double resg = wg[3] * fv[7];
    for (int i = 0; i < 7; ++i) {
        resk += wk[i] * (fv[i] + fv[14 - i]);
        if (i % 2 == 1) resg += wg[i / 2] * (fv[i] + fv[14 - i]);
    }
    resk *= h;
    resg *= h;

    const double mean = resk / (b - a);
    double resasc = wk[7] * std::abs(fv[7] - mean);
    for (int i = 0; i < 7; ++i)
        resasc += wk[i] * (std::abs(fv[i] - mean) + std::abs(fv[14 - i] - mean));
    resasc *= h;

    double err = std::abs(resk - resg);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    return {a, b, resk, err};
}

}  // namespace detail

// Integrate f over consecutive segments given by `breaks` (ascending,
// at least two entries) to absolute tolerance `tol`.
template <class F>
Result integrate_seeded(F&& f, const std::vector<double>& breaks, double tol,
                        std::int64_t budget = 1'000'000) {
    Result out;
    std::priority_queue<detail::Segment> heap;
    double total = 0.0, total_err = 0.0;

    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        if (breaks[i] == breaks[i + 1]) continue;
        auto seg = detail::eval_segment(f, breaks[i], breaks[i + 1]);
        out.evaluations += 15;
        total += seg.value;
        total_err += seg.error;
        heap.push(seg);
    }

    while (total_err > tol && !heap.empty() && out.evaluations + 30 <= budget) {
        auto worst = heap.top();
        // Stop splitting once the interval degenerates at machine precision.
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) break;
        heap.pop();
        total -= worst.value;
        total_err -= worst.error;
        auto left = detail::eval_segment(f, worst.a, mid);
        auto right = detail::eval_segment(f, mid, worst.b);
        out.evaluations += 30;
        total += left.value + right.value;
        total_err += left.error + right.error;
        heap.push(left);
        heap.push(right);
    }

    out.value = total;
    out.estimated_error = total_err;
    out.converged = total_err <= tol;
    return out;
}

template <class F>
Result integrate(F&& f, double a, double b, double tol,
                 std::int64_t budget = 1'000'000) {
    return integrate_seeded(f, std::vector<double>{a, b}, tol, budget);
}

}  // namespace ccpb::quad
