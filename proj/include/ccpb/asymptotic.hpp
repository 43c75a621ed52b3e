#pragma once

// Closed-form asymptotic solution of the CCPB problem.
//
// For boundary value V and domain size L (Debye units) the leading-order
// self-consistent parameters are
//
//     sqrt(alpha~) = sqrt(1 + B^2) - B,       B = 4 sinh^2(V/4) / L,
//     eps~         = 4 tanh(V/4) exp(-L sqrt(alpha~) / 2),
//
// and the explicit inverse profile x_approx(phi) follows by inserting
// (alpha~, eps~) into the matched approximation of the kernel integral.
// The a-priori error estimate E(V, L) = 2 tanh(V/4) exp(2 sinh^2(V/4) - L/2)
// quantifies when the closed form can be trusted.

#include <cmath>
#include <stdexcept>

#include "kernel.hpp"

namespace ccpb {

struct ProblemParams {
    double L;                  // domain size in Debye lengths, > 0
    double V;                  // half applied voltage, thermal units
    double stern_delta = 0.0;  // normalized Stern-layer width, >= 0
};

struct AsymptoticSolution {
    double alpha_tilde;      // in (0, 1]
    double eps_tilde;        // >= 0; 0 iff V = 0
    double V;                // signed, as given
    double L;
    double predicted_error;  // a-priori sup error of x_approx
    bool validity;           // false when predicted_error > 0.1

    double eta() const { return std::sqrt(eps_tilde); }
};

inline double alpha_tilde(double V, double L) {
    const double sh = std::sinh(0.25 * std::abs(V));
    const double B = 4.0 * sh * sh / L;
    // sqrt(1+B^2) - B in the cancellation-free form.
    const double sqrt_a = 1.0 / (std::hypot(1.0, B) + B);
    return sqrt_a * sqrt_a;
}

inline double eps_tilde(double V, double L) {
    const double sqrt_a = std::sqrt(alpha_tilde(V, L));
    return 4.0 * std::tanh(0.25 * std::abs(V)) * std::exp(-0.5 * L * sqrt_a);
}

// A-priori sup-norm estimate for |x_exact - x_approx|; decreasing in L,
// increasing in |V|.  Overflows to +inf for extreme V, which downstream
// comparisons treat correctly.
inline double predicted_error(double V, double L) {
    if (!(L > 0.0)) throw std::invalid_argument("predicted_error: L must be > 0");
    const double sh = std::sinh(0.25 * std::abs(V));
    return 2.0 * std::tanh(0.25 * std::abs(V)) *
           std::exp(2.0 * sh * sh - 0.5 * L);
}

inline AsymptoticSolution solve_asymptotic(const ProblemParams& params) {
    if (!(params.L > 0.0))
        throw std::invalid_argument("solve_asymptotic: L must be > 0");
    if (params.stern_delta != 0.0)
        throw std::invalid_argument(
            "solve_asymptotic: Stern layers are handled by solve_stern");
    AsymptoticSolution out;
    out.alpha_tilde = alpha_tilde(params.V, params.L);
    out.eps_tilde = eps_tilde(params.V, params.L);
    out.V = params.V;
    out.L = params.L;
    out.predicted_error = predicted_error(params.V, params.L);
    out.validity = out.predicted_error <= 0.1;
    return out;
}

// Explicit approximate inverse profile x_approx(phi), odd-extended in phi.
// Branch switch at phi = sqrt(eps~); the jump there is O(eps~).
inline double x_approx(double phi, const AsymptoticSolution& asym) {
    const double Va = std::abs(asym.V);
    const double pa = std::abs(phi);
    if (pa > Va * (1.0 + 1e-12))
        throw std::domain_error("x_approx: |phi| exceeds |V|");
    if (asym.V < 0.0) phi = -phi;  // odd map onto the positive-V problem
    if (phi == 0.0) return 0.0;

    const double e = asym.eps_tilde;
    const double sqrt_a = std::sqrt(asym.alpha_tilde);
    const double p = std::min(pa, Va);
    double val;
    if (p <= std::sqrt(e))
        val = std::asinh(p / (2.0 * e)) / sqrt_a;
    else
        val = (std::log(4.0 / e) + std::log(std::tanh(0.25 * p))) / sqrt_a;
    return phi > 0.0 ? val : -val;
}

}  // namespace ccpb
