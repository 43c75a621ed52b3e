#pragma once

// Kernel integrals.
//
// The central object is the singular integral
//
//     I(phi; eps) = int_0^phi dx / sqrt(sinh^2(x/2) + eps^2),
//
// evaluated exactly by adaptive quadrature after the substitution
// s = sinh(x/2), which turns the integrand into
// 2 / (sqrt(1+s^2) * sqrt(s^2 + eps^2)) and removes the near-origin
// stiffness, plus the matched-asymptotic approximations of I and their
// error model.  For eps far below the upper limit the initial segments
// are seeded geometrically from the eps scale upward so the adaptive
// refinement starts resolved.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "quadrature.hpp"

namespace ccpb {

// Small parameter eps = phi_x(0) / (2 sqrt(alpha)).  Strictly positive for
// exact-integral use; zero only where a formula's limit is well defined.
struct Eps {
    double value;
};

struct IntegralResult {
    double value;
    double estimated_error;
    std::int64_t evaluations;
};

enum class ApproxVariant {
    Crude,    // matching point eta = eps^(3/4)
    Refined,  // matching point eta = sqrt(eps)
};

inline constexpr std::int64_t default_eval_budget = 1'000'000;

// Largest phi for which sinh(phi/2) stays inside double range.
inline constexpr double max_phi = 1400.0;

// Asymptotic formulas carry an O(eps) error; past this the expansion is
// meaningless and callers get a validity flag instead of an error.
inline constexpr double approx_validity_limit = 0.1;

inline bool approx_valid(Eps eps) { return eps.value <= approx_validity_limit; }

inline double matching_eta(Eps eps, ApproxVariant variant) {
    return variant == ApproxVariant::Crude ? std::pow(eps.value, 0.75)
                                           : std::sqrt(eps.value);
}

// Integrand of I in the original variable: 1/sqrt(sinh^2(x/2) + eps^2).
inline double kernel(double x, Eps eps) {
    if (x < 0.0) throw std::invalid_argument("kernel: x must be >= 0");
    if (eps.value == 0.0 && x == 0.0)
        throw std::domain_error("kernel: singular at x = 0 when eps = 0");
    return 1.0 / std::hypot(std::sinh(0.5 * x), eps.value);
}

namespace detail {

// Breakpoints for the s-space integral over [0, S]: geometric seeding from
// the eps scale so each initial segment sees at most one decade-ish of
// integrand variation.
inline std::vector<double> seed_breaks(double S, double eps) {
    std::vector<double> breaks{0.0};
    if (eps < 0.25 * S) {
        for (double b = eps; b < 0.25 * S; b *= 8.0) breaks.push_back(b);
    }
    breaks.push_back(S);
    return breaks;
}

}  // namespace detail

// Exact evaluation of I(phi; eps) to absolute tolerance tol.
inline IntegralResult I_exact(double phi, Eps eps, double tol,
                              std::int64_t budget = default_eval_budget) {
    if (phi < 0.0) throw std::invalid_argument("I_exact: phi must be >= 0");
    if (!(eps.value > 0.0))
        throw std::invalid_argument("I_exact: eps must be > 0");
    if (!(tol > 0.0)) throw std::invalid_argument("I_exact: tol must be > 0");
    if (phi > max_phi)
        throw std::invalid_argument("I_exact: phi too large for sinh range");
    if (phi == 0.0) return {0.0, 0.0, 0};

    const double S = std::sinh(0.5 * phi);
    const double e = eps.value;
    auto g = [e](double s) {
        return 2.0 / (std::sqrt(1.0 + s * s) * std::hypot(s, e));
    };
    auto r = quad::integrate_seeded(g, detail::seed_breaks(S, e), tol, budget);
    if (!r.converged)
        throw std::runtime_error("I_exact: quadrature budget exhausted");
    return {r.value, r.estimated_error, r.evaluations};
}

// Matched-asymptotic approximation of I.  Inner branch below the matching
// point, outer branch above it.  The outer arccoth(e^(phi/2)) term is
// evaluated as -(1/2) log(tanh(phi/4)), which stays finite where the
// naive exponential form overflows.
inline double I_approx(double phi, Eps eps, ApproxVariant variant) {
    if (phi < 0.0) throw std::invalid_argument("I_approx: phi must be >= 0");
    if (!(eps.value > 0.0))
        throw std::invalid_argument("I_approx: eps must be > 0");
    if (phi == 0.0) return 0.0;

    const double e = eps.value;
    if (phi <= matching_eta(eps, variant)) return 2.0 * std::asinh(phi / (2.0 * e));
    return 2.0 * std::log(4.0 / e) + 2.0 * std::log(std::tanh(0.25 * phi));
}

// Pointwise scale of the refined-approximation error.  Used as a scale,
// not a certified bound.
inline double refined_error_model(double phi, Eps eps) {
    if (!(eps.value > 0.0))
        throw std::invalid_argument("refined_error_model: eps must be > 0");
    const double e = eps.value;
    if (phi <= std::sqrt(e)) return phi * phi / 24.0;
    const double sh = std::sinh(0.5 * phi);
    return 0.5 * e * e * std::cosh(0.5 * phi) / (sh * sh);
}

}  // namespace ccpb
