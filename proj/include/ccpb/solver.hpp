#pragma once

// Self-consistent CCPB solves via the inverse-integral formulation.
//
// The steady state is fixed by two relations in (eps, alpha):
//
//     x(phi) = I(phi; eps) / (2 sqrt(alpha)),     x(V) = L/2,
//     sqrt(alpha) = L / J(V; eps),
//     J(V; eps) = int_0^V cosh(phi) / sqrt(sinh^2(phi/2) + eps^2) dphi,
//
// which collapse to one scalar equation g(eps) = I(V;eps) - L^2/J(V;eps).
// g falls monotonically from +inf to -inf, so a bracketed Brent search in
// log(eps), initialized at the closed-form eps~, is both fast and immune
// to the underflow that plain Newton hits when eps ~ exp(-L/2) spans
// hundreds of decades.
//
// Negative V maps onto the positive problem by oddness; V = 0 returns the
// trivial solution explicitly.  The Stern variant couples the same scalar
// equation with the Robin condition phi_s + delta phi_x(L/2) = V.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "asymptotic.hpp"
#include "kernel.hpp"
#include "roots.hpp"

namespace ccpb {

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CCPBSolution {
    double eps;           // kernel regularization at the root (0 only if V=0)
    double alpha;         // normalized bulk concentration, (0, 1]
    double phi_x0;        // signed center slope, = sign * 2 sqrt(alpha) eps
    double phi_boundary;  // signed potential at x = L/2 (= V when delta = 0)
    double V;             // as requested (signed)
    double L;
    double stern_delta;
    double residual;      // scalar-equation residual at acceptance
    // Sample table of the canonical |V| problem: (phi, x) pairs, strictly
    // increasing in both coordinates, from (0, 0) to (phi_b, ~L/2).
    std::vector<std::array<double, 2>> samples;

    double sign() const { return V < 0.0 ? -1.0 : 1.0; }
};

namespace detail {

inline double J_integrand(double s, double e) {
    return 2.0 * (1.0 + 2.0 * s * s) /
           (std::sqrt(1.0 + s * s) * std::hypot(s, e));
}

}  // namespace detail

// Denominator integral J(V; eps) of the alpha relation, evaluated with the
// same s = sinh(phi/2) substitution and geometric seeding as I_exact.
inline double J_integral(double V, Eps eps, double tol,
                         std::int64_t budget = default_eval_budget) {
    if (!(V > 0.0)) throw std::invalid_argument("J_integral: V must be > 0");
    if (!(eps.value > 0.0))
        throw std::invalid_argument("J_integral: eps must be > 0");
    if (V > max_phi)
        throw std::invalid_argument("J_integral: V too large for sinh range");
    const double S = std::sinh(0.5 * V);
    const double e = eps.value;
    auto g = [e](double s) { return detail::J_integrand(s, e); };
    auto r = quad::integrate_seeded(g, detail::seed_breaks(S, e), tol, budget);
    if (!r.converged)
        throw SolverError("J_integral: quadrature budget exhausted");
    return r.value;
}

// alpha as a function of eps at fixed (V, L); returns alpha itself.
inline double alpha_of_eps(double V, double L, Eps eps, double tol) {
    const double Va = std::abs(V);
    if (!(Va > 0.0)) throw std::invalid_argument("alpha_of_eps: V must be nonzero");
    if (!(L > 0.0)) throw std::invalid_argument("alpha_of_eps: L must be > 0");
    // J is evaluated to absolute tolerance tol (floored at 1e-14).
    const double J = J_integral(Va, eps, std::max(tol, 1e-14));
    const double sqrt_a = L / J;
    return sqrt_a * sqrt_a;
}

namespace detail {

struct ScalarSolve {
    double eps;
    double alpha;
    double residual;
};

// Solve g(eps) = I(Vb; eps) - L^2 / J(Vb; eps) = 0 for the positive
// boundary value Vb, searching in log(eps) over [1e-300, 10].
inline ScalarSolve solve_scalar(double Vb, double L, double tol) {
    const double quad_tol = std::min(1e-11, 0.1 * tol) * std::max(1.0, L);
    auto g = [&](double le) {
        const Eps e{std::exp(le)};
        const double I = I_exact(Vb, e, quad_tol).value;
        const double J = J_integral(Vb, e, quad_tol);
        return I - L * L / J;
    };

    const double le_min = std::log(1e-300);
    const double le_max = std::log(10.0);
    double le0 = std::log(std::max(eps_tilde(Vb, L), 1e-290));
    le0 = std::clamp(le0, le_min + 1.0, le_max - 1.0);

    double le_root;
    try {
        auto [bracket, values] =
            roots::expand_bracket(g, le0, 1.0, le_min, le_max);
        le_root = roots::brent(g, bracket.first, bracket.second, values.first,
                               values.second, 1e-13);
    } catch (const roots::BracketError&) {
        throw SolverError("solve_exact: no bracket for eps in [1e-300, 10]");
    }

    ScalarSolve out;
    out.eps = std::exp(le_root);
    const double J = J_integral(Vb, Eps{out.eps}, quad_tol);
    const double sqrt_a = L / J;
    out.alpha = sqrt_a * sqrt_a;
    out.residual = std::abs(I_exact(Vb, Eps{out.eps}, quad_tol).value -
                            L * sqrt_a);
    return out;
}

// Monotone (phi, x) table for the canonical positive problem: nodes
// geometric below the matching scale sqrt(eps), uniform above, cumulative
// segment quadrature in s-space so x is increasing by construction.
inline std::vector<std::array<double, 2>> build_samples(
    double phi_b, double L, double eps, double alpha, int n_nodes) {
    std::vector<double> phis;
    phis.reserve(static_cast<std::size_t>(n_nodes) + 2);

    const double eta = std::sqrt(eps);
    const double p_lo = std::max(1e-3 * eps, 1e-280);
    if (eta < 0.45 * phi_b && p_lo < 0.5 * eta) {
        const int n_in = n_nodes / 2;
        const int n_out = n_nodes - n_in;
        const double ratio = std::pow(eta / p_lo, 1.0 / (n_in - 1));
        double p = p_lo;
        for (int i = 0; i < n_in; ++i, p *= ratio) phis.push_back(std::min(p, eta));
        for (int i = 1; i <= n_out; ++i)
            phis.push_back(eta + (phi_b - eta) * i / n_out);
    } else {
        for (int i = 1; i <= n_nodes; ++i)
            phis.push_back(phi_b * i / n_nodes);
    }
    phis.erase(std::unique(phis.begin(), phis.end()), phis.end());
    phis.back() = phi_b;

    const double inv_2sa = 0.5 / std::sqrt(alpha);
    const double seg_tol = 1e-13 * std::max(1.0, L) / static_cast<double>(n_nodes);
    auto g = [eps](double s) {
        return 2.0 / (std::sqrt(1.0 + s * s) * std::hypot(s, eps));
    };

    std::vector<std::array<double, 2>> table;
    table.reserve(phis.size() + 1);
    table.push_back({0.0, 0.0});
    double s_prev = 0.0, x = 0.0;
    for (double phi : phis) {
        const double s = std::sinh(0.5 * phi);
        x += inv_2sa *
             quad::integrate(g, s_prev, s, seg_tol, 100'000).value;
        table.push_back({phi, x});
        s_prev = s;
    }
    return table;
}

inline CCPBSolution trivial_solution(const ProblemParams& p) {
    CCPBSolution sol;
    sol.eps = 0.0;
    sol.alpha = 1.0;
    sol.phi_x0 = 0.0;
    sol.phi_boundary = 0.0;
    sol.V = 0.0;
    sol.L = p.L;
    sol.stern_delta = p.stern_delta;
    sol.residual = 0.0;
    sol.samples = {{0.0, 0.0}, {0.0, 0.5 * p.L}};  // degenerate flat profile
    return sol;
}

}  // namespace detail

// Exact self-consistent solve for the Dirichlet problem (stern_delta = 0).
inline CCPBSolution solve_exact(const ProblemParams& params, double tol = 1e-10,
                                int n_samples = 400) {
    if (!(params.L > 0.0)) throw std::invalid_argument("solve_exact: L must be > 0");
    if (params.stern_delta != 0.0)
        throw std::invalid_argument("solve_exact: use solve_stern for delta > 0");
    if (params.V == 0.0) return detail::trivial_solution(params);

    const double Vb = std::abs(params.V);
    auto scalar = detail::solve_scalar(Vb, params.L, tol);

    CCPBSolution sol;
    sol.eps = scalar.eps;
    sol.alpha = scalar.alpha;
    sol.V = params.V;
    sol.L = params.L;
    sol.stern_delta = 0.0;
    sol.phi_boundary = params.V;
    sol.phi_x0 = sol.sign() * 2.0 * std::sqrt(sol.alpha) * sol.eps;
    sol.residual = scalar.residual;
    sol.samples =
        detail::build_samples(Vb, params.L, sol.eps, sol.alpha, n_samples);
    return sol;
}

namespace detail {

// Coupled Stern system in u = (log eps, phi_s):
//   F1 = I(phi_s; eps) - L^2 / J(phi_s; eps)
//   F2 = phi_s + delta * 2 sqrt(alpha) sqrt(sinh^2(phi_s/2) + eps^2) - V
struct SternSystem {
    double L, Vb, delta, quad_tol;

    std::array<double, 2> operator()(double le, double phi_s) const {
        const Eps e{std::exp(le)};
        const double I = I_exact(phi_s, e, quad_tol).value;
        const double J = J_integral(phi_s, e, quad_tol);
        const double sqrt_a = L / J;
        const double slope =
            2.0 * sqrt_a * std::hypot(std::sinh(0.5 * phi_s), e.value);
        return {I - L * L / J, phi_s + delta * slope - Vb};
    }
};

// Damped Newton with a finite-difference Jacobian.  Returns true on
// convergence; (le, phi_s) are updated in place.
inline bool stern_newton(const SternSystem& sys, double& le, double& phi_s,
                         double f_tol) {
    auto norm = [&](const std::array<double, 2>& F) {
        const double a = F[0] / std::max(1.0, sys.L);
        const double b = F[1] / std::max(1.0, sys.Vb);
        return std::sqrt(a * a + b * b);
    };
    auto F = sys(le, phi_s);
    for (int it = 0; it < 40; ++it) {
        if (std::abs(F[0]) <= f_tol * std::max(1.0, sys.L) &&
            std::abs(F[1]) <= f_tol * std::max(1.0, sys.Vb))
            return true;
        const double dle = 1e-7 * std::max(1.0, std::abs(le));
        const double dps = 1e-7 * std::max(1e-3, phi_s);
        auto Fl = sys(le + dle, phi_s);
        auto Fp = sys(le, phi_s + dps);
        const double j11 = (Fl[0] - F[0]) / dle, j12 = (Fp[0] - F[0]) / dps;
        const double j21 = (Fl[1] - F[1]) / dle, j22 = (Fp[1] - F[1]) / dps;
        const double det = j11 * j22 - j12 * j21;
        if (det == 0.0 || !std::isfinite(det)) return false;
        const double step_le = (-F[0] * j22 + F[1] * j12) / det;
        const double step_ps = (-j11 * F[1] + j21 * F[0]) / det;

        const double n0 = norm(F);
        double lambda = 1.0;
        for (int bt = 0; bt < 30; ++bt) {
            const double le_t = le + lambda * step_le;
            const double ps_t = phi_s + lambda * step_ps;
            if (ps_t > 0.0 && ps_t <= sys.Vb * (1.0 + 1e-12) &&
                le_t > std::log(1e-300) && le_t < std::log(10.0)) {
                auto Ft = sys(le_t, std::min(ps_t, sys.Vb));
                if (norm(Ft) < n0 * (1.0 - 1e-4 * lambda)) {
                    le = le_t;
                    phi_s = std::min(ps_t, sys.Vb);
                    F = Ft;
                    break;
                }
            }
            lambda *= 0.5;
            if (bt == 29) return false;
        }
    }
    return false;
}

}  // namespace detail

// Stern-layer solve: unknowns (eps, phi_s) coupled through the scalar CCPB
// equation with boundary value phi_s and the Robin condition
// phi_s + 2 delta sqrt(alpha) sqrt(sinh^2(phi_s/2) + eps^2) = V.
// Primary path: damped Newton on (log eps, phi_s) from the closed-form
// initial guess.  Fallback: outer Brent on phi_s with the scalar solve
// nested inside, which is slower but only needs monotonicity.
inline CCPBSolution solve_stern(const ProblemParams& params, double tol = 1e-10,
                                int n_samples = 400) {
    if (!(params.L > 0.0)) throw std::invalid_argument("solve_stern: L must be > 0");
    if (!(params.stern_delta >= 0.0))
        throw std::invalid_argument("solve_stern: delta must be >= 0");
    if (params.V == 0.0) return detail::trivial_solution(params);
    if (params.stern_delta == 0.0) return solve_exact(params, tol, n_samples);

    const double Vb = std::abs(params.V);
    const double L = params.L;
    const double delta = params.stern_delta;

    // Initial guess: drop the eps contribution to the boundary slope and
    // use the closed-form alpha~ at candidate boundary values.
    auto init_gap = [&](double t) {
        return t + 4.0 * delta * std::sqrt(alpha_tilde(t, L)) *
                       std::sinh(0.5 * t) - Vb;
    };
    double phi_s = roots::brent(init_gap, Vb * 1e-6, Vb, 1e-10 * Vb);
    double le = std::log(std::clamp(eps_tilde(phi_s, L), 1e-290, 9.0));

    const double quad_tol = std::min(1e-11, 0.1 * tol) * std::max(1.0, L);
    detail::SternSystem sys{L, Vb, delta, quad_tol};
    if (!detail::stern_newton(sys, le, phi_s, std::max(tol, 1e-12))) {
        // Nested fallback: the Robin gap is monotone in phi_s (a larger
        // boundary value only steepens the profile).
        auto robin_gap = [&](double t) {
            auto s = detail::solve_scalar(t, L, tol);
            const double slope = 2.0 * std::sqrt(s.alpha) *
                                 std::hypot(std::sinh(0.5 * t), s.eps);
            return t + delta * slope - Vb;
        };
        try {
            phi_s = roots::brent(robin_gap, Vb * 1e-8, Vb,
                                 1e-13 * std::max(1.0, Vb));
        } catch (const roots::BracketError&) {
            throw SolverError("solve_stern: Robin condition failed to bracket");
        }
    }

    auto scalar = detail::solve_scalar(phi_s, L, tol);
    CCPBSolution sol;
    sol.eps = scalar.eps;
    sol.alpha = scalar.alpha;
    sol.V = params.V;
    sol.L = L;
    sol.stern_delta = delta;
    sol.phi_boundary = sol.sign() * phi_s;
    sol.phi_x0 = sol.sign() * 2.0 * std::sqrt(sol.alpha) * sol.eps;
    const double slope =
        2.0 * std::sqrt(sol.alpha) * std::hypot(std::sinh(0.5 * phi_s), sol.eps);
    sol.residual =
        std::max(scalar.residual, std::abs(phi_s + delta * slope - Vb));
    sol.samples =
        detail::build_samples(phi_s, L, sol.eps, sol.alpha, n_samples);
    return sol;
}

// Boltzmann concentrations at a point: p = alpha e^{-phi}, n = alpha e^{phi}.
struct Concentrations {
    double p;
    double n;
};

inline Concentrations concentrations(double phi, double alpha) {
    if (!(alpha > 0.0))
        throw std::invalid_argument("concentrations: alpha must be > 0");
    return {alpha * std::exp(-phi), alpha * std::exp(phi)};
}

// Classical half-space (infinite domain) profile anchored at the right
// boundary: x(phi) = L/2 - log(tanh(V/4) / tanh(phi/4)).  phi -> 0 drifts
// to -infinity; the signed infinity is returned rather than thrown.
inline double gouy_chapman_x(double phi, double V, double L) {
    if (V == 0.0) throw std::invalid_argument("gouy_chapman_x: V must be nonzero");
    if (phi == 0.0) return -std::numeric_limits<double>::infinity();
    if ((phi > 0.0) != (V > 0.0))
        throw std::domain_error("gouy_chapman_x: sign(phi) must match sign(V)");
    const double pa = std::abs(phi), Va = std::abs(V);
    if (pa > Va * (1.0 + 1e-12))
        throw std::domain_error("gouy_chapman_x: |phi| exceeds |V|");
    return 0.5 * L -
           std::log(std::tanh(0.25 * Va) / std::tanh(0.25 * std::min(pa, Va)));
}

// Quadrature-exact x(phi) for a computed solution, odd-extended.
inline double x_of_phi(double phi, const CCPBSolution& sol, double tol = 1e-12) {
    if (sol.V == 0.0) return 0.0;
    const double canonical = phi * sol.sign();  // phi of the |V| problem
    const double pa = std::abs(canonical);
    const double pb = std::abs(sol.phi_boundary);
    if (pa > pb * (1.0 + 1e-9))
        throw std::domain_error("x_of_phi: |phi| exceeds the boundary value");
    if (pa == 0.0) return 0.0;
    const double x = I_exact(std::min(pa, pb), Eps{sol.eps}, tol).value /
                     (2.0 * std::sqrt(sol.alpha));
    return canonical > 0.0 ? x : -x;
}

// Inverse profile phi(x) from the sample table: monotone piecewise-linear
// base, refined through the quadrature evaluator whenever the local
// curvature bound says interpolation alone would exceed refine_tol.
inline double phi_of_x(double x, const CCPBSolution& sol,
                       double refine_tol = 1e-9) {
    const double half_L = 0.5 * sol.L;
    if (std::abs(x) > half_L * (1.0 + 1e-12))
        throw std::domain_error("phi_of_x: |x| exceeds L/2");
    if (sol.V == 0.0) return 0.0;

    const double y = std::min(std::abs(x), half_L);
    const double out_sign = (x < 0.0 ? -1.0 : 1.0) * sol.sign();
    const auto& tab = sol.samples;

    // Locate the bracketing segment in the x column.
    auto it = std::lower_bound(
        tab.begin(), tab.end(), y,
        [](const std::array<double, 2>& row, double v) { return row[1] < v; });
    if (it == tab.begin()) return out_sign * tab.front()[0];
    if (it == tab.end()) return out_sign * tab.back()[0];
    const auto& hi = *it;
    const auto& lo = *(it - 1);

    const double dx = hi[1] - lo[1];
    double phi = dx > 0.0 ? lo[0] + (hi[0] - lo[0]) * (y - lo[1]) / dx : lo[0];

    // Curvature bound for linear interpolation of phi(x):
    // |phi''| = alpha sinh(phi) on a segment of width dx.
    const double curv = sol.alpha * std::sinh(std::min(hi[0], 30.0));
    if (0.125 * dx * dx * curv > refine_tol && hi[0] > lo[0]) {
        const double inv_2sa = 0.5 / std::sqrt(sol.alpha);
        const double s_lo = std::sinh(0.5 * lo[0]);
        const double e = sol.eps;
        auto seg = [&](double p) {
            auto g = [e](double s) {
                return 2.0 / (std::sqrt(1.0 + s * s) * std::hypot(s, e));
            };
            return lo[1] + inv_2sa * quad::integrate(g, s_lo, std::sinh(0.5 * p),
                                                     0.05 * refine_tol, 100'000)
                                         .value -
                   y;
        };
        try {
            phi = roots::brent(seg, lo[0], hi[0], 1e-14);
        } catch (const roots::BracketError&) {
            // y sits within quadrature noise of a node; linear value stands.
        }
    }
    return out_sign * phi;
}

}  // namespace ccpb
