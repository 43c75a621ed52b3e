#pragma once

// Finite-domain analysis: regime classification (A confined / B
// intermediate / C effectively infinite), the closed-form regime boundary
// curves, screening-length inflation, the model-agnostic criteria, and the
// sup-error sweeps behind the approximation-quality figures.

#include <algorithm>
#include <cmath>
#include <vector>

#include "asymptotic.hpp"
#include "kernel.hpp"
#include "roots.hpp"
#include "solver.hpp"

namespace ccpb {

enum class Regime { A_confined, B_intermediate, C_effectively_infinite };

inline const char* regime_name(Regime r) {
    switch (r) {
        case Regime::A_confined: return "A_confined";
        case Regime::B_intermediate: return "B_intermediate";
        default: return "C_effectively_infinite";
    }
}

struct RegimeReport {
    Regime label;
    double E_value;      // A-criterion value (analytic: E(V,L); generalized: |phi_x(0)|)
    double ratio_value;  // C-criterion value (analytic: 4 sinh^2(V/4)/L; generalized: boundary-layer deviation)
    double tol;
};

// Analytic classification.  A wins when both criteria hold: a
// non-electroneutral bulk is the stronger statement.
inline RegimeReport classify_regime(double V, double L, double tol) {
    if (!(L > 0.0)) throw std::invalid_argument("classify_regime: L must be > 0");
    if (!(tol > 0.0 && tol < 1.0))
        throw std::invalid_argument("classify_regime: tol must be in (0,1)");
    const double sh = std::sinh(0.25 * std::abs(V));
    RegimeReport rep;
    rep.E_value = predicted_error(V, L);
    rep.ratio_value = 4.0 * sh * sh / L;
    rep.tol = tol;
    if (rep.E_value >= tol)
        rep.label = Regime::A_confined;
    else if (rep.ratio_value <= tol)
        rep.label = Regime::C_effectively_infinite;
    else
        rep.label = Regime::B_intermediate;
    return rep;
}

struct BoundaryRow {
    double V;
    double L_AB;  // E(V, L_AB) = tol; negative/-inf means no A region at this V
    double L_BC;  // 4 sinh^2(V/4) / L_BC = tol
};

// Closed-form regime boundary curves.
inline std::vector<BoundaryRow> regime_boundaries(const std::vector<double>& V_grid,
                                                  double tol) {
    if (!(tol > 0.0 && tol < 1.0))
        throw std::invalid_argument("regime_boundaries: tol must be in (0,1)");
    std::vector<BoundaryRow> rows;
    rows.reserve(V_grid.size());
    for (double V : V_grid) {
        const double sh2 = std::sinh(0.25 * std::abs(V)) *
                           std::sinh(0.25 * std::abs(V));
        rows.push_back({V,
                        4.0 * sh2 +
                            2.0 * std::log(2.0 * std::tanh(0.25 * std::abs(V)) / tol),
                        4.0 * sh2 / tol});
    }
    return rows;
}

struct ScreeningResult {
    double lambda_s;           // Debye-length units
    double ratio_to_infinite;  // lambda_s(L) / lambda_s(infinity), >= 1
    double alpha_used;
};

// Screening length lambda_s = x(V) - x(V/e), with the infinite-domain
// value from the half-space closed form.
inline ScreeningResult screening_length(const CCPBSolution& sol) {
    if (sol.stern_delta != 0.0)
        throw std::invalid_argument(
            "screening_length: defined for Dirichlet solutions (phi_boundary = V)");
    if (sol.V == 0.0) return {1.0, 1.0, 1.0};

    const double Va = std::abs(sol.V);
    const double lam =
        x_of_phi(sol.sign() * Va, sol) - x_of_phi(sol.sign() * Va / M_E, sol);
    const double lam_inf =
        std::log(std::tanh(0.25 * Va) / std::tanh(0.25 * Va / M_E));
    return {lam, lam / lam_inf, sol.alpha};
}

// Half-space (infinite-domain) profile evaluator anchored at x = L/2, with
// an optional Stern layer absorbed into the boundary value.
struct InfiniteProfile {
    double V;      // signed applied half-voltage
    double L;      // domain used for anchoring the comparison window
    double delta;  // Stern width
    double phi_b;  // boundary potential of the infinite problem (positive)

    double operator()(double x) const {
        if (V == 0.0) return 0.0;
        const double t =
            std::tanh(0.25 * phi_b) * std::exp(std::abs(x) - 0.5 * L);
        double val = 4.0 * std::atanh(std::min(t, 1.0 - 1e-16));
        if (x < 0.0) val = -val;
        return V < 0.0 ? -val : val;
    }
};

inline InfiniteProfile make_infinite_profile(double V, double L, double delta = 0.0) {
    InfiniteProfile p{V, L, delta, std::abs(V)};
    if (V != 0.0 && delta > 0.0) {
        // alpha = 1, eps = 0: the first integral gives phi_x = 2 sinh(phi/2),
        // so the Robin condition closes to phi_b + 2 delta sinh(phi_b/2) = V.
        const double Va = std::abs(V);
        p.phi_b = roots::brent(
            [Va, delta](double t) {
                return t + 2.0 * delta * std::sinh(0.5 * t) - Va;
            },
            0.0, Va, 1e-14 * std::max(1.0, Va));
    }
    return p;
}

enum class DeviationMeasure {
    NearBoundaryWindow,  // sup over x in [max(0, L/2-10), L/2]
    CenterPoint,         // literal |phi_L(0) - phi_inf(0)|
};

// Model-agnostic classification from computed profiles: region A when the
// center slope is not yet flat, region C when the boundary layer of the
// finite solution matches the infinite-domain one.
template <class InfProfile>
RegimeReport generalized_criteria(const CCPBSolution& sol_L, InfProfile&& phi_inf,
                                  double tol,
                                  DeviationMeasure measure =
                                      DeviationMeasure::NearBoundaryWindow) {
    if (!(tol > 0.0 && tol < 1.0))
        throw std::invalid_argument("generalized_criteria: tol must be in (0,1)");

    RegimeReport rep;
    rep.tol = tol;
    rep.E_value = std::abs(sol_L.phi_x0);

    double dev = 0.0;
    if (measure == DeviationMeasure::CenterPoint) {
        dev = std::abs(phi_of_x(0.0, sol_L) - phi_inf(0.0));
    } else {
        const double half_L = 0.5 * sol_L.L;
        const double x_lo = std::max(0.0, half_L - 10.0);
        constexpr int n_scan = 512;
        for (int i = 0; i <= n_scan; ++i) {
            const double x = x_lo + (half_L - x_lo) * i / n_scan;
            dev = std::max(dev, std::abs(phi_of_x(x, sol_L) - phi_inf(x)));
        }
    }
    rep.ratio_value = dev;

    if (rep.E_value >= tol)
        rep.label = Regime::A_confined;
    else if (dev <= tol)
        rep.label = Regime::C_effectively_infinite;
    else
        rep.label = Regime::B_intermediate;
    return rep;
}

// Solver-based regime boundaries: for fixed V, the L where |phi_x(0)| = tol
// (A/B) and where the boundary-layer deviation = tol (B/C).  Both criterion
// values fall monotonically in L.
inline BoundaryRow generalized_boundaries(double V, double tol, double delta,
                                          double solver_tol = 1e-10) {
    auto solve = [&](double L) {
        ProblemParams p{L, std::abs(V), delta};
        return delta > 0.0 ? solve_stern(p, solver_tol, 200)
                           : solve_exact(p, solver_tol, 200);
    };
    // The eps root leaves the solvable bracket at both extremes of L: on
    // sub-Debye domains the root exceeds the cap (maximally confined, the
    // gap is certainly positive), and on huge domains eps underflows (the
    // profile is indistinguishable from the semi-infinite one, so the gap
    // is certainly negative).  Use the asymptotic seed to tell them apart.
    auto failed_gap = [&](double L) {
        const double seed = eps_tilde(std::abs(V), L);
        if (seed > 1.0) return tol;
        if (seed < 1e-250) return -tol;
        throw;  // unexpected failure in the resolvable range
    };
    auto slope_gap = [&](double L) {
        try {
            return std::abs(solve(L).phi_x0) - tol;
        } catch (const SolverError&) {
            return failed_gap(L);
        }
    };
    auto dev_gap = [&](double L) {
        try {
            auto sol = solve(L);
            auto inf = make_infinite_profile(std::abs(V), L, delta);
            return generalized_criteria(sol, inf, tol).ratio_value - tol;
        } catch (const SolverError&) {
            return failed_gap(L);
        }
    };

    auto find = [&](auto&& gap) {
        double lo = 1.0, hi = 4.0;
        double glo = gap(lo);
        if (glo <= 0.0) return lo;  // already flat at the smallest domain
        double ghi = gap(hi);
        while (ghi > 0.0 && hi < 4096.0) {
            lo = hi;
            glo = ghi;
            hi *= 2.0;
            ghi = gap(hi);
        }
        if (ghi > 0.0) return hi;
        return roots::brent(gap, lo, hi, glo, ghi, 1e-9 * hi);
    };

    return {V, find(slope_gap), find(dev_gap)};
}

// sup over phi of |I_exact - I_approx| at fixed eps, scanned on a dense
// log grid plus the matching neighborhood, accumulated by cumulative
// segment quadrature so the scan costs one pass.
inline double approx_error_sup_I(Eps eps, ApproxVariant variant,
                                 int n_grid = 2000) {
    const double phi_lo = 1e-6, phi_hi = 10.0;
    std::vector<double> grid;
    grid.reserve(n_grid + 8);
    for (int i = 0; i < n_grid; ++i)
        grid.push_back(phi_lo * std::pow(phi_hi / phi_lo,
                                         static_cast<double>(i) / (n_grid - 1)));
    const double eta = matching_eta(eps, variant);
    if (eta > phi_lo && eta < phi_hi) {
        grid.push_back(eta * (1.0 - 1e-9));
        grid.push_back(eta);
        grid.push_back(eta * (1.0 + 1e-9));
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    const double e = eps.value;
    auto g = [e](double s) {
        return 2.0 / (std::sqrt(1.0 + s * s) * std::hypot(s, e));
    };
    double sup = 0.0, I = 0.0, s_prev = 0.0;
    for (double phi : grid) {
        const double s = std::sinh(0.5 * phi);
        I += quad::integrate(g, s_prev, s, 1e-14, 100'000).value;
        s_prev = s;
        sup = std::max(sup, std::abs(I - I_approx(phi, eps, variant)));
    }
    return sup;
}

// sup over phi of |x_exact - x_approx| for the explicit solution at (V, L),
// including the matching neighborhood of x_approx.
inline double approx_error_sup_x(double V, double L, double solver_tol = 1e-10,
                                 int n_grid = 2000) {
    auto sol = solve_exact({L, std::abs(V), 0.0}, solver_tol);
    auto asym = solve_asymptotic({L, std::abs(V), 0.0});

    const double Va = std::abs(V);
    std::vector<double> grid;
    grid.reserve(n_grid + 16);
    const double phi_lo = Va * 1e-8;
    for (int i = 0; i < n_grid; ++i)
        grid.push_back(phi_lo *
                       std::pow(Va / phi_lo, static_cast<double>(i) / (n_grid - 1)));
    const double eta = asym.eta();
    if (eta > phi_lo && eta < Va) {
        grid.push_back(eta * (1.0 - 1e-9));
        grid.push_back(eta);
        grid.push_back(eta * (1.0 + 1e-9));
    }
    for (const auto& row : sol.samples)
        if (row[0] > 0.0 && row[0] < Va) grid.push_back(row[0]);
    grid.push_back(Va);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    const double e = sol.eps;
    auto g = [e](double s) {
        return 2.0 / (std::sqrt(1.0 + s * s) * std::hypot(s, e));
    };
    const double inv_2sa = 0.5 / std::sqrt(sol.alpha);
    double sup = 0.0, I = 0.0, s_prev = 0.0;
    for (double phi : grid) {
        const double s = std::sinh(0.5 * phi);
        I += quad::integrate(g, s_prev, s, 1e-14, 100'000).value;
        s_prev = s;
        sup = std::max(sup, std::abs(I * inv_2sa - x_approx(phi, asym)));
    }
    return sup;
}

}  // namespace ccpb
