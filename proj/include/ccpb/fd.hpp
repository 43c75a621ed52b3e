#pragma once

// Independent finite-difference reference solver.
//
// Discretizes phi_xx = sinh(phi) / m, m = (1/L) int e^phi dx, on a uniform
// grid with second-order central stencils.  The nonlocal mean m is lagged:
// each outer iteration freezes m, runs a damped Newton sweep on the local
// problem (tridiagonal Jacobian, Thomas solve), then refreshes m from the
// trapezoid rule.  Boundary conditions are Dirichlet (delta = 0) or Robin
// phi +- delta phi_x = +-V with one-sided second-order stencils folded into
// the tridiagonal structure.  Voltage continuation keeps Newton in its
// attraction basin at large V.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "asymptotic.hpp"
#include "solver.hpp"

namespace ccpb {

struct GridSolution {
    double L;
    double V;
    double stern_delta;
    int n_nodes;
    std::vector<double> phi;  // node values on [-L/2, L/2]
    double alpha;             // 1 / (mean of e^phi)
    double newton_residual;   // max-norm of the self-consistent residual

    double h() const { return L / (n_nodes - 1); }
    double x(int i) const { return -0.5 * L + L * i / (n_nodes - 1); }
    double phi_x0() const {  // centered slope at the middle node
        const int mid = (n_nodes - 1) / 2;
        return (phi[mid + 1] - phi[mid - 1]) / (2.0 * h());
    }
};

namespace detail {

// Thomas algorithm; diagonals are overwritten.
inline void solve_tridiagonal(std::vector<double>& sub, std::vector<double>& diag,
                              std::vector<double>& sup, std::vector<double>& rhs) {
    const std::size_t n = diag.size();
    for (std::size_t i = 1; i < n; ++i) {
        const double w = sub[i] / diag[i - 1];
        diag[i] -= w * sup[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    rhs[n - 1] /= diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;)
        rhs[i] = (rhs[i] - sup[i] * rhs[i + 1]) / diag[i];
}

struct FdWork {
    double L, Vb, delta, h;
    int n;

    double mean_exp(const std::vector<double>& phi) const {
        double acc = 0.5 * (std::exp(phi.front()) + std::exp(phi.back()));
        for (int i = 1; i < n - 1; ++i) acc += std::exp(phi[i]);
        return acc * h / L;
    }

    // Residual of the full system at frozen mean m.  Dirichlet rows are
    // identically zero because the boundary values are pinned.  The second
    // difference is formed from first differences: neighbor values are
    // close, so the inner subtractions are exact and the residual floor
    // stays far below the convergence target even on fine grids.
    void residual(const std::vector<double>& phi, double m,
                  std::vector<double>& F) const {
        const double ih2 = 1.0 / (h * h);
        F[0] = 0.0;
        F[n - 1] = 0.0;
        for (int i = 1; i < n - 1; ++i)
            F[i] = ((phi[i + 1] - phi[i]) - (phi[i] - phi[i - 1])) * ih2 -
                   std::sinh(phi[i]) / m;
        if (delta > 0.0) {
            const double c = delta / (2.0 * h);
            F[0] = phi[0] - c * (-3.0 * phi[0] + 4.0 * phi[1] - phi[2]) + Vb;
            F[n - 1] = phi[n - 1] +
                       c * (3.0 * phi[n - 1] - 4.0 * phi[n - 2] + phi[n - 3]) -
                       Vb;
        }
    }

    static double sup_norm(const std::vector<double>& F) {
        double m = 0.0;
        for (double v : F) m = std::max(m, std::abs(v));
        return m;
    }

    // One damped Newton sweep at frozen m; returns the final sup-norm.
    double newton(std::vector<double>& phi, double m, int max_iter) const {
        const double ih2 = 1.0 / (h * h);
        std::vector<double> F(n), sub(n), diag(n), sup(n), step(n), trial(n);
        for (int it = 0; it < max_iter; ++it) {
            residual(phi, m, F);
            const double f0 = sup_norm(F);
            if (f0 <= 1e-11) return f0;

            for (int i = 1; i < n - 1; ++i) {
                sub[i] = ih2;
                diag[i] = -2.0 * ih2 - std::cosh(phi[i]) / m;
                sup[i] = ih2;
            }
            if (delta == 0.0) {
                diag[0] = diag[n - 1] = 1.0;
                sup[0] = sub[n - 1] = 0.0;
                F[0] = F[n - 1] = 0.0;
            } else {
                // Robin rows reach two nodes in; eliminate the third-column
                // entry with the adjacent interior row to stay tridiagonal.
                const double c = delta / (2.0 * h);
                double a0 = 1.0 + 3.0 * c, a1 = -4.0 * c, a2 = c, b0 = F[0];
                double w = a2 / sup[1];
                a0 -= w * sub[1];
                a1 -= w * diag[1];
                b0 -= w * F[1];
                diag[0] = a0;
                sup[0] = a1;
                F[0] = b0;
                double z0 = 1.0 + 3.0 * c, z1 = -4.0 * c, z2 = c, bN = F[n - 1];
                w = z2 / sub[n - 2];
                z0 -= w * diag[n - 2];
                z1 -= w * sup[n - 2];
                bN -= w * F[n - 2];
                diag[n - 1] = z0;
                sub[n - 1] = z1;
                F[n - 1] = bN;
            }
            for (int i = 0; i < n; ++i) step[i] = -F[i];
            solve_tridiagonal(sub, diag, sup, step);

            // Backtracking on the sum of squares.
            residual(phi, m, F);
            double g0 = 0.0;
            for (double v : F) g0 += v * v;
            double lambda = 1.0;
            for (int bt = 0; bt < 45; ++bt) {
                for (int i = 0; i < n; ++i) trial[i] = phi[i] + lambda * step[i];
                residual(trial, m, F);
                double g = 0.0;
                for (double v : F) g += v * v;
                if (g <= g0 * (1.0 - 1e-4 * lambda) || g < 1e-28) break;
                lambda *= 0.5;
            }
            for (int i = 0; i < n; ++i) phi[i] += lambda * step[i];
        }
        residual(phi, m, F);
        return sup_norm(F);
    }
};

}  // namespace detail

inline GridSolution solve_fd_oracle(const ProblemParams& params, int n_nodes) {
    if (n_nodes < 101 || n_nodes % 2 == 0)
        throw std::invalid_argument("solve_fd_oracle: n_nodes must be odd and >= 101");
    if (!(params.L > 0.0))
        throw std::invalid_argument("solve_fd_oracle: L must be > 0");

    GridSolution out;
    out.L = params.L;
    out.V = params.V;
    out.stern_delta = params.stern_delta;
    out.n_nodes = n_nodes;
    out.phi.assign(n_nodes, 0.0);
    out.alpha = 1.0;
    out.newton_residual = 0.0;
    if (params.V == 0.0) return out;

    const double Vb = std::abs(params.V);
    detail::FdWork work{params.L, Vb, params.stern_delta,
                        params.L / (n_nodes - 1), n_nodes};

    std::vector<double>& phi = out.phi;
    const int stages = std::max(1, static_cast<int>(std::ceil(Vb / 1.5)));
    double m = 1.0;
    for (int stage = 1; stage <= stages; ++stage) {
        work.Vb = Vb * stage / stages;
        if (work.delta == 0.0) {
            phi[0] = -work.Vb;
            phi[n_nodes - 1] = work.Vb;
        }
        double res = std::numeric_limits<double>::infinity();
        m = work.mean_exp(phi);
        // Fixed point m = M(m) with M(m) = mean of e^phi after the local
        // Newton solve at frozen m.  Secant acceleration keeps the outer
        // count bounded even when the domain is strongly confined and the
        // plain iteration contracts slowly.
        double m_prev = 0.0, r_prev = 0.0;
        bool have_prev = false;
        std::vector<double> F(n_nodes);
        for (int outer = 0; outer < 600; ++outer) {
            work.newton(phi, m, 60);
            const double M = work.mean_exp(phi);
            const double r = M - m;
            work.residual(phi, M, F);
            res = detail::FdWork::sup_norm(F);
            if (res <= 1e-10 && std::abs(r) <= 1e-13 * M) {
                m = M;
                break;
            }
            double m_next = M;
            if (have_prev && r != r_prev) {
                const double secant = m - r * (m - m_prev) / (r - r_prev);
                if (std::isfinite(secant) && secant > 0.1 * M && secant < 10.0 * M)
                    m_next = secant;
            }
            m_prev = m;
            r_prev = r;
            have_prev = true;
            m = m_next;
        }
        if (stage == stages && res > 1e-10)
            throw SolverError("solve_fd_oracle: stalled at residual " +
                              std::to_string(res));
        out.newton_residual = res;
    }
    out.alpha = 1.0 / m;
    return out;
}

}  // namespace ccpb
