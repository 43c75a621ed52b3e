// Solve one confined-domain case end to end and print the pieces a user of
// the library typically wants: the self-consistent (eps, alpha), the profile
// at a few stations, the regime label, and how far the closed-form
// asymptotics are from the exact solve.

#include <cstdio>

#include "ccpb/ccpb.hpp"

int main() {
    const ccpb::ProblemParams params{15.0, 5.0, 0.0};
    const auto sol = ccpb::solve_exact(params);
    const auto asym = ccpb::solve_asymptotic(params);

    std::printf("CCPB solve at L = %g, V = %g\n", params.L, params.V);
    std::printf("  eps      = %-22.15g (closed form %.15g)\n", sol.eps,
                asym.eps_tilde);
    std::printf("  alpha    = %-22.15g (closed form %.15g)\n", sol.alpha,
                asym.alpha_tilde);
    std::printf("  phi_x(0) = %.15g, residual = %.3g\n\n", sol.phi_x0,
                sol.residual);

    std::printf("  %10s %22s %22s %22s\n", "x", "phi", "p", "n");
    for (double x : {0.0, 2.5, 5.0, 6.5, 7.25, 7.5}) {
        const double phi = ccpb::phi_of_x(x, sol);
        const auto c = ccpb::concentrations(phi, sol.alpha);
        std::printf("  %10.4f %22.15g %22.15g %22.15g\n", x, phi, c.p, c.n);
    }

    const auto rep = ccpb::classify_regime(params.V, params.L, 0.05);
    std::printf("\n  regime at tol 0.05: %s (E = %.3g, ratio = %.3g)\n",
                ccpb::regime_name(rep.label), rep.E_value, rep.ratio_value);
    return 0;
}
