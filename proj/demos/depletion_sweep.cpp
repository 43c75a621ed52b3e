// Sweep the domain length at fixed voltage and watch the finite-domain
// effects decay: bulk depletion alpha rising to 1, the screening length
// deflating toward its half-space value, and the regime label crossing
// from A through B to C.

#include <cstdio>

#include "ccpb/ccpb.hpp"

int main() {
    const double V = 10.0;
    std::printf("V = %g, tol = 0.05\n", V);
    std::printf("  %6s %22s %14s %14s  %s\n", "L", "alpha", "lambda_s",
                "ratio", "regime");
    for (double L : {20.0, 30.0, 50.0, 100.0, 200.0, 300.0}) {
        const auto sol = ccpb::solve_exact({L, V, 0.0});
        const auto scr = ccpb::screening_length(sol);
        const auto rep = ccpb::classify_regime(V, L, 0.05);
        std::printf("  %6g %22.15g %14.8g %14.8g  %s\n", L, sol.alpha,
                    scr.lambda_s, scr.ratio_to_infinite,
                    ccpb::regime_name(rep.label));
    }
    return 0;
}
