#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ccpb/solver.hpp"
#include "oracle.hpp"

using namespace ccpb;

TEST_CASE("J_integral agrees with the independent oracle", "[solver]") {
    for (double V : {0.5, 1.0, 5.0, 10.0}) {
        for (double e : {1e-1, 1e-2, 1e-6, 1e-20}) {
            // J grows like e^{V/2}, so ask for a tolerance the conservative
            // error estimator can actually certify at V = 10.
            const double lib = J_integral(V, Eps{e}, 1e-10);
            const double ref = oracle::J_integral(V, e, 1e-12);
            INFO("V=" << V << " eps=" << e);
            CHECK(lib == Catch::Approx(ref).epsilon(1e-9));
        }
    }
}

TEST_CASE("alpha_of_eps follows from the J relation", "[solver]") {
    const double V = 5.0, L = 15.0, e = 0.05;
    const double ref = std::pow(L / oracle::J_integral(V, e, 1e-13), 2);
    CHECK(alpha_of_eps(V, L, Eps{e}, 1e-12) ==
          Catch::Approx(ref).epsilon(1e-10));
    // Large eps limit: J -> sinh(V)/eps, so alpha -> (L eps / sinh V)^2.
    const double big = 5e3;
    CHECK(alpha_of_eps(V, L, Eps{big}, 1e-12) ==
          Catch::Approx(std::pow(L * big / std::sinh(V), 2)).epsilon(1e-5));
}

TEST_CASE("solve_exact reproduces pinned self-consistent solutions",
          "[solver]") {
    struct Anchor {
        double V, L, eps, alpha;
    };
    // Values frozen from an independent high-precision implementation.
    const Anchor anchors[] = {
        {5.0, 15.0, 0.06497453284109926, 0.2786175403169888},
        {1.0, 15.0, 0.0006149344484931206, 0.9665409596185507},
        {6.0, 15.0, 0.2464204577658659, 0.13107951176073454},
        {10.0, 20.0, 3.8165892454401296, 0.005023019931656572},
        {10.0, 100.0, 7.736371062099852e-07, 0.09541897760247454},
        {10.0, 300.0, 7.976609928950995e-41, 0.3902275476151651},
    };
    for (const auto& a : anchors) {
        const auto sol = solve_exact({a.L, a.V, 0.0}, 1e-12);
        INFO("V=" << a.V << " L=" << a.L);
        CHECK(sol.eps == Catch::Approx(a.eps).epsilon(1e-9));
        CHECK(sol.alpha == Catch::Approx(a.alpha).epsilon(1e-9));
        CHECK(sol.phi_x0 ==
              Catch::Approx(2.0 * std::sqrt(sol.alpha) * sol.eps).epsilon(1e-12));
        CHECK(sol.phi_boundary == a.V);
    }
}

TEST_CASE("solution satisfies the defining relations", "[solver]") {
    for (double V : {1.0, 5.0, 10.0}) {
        for (double L : {15.0, 60.0}) {
            const auto sol = solve_exact({L, V, 0.0}, 1e-11);
            INFO("V=" << V << " L=" << L);
            // x(V) = L/2 through the oracle integral.
            const double xV = oracle::I_integral(V, sol.eps, 1e-12) /
                              (2.0 * std::sqrt(sol.alpha));
            CHECK(xV == Catch::Approx(0.5 * L).epsilon(1e-8));
            // sqrt(alpha) = L / J through the oracle integral.
            CHECK(std::sqrt(sol.alpha) ==
                  Catch::Approx(L / oracle::J_integral(V, sol.eps, 1e-12))
                      .epsilon(1e-8));
            CHECK(sol.alpha > 0.0);
            CHECK(sol.alpha <= 1.0);
        }
    }
}

TEST_CASE("sample table is a strictly monotone profile", "[solver]") {
    const auto sol = solve_exact({15.0, 5.0, 0.0}, 1e-10, 400);
    REQUIRE(sol.samples.size() == 401);
    CHECK(sol.samples.front()[0] == 0.0);
    CHECK(sol.samples.front()[1] == 0.0);
    CHECK(sol.samples.back()[0] == 5.0);
    CHECK(sol.samples.back()[1] == Catch::Approx(7.5).epsilon(1e-9));
    for (std::size_t i = 1; i < sol.samples.size(); ++i) {
        CHECK(sol.samples[i][0] > sol.samples[i - 1][0]);
        CHECK(sol.samples[i][1] > sol.samples[i - 1][1]);
    }
}

TEST_CASE("x_of_phi and phi_of_x are inverse maps", "[solver]") {
    const auto sol = solve_exact({15.0, 5.0, 0.0}, 1e-11);
    for (double phi : {-4.999, -3.0, -0.5, -1e-4, 0.0, 1e-4, 0.5, 3.0, 4.999}) {
        const double x = x_of_phi(phi, sol);
        CHECK(phi_of_x(x, sol) == Catch::Approx(phi).margin(5e-8));
    }
    for (double x : {-7.5, -6.0, -2.0, 0.0, 2.0, 6.0, 7.5}) {
        const double phi = phi_of_x(x, sol);
        CHECK(x_of_phi(phi, sol) == Catch::Approx(x).margin(5e-8));
    }
    CHECK(x_of_phi(5.0, sol) == Catch::Approx(7.5).epsilon(1e-9));
    CHECK_THROWS_AS(x_of_phi(5.1, sol), std::domain_error);
    CHECK_THROWS_AS(phi_of_x(7.6, sol), std::domain_error);
}

TEST_CASE("negative voltage mirrors the profile", "[solver]") {
    const auto plus = solve_exact({15.0, 5.0, 0.0}, 1e-11);
    const auto minus = solve_exact({15.0, -5.0, 0.0}, 1e-11);
    CHECK(minus.eps == Catch::Approx(plus.eps).epsilon(1e-12));
    CHECK(minus.alpha == Catch::Approx(plus.alpha).epsilon(1e-12));
    CHECK(minus.phi_boundary == -5.0);
    CHECK(minus.phi_x0 == Catch::Approx(-plus.phi_x0).epsilon(1e-12));
    CHECK(x_of_phi(-5.0, minus) == Catch::Approx(7.5).epsilon(1e-9));
    for (double x : {-6.0, -1.0, 3.0, 7.5})
        CHECK(phi_of_x(x, minus) ==
              Catch::Approx(-phi_of_x(x, plus)).margin(1e-12));
}

TEST_CASE("trivial V = 0 solution", "[solver]") {
    const auto sol = solve_exact({15.0, 0.0, 0.0});
    CHECK(sol.eps == 0.0);
    CHECK(sol.alpha == 1.0);
    CHECK(sol.phi_x0 == 0.0);
    CHECK(phi_of_x(3.0, sol) == 0.0);
    CHECK(x_of_phi(0.0, sol) == 0.0);
}

TEST_CASE("parameter validation", "[solver]") {
    CHECK_THROWS_AS(solve_exact({-1.0, 5.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(solve_exact({15.0, 5.0, 0.1}), std::invalid_argument);
    CHECK_THROWS_AS(solve_stern({15.0, 5.0, -0.1}), std::invalid_argument);
    CHECK_THROWS_AS(J_integral(-1.0, Eps{0.1}, 1e-10), std::invalid_argument);
    CHECK_THROWS_AS(alpha_of_eps(5.0, -2.0, Eps{0.1}, 1e-10),
                    std::invalid_argument);
}

TEST_CASE("concentrations follow the Boltzmann factors", "[solver]") {
    const double alpha = 0.27861754;
    const auto c = concentrations(1.5, alpha);
    CHECK(c.p == Catch::Approx(alpha * std::exp(-1.5)).epsilon(1e-15));
    CHECK(c.n == Catch::Approx(alpha * std::exp(1.5)).epsilon(1e-15));
    CHECK(c.p * c.n == Catch::Approx(alpha * alpha).epsilon(1e-14));
    const auto mid = concentrations(0.0, alpha);
    CHECK(mid.p == mid.n);
    CHECK_THROWS_AS(concentrations(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("gouy_chapman_x anchors and domain", "[solver]") {
    const double V = 5.0, L = 30.0;
    CHECK(gouy_chapman_x(V, V, L) == Catch::Approx(0.5 * L).margin(1e-12));
    const double phi = 1.0;
    const double expected =
        0.5 * L - std::log(std::tanh(0.25 * V) / std::tanh(0.25 * phi));
    CHECK(gouy_chapman_x(phi, V, L) == Catch::Approx(expected).epsilon(1e-14));
    CHECK(std::isinf(gouy_chapman_x(0.0, V, L)));
    CHECK(gouy_chapman_x(0.0, V, L) < 0.0);
    CHECK_THROWS_AS(gouy_chapman_x(-1.0, V, L), std::domain_error);
    CHECK_THROWS_AS(gouy_chapman_x(5.5, V, L), std::domain_error);
    CHECK_THROWS_AS(gouy_chapman_x(1.0, 0.0, L), std::invalid_argument);
}

TEST_CASE("Stern solve satisfies the Robin condition", "[solver][stern]") {
    struct Case {
        double V, L, delta;
    };
    for (auto c : {Case{10.0, 50.0, 0.05}, Case{5.0, 15.0, 0.05},
                   Case{10.0, 30.0, 0.5}, Case{1.0, 20.0, 0.01}}) {
        const auto sol = solve_stern({c.L, c.V, c.delta}, 1e-11);
        INFO("V=" << c.V << " L=" << c.L << " delta=" << c.delta);
        const double phi_s = sol.phi_boundary;
        CHECK(phi_s > 0.0);
        CHECK(phi_s < c.V);  // the Stern layer always absorbs some voltage
        const double slope = 2.0 * std::sqrt(sol.alpha) *
                             std::hypot(std::sinh(0.5 * phi_s), sol.eps);
        CHECK(phi_s + c.delta * slope == Catch::Approx(c.V).margin(1e-8));
        // The interior problem is the Dirichlet solve at phi_s.
        const auto inner = solve_exact({c.L, phi_s, 0.0}, 1e-11);
        CHECK(sol.eps == Catch::Approx(inner.eps).epsilon(1e-8));
        CHECK(sol.alpha == Catch::Approx(inner.alpha).epsilon(1e-8));
    }
}

TEST_CASE("Stern solve limits", "[solver][stern]") {
    const auto dirichlet = solve_exact({15.0, 5.0, 0.0}, 1e-11);
    const auto tiny = solve_stern({15.0, 5.0, 1e-12}, 1e-11);
    CHECK(tiny.phi_boundary == Catch::Approx(5.0).margin(1e-9));
    CHECK(tiny.eps == Catch::Approx(dirichlet.eps).epsilon(1e-7));

    // phi_s decreases as the Stern layer widens.
    double prev = 5.0;
    for (double d : {0.01, 0.05, 0.2, 1.0}) {
        const double ps = solve_stern({15.0, 5.0, d}, 1e-11).phi_boundary;
        CHECK(ps < prev);
        prev = ps;
    }

    const auto zero = solve_stern({15.0, 0.0, 0.05});
    CHECK(zero.alpha == 1.0);
    CHECK(zero.phi_boundary == 0.0);

    const auto neg = solve_stern({50.0, -10.0, 0.05}, 1e-11);
    const auto pos = solve_stern({50.0, 10.0, 0.05}, 1e-11);
    CHECK(neg.phi_boundary == Catch::Approx(-pos.phi_boundary).epsilon(1e-10));
}
