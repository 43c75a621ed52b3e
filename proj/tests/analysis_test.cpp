#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ccpb/analysis.hpp"

using namespace ccpb;

TEST_CASE("analytic regime classification covers all three labels",
          "[analysis]") {
    const double tol = 0.05;
    CHECK(classify_regime(6.0, 15.0, tol).label == Regime::A_confined);
    CHECK(classify_regime(5.0, 60.0, tol).label == Regime::B_intermediate);
    CHECK(classify_regime(1.0, 300.0, tol).label ==
          Regime::C_effectively_infinite);

    const auto rep = classify_regime(5.0, 60.0, tol);
    CHECK(rep.E_value == Catch::Approx(predicted_error(5.0, 60.0)));
    CHECK(rep.ratio_value ==
          Catch::Approx(4.0 * std::pow(std::sinh(1.25), 2) / 60.0));
    CHECK(rep.tol == tol);

    CHECK_THROWS_AS(classify_regime(5.0, -1.0, tol), std::invalid_argument);
    CHECK_THROWS_AS(classify_regime(5.0, 15.0, 1.5), std::invalid_argument);
}

TEST_CASE("classification flips exactly at the boundary curves", "[analysis]") {
    const double tol = 0.05;
    for (double V : {2.0, 5.0, 8.0}) {
        const auto row = regime_boundaries({V}, tol).front();
        INFO("V=" << V);
        CHECK(classify_regime(V, row.L_AB * (1.0 - 1e-9), tol).label ==
              Regime::A_confined);
        CHECK(classify_regime(V, row.L_AB * (1.0 + 1e-9), tol).label !=
              Regime::A_confined);
        CHECK(classify_regime(V, row.L_BC * (1.0 - 1e-9), tol).label ==
              Regime::B_intermediate);
        CHECK(classify_regime(V, row.L_BC * (1.0 + 1e-9), tol).label ==
              Regime::C_effectively_infinite);
    }
}

TEST_CASE("regime boundaries reproduce the closed forms", "[analysis]") {
    const double tol = 0.05;
    for (const auto& row : regime_boundaries({1.0, 3.0, 6.0, 10.0}, tol)) {
        const double sh2 = std::pow(std::sinh(0.25 * row.V), 2);
        CHECK(row.L_AB ==
              Catch::Approx(4.0 * sh2 +
                            2.0 * std::log(2.0 * std::tanh(0.25 * row.V) / tol))
                  .epsilon(1e-14));
        CHECK(row.L_BC == Catch::Approx(4.0 * sh2 / tol).epsilon(1e-14));
    }
    // Looser tolerance shrinks the A region pointwise.
    const auto tight = regime_boundaries({4.0}, 0.05).front();
    const auto loose = regime_boundaries({4.0}, 0.5).front();
    CHECK(loose.L_AB < tight.L_AB);
    CHECK(loose.L_BC < tight.L_BC);
}

TEST_CASE("screening length inflates in finite domains", "[analysis]") {
    const auto sol = solve_exact({100.0, 10.0, 0.0}, 1e-11);
    const auto scr = screening_length(sol);
    CHECK(scr.ratio_to_infinite >= 1.0);
    // Deep in region B the inflation approaches 1/sqrt(alpha~).
    CHECK(scr.ratio_to_infinite ==
          Catch::Approx(1.0 / std::sqrt(alpha_tilde(10.0, 100.0)))
              .margin(1e-3));

    const auto far = screening_length(solve_exact({300.0, 10.0, 0.0}, 1e-11));
    CHECK(far.ratio_to_infinite < scr.ratio_to_infinite);

    const auto zero = screening_length(solve_exact({50.0, 0.0, 0.0}));
    CHECK(zero.lambda_s == 1.0);
    CHECK(zero.ratio_to_infinite == 1.0);

    CHECK_THROWS_AS(screening_length(solve_stern({50.0, 10.0, 0.05})),
                    std::invalid_argument);
}

TEST_CASE("infinite-domain profile anchors at the boundary", "[analysis]") {
    const auto prof = make_infinite_profile(5.0, 30.0);
    CHECK(prof(15.0) == Catch::Approx(5.0).epsilon(1e-12));
    CHECK(prof(-15.0) == Catch::Approx(-5.0).epsilon(1e-12));
    CHECK(prof(0.0) == Catch::Approx(4.0 * std::atanh(std::tanh(1.25) *
                                                      std::exp(-15.0)))
                           .epsilon(1e-12));
    // Robin variant: boundary value solves phi + 2 delta sinh(phi/2) = V.
    const auto stern = make_infinite_profile(5.0, 30.0, 0.1);
    const double pb = stern(15.0);
    CHECK(pb < 5.0);
    CHECK(pb + 0.2 * std::sinh(0.5 * pb) == Catch::Approx(5.0).epsilon(1e-10));
}

TEST_CASE("generalized criteria reproduce the analytic picture", "[analysis]") {
    const double tol = 0.05;

    const auto solA = solve_exact({15.0, 6.0, 0.0}, 1e-11);
    const auto repA =
        generalized_criteria(solA, make_infinite_profile(6.0, 15.0), tol);
    CHECK(repA.label == Regime::A_confined);
    CHECK(repA.E_value == Catch::Approx(std::abs(solA.phi_x0)));

    const auto solB = solve_exact({60.0, 5.0, 0.0}, 1e-11);
    const auto repB =
        generalized_criteria(solB, make_infinite_profile(5.0, 60.0), tol);
    CHECK(repB.label == Regime::B_intermediate);
    CHECK(repB.ratio_value > tol);

    const auto solC = solve_exact({300.0, 1.0, 0.0}, 1e-11);
    const auto repC =
        generalized_criteria(solC, make_infinite_profile(1.0, 300.0), tol);
    CHECK(repC.label == Regime::C_effectively_infinite);
    CHECK(repC.ratio_value <= tol);
}

TEST_CASE("center-point deviation misses boundary-layer discrepancies",
          "[analysis]") {
    // At (V,L) = (5,60) the finite profile is electroneutral at the center
    // but its boundary layer is still visibly inflated: the window measure
    // says B while the center-point measure says C.
    const auto sol = solve_exact({60.0, 5.0, 0.0}, 1e-11);
    const auto inf = make_infinite_profile(5.0, 60.0);
    const auto window = generalized_criteria(sol, inf, 0.05,
                                             DeviationMeasure::NearBoundaryWindow);
    const auto center =
        generalized_criteria(sol, inf, 0.05, DeviationMeasure::CenterPoint);
    CHECK(window.label == Regime::B_intermediate);
    CHECK(center.label == Regime::C_effectively_infinite);
    CHECK(center.ratio_value < window.ratio_value);
}

TEST_CASE("generalized boundaries bracket the criterion values", "[analysis]") {
    const double tol = 0.05;
    const auto row = generalized_boundaries(6.0, tol, 0.0);
    CHECK(row.L_AB > 1.0);
    CHECK(row.L_BC > row.L_AB);

    const auto at_AB = solve_exact({row.L_AB, 6.0, 0.0}, 1e-10, 200);
    CHECK(std::abs(at_AB.phi_x0) == Catch::Approx(tol).epsilon(1e-4));

    const auto at_BC = solve_exact({row.L_BC, 6.0, 0.0}, 1e-10, 200);
    const auto rep = generalized_criteria(
        at_BC, make_infinite_profile(6.0, row.L_BC), tol);
    CHECK(rep.ratio_value == Catch::Approx(tol).epsilon(1e-3));

    // Between the two curves the classification is B.
    const double mid = 0.5 * (row.L_AB + row.L_BC);
    const auto sol_mid = solve_exact({mid, 6.0, 0.0}, 1e-10, 200);
    CHECK(generalized_criteria(sol_mid, make_infinite_profile(6.0, mid), tol)
              .label == Regime::B_intermediate);
}

TEST_CASE("sup error scans agree with direct pointwise evaluation",
          "[analysis]") {
    const Eps e{1e-3};
    for (auto variant : {ApproxVariant::Crude, ApproxVariant::Refined}) {
        const double fast = approx_error_sup_I(e, variant, 400);
        double direct = 0.0;
        for (int i = 0; i < 400; ++i) {
            const double phi =
                1e-6 * std::pow(10.0 / 1e-6, static_cast<double>(i) / 399);
            direct = std::max(direct,
                              std::abs(I_exact(phi, e, 1e-13).value -
                                       I_approx(phi, e, variant)));
        }
        INFO((variant == ApproxVariant::Crude ? "crude" : "refined"));
        CHECK(fast >= direct - 1e-9);
        CHECK(fast <= direct * 1.5 + 1e-9);
    }
}

TEST_CASE("x-error sup is finite and decays with L", "[analysis]") {
    const double e15 = approx_error_sup_x(5.0, 15.0);
    const double e25 = approx_error_sup_x(5.0, 25.0);
    CHECK(e15 > 0.0);
    CHECK(e25 < e15);
    // Regression pin for the L = 15 sup (dominated by the matching-point
    // branch jump of the piecewise approximation).
    CHECK(e15 == Catch::Approx(0.1114).margin(4e-3));
}
