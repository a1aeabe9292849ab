#include <doctest.h>

#include <stdexcept>
#include <cmath>

#include "hjbr/hamiltonian.hpp"
#include "hjbr/rng.hpp"
#include "oracles.hpp"

using namespace hjbr;

namespace {

DerivativeProbe probe(double x, double r, double g, double H) {
    return DerivativeProbe{x, r, g, H};
}

}  // namespace

TEST_CASE("generator closed forms") {
    const ControlProblem ex1 = build_example1(oracle::p1());
    CHECK(generator_apply(ex1, 0.2, probe(0.4, 0.0, 1.0, 0.0))
          == doctest::Approx(-0.06).epsilon(1e-14));
    CHECK(generator_apply(ex1, 0.8, probe(0.0, 0.0, 0.0, 5.0)) == 0.0);

    const ControlProblem ex2 = build_example2(oracle::p1());
    CHECK(generator_apply(ex2, 0.25, probe(0.5, 0.0, 0.0, 2.0))
          == doctest::Approx(0.005625).epsilon(1e-13));
}

TEST_CASE("hamiltonian minimization hits the interior quadratic minimum") {
    const ControlProblem ex1 = build_example1(oracle::p1());
    const ControlMin m = hamiltonian_eval(ex1, probe(0.37, 0.0, 0.0, 0.0), 65);
    CHECK(m.u_star == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(std::abs(m.value) <= 1e-12);
}

TEST_CASE("closed-form control law, semilinear example") {
    const ExampleParams params = oracle::p1();
    // dense-grid oracle on the reduced objective u^2 - f u
    auto oracle_min = [&](double g) {
        const double f = 2.0 * params.theta_d + params.theta_b * g;
        return oracle::dense_argmin([&](double u) { return u * u - f * u; },
                                    params.u_a, params.u_b, 20001);
    };
    CHECK(analytic_control_ex1(params, 0.0) == 0.5);
    CHECK(oracle_min(0.0).u == doctest::Approx(0.5).epsilon(1e-4));
    CHECK(analytic_control_ex1(params, -3.0) == 0.0);
    CHECK(oracle_min(-3.0).u == 0.0);
    CHECK(analytic_control_ex1(params, 4.0) == 1.0);
    CHECK(oracle_min(4.0).u == 1.0);

    ExampleParams bad = params;
    bad.theta_b = 0.0;
    CHECK_THROWS_AS(analytic_control_ex1(bad, 0.0), std::invalid_argument);
}

TEST_CASE("closed-form control law with Hessian dependence") {
    const ExampleParams params = oracle::p1();
    CHECK(analytic_control_ex2(params, 1.0, 0.0, -20.0)
          == doctest::Approx(0.95).epsilon(1e-14));
    CHECK(analytic_control_ex2(params, 1.0, 0.0, 50.0) == 0.0);
    // dense-grid confirmation of the first case
    const double f = 1.0 - 0.5 * 0.09 * (-20.0);
    const auto o = oracle::dense_argmin([&](double u) { return u * u - f * u; },
                                        0.0, 1.0, 20001);
    CHECK(o.u == doctest::Approx(0.95).epsilon(1e-4));

    ExampleParams negative_lo = params;
    negative_lo.u_a = -0.1;
    CHECK_THROWS_AS(analytic_control_ex2(negative_lo, 0.5, 0.0, 0.0),
                    std::invalid_argument);
}

TEST_CASE("at x = 0 the dispersion-controlled law reduces to the semilinear one") {
    const ExampleParams params = oracle::p1();
    for (int i = 0; i < 200; ++i) {
        const double g = 10.0 * (rng::uniform(23, 2 * i) - 0.5);
        const double H = 100.0 * (rng::uniform(23, 2 * i + 1) - 0.5);
        CHECK(analytic_control_ex2(params, 0.0, g, H)
              == analytic_control_ex1(params, g));
    }
}

TEST_CASE("grid plus golden-section matches the analytic argmin") {
    const ExampleParams params = oracle::p1();
    const ControlProblem ex1 = build_example1(params);
    const ControlProblem ex2 = build_example2(params);
    for (int i = 0; i < 1000; ++i) {
        const double x = 2.0 * rng::uniform(31, 3 * i) - 1.0;
        const double g = 10.0 * (rng::uniform(31, 3 * i + 1) - 0.5);
        const double H = 100.0 * (rng::uniform(31, 3 * i + 2) - 0.5);

        const ControlMin m1 = hamiltonian_eval(ex1, probe(x, 0.0, g, H), 65);
        const double a1 = analytic_control_ex1(params, g);
        CHECK(std::abs(m1.u_star - a1) <= 1e-6);
        const double v1 = generator_apply(ex1, a1, probe(x, 0.0, g, H))
                          + ex1.running_cost(x, a1);
        CHECK(std::abs(m1.value - v1) <= 1e-10);

        const ControlMin m2 = hamiltonian_eval(ex2, probe(x, 0.0, g, H), 65);
        const double a2 = analytic_control_ex2(params, x, g, H);
        CHECK(std::abs(m2.u_star - a2) <= 1e-6);
        const double v2 = generator_apply(ex2, a2, probe(x, 0.0, g, H))
                          + ex2.running_cost(x, a2);
        CHECK(std::abs(m2.value - v2) <= 1e-10);
    }
}

TEST_CASE("control laws are Lipschitz with the predicted slopes") {
    const ExampleParams params = oracle::p1();
    const double dg = 1e-4;
    for (int i = 0; i < 300; ++i) {
        const double g = 8.0 * (rng::uniform(37, i) - 0.5);
        const double q1 = (analytic_control_ex1(params, g + dg)
                           - analytic_control_ex1(params, g)) / dg;
        CHECK(std::abs(q1) <= std::abs(params.theta_b) / 2.0 + 1e-9);
    }
    for (int i = 0; i < 300; ++i) {
        const double x = 2.0 * rng::uniform(41, 3 * i) - 1.0;
        const double g = 8.0 * (rng::uniform(41, 3 * i + 1) - 0.5);
        const double H = 60.0 * (rng::uniform(41, 3 * i + 2) - 0.5);
        const double in_g = (analytic_control_ex2(params, x, g + dg, H)
                             - analytic_control_ex2(params, x, g, H)) / dg;
        CHECK(std::abs(in_g) <= std::abs(params.theta_b) / 2.0 + 1e-9);
        const double in_h = (analytic_control_ex2(params, x, g, H + dg)
                             - analytic_control_ex2(params, x, g, H)) / dg;
        CHECK(std::abs(in_h) <= 0.25 * params.sigma_x * params.sigma_x * x * x + 1e-9);
    }
}

TEST_CASE("the Hamiltonian is midpoint-concave in (g, H)") {
    const ControlProblem ex2 = build_example2(oracle::p1());
    for (int i = 0; i < 300; ++i) {
        const double x = 2.0 * rng::uniform(43, 5 * i) - 1.0;
        const double g1 = 8.0 * (rng::uniform(43, 5 * i + 1) - 0.5);
        const double g2 = 8.0 * (rng::uniform(43, 5 * i + 2) - 0.5);
        const double h1 = 60.0 * (rng::uniform(43, 5 * i + 3) - 0.5);
        const double h2 = 60.0 * (rng::uniform(43, 5 * i + 4) - 0.5);
        const double ham1 = hamiltonian_eval(ex2, probe(x, 0, g1, h1), 65).value;
        const double ham2 = hamiltonian_eval(ex2, probe(x, 0, g2, h2), 65).value;
        const double mid = hamiltonian_eval(
            ex2, probe(x, 0, 0.5 * (g1 + g2), 0.5 * (h1 + h2)), 65).value;
        CHECK(mid >= 0.5 * (ham1 + ham2) - 1e-9);
    }
}

TEST_CASE("residual shift identity in the value argument") {
    const ControlProblem ex1 = build_example1(oracle::p1());
    for (double c : {0.1, 1.0, -2.5}) {
        const double base = hjb_residual(ex1, probe(0.3, 0.7, 0.2, -1.0), 65);
        const double shifted = hjb_residual(ex1, probe(0.3, 0.7 + c, 0.2, -1.0), 65);
        CHECK(shifted - base == doctest::Approx(ex1.discount * c).epsilon(1e-14));
    }
}

TEST_CASE("interior residual closed-form instances") {
    const ExampleParams params = oracle::p1();
    const ControlProblem constant = make_constant_cost_problem(params, 0.25);
    CHECK(std::abs(hjb_residual(constant, probe(0.2, 0.25, 0.0, 0.0), 65)) <= 1e-12);

    ExampleParams zero_boundary = params;
    zero_boundary.theta_e = 0.0;
    const ControlProblem ex1 = build_example1(zero_boundary);
    CHECK(std::abs(hjb_residual(ex1, probe(0.2, 0.0, 0.0, 0.0), 65)) <= 1e-12);
    CHECK(hjb_residual(ex1, probe(0.2, 1.0, 0.0, 0.0), 65)
          == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("boundary residual: exact Neumann data and the defect sign") {
    const ControlProblem ex1 = build_example1(oracle::p1());
    CHECK(std::abs(boundary_residual(ex1, 1.0, 0.2)) <= 1e-15);
    CHECK(std::abs(boundary_residual(ex1, -1.0, -0.2)) <= 1e-15);
    CHECK(boundary_residual(ex1, 1.0, 0.0) == doctest::Approx(-0.2).epsilon(1e-14));
    CHECK_THROWS_AS(boundary_residual(ex1, 0.5, 0.0), std::invalid_argument);
}

TEST_CASE("minimizer input validation") {
    CHECK_THROWS_AS(minimize_over_control([](double u) { return u; }, 0.0, 1.0, 1),
                    std::invalid_argument);
}
