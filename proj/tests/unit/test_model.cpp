#include <doctest.h>

#include <stdexcept>
#include <string>
#include <cmath>

#include "hjbr/model.hpp"
#include "oracles.hpp"

using namespace hjbr;

TEST_CASE("example 1 closed forms") {
    const ControlProblem p = build_example1(oracle::p1());
    CHECK(p.drift(0.4, 0.2) == doctest::Approx(-0.06).epsilon(1e-14));
    CHECK(p.running_cost(-0.7, 0.5) == 0.0);
    CHECK(p.running_cost(0.2, 0.5) == 0.0);
    CHECK(p.dispersion(0.5, 0.1) == doctest::Approx(0.15).epsilon(1e-14));
    CHECK(p.dispersion(0.5, 0.9) == doctest::Approx(0.15).epsilon(1e-14));
    CHECK(p.boundary_cost(1.0) == 0.2);
    CHECK(p.boundary_cost(-1.0) == 0.2);
}

TEST_CASE("example 2 dispersion carries the control") {
    const ControlProblem p = build_example2(oracle::p1());
    CHECK(p.dispersion(0.5, 0.25) == doctest::Approx(0.075).epsilon(1e-14));
    CHECK(p.dispersion(0.0, 0.7) == 0.0);
    CHECK(p.dispersion(0.0, 0.0) == 0.0);
}

TEST_CASE("example 2 rejects negative lower control bound") {
    ExampleParams params = oracle::p1();
    params.u_a = -0.1;
    CHECK_THROWS_AS(build_example2(params), std::invalid_argument);
    CHECK_NOTHROW(build_example1(params));
}

TEST_CASE("parameter invariants are enforced with named errors") {
    auto check_message = [](ExampleParams params, const char* needle) {
        try {
            validate(params);
            FAIL("expected invalid_argument");
        } catch (const std::invalid_argument& e) {
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };
    ExampleParams bad = oracle::p1();
    bad.beta = 0.0;
    check_message(bad, "beta");
    bad = oracle::p1();
    bad.theta_b = 0.0;
    check_message(bad, "theta_b");
    bad = oracle::p1();
    bad.u_a = 2.0;
    check_message(bad, "u_a");
    bad = oracle::p1();
    bad.sigma_x = -1.0;
    check_message(bad, "sigma_x");
}

TEST_CASE("validate_problem reports sampled bounds for example 1") {
    const ControlProblem p = build_example1(oracle::p1());
    const ValidationReport report = validate_problem(p, 4000, 7);
    CHECK(report.ok());
    // quadratic cost peaks at a control endpoint
    CHECK(report.sup_running_cost <= 0.25 + 1e-12);
    CHECK(report.sup_running_cost >= 0.2);
    // linear drift: every difference quotient equals theta_a
    CHECK(report.lip_drift == doctest::Approx(0.1).epsilon(1e-9));
    CHECK(report.lip_dispersion == doctest::Approx(0.3).epsilon(1e-9));
    CHECK(report.sup_boundary_cost == 0.2);
}

TEST_CASE("validate_problem flags non-finite model data") {
    ControlProblem p = build_example1(oracle::p1());
    p.running_cost = [](double x, double) { return 1.0 / x; };
    const ValidationReport report = validate_problem(p, 20000, 3);
    CHECK(report.sup_running_cost > 1.0);  // blows up near 0 even if finite
    ControlProblem q = build_example1(oracle::p1());
    q.running_cost = [](double x, double) { return std::log(x); };  // nan for x < 0
    CHECK_FALSE(validate_problem(q, 1000, 3).ok());
}

TEST_CASE("both examples validate cleanly across parameter draws") {
    for (int k = 0; k < 10; ++k) {
        ExampleParams params = oracle::p1();
        params.theta_a = -0.4 + 0.09 * k;
        params.theta_b = 0.2 + 0.1 * k;
        params.theta_e = 0.05 * k;
        params.sigma_x = 0.1 + 0.05 * k;
        CHECK(validate_problem(build_example1(params), 500, 101 + k).ok());
        CHECK(validate_problem(build_example2(params), 500, 202 + k).ok());
    }
}

TEST_CASE("validate_problem requires at least two samples") {
    const ControlProblem p = build_example1(oracle::p1());
    CHECK_THROWS_AS(validate_problem(p, 1, 3), std::invalid_argument);
}
