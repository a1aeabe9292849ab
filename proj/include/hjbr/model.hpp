#pragma once

#include <cstdint>
#include <functional>

#include "hjbr/geometry.hpp"

namespace hjbr {

using ScalarField2 = std::function<double(double x, double u)>;
using BoundaryCost = std::function<double(double x)>;

/// Discounted control problem on the interval domain: controlled drift and
/// dispersion, running cost in the interior, preventive cost charged against
/// the local time on the boundary, controls restricted to a compact interval.
/// Immutable after construction; all callables are pure.
struct ControlProblem {
    DomainSpec domain{1.0, 1};
    ScalarField2 drift;         // mu(x, u)
    ScalarField2 dispersion;    // sigma(x, u)
    ScalarField2 running_cost;  // L(x, u)
    BoundaryCost boundary_cost; // h(x), x on the boundary
    double discount = 1.0;      // beta > 0
    double control_lo = 0.0;
    double control_hi = 1.0;

    double clamp_control(double u) const {
        if (u < control_lo) return control_lo;
        if (u > control_hi) return control_hi;
        return u;
    }
};

/// Parameters of the two built-in example problems.
struct ExampleParams {
    double theta_a = 0.0;
    double theta_b = 1.0;
    double theta_d = 0.0;
    double theta_e = 0.0;
    double sigma_x = 1.0;
    double u_a = 0.0;
    double u_b = 1.0;
    double alpha = 1.0;
    double beta = 1.0;
};

/// Throws std::invalid_argument naming the offending field and constraint.
void validate(const ExampleParams& params);

/// Semilinear example: mu = theta_a x - theta_b u, sigma = sigma_x x,
/// L = (theta_d - u)^2, h = theta_e on both endpoints.
ControlProblem build_example1(const ExampleParams& params);

/// Fully nonlinear example: the control enters the dispersion,
/// sigma = sigma_x sqrt(u) x. Requires u_a >= 0.
ControlProblem build_example2(const ExampleParams& params);

/// Example-1 dynamics with the running cost replaced by the constant c and
/// zero boundary cost. Its value function is exactly c / beta, which makes it
/// the standard exactness fixture.
ControlProblem make_constant_cost_problem(const ExampleParams& params, double c);

/// Sampled sup-norms and difference-quotient Lipschitz ratios of the problem
/// data over the state-control box. Report only; non-finite samples are
/// counted, not thrown.
struct ValidationReport {
    double sup_drift = 0.0;
    double sup_dispersion = 0.0;
    double sup_running_cost = 0.0;
    double sup_boundary_cost = 0.0;
    double lip_drift = 0.0;
    double lip_dispersion = 0.0;
    double lip_running_cost = 0.0;
    int non_finite_count = 0;
    int n_samples = 0;

    bool ok() const { return non_finite_count == 0; }
};

ValidationReport validate_problem(const ControlProblem& problem, int n_samples,
                                  std::uint64_t seed);

}  // namespace hjbr
