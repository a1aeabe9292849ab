#pragma once

#include <functional>

#include "hjbr/model.hpp"

namespace hjbr {

/// Candidate value, gradient and Hessian of a smooth test function at x.
struct DerivativeProbe {
    double x = 0.0;
    double value = 0.0;  // r
    double grad = 0.0;   // g
    double hess = 0.0;   // H
};

/// Generator of the controlled diffusion applied to the probe:
/// mu(x,u) g + (1/2) sigma(x,u)^2 H.
double generator_apply(const ControlProblem& problem, double u,
                       const DerivativeProbe& probe);

struct ControlMin {
    double value = 0.0;   // minimal objective value
    double u_star = 0.0;  // minimizer; ties broken toward the smaller control
};

/// Minimize a scalar objective over [lo, hi]: coarse scan on an n_grid-point
/// uniform grid, then golden-section refinement on the bracketing interval.
ControlMin minimize_over_control(const std::function<double(double)>& objective,
                                 double lo, double hi, int n_grid);

/// Hamiltonian at the probe: inf over admissible controls of
/// generator_apply + running cost, with the minimizing control.
ControlMin hamiltonian_eval(const ControlProblem& problem,
                            const DerivativeProbe& probe, int n_grid);

/// Closed-form minimizer for the semilinear example:
/// u* = clamp((2 theta_d + theta_b g) / 2, u_a, u_b).
double analytic_control_ex1(const ExampleParams& params, double grad);

/// Closed-form minimizer when the control enters the dispersion:
/// u* = clamp((2 theta_d + theta_b g - sigma_x^2 x^2 H / 2) / 2, u_a, u_b).
/// At x = 0 this coincides exactly with analytic_control_ex1.
double analytic_control_ex2(const ExampleParams& params, double x, double grad,
                            double hess);

/// Interior residual F(x, r, g, H) = beta r - Hamiltonian(x, g, H).
double hjb_residual(const ControlProblem& problem, const DerivativeProbe& probe,
                    int n_grid);

/// Signed Neumann defect Gamma(x, g) = g . grad phi(x) - h(x) at a boundary
/// point; throws if x is farther than 1e-9 from the boundary.
double boundary_residual(const ControlProblem& problem, double x, double grad);

}  // namespace hjbr
