#include "hjbr/hamiltonian.hpp"

#include <cmath>
#include <stdexcept>

namespace hjbr {

double generator_apply(const ControlProblem& problem, double u,
                       const DerivativeProbe& probe) {
    const double mu = problem.drift(probe.x, u);
    const double sg = problem.dispersion(probe.x, u);
    return mu * probe.grad + 0.5 * sg * sg * probe.hess;
}

ControlMin minimize_over_control(const std::function<double(double)>& objective,
                                 double lo, double hi, int n_grid) {
    if (n_grid < 2) throw std::invalid_argument("n_grid: must be >= 2");
    if (!(lo < hi)) throw std::invalid_argument("control interval: lo must be < hi");

    const double step = (hi - lo) / (n_grid - 1);
    int best = 0;
    double best_value = objective(lo);
    for (int i = 1; i < n_grid; ++i) {
        const double u = (i == n_grid - 1) ? hi : lo + i * step;
        const double v = objective(u);
        if (v < best_value) {
            best_value = v;
            best = i;
        }
    }

    // Golden-section refinement on the bracket around the grid minimum.
    double a = (best == 0) ? lo : lo + (best - 1) * step;
    double b = (best == n_grid - 1) ? hi : lo + (best + 1) * step;
    constexpr double kInvPhi = 0.6180339887498948482;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = objective(c);
    double fd = objective(d);
    for (int it = 0; it < 200 && (b - a) > 1e-13 * (1.0 + hi - lo); ++it) {
        if (fc <= fd) {  // keep the left side on ties
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = objective(d);
        }
    }

    ControlMin result{best_value, (best == n_grid - 1) ? hi : lo + best * step};
    auto consider = [&](double u, double v) {
        if (v < result.value || (v == result.value && u < result.u_star)) {
            result.value = v;
            result.u_star = u;
        }
    };
    consider(a, objective(a));
    consider(b, objective(b));
    consider(c, fc);
    consider(d, fd);
    return result;
}

ControlMin hamiltonian_eval(const ControlProblem& problem,
                            const DerivativeProbe& probe, int n_grid) {
    auto objective = [&](double u) {
        return generator_apply(problem, u, probe) + problem.running_cost(probe.x, u);
    };
    return minimize_over_control(objective, problem.control_lo, problem.control_hi,
                                 n_grid);
}

namespace {

double clamp(double u, double lo, double hi) {
    if (u < lo) return lo;
    if (u > hi) return hi;
    return u;
}

}  // namespace

double analytic_control_ex1(const ExampleParams& params, double grad) {
    if (params.theta_b == 0.0)
        throw std::invalid_argument("theta_b: must be nonzero");
    const double f = 2.0 * params.theta_d + params.theta_b * grad;
    return clamp(0.5 * f, params.u_a, params.u_b);
}

double analytic_control_ex2(const ExampleParams& params, double x, double grad,
                            double hess) {
    if (params.theta_b == 0.0)
        throw std::invalid_argument("theta_b: must be nonzero");
    if (params.u_a < 0.0)
        throw std::invalid_argument("u_a: must be >= 0 when the control enters the dispersion");
    const double f = 2.0 * params.theta_d + params.theta_b * grad
                     - 0.5 * params.sigma_x * params.sigma_x * x * x * hess;
    return clamp(0.5 * f, params.u_a, params.u_b);
}

double hjb_residual(const ControlProblem& problem, const DerivativeProbe& probe,
                    int n_grid) {
    return problem.discount * probe.value - hamiltonian_eval(problem, probe, n_grid).value;
}

double boundary_residual(const ControlProblem& problem, double x, double grad) {
    if (boundary_distance(problem.domain, x) > 1e-9)
        throw std::invalid_argument("x: must lie on the boundary (distance <= 1e-9)");
    return grad * phi_grad1(problem.domain, x) - problem.boundary_cost(x);
}

}  // namespace hjbr
