#include "hjbr/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hjbr/rng.hpp"

namespace hjbr {

void validate(const ExampleParams& params) {
    if (!(params.alpha > 0.0))
        throw std::invalid_argument("alpha: must be > 0");
    if (!(params.beta > 0.0))
        throw std::invalid_argument("beta: must be > 0");
    if (!(params.sigma_x > 0.0))
        throw std::invalid_argument("sigma_x: must be > 0");
    if (!(params.u_a < params.u_b))
        throw std::invalid_argument("u_a: must be < u_b");
    if (params.theta_b == 0.0)
        throw std::invalid_argument("theta_b: must be nonzero");
}

ControlProblem build_example1(const ExampleParams& params) {
    validate(params);
    ControlProblem p;
    p.domain = DomainSpec(params.alpha, 1);
    const double ta = params.theta_a, tb = params.theta_b;
    const double td = params.theta_d, te = params.theta_e;
    const double sx = params.sigma_x;
    p.drift = [ta, tb](double x, double u) { return ta * x - tb * u; };
    p.dispersion = [sx](double x, double) { return sx * x; };
    p.running_cost = [td](double, double u) { return (td - u) * (td - u); };
    p.boundary_cost = [te](double) { return te; };
    p.discount = params.beta;
    p.control_lo = params.u_a;
    p.control_hi = params.u_b;
    return p;
}

ControlProblem build_example2(const ExampleParams& params) {
    validate(params);
    if (params.u_a < 0.0)
        throw std::invalid_argument("u_a: must be >= 0 when the control enters the dispersion");
    ControlProblem p = build_example1(params);
    const double sx = params.sigma_x;
    p.dispersion = [sx](double x, double u) { return sx * std::sqrt(u) * x; };
    return p;
}

ControlProblem make_constant_cost_problem(const ExampleParams& params, double c) {
    ControlProblem p = build_example1(params);
    p.running_cost = [c](double, double) { return c; };
    p.boundary_cost = [](double) { return 0.0; };
    return p;
}

ValidationReport validate_problem(const ControlProblem& problem, int n_samples,
                                  std::uint64_t seed) {
    if (n_samples < 2) throw std::invalid_argument("n_samples: must be >= 2");

    ValidationReport report;
    report.n_samples = n_samples;
    const double a = problem.domain.alpha;
    const double lo = problem.control_lo, hi = problem.control_hi;

    auto record = [&report](double v, double& sup) {
        if (!std::isfinite(v)) {
            ++report.non_finite_count;
            return;
        }
        sup = std::max(sup, std::abs(v));
    };

    std::uint64_t k = 0;
    auto draw = [&] { return rng::uniform(seed, k++); };

    double x_prev = 0.0;
    bool have_prev = false;
    for (int i = 0; i < n_samples; ++i) {
        const double x = a * (2.0 * draw() - 1.0);
        const double u = lo + (hi - lo) * draw();

        const double mu = problem.drift(x, u);
        const double sg = problem.dispersion(x, u);
        const double lc = problem.running_cost(x, u);
        record(mu, report.sup_drift);
        record(sg, report.sup_dispersion);
        record(lc, report.sup_running_cost);

        if (have_prev && std::abs(x - x_prev) > 1e-12) {
            const double dx = std::abs(x - x_prev);
            auto quotient = [&](const ScalarField2& f) {
                return std::abs(f(x, u) - f(x_prev, u)) / dx;
            };
            record(quotient(problem.drift), report.lip_drift);
            record(quotient(problem.dispersion), report.lip_dispersion);
            record(quotient(problem.running_cost), report.lip_running_cost);
        }
        x_prev = x;
        have_prev = true;
    }

    record(problem.boundary_cost(-a), report.sup_boundary_cost);
    record(problem.boundary_cost(a), report.sup_boundary_cost);
    return report;
}

}  // namespace hjbr
