#include "hjbr/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <stdexcept>

namespace hjbr {

namespace {

void append_line(std::string& out, const char* fmt, ...) {
    char buf[256];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, args);
    va_end(args);
    out += buf;
    out += '\n';
}

}  // namespace

ResidualReport check_viscosity_residuals(const ControlProblem& problem,
                                         const ValueFunction& vf,
                                         double tol_interior, double tol_boundary,
                                         int n_grid_controls, bool audit_probes,
                                         int audit_samples,
                                         std::uint64_t audit_seed) {
    const Grid& grid = vf.grid;
    const int n = grid.n_nodes;
    ResidualReport report;
    report.tol_interior = tol_interior;
    report.tol_boundary = tol_boundary;
    report.details.reserve(static_cast<std::size_t>(n));

    for (int i = 0; i < n; ++i) {
        NodeResidual node;
        node.x = grid.nodes[static_cast<std::size_t>(i)];
        node.is_boundary = (i == 0 || i == n - 1);
        node.F = bellman_residual(problem, grid, vf.values, i, n_grid_controls);
        if (node.is_boundary) {
            const DerivativeProbe probe = boundary_probe(grid, vf.values, i != 0);
            node.gamma = boundary_residual(problem, node.x, probe.grad);
        } else if (std::abs(node.F) > report.interior_max_abs_residual) {
            report.interior_max_abs_residual = std::abs(node.F);
            report.worst_node_index = i;
            report.worst_node_x = node.x;
        }
        report.details.push_back(node);
    }

    const NodeResidual& lo = report.details.front();
    const NodeResidual& hi = report.details.back();
    report.boundary_sub_ok = std::min(lo.F, lo.gamma) <= tol_boundary
                             && std::min(hi.F, hi.gamma) <= tol_boundary;
    report.boundary_super_ok = std::max(lo.F, lo.gamma) >= -tol_boundary
                               && std::max(hi.F, hi.gamma) >= -tol_boundary;

    if (audit_probes) {
        // Quadratic test functions touching the candidate at each node: shifting
        // the curvature probe up touches from above (subsolution side), down
        // from below (supersolution side). Degenerate ellipticity makes F
        // monotone in the curvature, so these sampled probes must respect the
        // same inequalities as the base probe.
        std::uint64_t k = 0;
        for (int i = 1; i + 1 < n; ++i) {
            const std::size_t j = static_cast<std::size_t>(i);
            const double dx = grid.spacing;
            DerivativeProbe probe;
            probe.x = grid.nodes[j];
            probe.value = vf.values[j];
            probe.grad = (vf.values[j + 1] - vf.values[j - 1]) / (2.0 * dx);
            probe.hess = (vf.values[j + 1] - 2.0 * vf.values[j] + vf.values[j - 1])
                         / (dx * dx);
            const double base = hjb_residual(problem, probe, n_grid_controls);
            for (int s = 0; s < audit_samples; ++s) {
                const double shift = rng::uniform(audit_seed, k++) * (1.0 + std::abs(probe.hess));
                DerivativeProbe up = probe, down = probe;
                up.hess += shift;
                down.hess -= shift;
                const double f_up = hjb_residual(problem, up, n_grid_controls);
                const double f_down = hjb_residual(problem, down, n_grid_controls);
                if (f_up > base + 1e-12 || f_down < base - 1e-12) {
                    // ellipticity violated: flag via the interior residual
                    report.interior_max_abs_residual =
                        std::max(report.interior_max_abs_residual,
                                 std::max(f_up - base, base - f_down));
                    report.worst_node_index = i;
                    report.worst_node_x = probe.x;
                }
            }
        }
    }
    return report;
}

namespace {

struct DppAccumulation {
    double mean = 0.0;
    double std_error = 0.0;
};

// E[ int_0^t discounted running + boundary costs + e^(-beta t) v(X(t)) ]
// under the policy, with the same exact per-step discount weights as the
// cost estimator.
DppAccumulation dpp_rhs(const ControlProblem& problem, const ValueFunction& vf,
                        const Policy& policy, double x0, double t,
                        const McConfig& config) {
    const std::size_t n_steps = step_count(t, config.dt);
    const double beta = problem.discount;
    std::vector<double> weight(n_steps), discount(n_steps);
    for (std::size_t k = 0; k < n_steps; ++k) {
        const double t0 = static_cast<double>(k) * config.dt;
        const double t1 = (k + 1 == n_steps) ? t : t0 + config.dt;
        discount[k] = std::exp(-beta * t0);
        weight[k] = (discount[k] - std::exp(-beta * t1)) / beta;
    }
    const double terminal_discount = std::exp(-beta * t);

    std::vector<double> samples(static_cast<std::size_t>(config.n_paths));
    for (long i = 0; i < config.n_paths; ++i) {
        double acc = 0.0;
        double x_final = x0;
        run_reflected_euler(problem, policy, x0, t, config.dt,
                            rng::sub_seed(config.seed, static_cast<std::uint64_t>(i)),
                            [&](std::size_t k, double, double x, double u, double,
                                double, double x_next, double dl) {
                                acc += weight[k] * problem.running_cost(x, u);
                                if (dl > 0.0)
                                    acc += discount[k] * problem.boundary_cost(x_next) * dl;
                                x_final = x_next;
                            });
        samples[static_cast<std::size_t>(i)] =
            acc + terminal_discount * interpolate_value(vf, x_final);
    }

    DppAccumulation out;
    out.mean = pairwise_sum(samples) / static_cast<double>(config.n_paths);
    if (config.n_paths > 1) {
        std::vector<double> sq(samples.size());
        for (std::size_t i = 0; i < sq.size(); ++i) {
            const double d = samples[i] - out.mean;
            sq[i] = d * d;
        }
        out.std_error = std::sqrt(pairwise_sum(sq)
                                  / static_cast<double>(config.n_paths - 1)
                                  / static_cast<double>(config.n_paths));
    }
    return out;
}

}  // namespace

DppReport check_dpp(const ControlProblem& problem, const ValueFunction& vf,
                    double x0, double t, std::span<const Policy> family,
                    const McConfig& config, double discretization_budget,
                    double family_slack) {
    if (!contains(problem.domain, x0))
        throw std::invalid_argument("x0: must lie in the domain");
    if (!(t > 0.0)) throw std::invalid_argument("t: must be > 0");
    if (family.empty()) throw std::invalid_argument("policy family: must be non-empty");

    DppReport report;
    report.x0 = x0;
    report.t = t;
    report.lhs = interpolate_value(vf, x0);
    report.rhs_per_policy.reserve(family.size());
    for (std::size_t p = 0; p < family.size(); ++p) {
        const DppAccumulation acc = dpp_rhs(problem, vf, family[p], x0, t, config);
        report.rhs_per_policy.push_back(acc.mean);
        if (p == 0 || acc.mean < report.rhs_min) {
            report.rhs_min = acc.mean;
            report.best_policy_index = p;
            report.best_std_error = acc.std_error;
        }
    }
    report.gap = report.rhs_min - report.lhs;
    report.tolerance_lo = 3.0 * report.best_std_error + discretization_budget;
    report.tolerance_hi = report.tolerance_lo + family_slack;
    return report;
}

McPdeReport compare_mc_pde(const ControlProblem& problem, const ValueFunction& vf,
                           std::span<const double> points, const McConfig& config,
                           double tolerance, double scheme_budget) {
    McPdeReport report;
    report.tolerance = tolerance;
    report.scheme_budget = scheme_budget;
    const Policy policy = extract_policy(vf);
    for (double x : points) {
        if (!contains(problem.domain, x))
            throw std::invalid_argument("points: must lie in the domain");
        const McEstimate est = estimate_cost(problem, policy, x, config);
        McPdePoint p;
        p.x = x;
        p.pde_value = interpolate_value(vf, x);
        p.mc_value = est.mean;
        p.std_error = est.std_error;
        p.tail_bound = est.tail_bound;
        p.diff = p.pde_value - p.mc_value;
        p.within_tolerance = std::abs(p.diff) <= tolerance;
        p.upper_bound_ok =
            p.mc_value >= p.pde_value
                              - (3.0 * est.std_error + est.tail_bound + scheme_budget);
        report.points.push_back(p);
    }
    return report;
}

EquicontinuityReport check_equicontinuity(
    const ControlProblem& problem,
    std::span<const std::pair<double, double>> pairs, const Policy& policy,
    const McConfig& config) {
    EquicontinuityReport report;
    double sum_xy = 0.0, sum_xx = 0.0, max_se = 0.0, min_dist = 1.0;
    for (const auto& [x, y] : pairs) {
        const double dist = std::abs(x - y);
        if (dist < 1e-3)
            throw std::invalid_argument("pairs: |x - y| must be >= 1e-3");
        const McEstimate jx = estimate_cost(problem, policy, x, config);
        const McEstimate jy = estimate_cost(problem, policy, y, config);
        EquicontinuityReport::PairResult r;
        r.x = x;
        r.y = y;
        r.jx = jx.mean;
        r.jy = jy.mean;
        r.ratio = std::abs(jx.mean - jy.mean) / dist;
        report.pairs.push_back(r);
        report.max_ratio = std::max(report.max_ratio, r.ratio);
        sum_xy += std::abs(jx.mean - jy.mean) * dist;
        sum_xx += dist * dist;
        max_se = std::max(max_se, std::max(jx.std_error, jy.std_error));
        min_dist = std::min(min_dist, dist);
    }
    report.k_hat = sum_xx > 0.0 ? sum_xy / sum_xx : 0.0;
    report.slack = 6.0 * max_se / min_dist;
    return report;
}

std::string format_report(const ResidualReport& report) {
    std::string out;
    append_line(out, "check = viscosity_residuals");
    append_line(out, "pass = %d", report.pass() ? 1 : 0);
    append_line(out, "interior_max_abs_residual = %.17g",
                report.interior_max_abs_residual);
    append_line(out, "tol_interior = %.17g", report.tol_interior);
    append_line(out, "tol_boundary = %.17g", report.tol_boundary);
    append_line(out, "boundary_sub_ok = %d", report.boundary_sub_ok ? 1 : 0);
    append_line(out, "boundary_super_ok = %d", report.boundary_super_ok ? 1 : 0);
    append_line(out, "worst_node_index = %d", report.worst_node_index);
    append_line(out, "worst_node_x = %.17g", report.worst_node_x);
    const NodeResidual& lo = report.details.front();
    const NodeResidual& hi = report.details.back();
    append_line(out, "boundary_lo_F = %.17g", lo.F);
    append_line(out, "boundary_lo_gamma = %.17g", lo.gamma);
    append_line(out, "boundary_hi_F = %.17g", hi.F);
    append_line(out, "boundary_hi_gamma = %.17g", hi.gamma);
    return out;
}

std::string format_report(const DppReport& report) {
    std::string out;
    append_line(out, "check = dpp");
    append_line(out, "pass = %d", report.pass() ? 1 : 0);
    append_line(out, "x0 = %.17g", report.x0);
    append_line(out, "t = %.17g", report.t);
    append_line(out, "lhs = %.17g", report.lhs);
    append_line(out, "rhs_min = %.17g", report.rhs_min);
    append_line(out, "gap = %.17g", report.gap);
    append_line(out, "tolerance_lo = %.17g", report.tolerance_lo);
    append_line(out, "tolerance_hi = %.17g", report.tolerance_hi);
    append_line(out, "best_policy_index = %zu", report.best_policy_index);
    append_line(out, "best_std_error = %.17g", report.best_std_error);
    return out;
}

std::string format_report(const McPdeReport& report) {
    std::string out;
    append_line(out, "check = mc_vs_pde");
    append_line(out, "pass = %d", report.pass() ? 1 : 0);
    append_line(out, "tolerance = %.17g", report.tolerance);
    append_line(out, "scheme_budget = %.17g", report.scheme_budget);
    for (const auto& p : report.points) {
        append_line(out,
                    "point x=%.17g pde=%.17g mc=%.17g se=%.17g tail=%.17g diff=%.17g "
                    "within=%d upper_ok=%d",
                    p.x, p.pde_value, p.mc_value, p.std_error, p.tail_bound, p.diff,
                    p.within_tolerance ? 1 : 0, p.upper_bound_ok ? 1 : 0);
    }
    return out;
}

std::string format_report(const EquicontinuityReport& report) {
    std::string out;
    append_line(out, "check = equicontinuity");
    append_line(out, "pass = %d", report.pass() ? 1 : 0);
    append_line(out, "k_hat = %.17g", report.k_hat);
    append_line(out, "max_ratio = %.17g", report.max_ratio);
    append_line(out, "slack = %.17g", report.slack);
    for (const auto& p : report.pairs)
        append_line(out, "pair x=%.17g y=%.17g jx=%.17g jy=%.17g ratio=%.17g", p.x,
                    p.y, p.jx, p.jy, p.ratio);
    return out;
}

}  // namespace hjbr
