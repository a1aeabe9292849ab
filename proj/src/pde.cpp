#include "hjbr/pde.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace hjbr {

Grid build_grid(const DomainSpec& domain, int n_nodes) {
    if (domain.dim != 1)
        throw std::invalid_argument("grid: only the interval domain (dim = 1) is supported");
    if (n_nodes < 3) throw std::invalid_argument("n_nodes: must be >= 3");
    Grid g;
    g.n_nodes = n_nodes;
    g.x_lo = -domain.alpha;
    g.spacing = 2.0 * domain.alpha / (n_nodes - 1);
    g.nodes.resize(static_cast<std::size_t>(n_nodes));
    for (int i = 0; i < n_nodes; ++i) g.nodes[static_cast<std::size_t>(i)] = g.x_lo + i * g.spacing;
    g.nodes.back() = domain.alpha;
    return g;
}

FixedPolicySystem assemble_fixed_policy(const ControlProblem& problem,
                                        const Grid& grid,
                                        std::span<const double> policy) {
    const int n = grid.n_nodes;
    if (static_cast<int>(policy.size()) != n)
        throw std::invalid_argument("policy: length must equal n_nodes");

    FixedPolicySystem sys;
    sys.n = n;
    sys.dx = grid.spacing;
    sys.lower.assign(static_cast<std::size_t>(n), 0.0);
    sys.diag.assign(static_cast<std::size_t>(n), 0.0);
    sys.upper.assign(static_cast<std::size_t>(n), 0.0);
    sys.rhs.assign(static_cast<std::size_t>(n), 0.0);

    const double dx = grid.spacing;
    const double beta = problem.discount;

    for (int i = 1; i + 1 < n; ++i) {
        const std::size_t k = static_cast<std::size_t>(i);
        const double x = grid.nodes[k];
        const double u = policy[k];
        const double mu = problem.drift(x, u);
        const double sg = problem.dispersion(x, u);
        const double s = 0.5 * sg * sg / (dx * dx);
        const double ap = std::max(mu, 0.0) / dx;
        const double am = std::max(-mu, 0.0) / dx;
        sys.lower[k] = -(am + s);
        sys.diag[k] = beta + ap + am + 2.0 * s;
        sys.upper[k] = -(ap + s);
        sys.rhs[k] = problem.running_cost(x, u);
    }

    // Neumann rows: <grad v, grad phi> = h becomes v'(-alpha) = -h(-alpha)
    // and v'(alpha) = +h(alpha); imposed with the 3-point one-sided stencil.
    const double a = problem.domain.alpha;
    const double inv2dx = 1.0 / (2.0 * dx);
    sys.diag[0] = -3.0 * inv2dx;
    sys.upper[0] = 4.0 * inv2dx;
    sys.corner_lo = -inv2dx;
    sys.rhs[0] = -problem.boundary_cost(-a);

    const std::size_t last = static_cast<std::size_t>(n - 1);
    sys.diag[last] = 3.0 * inv2dx;
    sys.lower[last] = -4.0 * inv2dx;
    sys.corner_hi = inv2dx;
    sys.rhs[last] = problem.boundary_cost(a);

    return sys;
}

std::vector<double> FixedPolicySystem::solve() const {
    const int nn = n;
    std::vector<double> lo = lower, di = diag, up = upper, b = rhs;
    double c_lo = corner_lo;  // row 0, column 2
    double c_hi = corner_hi;  // row n-1, column n-3

    // Forward elimination. Row 0 (with its extra column-2 entry) is the first
    // pivot row; eliminating row 1's lower entry spreads the corner into
    // row 1's upper slot, after which the sweep is plain tridiagonal.
    if (std::abs(di[0]) < 1e-300) throw std::runtime_error("singular system (row 0)");
    {
        const double f = lo[1] / di[0];
        di[1] -= f * up[0];
        up[1] -= f * c_lo;
        b[1] -= f * b[0];
        lo[1] = 0.0;
    }
    for (int i = 2; i + 1 < nn; ++i) {
        if (std::abs(di[i - 1]) < 1e-300) throw std::runtime_error("singular system");
        const double f = lo[i] / di[i - 1];
        di[i] -= f * up[i - 1];
        b[i] -= f * b[i - 1];
        lo[i] = 0.0;
    }
    // Last row: fold the corner entry through the reduced row n-3, then the
    // lower entry through the reduced row n-2.
    {
        const int i = nn - 1;
        if (nn > 3) {
            const double f = c_hi / di[i - 2];
            lo[i] -= f * up[i - 2];
            b[i] -= f * b[i - 2];
            c_hi = 0.0;
        }
        if (nn == 3) {
            // corner coincides with column 0; eliminate with row 0 directly
            const double f0 = c_hi / di[0];
            lo[i] -= f0 * up[0];
            b[i] -= f0 * b[0];
            // the fold brought in row 0's own corner (column 2 = diagonal here)
            di[i] -= f0 * c_lo;
            c_hi = 0.0;
        }
        if (std::abs(di[i - 1]) < 1e-300) throw std::runtime_error("singular system");
        const double f = lo[i] / di[i - 1];
        di[i] -= f * up[i - 1];
        b[i] -= f * b[i - 1];
        lo[i] = 0.0;
        if (std::abs(di[i]) < 1e-300) throw std::runtime_error("singular system (last row)");
    }

    std::vector<double> v(static_cast<std::size_t>(nn));
    v[static_cast<std::size_t>(nn - 1)] = b[nn - 1] / di[nn - 1];
    for (int i = nn - 2; i >= 0; --i) {
        double r = b[i] - up[i] * v[static_cast<std::size_t>(i + 1)];
        if (i == 0) r -= c_lo * v[2];
        v[static_cast<std::size_t>(i)] = r / di[i];
    }
    return v;
}

std::vector<double> FixedPolicySystem::apply(std::span<const double> v) const {
    std::vector<double> r(static_cast<std::size_t>(n));
    r[0] = diag[0] * v[0] + upper[0] * v[1] + corner_lo * v[2] - rhs[0];
    for (int i = 1; i + 1 < n; ++i)
        r[static_cast<std::size_t>(i)] = lower[i] * v[i - 1] + diag[i] * v[i]
                                         + upper[i] * v[i + 1] - rhs[i];
    const int m = n - 1;
    r[static_cast<std::size_t>(m)] =
        corner_hi * v[m - 2] + lower[m] * v[m - 1] + diag[m] * v[m] - rhs[m];
    return r;
}

double FixedPolicySystem::dominance_margin(int i) const {
    if (i > 0 && i + 1 < n)
        return std::abs(diag[i]) - std::abs(lower[i]) - std::abs(upper[i]);
    if (i == 0) {
        if (upper[1] == 0.0)
            return std::abs(diag[0]) - std::abs(upper[0]) - std::abs(corner_lo);
        // reduce the corner against row 1: row0' = row0 - (corner_lo/upper[1]) row1
        const double f = corner_lo / upper[1];
        const double d = diag[0] - f * lower[1];
        const double u = upper[0] - f * diag[1];
        return std::abs(d) - std::abs(u);
    }
    if (lower[n - 2] == 0.0)
        return std::abs(diag[n - 1]) - std::abs(lower[n - 1]) - std::abs(corner_hi);
    const double f = corner_hi / lower[n - 2];
    const double d = diag[n - 1] - f * upper[n - 2];
    const double l = lower[n - 1] - f * diag[n - 2];
    return std::abs(d) - std::abs(l);
}

DerivativeProbe boundary_probe(const Grid& grid, std::span<const double> v,
                               bool upper_end) {
    const double dx = grid.spacing;
    DerivativeProbe probe;
    if (!upper_end) {
        probe.x = grid.nodes.front();
        probe.value = v[0];
        probe.grad = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * dx);
        probe.hess = (v[0] - 2.0 * v[1] + v[2]) / (dx * dx);
    } else {
        const std::size_t m = v.size() - 1;
        probe.x = grid.nodes.back();
        probe.value = v[m];
        probe.grad = (3.0 * v[m] - 4.0 * v[m - 1] + v[m - 2]) / (2.0 * dx);
        probe.hess = (v[m] - 2.0 * v[m - 1] + v[m - 2]) / (dx * dx);
    }
    return probe;
}

ControlMin improve_node(const ControlProblem& problem, const Grid& grid,
                        std::span<const double> v, int i, int n_grid_controls) {
    const double dx = grid.spacing;
    const std::size_t k = static_cast<std::size_t>(i);

    if (i == 0 || i == grid.n_nodes - 1) {
        const DerivativeProbe probe = boundary_probe(grid, v, i != 0);
        return hamiltonian_eval(problem, probe, n_grid_controls);
    }

    const double x = grid.nodes[k];
    const double fwd = (v[k + 1] - v[k]) / dx;
    const double bwd = (v[k] - v[k - 1]) / dx;
    const double hess = (v[k + 1] - 2.0 * v[k] + v[k - 1]) / (dx * dx);
    auto objective = [&](double u) {
        const double mu = problem.drift(x, u);
        const double sg = problem.dispersion(x, u);
        const double grad = (mu >= 0.0) ? fwd : bwd;
        return mu * grad + 0.5 * sg * sg * hess + problem.running_cost(x, u);
    };
    return minimize_over_control(objective, problem.control_lo, problem.control_hi,
                                 n_grid_controls);
}

double bellman_residual(const ControlProblem& problem, const Grid& grid,
                        std::span<const double> v, int i, int n_grid_controls) {
    return problem.discount * v[static_cast<std::size_t>(i)]
           - improve_node(problem, grid, v, i, n_grid_controls).value;
}

ValueFunction policy_iteration(const ControlProblem& problem, const Grid& grid,
                               const SolverOptions& options,
                               ConvergenceTrace* trace) {
    if (!(options.tol > 0.0)) throw std::invalid_argument("tol: must be > 0");
    if (options.max_iter < 1) throw std::invalid_argument("max_iter: must be >= 1");

    const std::size_t n = static_cast<std::size_t>(grid.n_nodes);
    const double u0 = std::isnan(options.initial_control)
                          ? 0.5 * (problem.control_lo + problem.control_hi)
                          : problem.clamp_control(options.initial_control);

    ValueFunction vf;
    vf.grid = grid;
    vf.policy.assign(n, u0);
    vf.values = assemble_fixed_policy(problem, grid, vf.policy).solve();

    for (int iter = 1; iter <= options.max_iter; ++iter) {
        std::vector<double> improved(n);
        for (int i = 0; i < grid.n_nodes; ++i)
            improved[static_cast<std::size_t>(i)] =
                improve_node(problem, grid, vf.values, i, options.n_grid_controls).u_star;

        if (improved == vf.policy) {
            vf.iterations = iter;
            vf.final_update_norm = 0.0;
            return vf;
        }
        vf.policy = std::move(improved);
        std::vector<double> next =
            assemble_fixed_policy(problem, grid, vf.policy).solve();
        double update = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            update = std::max(update, std::abs(next[i] - vf.values[i]));
        vf.values = std::move(next);
        vf.iterations = iter;
        vf.final_update_norm = update;
        if (trace) trace->sup_updates.push_back(update);
        if (update <= options.tol) return vf;
    }
    throw std::runtime_error("policy iteration: no convergence within max_iter");
}

Policy extract_policy(const ValueFunction& vf) {
    return Policy::piecewise_linear(vf.grid.x_lo, vf.grid.spacing, vf.policy);
}

double interpolate_value(const ValueFunction& vf, double x) {
    const Policy p = Policy::piecewise_linear(vf.grid.x_lo, vf.grid.spacing, vf.values);
    return p(x);
}

void write_value_csv(const std::string& path, const ValueFunction& vf,
                     const std::string& header) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "# " << header << "\n";
    out << "x,v,policy\n";
    char line[128];
    for (std::size_t i = 0; i < vf.values.size(); ++i) {
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", vf.grid.nodes[i],
                      vf.values[i], vf.policy[i]);
        out << line;
    }
}

void write_convergence_csv(const std::string& path, const ConvergenceTrace& trace,
                           const std::string& header) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "# " << header << "\n";
    out << "iteration,sup_update\n";
    char line[64];
    for (std::size_t i = 0; i < trace.sup_updates.size(); ++i) {
        std::snprintf(line, sizeof line, "%zu,%.17g\n", i + 1, trace.sup_updates[i]);
        out << line;
    }
}

}  // namespace hjbr
