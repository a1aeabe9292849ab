#pragma once

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "hjbr/hamiltonian.hpp"
#include "hjbr/simulate.hpp"

namespace hjbr {

/// Uniform grid spanning the interval domain.
struct Grid {
    int n_nodes = 0;
    double x_lo = 0.0;
    double spacing = 0.0;
    std::vector<double> nodes;
};

Grid build_grid(const DomainSpec& domain, int n_nodes);

/// Discrete equation beta v - generator(v) - L = 0 at a fixed policy:
/// upwind first differences for the drift, central second differences for the
/// diffusion, and the Neumann condition imposed strongly at both endpoints by
/// second-order one-sided (3-point) rows. The matrix is tridiagonal except
/// for one extra band entry in each boundary row.
struct FixedPolicySystem {
    int n = 0;
    double dx = 0.0;
    std::vector<double> lower, diag, upper, rhs;
    double corner_lo = 0.0;  // entry (0, 2)
    double corner_hi = 0.0;  // entry (n-1, n-3)

    /// Direct banded elimination; the boundary corner entries are folded in
    /// during the forward sweep.
    std::vector<double> solve() const;

    /// Raw residual A v - b (boundary rows in unreduced 3-point form).
    std::vector<double> apply(std::span<const double> v) const;

    /// Diagonal-dominance margin |diag| - sum |off-diagonal| of row i, with
    /// the boundary rows in the tridiagonal-reduced form obtained by
    /// eliminating the corner entry against the adjacent interior row.
    double dominance_margin(int i) const;
};

FixedPolicySystem assemble_fixed_policy(const ControlProblem& problem,
                                        const Grid& grid,
                                        std::span<const double> policy);

struct SolverOptions {
    double tol = 1e-9;
    int max_iter = 200;
    int n_grid_controls = 65;
    /// Initial constant policy; NaN selects the control-interval midpoint.
    double initial_control = std::numeric_limits<double>::quiet_NaN();
};

struct ValueFunction {
    Grid grid;
    std::vector<double> values;
    std::vector<double> policy;
    int iterations = 0;
    double final_update_norm = 0.0;
};

struct ConvergenceTrace {
    std::vector<double> sup_updates;
};

/// Howard policy iteration: alternate the fixed-policy linear solve with a
/// pointwise control improvement, until the sup-norm update falls below tol
/// or the policy is stationary. Throws on max_iter without convergence.
ValueFunction policy_iteration(const ControlProblem& problem, const Grid& grid,
                               const SolverOptions& options,
                               ConvergenceTrace* trace = nullptr);

/// Feedback policy interpolating the nodal policy piecewise-linearly.
Policy extract_policy(const ValueFunction& vf);

/// Piecewise-linear interpolation of the nodal values at x.
double interpolate_value(const ValueFunction& vf, double x);

/// Pointwise minimization of the discrete Bellman operator at node i over the
/// control interval. Interior nodes upwind the first difference by the sign
/// of the drift at each candidate control; boundary nodes use one-sided
/// probes. Returns the minimal objective and its minimizer.
ControlMin improve_node(const ControlProblem& problem, const Grid& grid,
                        std::span<const double> v, int i, int n_grid_controls);

/// Discrete HJB residual beta v_i - min_u (objective at node i); zero at the
/// solver's own fixed points up to roundoff.
double bellman_residual(const ControlProblem& problem, const Grid& grid,
                        std::span<const double> v, int i, int n_grid_controls);

/// One-sided derivative probes at the two boundary nodes (second-order
/// 3-point gradient, the one matching the imposed Neumann rows).
DerivativeProbe boundary_probe(const Grid& grid, std::span<const double> v,
                               bool upper_end);

void write_value_csv(const std::string& path, const ValueFunction& vf,
                     const std::string& header);

void write_convergence_csv(const std::string& path, const ConvergenceTrace& trace,
                           const std::string& header);

}  // namespace hjbr
