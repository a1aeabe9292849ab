#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hjbr/estimate.hpp"
#include "hjbr/pde.hpp"

namespace hjbr {

/// Discrete surrogate of the sub/supersolution conditions: at interior nodes
/// the residual F built from the scheme's own probes, at boundary nodes the
/// pair (F, Gamma) checked through min(F, Gamma) <= tol and
/// max(F, Gamma) >= -tol.
struct NodeResidual {
    double x = 0.0;
    double F = 0.0;
    double gamma = 0.0;  // meaningful at the two boundary nodes only
    bool is_boundary = false;
};

struct ResidualReport {
    double interior_max_abs_residual = 0.0;
    bool boundary_sub_ok = false;    // min(F, Gamma) <= tol at both ends
    bool boundary_super_ok = false;  // max(F, Gamma) >= -tol at both ends
    int worst_node_index = -1;
    double worst_node_x = 0.0;
    double tol_interior = 0.0;
    double tol_boundary = 0.0;
    std::vector<NodeResidual> details;

    bool pass() const {
        return interior_max_abs_residual <= tol_interior && boundary_sub_ok
               && boundary_super_ok;
    }
};

/// Residual check of a converged value function. With audit_probes set, each
/// node is additionally tested against sampled quadratic test functions
/// touching the candidate from above and below (curvature-shifted probes).
ResidualReport check_viscosity_residuals(const ControlProblem& problem,
                                         const ValueFunction& vf,
                                         double tol_interior, double tol_boundary,
                                         int n_grid_controls = 65,
                                         bool audit_probes = false,
                                         int audit_samples = 16,
                                         std::uint64_t audit_seed = 1);

/// One dynamic-programming consistency check at a deterministic time t:
/// rhs(policy) = E[ int_0^t discounted costs + e^(-beta t) v(X(t)) ],
/// gap = min over the family of rhs - v(x0).
struct DppReport {
    double x0 = 0.0;
    double t = 0.0;
    double lhs = 0.0;
    double rhs_min = 0.0;
    double gap = 0.0;
    double tolerance_lo = 0.0;  // pass when gap >= -tolerance_lo
    double tolerance_hi = 0.0;  // ... and gap <= +tolerance_hi
    std::size_t best_policy_index = 0;
    double best_std_error = 0.0;
    std::vector<double> rhs_per_policy;

    bool pass() const { return gap >= -tolerance_lo && gap <= tolerance_hi; }
};

DppReport check_dpp(const ControlProblem& problem, const ValueFunction& vf,
                    double x0, double t, std::span<const Policy> family,
                    const McConfig& config, double discretization_budget,
                    double family_slack);

/// Two-route agreement at a set of points: PDE value vs the Monte Carlo cost
/// of the extracted feedback policy (an upper bound on the value function).
struct McPdePoint {
    double x = 0.0;
    double pde_value = 0.0;
    double mc_value = 0.0;
    double std_error = 0.0;
    double tail_bound = 0.0;
    double diff = 0.0;  // pde - mc
    bool within_tolerance = false;
    bool upper_bound_ok = false;  // mc >= pde - (3 SE + tail + budget)
};

struct McPdeReport {
    std::vector<McPdePoint> points;
    double tolerance = 0.0;
    double scheme_budget = 0.0;

    bool pass() const {
        for (const auto& p : points)
            if (!p.within_tolerance || !p.upper_bound_ok) return false;
        return !points.empty();
    }
};

McPdeReport compare_mc_pde(const ControlProblem& problem, const ValueFunction& vf,
                           std::span<const double> points, const McConfig& config,
                           double tolerance, double scheme_budget);

/// Statistical equicontinuity of x -> J(x) under a fixed policy with common
/// random numbers: difference quotients over the given pairs stay bounded by
/// a common sampled constant. Pairs closer than 1e-3 are rejected.
struct EquicontinuityReport {
    struct PairResult {
        double x = 0.0, y = 0.0;
        double jx = 0.0, jy = 0.0;
        double ratio = 0.0;
    };
    std::vector<PairResult> pairs;
    double k_hat = 0.0;      // least-squares slope of |dJ| against |dx|
    double max_ratio = 0.0;
    double slack = 0.0;      // statistical allowance from the std errors

    bool pass() const { return max_ratio <= 1.5 * k_hat + slack; }
};

EquicontinuityReport check_equicontinuity(
    const ControlProblem& problem,
    std::span<const std::pair<double, double>> pairs, const Policy& policy,
    const McConfig& config);

std::string format_report(const ResidualReport& report);
std::string format_report(const DppReport& report);
std::string format_report(const McPdeReport& report);
std::string format_report(const EquicontinuityReport& report);

}  // namespace hjbr
