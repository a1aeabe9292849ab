#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hjbr/simulate.hpp"

namespace hjbr {

struct McConfig {
    long n_paths = 10000;
    double dt = 1e-3;
    double horizon = 0.0;   // > 0: truncation time; 0: derive from epsilon
    double epsilon = 1e-4;  // truncation-bias target used when horizon == 0
    std::uint64_t seed = 42;
    int n_workers = 0;      // 0 = hardware / HJBR_THREADS
};

/// Monte Carlo estimate of the discounted cost, with the deterministic bound
/// on the bias introduced by truncating the infinite horizon at T.
struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    long n_paths = 0;
    double horizon = 0.0;
    double dt = 0.0;
    double tail_bound = 0.0;
    double local_time_constant = 0.0;  // sampled growth constant C-hat
    double sup_running_cost = 0.0;
    double sup_boundary_cost = 0.0;
    std::uint64_t seed = 0;
};

struct CostBounds {
    double sup_running_cost = 0.0;
    double sup_boundary_cost = 0.0;
};

/// Sampled sup-norms of the running and boundary costs over the
/// state-control box (grid scan; both costs are continuous and bounded).
CostBounds sample_cost_bounds(const ControlProblem& problem, int n_samples = 4096);

/// Truncation-bias bound at horizon T:
///   sup|L| e^(-beta T) / beta
///   + sup|h| C e^(-beta T) (1 + T + 1/beta),
/// the second term being sup|h| C beta Int_T^inf e^(-beta s)(1+s) ds with C
/// the sampled local-time growth constant. Strictly decreasing in T, -> 0.
double tail_bound_value(double beta, double sup_running_cost,
                        double sup_boundary_cost, double local_time_constant,
                        double T);

/// Smallest T with tail_bound_value(T) <= epsilon, by bisection to 1e-6
/// (0 when the bound at T = 0 is already below epsilon).
double truncation_horizon(const ControlProblem& problem, double epsilon,
                          double local_time_constant);

/// Sampled local-time growth constant: 95th percentile over paths of
/// l(T) / (1 + T).
double estimate_local_time_constant(const ControlProblem& problem,
                                    const Policy& policy, double x0,
                                    double horizon, double dt, long n_paths,
                                    std::uint64_t seed, int n_workers = 0);

/// Monte Carlo estimate of the discounted cost of the policy from x0.
/// Per step k the running cost uses the exact discount weight
/// (e^(-beta t_k) - e^(-beta t_{k+1})) / beta, so deterministic integrands
/// are integrated exactly; the boundary cost is charged as
/// e^(-beta t_k) h(x_next) dl_k with h evaluated at the projected point.
/// Aggregation is pairwise over the path index, so the result is bitwise
/// independent of the worker count.
McEstimate estimate_cost(const ControlProblem& problem, const Policy& policy,
                         double x0, const McConfig& config);

struct BestPolicy {
    double best_value = 0.0;
    std::size_t best_index = 0;
    std::vector<McEstimate> estimates;
};

/// Estimate every policy of the family with common random numbers (the same
/// seed) and return the minimum: an upper bound on the value function at x0
/// up to statistical error.
BestPolicy estimate_value(const ControlProblem& problem, double x0,
                          std::span<const Policy> family, const McConfig& config);

/// key = value summary of an estimate, one field per line.
std::string summary_record(const McEstimate& estimate, const std::string& label);

/// Deterministic fixed-tree pairwise sum (used for all MC aggregation).
double pairwise_sum(std::span<const double> values);

}  // namespace hjbr
