#include "hjbr/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

namespace hjbr {

double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 8) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.subspan(0, half)) + pairwise_sum(values.subspan(half));
}

CostBounds sample_cost_bounds(const ControlProblem& problem, int n_samples) {
    if (n_samples < 4) throw std::invalid_argument("n_samples: must be >= 4");
    const double a = problem.domain.alpha;
    const int m = static_cast<int>(std::sqrt(static_cast<double>(n_samples)));
    CostBounds bounds;
    for (int i = 0; i <= m; ++i) {
        const double x = -a + 2.0 * a * i / m;
        for (int j = 0; j <= m; ++j) {
            const double u = problem.control_lo
                             + (problem.control_hi - problem.control_lo) * j / m;
            bounds.sup_running_cost =
                std::max(bounds.sup_running_cost, std::abs(problem.running_cost(x, u)));
        }
    }
    bounds.sup_boundary_cost = std::max(std::abs(problem.boundary_cost(-a)),
                                        std::abs(problem.boundary_cost(a)));
    return bounds;
}

double tail_bound_value(double beta, double sup_running_cost,
                        double sup_boundary_cost, double local_time_constant,
                        double T) {
    const double decay = std::exp(-beta * T);
    return sup_running_cost * decay / beta
           + sup_boundary_cost * local_time_constant * decay * (1.0 + T + 1.0 / beta);
}

double truncation_horizon(const ControlProblem& problem, double epsilon,
                          double local_time_constant) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon: must be > 0");
    const CostBounds bounds = sample_cost_bounds(problem);
    auto tail = [&](double T) {
        return tail_bound_value(problem.discount, bounds.sup_running_cost,
                                bounds.sup_boundary_cost, local_time_constant, T);
    };
    if (tail(0.0) <= epsilon) return 0.0;
    double lo = 0.0, hi = 1.0;
    while (tail(hi) > epsilon) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e9) throw std::runtime_error("truncation horizon search diverged");
    }
    while (hi - lo > 1e-6) {
        const double mid = 0.5 * (lo + hi);
        (tail(mid) <= epsilon ? hi : lo) = mid;
    }
    return hi;
}

namespace {

// Per-path partial results, filled by index so aggregation order is fixed.
struct PathOutputs {
    std::vector<double> cost;
    std::vector<double> terminal_local_time;
};

PathOutputs run_paths(const ControlProblem& problem, const Policy& policy,
                      double x0, double horizon, double dt, long n_paths,
                      std::uint64_t seed, int n_workers) {
    const std::size_t n_steps = step_count(horizon, dt);
    const double beta = problem.discount;

    // Discount tables shared by all paths: exact step weight for the running
    // cost and the step-start discount factor for the boundary term.
    std::vector<double> weight(n_steps), discount(n_steps);
    for (std::size_t k = 0; k < n_steps; ++k) {
        const double t0 = static_cast<double>(k) * dt;
        const double t1 = (k + 1 == n_steps) ? horizon : t0 + dt;
        discount[k] = std::exp(-beta * t0);
        weight[k] = (discount[k] - std::exp(-beta * t1)) / beta;
    }

    PathOutputs out;
    out.cost.resize(static_cast<std::size_t>(n_paths));
    out.terminal_local_time.resize(static_cast<std::size_t>(n_paths));

    auto run_range = [&](long begin, long end) {
        for (long i = begin; i < end; ++i) {
            double cost = 0.0;
            double local_time = 0.0;
            run_reflected_euler(
                problem, policy, x0, horizon, dt,
                rng::sub_seed(seed, static_cast<std::uint64_t>(i)),
                [&](std::size_t k, double, double x, double u, double, double,
                    double x_next, double dl) {
                    cost += weight[k] * problem.running_cost(x, u);
                    if (dl > 0.0) {
                        cost += discount[k] * problem.boundary_cost(x_next) * dl;
                        local_time += dl;
                    }
                });
            out.cost[static_cast<std::size_t>(i)] = cost;
            out.terminal_local_time[static_cast<std::size_t>(i)] = local_time;
        }
    };

    const int workers = static_cast<int>(std::min<long>(worker_count(n_workers), n_paths));
    if (workers <= 1) {
        run_range(0, n_paths);
    } else {
        std::vector<std::thread> pool;
        const long chunk = (n_paths + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const long begin = w * chunk;
            const long end = std::min<long>(begin + chunk, n_paths);
            if (begin >= end) break;
            pool.emplace_back(run_range, begin, end);
        }
        for (auto& t : pool) t.join();
    }
    return out;
}

double percentile95(std::vector<double> values) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    const std::size_t idx = static_cast<std::size_t>(
        std::min<double>(std::ceil(0.95 * values.size()) - 1.0,
                         static_cast<double>(values.size() - 1)));
    return values[std::max<std::size_t>(idx, 0)];
}

}  // namespace

double estimate_local_time_constant(const ControlProblem& problem,
                                    const Policy& policy, double x0,
                                    double horizon, double dt, long n_paths,
                                    std::uint64_t seed, int n_workers) {
    PathOutputs out =
        run_paths(problem, policy, x0, horizon, dt, n_paths, seed, n_workers);
    for (double& l : out.terminal_local_time) l /= (1.0 + horizon);
    return percentile95(std::move(out.terminal_local_time));
}

McEstimate estimate_cost(const ControlProblem& problem, const Policy& policy,
                         double x0, const McConfig& config) {
    if (config.n_paths < 1) throw std::invalid_argument("n_paths: must be >= 1");
    if (!(config.dt > 0.0)) throw std::invalid_argument("dt: must be > 0");
    if (!contains(problem.domain, x0))
        throw std::invalid_argument("x0: must lie in the domain");

    double horizon = config.horizon;
    double pilot_constant = 0.0;
    if (!(horizon > 0.0)) {
        // Pilot batch to sample the local-time growth constant, then invert
        // the tail bound for the horizon.
        const long pilot = std::min<long>(config.n_paths, 256);
        pilot_constant = estimate_local_time_constant(
            problem, policy, x0, 8.0, config.dt, pilot,
            rng::sub_seed(config.seed, 0x70696c6f74ull), config.n_workers);
        horizon = truncation_horizon(problem, config.epsilon, pilot_constant);
        horizon = std::max(horizon, config.dt);
    }

    const PathOutputs out = run_paths(problem, policy, x0, horizon, config.dt,
                                      config.n_paths, config.seed, config.n_workers);

    McEstimate est;
    est.n_paths = config.n_paths;
    est.horizon = horizon;
    est.dt = config.dt;
    est.seed = config.seed;
    est.mean = pairwise_sum(out.cost) / static_cast<double>(config.n_paths);
    if (config.n_paths > 1) {
        std::vector<double> sq(out.cost.size());
        for (std::size_t i = 0; i < sq.size(); ++i) {
            const double d = out.cost[i] - est.mean;
            sq[i] = d * d;
        }
        const double var = pairwise_sum(sq) / static_cast<double>(config.n_paths - 1);
        est.std_error = std::sqrt(var / static_cast<double>(config.n_paths));
    }

    std::vector<double> scaled = out.terminal_local_time;
    for (double& l : scaled) l /= (1.0 + horizon);
    est.local_time_constant = percentile95(std::move(scaled));

    const CostBounds bounds = sample_cost_bounds(problem);
    est.sup_running_cost = bounds.sup_running_cost;
    est.sup_boundary_cost = bounds.sup_boundary_cost;
    est.tail_bound = tail_bound_value(problem.discount, bounds.sup_running_cost,
                                      bounds.sup_boundary_cost,
                                      est.local_time_constant, horizon);
    return est;
}

BestPolicy estimate_value(const ControlProblem& problem, double x0,
                          std::span<const Policy> family, const McConfig& config) {
    if (family.empty()) throw std::invalid_argument("policy family: must be non-empty");
    BestPolicy best;
    best.estimates.reserve(family.size());
    for (std::size_t i = 0; i < family.size(); ++i) {
        // Common random numbers: every policy reuses the same seed.
        best.estimates.push_back(estimate_cost(problem, family[i], x0, config));
        if (i == 0 || best.estimates[i].mean < best.best_value) {
            best.best_value = best.estimates[i].mean;
            best.best_index = i;
        }
    }
    return best;
}

std::string summary_record(const McEstimate& estimate, const std::string& label) {
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "label = %s\n"
                  "mean = %.17g\n"
                  "std_error = %.17g\n"
                  "n_paths = %ld\n"
                  "horizon = %.17g\n"
                  "dt = %.17g\n"
                  "tail_bound = %.17g\n"
                  "local_time_constant = %.17g\n"
                  "sup_running_cost = %.17g\n"
                  "sup_boundary_cost = %.17g\n"
                  "seed = %llu\n",
                  label.c_str(), estimate.mean, estimate.std_error, estimate.n_paths,
                  estimate.horizon, estimate.dt, estimate.tail_bound,
                  estimate.local_time_constant, estimate.sup_running_cost,
                  estimate.sup_boundary_cost,
                  static_cast<unsigned long long>(estimate.seed));
    return buf;
}

}  // namespace hjbr
