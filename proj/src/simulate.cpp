#include "hjbr/simulate.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <thread>

namespace hjbr {

Policy Policy::constant(double u) {
    Policy p;
    p.kind_ = Kind::kConstant;
    p.u_ = u;
    return p;
}

Policy Policy::feedback(std::function<double(double)> f) {
    Policy p;
    p.kind_ = Kind::kFeedback;
    p.f_ = std::move(f);
    return p;
}

Policy Policy::piecewise_linear(double x_lo, double spacing,
                                std::vector<double> values) {
    if (values.size() < 2)
        throw std::invalid_argument("piecewise policy: need at least 2 nodes");
    if (!(spacing > 0.0))
        throw std::invalid_argument("piecewise policy: spacing must be > 0");
    Policy p;
    p.kind_ = Kind::kPiecewiseLinear;
    p.x_lo_ = x_lo;
    p.spacing_ = spacing;
    p.values_ = std::move(values);
    return p;
}

double Policy::operator()(double x) const {
    switch (kind_) {
        case Kind::kConstant:
            return u_;
        case Kind::kFeedback:
            return f_(x);
        case Kind::kPiecewiseLinear: {
            const double s = (x - x_lo_) / spacing_;
            const auto n = static_cast<long>(values_.size());
            const long nearest = std::lround(s);
            if (nearest >= 0 && nearest < n && std::abs(s - static_cast<double>(nearest)) < 1e-9)
                return values_[static_cast<std::size_t>(nearest)];
            long j = static_cast<long>(std::floor(s));
            j = std::clamp(j, 0l, n - 2);
            const double t = std::clamp(s - static_cast<double>(j), 0.0, 1.0);
            const double v0 = values_[static_cast<std::size_t>(j)];
            const double v1 = values_[static_cast<std::size_t>(j) + 1];
            return v0 + t * (v1 - v0);
        }
    }
    return u_;
}

StepResult euler_reflected_step(const ControlProblem& problem, double x, double u,
                                double dW, double dt) {
    const double predictor =
        x + problem.drift(x, u) * dt + problem.dispersion(x, u) * dW;
    const Projection1 proj = project_to_domain(problem.domain, predictor);
    return {proj.x, proj.dl};
}

std::size_t step_count(double horizon, double dt) {
    // The 1e-9 slack keeps exact multiples (e.g. 1 / 1e-3) from rounding up.
    return static_cast<std::size_t>(std::ceil(horizon / dt - 1e-9));
}

Trajectory simulate_path(const ControlProblem& problem, const Policy& policy,
                         double x0, double horizon, double dt, std::uint64_t seed) {
    const std::size_t n = step_count(horizon, dt);
    Trajectory traj;
    traj.times.reserve(n + 1);
    traj.states.reserve(n + 1);
    traj.local_time.reserve(n + 1);
    traj.controls.reserve(n);
    traj.noise_increments.reserve(n);
    traj.times.push_back(0.0);
    traj.states.push_back(x0);
    traj.local_time.push_back(0.0);

    run_reflected_euler(problem, policy, x0, horizon, dt, seed,
                        [&](std::size_t, double t, double, double u, double dt_k,
                            double dW, double x_next, double dl) {
                            traj.times.push_back(t + dt_k);
                            traj.states.push_back(x_next);
                            traj.local_time.push_back(traj.local_time.back() + dl);
                            traj.controls.push_back(u);
                            traj.noise_increments.push_back(dW);
                        });
    traj.times.back() = horizon;
    return traj;
}

int worker_count(int hint) {
    int n = hint > 0 ? hint : static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    if (const char* env = std::getenv("HJBR_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1) n = std::min(n, cap);
    }
    return n;
}

std::vector<Trajectory> simulate_batch(const ControlProblem& problem,
                                       const Policy& policy, double x0,
                                       double horizon, double dt, long n_paths,
                                       std::uint64_t seed, int n_workers) {
    if (n_paths < 1) throw std::invalid_argument("n_paths: must be >= 1");
    if (!contains(problem.domain, x0))
        throw std::invalid_argument("x0: must lie in the domain");

    std::vector<Trajectory> paths(static_cast<std::size_t>(n_paths));
    const int workers = std::min<long>(worker_count(n_workers), n_paths);

    auto run_range = [&](long begin, long end) {
        for (long i = begin; i < end; ++i)
            paths[static_cast<std::size_t>(i)] =
                simulate_path(problem, policy, x0, horizon, dt,
                              rng::sub_seed(seed, static_cast<std::uint64_t>(i)));
    };

    if (workers <= 1) {
        run_range(0, n_paths);
        return paths;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    const long chunk = (n_paths + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const long begin = w * chunk;
        const long end = std::min<long>(begin + chunk, n_paths);
        if (begin >= end) break;
        pool.emplace_back(run_range, begin, end);
    }
    for (auto& t : pool) t.join();
    return paths;
}

void write_trajectory_csv(const std::string& path, const Trajectory& trajectory,
                          const std::string& header) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "# " << header << "\n";
    out << "t,x,l,u\n";
    char line[160];
    for (std::size_t k = 0; k < trajectory.times.size(); ++k) {
        const double u = trajectory.controls.empty()
                             ? 0.0
                             : trajectory.controls[std::min(k, trajectory.controls.size() - 1)];
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n",
                      trajectory.times[k], trajectory.states[k],
                      trajectory.local_time[k], u);
        out << line;
    }
}

}  // namespace hjbr
