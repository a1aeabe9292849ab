#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hjbr/model.hpp"
#include "hjbr/rng.hpp"

namespace hjbr {

/// Markovian control: a constant, a piecewise-linear nodal table on a uniform
/// grid, or an arbitrary callable. Evaluation is raw; simulation clamps the
/// output to the problem's control interval.
class Policy {
  public:
    static Policy constant(double u);
    static Policy feedback(std::function<double(double)> f);
    static Policy piecewise_linear(double x_lo, double spacing,
                                   std::vector<double> values);

    double operator()(double x) const;

  private:
    enum class Kind { kConstant, kPiecewiseLinear, kFeedback };

    Kind kind_ = Kind::kConstant;
    double u_ = 0.0;
    double x_lo_ = 0.0;
    double spacing_ = 1.0;
    std::vector<double> values_;
    std::function<double(double)> f_;
};

/// One sample path of the reflected controlled diffusion. All arrays are
/// indexed by time node; controls and noise increments belong to the step
/// leaving the node, so they have one entry less.
struct Trajectory {
    std::vector<double> times;
    std::vector<double> states;
    std::vector<double> local_time;        // non-decreasing, starts at 0
    std::vector<double> controls;
    std::vector<double> noise_increments;  // Brownian increments dW
};

struct StepResult {
    double x = 0.0;
    double dl = 0.0;
};

/// One projected Euler step: full Euler predictor, then projection onto the
/// domain; dl is the projection distance (the local-time increment).
StepResult euler_reflected_step(const ControlProblem& problem, double x, double u,
                                double dW, double dt);

/// Number of steps covering [0, horizon] with step dt (the last step may be
/// shorter so the final time lands on the horizon exactly).
std::size_t step_count(double horizon, double dt);

/// Core time loop shared by trajectory simulation and cost estimation. Calls
/// sink(k, t, x, u, dt_k, dW, x_next, dl) once per step. Noise is drawn from
/// the counter-based stream (seed, k), so the whole path is a pure function
/// of its arguments.
template <class Sink>
void run_reflected_euler(const ControlProblem& problem, const Policy& policy,
                         double x0, double horizon, double dt, std::uint64_t seed,
                         Sink&& sink) {
    if (!contains(problem.domain, x0))
        throw std::invalid_argument("x0: must lie in the domain");
    if (!(dt > 0.0)) throw std::invalid_argument("dt: must be > 0");
    if (!(horizon >= dt)) throw std::invalid_argument("horizon: must be >= dt");

    const std::size_t n = step_count(horizon, dt);
    double x = x0;
    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) * dt;
        const double dt_k = (k + 1 == n) ? horizon - t : dt;
        const double u = problem.clamp_control(policy(x));
        const double dW = std::sqrt(dt_k) * rng::normal(seed, k);
        const StepResult next = euler_reflected_step(problem, x, u, dW, dt_k);
        sink(k, t, x, u, dt_k, dW, next.x, next.dl);
        x = next.x;
    }
}

/// Simulate one path; noise generated deterministically from seed.
Trajectory simulate_path(const ControlProblem& problem, const Policy& policy,
                         double x0, double horizon, double dt, std::uint64_t seed);

/// Simulate n_paths paths; path i uses the sub-stream rng::sub_seed(seed, i).
/// The result is identical for any worker count.
std::vector<Trajectory> simulate_batch(const ControlProblem& problem,
                                       const Policy& policy, double x0,
                                       double horizon, double dt, long n_paths,
                                       std::uint64_t seed, int n_workers = 0);

/// Effective worker count: hint (or hardware concurrency when hint <= 0),
/// capped by the HJBR_THREADS environment variable when it is set.
int worker_count(int hint);

/// Trajectory dump with columns t,x,l,u beneath a parameter header line.
void write_trajectory_csv(const std::string& path, const Trajectory& trajectory,
                          const std::string& header);

}  // namespace hjbr
