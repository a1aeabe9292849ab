#include "hjbr/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "hjbr/estimate.hpp"
#include "hjbr/pde.hpp"
#include "hjbr/verify.hpp"

namespace hjbr {

namespace {

namespace fs = std::filesystem;

void write_text(const fs::path& path, const std::string& header,
                const std::string& body) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    out << "# " << header << "\n" << body;
}

ValueFunction solve_value_function(const RunConfig& config,
                                   const ControlProblem& problem,
                                   ConvergenceTrace* trace = nullptr) {
    const Grid grid = build_grid(problem.domain, config.n_nodes);
    SolverOptions options;
    options.tol = config.tol;
    options.max_iter = config.max_iter;
    options.n_grid_controls = config.n_grid_controls;
    return policy_iteration(problem, grid, options, trace);
}

McConfig mc_config(const RunConfig& config) {
    McConfig mc;
    mc.n_paths = config.n_paths;
    mc.dt = config.dt;
    mc.horizon = config.horizon;
    mc.epsilon = config.epsilon;
    mc.seed = config.seed;
    return mc;
}

int run_solve(const RunConfig& config, const fs::path& dir) {
    const ControlProblem problem = build_problem(config);
    ConvergenceTrace trace;
    const ValueFunction vf = solve_value_function(config, problem, &trace);
    write_value_csv((dir / "value.csv").string(), vf, config_header(config));
    write_convergence_csv((dir / "convergence.csv").string(), trace,
                          config_header(config));
    std::cout << "solve: converged in " << vf.iterations
              << " iterations, final update " << vf.final_update_norm << "\n";
    return 0;
}

int run_simulate(const RunConfig& config, const fs::path& dir) {
    const ControlProblem problem = build_problem(config);
    const ValueFunction vf = solve_value_function(config, problem);
    const Policy policy = extract_policy(vf);
    double horizon = config.horizon;
    if (!(horizon > 0.0)) {
        const double c_hat = estimate_local_time_constant(
            problem, policy, 0.0, 8.0, config.dt, std::min<long>(config.n_paths, 256),
            rng::sub_seed(config.seed, 0x70696c6f74ull));
        horizon = std::max(truncation_horizon(problem, config.epsilon, c_hat),
                           config.dt);
    }
    // one file per path, written as simulated so memory stays per-path
    char name[64];
    for (long i = 0; i < config.n_paths; ++i) {
        const Trajectory path =
            simulate_path(problem, policy, 0.0, horizon, config.dt,
                          rng::sub_seed(config.seed, static_cast<std::uint64_t>(i)));
        std::snprintf(name, sizeof name, "path_%04ld.csv", i);
        write_trajectory_csv((dir / name).string(), path, config_header(config));
    }
    std::cout << "simulate: wrote " << config.n_paths << " trajectories (horizon "
              << horizon << ")\n";
    return 0;
}

int run_estimate(const RunConfig& config, const fs::path& dir) {
    const ControlProblem problem = build_problem(config);
    const ValueFunction vf = solve_value_function(config, problem);
    const std::vector<Policy> family = {
        extract_policy(vf),
        Policy::constant(problem.control_lo),
        Policy::constant(problem.control_hi),
        Policy::constant(config.params.theta_d),
    };
    static const char* kLabels[] = {"extracted", "u_lo", "u_hi", "theta_d"};
    const BestPolicy best = estimate_value(problem, 0.0, family, mc_config(config));
    std::string body;
    for (std::size_t i = 0; i < best.estimates.size(); ++i) {
        body += summary_record(best.estimates[i], kLabels[i]);
        body += "\n";
    }
    char tail[128];
    std::snprintf(tail, sizeof tail, "best_index = %zu\nbest_value = %.17g\n",
                  best.best_index, best.best_value);
    body += tail;
    write_text(dir / "estimate.txt", config_header(config), body);
    std::cout << "estimate: best value " << best.best_value << " (policy "
              << kLabels[best.best_index] << ")\n";
    return 0;
}

int run_verify(const RunConfig& config, const fs::path& dir) {
    const ControlProblem problem = build_problem(config);
    const ValueFunction vf = solve_value_function(config, problem);
    const double alpha = problem.domain.alpha;
    const McConfig mc = mc_config(config);
    bool ok = true;

    double sup_v = 0.0;
    for (double v : vf.values) sup_v = std::max(sup_v, std::abs(v));
    const ResidualReport residuals = check_viscosity_residuals(
        problem, vf, 1e-6 * (1.0 + sup_v), 1e-6, config.n_grid_controls);
    write_text(dir / "viscosity.txt", config_header(config), format_report(residuals));
    ok = ok && residuals.pass();

    const std::vector<Policy> family = {
        extract_policy(vf),
        Policy::constant(problem.control_lo),
        Policy::constant(problem.control_hi),
        Policy::constant(config.params.theta_d),
    };
    std::string dpp_body;
    for (double x0 : {0.0, 0.7 * alpha}) {
        for (double t : {0.25, 0.5, 1.0}) {
            const DppReport dpp = check_dpp(problem, vf, x0, t, family, mc, 0.02, 0.0);
            dpp_body += format_report(dpp);
            dpp_body += "\n";
            ok = ok && dpp.pass();
        }
    }
    write_text(dir / "dpp.txt", config_header(config), dpp_body);

    const double points[] = {-0.9 * alpha, 0.0, 0.9 * alpha};
    const McPdeReport mc_pde = compare_mc_pde(problem, vf, points, mc, 0.05, 0.05);
    write_text(dir / "mc_vs_pde.txt", config_header(config), format_report(mc_pde));
    ok = ok && mc_pde.pass();

    const std::pair<double, double> pairs[] = {
        {0.0, 0.1 * alpha}, {0.5 * alpha, 0.6 * alpha}, {0.8 * alpha, 0.9 * alpha}};
    const EquicontinuityReport equi = check_equicontinuity(
        problem, pairs, Policy::constant(problem.control_hi), mc);
    write_text(dir / "equicontinuity.txt", config_header(config), format_report(equi));
    ok = ok && equi.pass();

    std::cout << "verify: " << (ok ? "all checks passed" : "CHECK FAILED") << "\n";
    return ok ? 0 : 1;
}

double& sweep_target(ExampleParams& params, const std::string& name) {
    if (name == "theta_a") return params.theta_a;
    if (name == "theta_b") return params.theta_b;
    if (name == "theta_d") return params.theta_d;
    if (name == "theta_e") return params.theta_e;
    if (name == "sigma_x") return params.sigma_x;
    if (name == "u_a") return params.u_a;
    if (name == "u_b") return params.u_b;
    return params.beta;
}

int run_sweep(const RunConfig& config, const fs::path& dir) {
    if (config.sweep_param.empty() || config.sweep_values.empty())
        throw ConfigError("validation-error: sweep requires [sweep] param and values");

    std::vector<ValueFunction> solutions;
    std::ofstream index(dir / "index.csv");
    if (!index) throw std::runtime_error("cannot open index.csv");
    index << "# " << config_header(config) << "\n";
    index << "k," << config.sweep_param << ",file,iterations\n";
    char name[96], line[192];
    for (std::size_t k = 0; k < config.sweep_values.size(); ++k) {
        RunConfig item = config;
        sweep_target(item.params, config.sweep_param) = config.sweep_values[k];
        const ControlProblem problem = build_problem(item);
        const ValueFunction vf = solve_value_function(item, problem);
        std::snprintf(name, sizeof name, "value_%s_%02zu.csv",
                      config.sweep_param.c_str(), k);
        write_value_csv((dir / name).string(), vf, config_header(item));
        std::snprintf(line, sizeof line, "%zu,%.17g,%s,%d\n", k,
                      config.sweep_values[k], name, vf.iterations);
        index << line;
        solutions.push_back(vf);
    }

    // A sweep over the boundary cost must produce pointwise nondecreasing
    // values (the cost enters positively through the local time); report and
    // fail if that order is violated.
    bool ok = true;
    if (config.sweep_param == "theta_e") {
        for (std::size_t k = 1; k < solutions.size(); ++k) {
            if (config.sweep_values[k] < config.sweep_values[k - 1]) continue;
            for (std::size_t i = 0; i < solutions[k].values.size(); ++i)
                if (solutions[k].values[i] < solutions[k - 1].values[i] - 1e-12)
                    ok = false;
        }
        index << "# monotone_in_theta_e = " << (ok ? 1 : 0) << "\n";
    }
    std::cout << "sweep: wrote " << solutions.size() << " solves\n";
    return ok ? 0 : 1;
}

}  // namespace

int run(const RunConfig& config) {
    const fs::path dir(config.output_dir);
    fs::create_directories(dir);
    switch (config.command) {
        case Command::kSolve: return run_solve(config, dir);
        case Command::kSimulate: return run_simulate(config, dir);
        case Command::kEstimate: return run_estimate(config, dir);
        case Command::kVerify: return run_verify(config, dir);
        case Command::kSweep: return run_sweep(config, dir);
    }
    return 1;
}

}  // namespace hjbr
