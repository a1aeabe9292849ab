#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hjbr/model.hpp"

namespace hjbr {

enum class Command { kSolve, kSimulate, kEstimate, kVerify, kSweep };

const char* command_name(Command command);
Command parse_command(const std::string& name);

/// Fully validated run description parsed from a flat `key = value` config
/// grouped by `[section]` headers. Unknown keys are rejected; every error
/// names the offending key and constraint.
struct RunConfig {
    Command command = Command::kSolve;

    // [problem]
    int example = 1;
    ExampleParams params;

    // [grid]
    int n_nodes = 401;

    // [mc]
    long n_paths = 10000;
    double dt = 1e-3;
    double horizon = 0.0;   // 0: derive from epsilon
    double epsilon = 1e-4;
    std::uint64_t seed = 42;

    // [solver]
    double tol = 1e-9;
    int max_iter = 200;
    int n_grid_controls = 65;

    // [output]
    std::string output_dir = "out";

    // [sweep]
    std::string sweep_param;
    std::vector<double> sweep_values;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parse and validate a config document. The command is set by the caller
/// (it comes from the command line, not the file).
RunConfig parse_config(const std::string& text);

/// Builds example 1 or 2 from the config.
ControlProblem build_problem(const RunConfig& config);

/// One-line audit header embedded in every artifact: full parameter set
/// plus the seed.
std::string config_header(const RunConfig& config);

}  // namespace hjbr
